#ifndef SKIPSIM_WORKLOAD_HPP
#define SKIPSIM_WORKLOAD_HPP

#include <cstdint>
#include <stdexcept>

#include "skipsim/task_model.hpp"

namespace skipsim {

struct GenConfig {
	int n_tasks = 2;
	std::int64_t period_min = 3;
	std::int64_t period_max = 100;
	std::int64_t wcet_min = 1;
	std::int64_t wcet_max = 15;
	SkipFactor skip_factor = SkipFactor(2);
	Rational bcet_fraction = Rational(1, 2);
	std::uint64_t seed = 0;
	// periods after the first are integer multiples of the first
	bool multiples_rule = true;
	// permit n_tasks outside 2..10
	bool allow_any_size = false;
};

struct ConfigError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

TaskSet generate_task_set(const GenConfig& cfg);

} // namespace skipsim

#endif
