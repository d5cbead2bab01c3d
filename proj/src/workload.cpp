#include "skipsim/workload.hpp"

#include <algorithm>
#include <random>

#include "skipsim/random.hpp"

namespace skipsim {

namespace {

void check(const GenConfig& cfg)
{
	if (!cfg.allow_any_size && (cfg.n_tasks < 2 || cfg.n_tasks > 10))
		throw ConfigError("n_tasks must be in 2..10, got " + std::to_string(cfg.n_tasks));
	if (cfg.n_tasks < 1)
		throw ConfigError("n_tasks must be positive");
	if (cfg.period_min < 1 || cfg.period_max < cfg.period_min)
		throw ConfigError("invalid period range");
	if (cfg.wcet_min < 1 || cfg.wcet_max < cfg.wcet_min)
		throw ConfigError("invalid wcet range");
	if (cfg.wcet_min > cfg.period_min)
		throw ConfigError("wcet_min exceeds the smallest possible period");
}

} // namespace

TaskSet generate_task_set(const GenConfig& cfg)
{
	check(cfg);
	auto gen = substream(cfg.seed, Stream::generator);
	using dist = std::uniform_int_distribution<std::int64_t>;

	std::vector<TaskSpec> specs;
	std::int64_t first = 0;
	for (int i = 0; i < cfg.n_tasks; ++i) {
		TaskSpec t;
		if (i == 0 || !cfg.multiples_rule) {
			t.period = dist(cfg.period_min, cfg.period_max)(gen);
			if (i == 0)
				first = t.period;
		} else {
			std::int64_t max_mult = std::max<std::int64_t>(1, cfg.period_max / first);
			t.period = first * dist(1, max_mult)(gen);
		}
		t.wcet = dist(cfg.wcet_min, std::min(cfg.wcet_max, t.period))(gen);
		t.skip_factor = cfg.skip_factor;
		t.bcet_fraction = cfg.bcet_fraction;
		specs.push_back(t);
	}
	return validate_task_set(std::move(specs));
}

} // namespace skipsim
