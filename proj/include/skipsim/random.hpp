#ifndef SKIPSIM_RANDOM_HPP
#define SKIPSIM_RANDOM_HPP

#include <cstdint>
#include <random>

#include "skipsim/task_model.hpp"

namespace skipsim {

// splitmix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// Purpose tags keep the substreams of one (task, instance) independent.
enum class Stream : std::uint64_t {
	execution_time = 0x45584543,
	color = 0x434f4c52,
	generator = 0x47454e52,
};

// Generator seeded from (seed, purpose, task, instance). Every policy that
// sees the same seed draws the same values for the same job.
std::mt19937_64 substream(std::uint64_t seed, Stream purpose, std::uint64_t task = 0,
                          std::uint64_t instance = 0);

// Uniform on [bcet_fraction * wcet, wcet], on a 1/16 time-unit grid.
Rational draw_actual_execution_time(const TaskSpec& spec, std::uint64_t seed,
                                    std::int64_t instance);

// Fair coin used by random coloring.
bool color_coin(std::uint64_t seed, TaskId task, std::int64_t instance);

} // namespace skipsim

#endif
