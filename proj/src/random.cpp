#include "skipsim/random.hpp"

namespace skipsim {

std::uint64_t mix64(std::uint64_t x)
{
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

std::mt19937_64 substream(std::uint64_t seed, Stream purpose, std::uint64_t task,
                          std::uint64_t instance)
{
	std::uint64_t h = mix64(seed);
	h = mix64(h ^ static_cast<std::uint64_t>(purpose));
	h = mix64(h ^ task);
	h = mix64(h ^ instance);
	return std::mt19937_64(h);
}

Rational draw_actual_execution_time(const TaskSpec& spec, std::uint64_t seed,
                                    std::int64_t instance)
{
	constexpr std::int64_t grid = 16;
	std::int64_t hi = spec.wcet * grid;
	std::int64_t lo = (spec.bcet_fraction * Rational(hi)).ceil();
	if (lo < 1)
		lo = 1;
	if (lo >= hi)
		return Rational(spec.wcet);
	auto gen = substream(seed, Stream::execution_time, spec.id,
	                     static_cast<std::uint64_t>(instance));
	std::uniform_int_distribution<std::int64_t> dist(lo, hi);
	return Rational(dist(gen), grid);
}

bool color_coin(std::uint64_t seed, TaskId task, std::int64_t instance)
{
	auto gen = substream(seed, Stream::color, task, static_cast<std::uint64_t>(instance));
	return (gen() >> 63) != 0;
}

} // namespace skipsim
