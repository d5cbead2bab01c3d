#include "skipsim/energy.hpp"

#include <algorithm>
#include <queue>

#include "skipsim/schedulers.hpp"

namespace skipsim {

bool ProcessorModel::has_level(const Rational& s) const
{
	return std::find(levels.begin(), levels.end(), s) != levels.end();
}

Rational ProcessorModel::break_even() const
{
	if (!p_standby.is_positive())
		throw std::invalid_argument("break-even time needs a positive stand-by power");
	return e_shutdown / p_standby;
}

void ProcessorModel::validate() const
{
	if (levels.empty())
		throw std::invalid_argument("processor model has no speed levels");
	for (std::size_t i = 0; i < levels.size(); ++i) {
		if (!levels[i].is_positive() || levels[i] > Rational(1))
			throw std::invalid_argument("speed level " + levels[i].str() + " outside (0, 1]");
		if (i > 0 && levels[i] <= levels[i - 1])
			throw std::invalid_argument("speed levels must be strictly ascending");
	}
	if (levels.back() != Rational(1))
		throw std::invalid_argument("highest speed level must be 1");
	if (p_standby.is_negative() || e_shutdown.is_negative() || t_overhead.is_negative())
		throw std::invalid_argument("power parameters must be non-negative");
	if (physical) {
		if (physical->table.size() != levels.size())
			throw std::invalid_argument("physical table must have one entry per speed level");
		for (const auto& row : physical->table) {
			if (!row.v_dd.is_positive())
				throw std::invalid_argument("supply voltage must be positive");
			if (!row.frequency && row.v_dd <= physical->v_t)
				throw std::invalid_argument("supply voltage must exceed threshold voltage");
		}
	}
	for (std::size_t i = 1; i < levels.size(); ++i)
		if (power(*this, levels[i]) <= power(*this, levels[i - 1]))
			throw std::invalid_argument("dynamic power must increase with speed");
}

namespace {

std::size_t level_index(const ProcessorModel& cpu, const Rational& s)
{
	auto it = std::find(cpu.levels.begin(), cpu.levels.end(), s);
	if (it == cpu.levels.end())
		throw UnknownLevelError("speed " + s.str() + " is not a configured level");
	return static_cast<std::size_t>(it - cpu.levels.begin());
}

} // namespace

Rational frequency(const ProcessorModel& cpu, const Rational& s)
{
	std::size_t i = level_index(cpu, s);
	if (!cpu.physical)
		return s;
	const auto& row = cpu.physical->table.at(i);
	if (row.frequency)
		return *row.frequency;
	Rational dv = row.v_dd - cpu.physical->v_t;
	return cpu.physical->k * dv * dv / row.v_dd;
}

Rational power(const ProcessorModel& cpu, const Rational& s)
{
	std::size_t i = level_index(cpu, s);
	if (!cpu.physical)
		return s * s * s;
	const auto& v = cpu.physical->table.at(i).v_dd;
	return cpu.physical->c_ef * v * v * frequency(cpu, s);
}

Rational execution_power(const ProcessorModel& cpu, const Rational& s)
{
	return cpu.p_standby + power(cpu, s);
}

CanonicalSchedule build_canonical_schedule(const TaskSet& ts, Rational speed, Time horizon,
                                           ColoringMode mode, std::uint64_t seed)
{
	std::vector<TaskProjectionState> init(ts.size());
	for (const auto& t : ts)
		init[t.id].skip.task = t.id;
	std::vector<RedWork> jobs = project_red_releases(ts, init, mode, seed, horizon);
	std::sort(jobs.begin(), jobs.end(), [](const RedWork& a, const RedWork& b) {
		if (a.release != b.release)
			return a.release < b.release;
		return a.key < b.key;
	});

	CanonicalSchedule cs;
	cs.speed = speed;
	cs.horizon = horizon;

	auto order = [&](std::size_t a, std::size_t b) {
		QueuedJob x{jobs[a].key, jobs[a].release, jobs[a].deadline};
		QueuedJob y{jobs[b].key, jobs[b].release, jobs[b].deadline};
		return higher_priority(y, x);
	};
	std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(order)> ready(order);
	std::vector<Rational> remaining(jobs.size());
	for (std::size_t i = 0; i < jobs.size(); ++i)
		remaining[i] = jobs[i].work / speed;

	Time t;
	std::size_t next = 0;
	while (next < jobs.size() || !ready.empty()) {
		while (next < jobs.size() && jobs[next].release <= t)
			ready.push(next++);
		while (!ready.empty() && jobs[ready.top()].deadline <= t) {
			cs.misses.push_back(jobs[ready.top()].key);
			ready.pop();
		}
		if (ready.empty()) {
			if (next < jobs.size())
				t = jobs[next].release;
			continue;
		}
		std::size_t cur = ready.top();
		Time until = min(t + remaining[cur], jobs[cur].deadline);
		if (next < jobs.size())
			until = min(until, jobs[next].release);
		if (!cs.slices.empty() && cs.slices.back().job == jobs[cur].key && cs.slices.back().end == t)
			cs.slices.back().end = until;
		else
			cs.slices.push_back({t, until, jobs[cur].key});
		remaining[cur] -= until - t;
		t = until;
		if (remaining[cur].is_zero()) {
			cs.finish[jobs[cur].key] = t;
			ready.pop();
		}
	}
	return cs;
}

Rational nominal_speed(const TaskSet& ts, const ProcessorModel& cpu, ColoringMode mode,
                       std::uint64_t seed, std::optional<Time> horizon)
{
	const Rational u = ts.u_mand();
	if (u > Rational(1))
		throw InfeasibleNominalSpeedError("mandatory utilization " + u.decimal()
		                                  + " exceeds the maximum speed");
	Time h = horizon.value_or(Time(ts.hyperperiod()));
	for (const auto& s : cpu.levels) {
		if (s < u)
			continue;
		if (build_canonical_schedule(ts, s, h, mode, seed).feasible())
			return s;
	}
	throw InfeasibleNominalSpeedError("no speed level meets every mandatory deadline");
}

Rational ceil_level(const ProcessorModel& cpu, const Rational& s)
{
	for (const auto& l : cpu.levels)
		if (l >= s)
			return l;
	return cpu.s_max();
}

Rational dra_speed(const CanonicalSchedule& alpha, const JobInstance& job, Time now,
                   const ProcessorModel& cpu, const RetiredPredicate& retired)
{
	const JobKey key = job.key();
	auto fin = alpha.finish.find(key);
	if (fin == alpha.finish.end())
		return alpha.speed;
	const Time end = fin->second;
	if (end <= now)
		return cpu.s_max();

	auto it = std::upper_bound(alpha.slices.begin(), alpha.slices.end(), now,
	                           [](const Time& t, const CanonicalSchedule::Slice& s) {
		                           return t < s.end;
	                           });
	Time available;
	for (; it != alpha.slices.end() && it->start < end; ++it) {
		if (it->job != key && !retired(it->job))
			continue;
		available += min(it->end, end) - max(it->start, now);
	}
	if (!available.is_positive())
		return cpu.s_max();
	Rational required = job.wcet_remaining / available;
	if (required > cpu.s_max())
		return cpu.s_max();
	return ceil_level(cpu, max(required, cpu.s_min()));
}

Rational stretch_speed(const Rational& work, Time window, const Rational& cap,
                       const ProcessorModel& cpu)
{
	if (!window.is_positive())
		return cap;
	Rational required = work / window;
	if (required > cap)
		return cap;
	return min(cap, ceil_level(cpu, max(required, cpu.s_min())));
}

const char* to_string(IdleDecision d)
{
	return d == IdleDecision::standby ? "standby" : "power_off";
}

IdleDecision dpd_decide(Time idle_start, Time next_event, const ProcessorModel& cpu)
{
	if (!cpu.p_standby.is_positive())
		return IdleDecision::standby;
	Time gap = next_event - idle_start;
	if (gap >= max(cpu.break_even(), cpu.t_overhead) && gap.is_positive())
		return IdleDecision::power_off;
	return IdleDecision::standby;
}

EnergyReport account(const Trace& trace, const ProcessorModel& cpu)
{
	EnergyReport r;
	Time cursor;
	for (const auto& s : trace.slices) {
		if (s.start != cursor)
			throw MalformedTraceError("slice at " + s.start.str() + " does not start at "
			                          + cursor.str());
		if (s.end <= s.start)
			throw MalformedTraceError("empty or inverted slice at " + s.start.str());
		cursor = s.end;
		Time len = s.length();
		switch (s.occupant) {
		case Occupant::job:
			r.t_exec += len;
			r.e_dynamic += power(cpu, s.speed) * len;
			if (cpu.physical)
				r.cycles[s.job] += frequency(cpu, s.speed) * len;
			break;
		case Occupant::idle_standby:
			r.t_idle_on += len;
			break;
		case Occupant::powered_off:
			r.t_off += len;
			break;
		case Occupant::shutdown_overhead:
			r.t_overhead_total += len;
			break;
		}
	}
	if (cursor != trace.horizon)
		throw MalformedTraceError("slices end at " + cursor.str() + ", horizon is "
		                          + trace.horizon.str());
	r.shutdown_count = trace.shutdown_count;
	r.e_standby = cpu.p_standby * (r.t_exec + r.t_idle_on);
	r.e_shutdown_total = cpu.e_shutdown * Rational(trace.shutdown_count);
	r.e_total = r.e_dynamic + r.e_standby + r.e_shutdown_total;
	return r;
}

} // namespace skipsim
