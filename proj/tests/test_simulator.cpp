#include "doctest.h"

#include <map>

#include "skipsim/energy.hpp"
#include "skipsim/experiment.hpp"
#include "skipsim/metrics.hpp"
#include "skipsim/simulator.hpp"
#include "skipsim/workload.hpp"

#include "oracles.hpp"

using namespace skipsim;

namespace {

const ProcessorModel cpu{};

TaskSet table1()
{
	std::vector<TaskSpec> specs;
	const int rows[5][2] = {{30, 3}, {20, 4}, {15, 1}, {12, 7}, {10, 2}};
	for (auto& r : rows)
		specs.push_back({0, r[0], r[1], SkipFactor(2), Rational(1, 2)});
	return validate_task_set(specs);
}

TaskSet generated(int n, std::uint64_t seed)
{
	GenConfig g;
	g.n_tasks = n;
	g.seed = seed;
	return generate_task_set(g);
}

SimOptions opts(std::uint64_t seed, Time horizon, bool dvs = false, bool dpd = false)
{
	SimOptions o;
	o.seed = seed;
	o.horizon = horizon;
	o.dvs = dvs;
	o.dpd = dpd;
	return o;
}

void check_tiling(const Trace& t)
{
	Time cursor;
	for (const auto& s : t.slices) {
		CHECK(s.start == cursor);
		CHECK(s.start < s.end);
		cursor = s.end;
	}
	CHECK(cursor == t.horizon);
}

std::map<JobKey, Outcome> outcomes(const Trace& t)
{
	std::map<JobKey, Outcome> m;
	for (const auto& o : t.outcomes)
		m[o.job] = o.outcome;
	return m;
}

} // namespace

TEST_CASE("Table 1 under RTO")
{
	TaskSet ts = table1();
	SimOptions o;
	Trace t = run_simulation(ts, PolicyId::rto, cpu, o);
	CHECK(t.horizon == Time(60));
	check_tiling(t);
	Metrics m = success_ratios(t, ts);
	CHECK(m.total.red_miss == 0);
	CHECK(m.total.blue_hit == 0);
	CHECK(m.aggregate_success_ratio == Rational(11, 20));
	CHECK(m.avg_success_ratio == Rational(83, 150));
	CHECK(t.warnings.empty());
}

TEST_CASE("single task runs once and idles")
{
	TaskSet ts = validate_task_set({{0, 10, 2, SkipFactor::infinite(), Rational(1)}});
	for (auto p : {PolicyId::rto, PolicyId::bwp, PolicyId::rlp}) {
		Trace t = run_simulation(ts, p, cpu, opts(0, Time(10)));
		REQUIRE(t.slices.size() == 2);
		CHECK(t.slices[0].occupant == Occupant::job);
		CHECK(t.slices[0].end == Time(2));
		CHECK(t.slices[0].speed == Rational(1));
		CHECK(t.slices[1].occupant == Occupant::idle_standby);
		CHECK(t.slices[1].end == Time(10));
		REQUIRE(t.outcomes.size() == 1);
		CHECK(t.outcomes[0].outcome == Outcome::completed);
	}
}

TEST_CASE("completion exactly at the deadline is a hit")
{
	TaskSet ts = validate_task_set({{0, 4, 4, SkipFactor::infinite(), Rational(1)}});
	Trace t = run_simulation(ts, PolicyId::rto, cpu, opts(0, Time(8)));
	Metrics m = success_ratios(t, ts);
	CHECK(m.total.red_hit == 2);
	CHECK(m.total.red_miss == 0);
	CHECK(m.aggregate_success_ratio == Rational(1));
}

TEST_CASE("simulation is deterministic and tiles the horizon")
{
	for (int n : {2, 5, 9}) {
		TaskSet ts = generated(n, 100 + n);
		Time h = sweep_horizon(ts, 2000);
		for (auto p : {PolicyId::rto, PolicyId::bwp, PolicyId::rlp}) {
			CAPTURE(n);
			Trace a = run_simulation(ts, p, cpu, opts(7, h));
			Trace b = run_simulation(ts, p, cpu, opts(7, h));
			check_tiling(a);
			REQUIRE(a.slices.size() == b.slices.size());
			for (std::size_t i = 0; i < a.slices.size(); ++i) {
				CHECK(a.slices[i].start == b.slices[i].start);
				CHECK(a.slices[i].job == b.slices[i].job);
				CHECK(a.slices[i].occupant == b.slices[i].occupant);
			}
			CHECK(outcomes(a) == outcomes(b));
		}
	}
}

TEST_CASE("blue instances respect the skip factor")
{
	for (int seed = 1; seed <= 12; ++seed) {
		TaskSet ts = generated(2 + seed % 9, seed);
		Time h = sweep_horizon(ts, 2000);
		for (auto p : {PolicyId::rto, PolicyId::bwp, PolicyId::rlp}) {
			Trace t = run_simulation(ts, p, cpu, opts(seed, h));
			std::map<TaskId, std::vector<JobOutcome>> per_task;
			for (const auto& o : t.outcomes)
				per_task[o.job.task].push_back(o);
			for (auto& [task, outs] : per_task) {
				std::sort(outs.begin(), outs.end(),
				          [](const JobOutcome& a, const JobOutcome& b) { return a.job < b.job; });
				int since_skip = 0;
				int sf = static_cast<int>(ts[task].skip_factor.value());
				for (const auto& o : outs) {
					if (o.color == Color::blue)
						CHECK(oracle::blue_allowed(since_skip, sf));
					since_skip = o.outcome == Outcome::completed ? since_skip + 1 : 0;
				}
			}
		}
	}
}

TEST_CASE("BWP keeps the RTO red schedule until a blue completes")
{
	for (int seed = 1; seed <= 10; ++seed) {
		TaskSet ts = generated(3 + seed % 6, 500 + seed);
		Time h = sweep_horizon(ts, 2000);
		Trace rto = run_simulation(ts, PolicyId::rto, cpu, opts(seed, h));
		Trace bwp = run_simulation(ts, PolicyId::bwp, cpu, opts(seed, h));
		Time first_blue = h;
		for (const auto& o : bwp.outcomes)
			if (o.color == Color::blue && o.outcome == Outcome::completed)
				first_blue = min(first_blue, o.time);
		std::map<JobKey, Color> color;
		for (const auto& o : bwp.outcomes)
			color[o.job] = o.color;
		auto reds_before = [&](const Trace& t) {
			std::vector<std::tuple<Time, Time, JobKey>> v;
			for (const auto& s : t.slices)
				if (s.occupant == Occupant::job && s.end <= first_blue
				    && color[s.job] == Color::red)
					v.emplace_back(s.start, s.end, s.job);
			return v;
		};
		// BWP may split an RTO idle gap between blue slices; merge adjacent
		// pieces of the same red job before comparing
		auto merged = [](std::vector<std::tuple<Time, Time, JobKey>> v) {
			std::vector<std::tuple<Time, Time, JobKey>> out;
			for (auto& x : v) {
				if (!out.empty() && std::get<1>(out.back()) == std::get<0>(x)
				    && std::get<2>(out.back()) == std::get<2>(x))
					std::get<1>(out.back()) = std::get<1>(x);
				else
					out.push_back(x);
			}
			return out;
		};
		CAPTURE(seed);
		CHECK(merged(reds_before(rto)) == merged(reds_before(bwp)));
	}
}

TEST_CASE("BWP completes at least as many jobs as RTO")
{
	for (int seed = 1; seed <= 20; ++seed) {
		TaskSet ts = generated(2 + seed % 9, 900 + seed);
		Time h = sweep_horizon(ts, 2000);
		Metrics rto = success_ratios(run_simulation(ts, PolicyId::rto, cpu, opts(seed, h)), ts);
		Metrics bwp = success_ratios(run_simulation(ts, PolicyId::bwp, cpu, opts(seed, h)), ts);
		CHECK(bwp.total.hits() >= rto.total.hits());
	}
}

TEST_CASE("horizon that is not a multiple of the hyperperiod")
{
	TaskSet ts = table1();
	Trace t = run_simulation(ts, PolicyId::rto, cpu, opts(0, Time(65)));
	CHECK_FALSE(t.warnings.empty());
	CHECK(t.horizon == Time(65));
	SimOptions strict = opts(0, Time(65));
	strict.strict_horizon = true;
	CHECK_THROWS_AS(run_simulation(ts, PolicyId::rto, cpu, strict),
	                HorizonNotMultipleOfHyperperiodError);
	CHECK_NOTHROW(run_simulation(ts, PolicyId::rto, cpu, opts(0, Time(120))));
}

TEST_CASE("DPD powers off long gaps and pays the overhead")
{
	TaskSet ts = validate_task_set({{0, 50, 2, SkipFactor::infinite(), Rational(1)}});
	Trace on = run_simulation(ts, PolicyId::rto, cpu, opts(0, Time(100), false, false));
	Trace off = run_simulation(ts, PolicyId::rto, cpu, opts(0, Time(100), false, true));
	check_tiling(off);
	CHECK(off.shutdown_count >= 1);
	bool episode = false;
	for (std::size_t i = 0; i + 1 < off.slices.size(); ++i)
		if (off.slices[i].occupant == Occupant::powered_off
		    && off.slices[i + 1].occupant == Occupant::shutdown_overhead) {
			episode = true;
			CHECK(off.slices[i + 1].length() == cpu.t_overhead);
		}
	CHECK(episode);
	CHECK(outcomes(on) == outcomes(off));
	CHECK(account(off, cpu).e_total < account(on, cpu).e_total);
}

TEST_CASE("DVS keeps every job outcome with the outcome guard")
{
	int compared = 0;
	for (int seed = 1; seed <= 30; ++seed) {
		TaskSet ts = generated(2 + seed % 9, 1300 + seed);
		Time h = sweep_horizon(ts, 2000);
		for (auto p : {PolicyId::rto, PolicyId::bwp, PolicyId::rlp}) {
			Trace full = run_simulation(ts, p, cpu, opts(seed, h));
			Trace slow;
			try {
				slow = run_simulation(ts, p, cpu, opts(seed, h, true));
			} catch (const InfeasibleNominalSpeedError&) {
				continue;
			}
			++compared;
			check_tiling(slow);
			CAPTURE(seed);
			CHECK(outcomes(full) == outcomes(slow));
			CHECK(account(slow, cpu).e_total <= account(full, cpu).e_total);
			for (const auto& s : slow.slices)
				if (s.occupant == Occupant::job)
					CHECK(cpu.has_level(s.speed));
		}
	}
	CHECK(compared > 30);
}

TEST_CASE("DVS reports the nominal speed")
{
	TaskSet ts = table1();
	Trace t = run_simulation(ts, PolicyId::rto, cpu, opts(0, Time(60), true));
	CHECK(t.nominal_speed == Rational(3, 4));
	Metrics m = success_ratios(t, ts);
	CHECK(m.total.red_miss == 0);
}

TEST_CASE("RLP records EDL snapshots on request")
{
	TaskSet ts = table1();
	SimOptions o = opts(3, Time(60));
	o.record_edl = true;
	Trace t = run_simulation(ts, PolicyId::rlp, cpu, o);
	CHECK_FALSE(t.edl_log.empty());
	Metrics m = success_ratios(t, ts);
	CHECK(m.total.red_miss == 0);
	CHECK(m.total.blue_hit > 0);
}
