#include "skipsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <ostream>
#include <thread>
#include <tuple>

#include "skipsim/random.hpp"
#include "skipsim/workload.hpp"

namespace skipsim {

const char* to_string(EnergyMode m)
{
	switch (m) {
	case EnergyMode::none: return "none";
	case EnergyMode::dvs: return "dvs";
	case EnergyMode::dvs_dpd: return "dvs+dpd";
	}
	return "?";
}

EnergyMode parse_energy_mode(const std::string& s)
{
	if (s == "none")
		return EnergyMode::none;
	if (s == "dvs")
		return EnergyMode::dvs;
	if (s == "dvs+dpd" || s == "dvs_dpd" || s == "hybrid")
		return EnergyMode::dvs_dpd;
	throw std::invalid_argument("unknown energy mode '" + s + "'");
}

std::uint64_t cell_seed(std::uint64_t base_seed, int n, int run)
{
	std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 32)
	                    | static_cast<std::uint32_t>(run);
	return mix64(base_seed ^ mix64(key));
}

Time sweep_horizon(const TaskSet& ts, std::int64_t cap)
{
	if (cap > 0 && ts.hyperperiod() > cap) {
		// keep whole periods of the longest task
		std::int64_t pmax = 0;
		for (const auto& t : ts)
			pmax = std::max(pmax, t.period);
		std::int64_t h = std::max(pmax, cap / pmax * pmax);
		return Time(h);
	}
	return Time(ts.hyperperiod());
}

namespace {

SimOptions options_for(const Config& cfg, std::uint64_t seed, Time horizon)
{
	SimOptions o;
	o.coloring = cfg.coloring;
	o.seed = seed;
	o.horizon = horizon;
	o.bwp_abort_literal = cfg.bwp_abort_literal;
	o.dvs_outcome_guard = cfg.dvs_outcome_guard;
	return o;
}

} // namespace

std::vector<CellRun> run_cell_modes(const TaskSet& ts, PolicyId policy,
                                    const std::vector<EnergyMode>& modes, const Config& cfg,
                                    std::uint64_t seed, Time horizon)
{
	SimOptions base = options_for(cfg, seed, horizon);
	Trace baseline_trace = run_simulation(ts, policy, cfg.cpu, base);
	EnergyReport baseline = account(baseline_trace, cfg.cpu);

	std::vector<CellRun> out;
	for (auto mode : modes) {
		CellRun cr;
		if (mode == EnergyMode::none) {
			cr.trace = baseline_trace;
			cr.energy = baseline;
		} else {
			SimOptions o = base;
			o.dvs = true;
			o.dpd = mode == EnergyMode::dvs_dpd;
			try {
				cr.trace = run_simulation(ts, policy, cfg.cpu, o);
			} catch (const InfeasibleNominalSpeedError&) {
				o.dvs = false;
				cr.dvs_fallback = true;
				cr.trace = run_simulation(ts, policy, cfg.cpu, o);
			}
			cr.energy = account(cr.trace, cfg.cpu);
		}

		ResultRow& r = cr.row;
		r.n_tasks = static_cast<int>(ts.size());
		r.policy = policy;
		r.dvs = mode != EnergyMode::none;
		r.dpd = mode == EnergyMode::dvs_dpd;
		r.seed = seed;
		r.u_tot = ts.u_tot();
		r.metrics = success_ratios(cr.trace, ts);
		r.metrics.e_total = cr.energy.e_total;
		r.metrics.normalized_energy = normalized_energy(cr.energy, baseline);
		out.push_back(std::move(cr));
	}
	return out;
}

CellRun run_cell(const TaskSet& ts, PolicyId policy, EnergyMode mode, const Config& cfg,
                 std::uint64_t seed, Time horizon)
{
	return std::move(run_cell_modes(ts, policy, {mode}, cfg, seed, horizon).front());
}

SweepResult run_sweep(const ExperimentPlan& plan, const Config& cfg, unsigned threads)
{
	if (plan.n_min > plan.n_max || plan.runs_per_point < 1)
		throw ConfigError("empty experiment plan");

	struct Cell {
		int n;
		int run;
		std::uint64_t seed;
	};
	std::vector<Cell> cells;
	for (int n = plan.n_min; n <= plan.n_max; ++n)
		for (int run = 0; run < plan.runs_per_point; ++run)
			cells.push_back({n, run, cell_seed(plan.base_seed, n, run)});

	const std::size_t per_cell = plan.policies.size() * plan.modes.size();
	std::vector<ResultRow> slots(cells.size() * per_cell);
	std::vector<std::vector<std::string>> notes(cells.size());

	auto work = [&](std::size_t ci) {
		const Cell& c = cells[ci];
		GenConfig g = cfg.gen;
		g.n_tasks = c.n;
		g.seed = c.seed;
		TaskSet ts = generate_task_set(g);
		Time h = sweep_horizon(ts, cfg.hyperperiod_cap);
		if (h != Time(ts.hyperperiod()))
			notes[ci].push_back("n=" + std::to_string(c.n) + " run=" + std::to_string(c.run)
			                    + ": hyperperiod " + std::to_string(ts.hyperperiod())
			                    + " capped to " + h.str());
		std::size_t k = 0;
		bool fallback = false;
		for (auto p : plan.policies) {
			for (auto& cr : run_cell_modes(ts, p, plan.modes, cfg, c.seed, h)) {
				fallback = fallback || cr.dvs_fallback;
				slots[ci * per_cell + k++] = std::move(cr.row);
			}
		}
		if (fallback)
			notes[ci].push_back("n=" + std::to_string(c.n) + " run=" + std::to_string(c.run)
			                    + ": nominal speed infeasible, energy modes run at full speed");
	};

	unsigned nthreads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
	nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(cells.size()));
	if (nthreads <= 1) {
		for (std::size_t i = 0; i < cells.size(); ++i)
			work(i);
	} else {
		std::atomic<std::size_t> next{0};
		std::vector<std::exception_ptr> errors(nthreads);
		std::vector<std::thread> pool;
		for (unsigned t = 0; t < nthreads; ++t)
			pool.emplace_back([&, t] {
				try {
					for (std::size_t i; (i = next.fetch_add(1)) < cells.size();)
						work(i);
				} catch (...) {
					errors[t] = std::current_exception();
				}
			});
		for (auto& th : pool)
			th.join();
		for (auto& e : errors)
			if (e)
				std::rethrow_exception(e);
	}

	// reorder from (cell, policy, mode) to (n, policy, mode, run)
	SweepResult res;
	auto mode_rank = [&](const ResultRow& r) { return (r.dvs ? 1 : 0) + (r.dpd ? 1 : 0); };
	std::vector<std::size_t> idx(slots.size());
	for (std::size_t i = 0; i < idx.size(); ++i)
		idx[i] = i;
	std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
		const auto& x = slots[a];
		const auto& y = slots[b];
		return std::make_tuple(x.n_tasks, static_cast<int>(x.policy), mode_rank(x))
		     < std::make_tuple(y.n_tasks, static_cast<int>(y.policy), mode_rank(y));
	});
	for (auto i : idx)
		res.rows.push_back(slots[i]);
	for (auto& n : notes)
		res.warnings.insert(res.warnings.end(), n.begin(), n.end());
	return res;
}

std::vector<PointSummary> summarize(const std::vector<ResultRow>& rows)
{
	std::map<std::tuple<int, int, bool, bool>, PointSummary> acc;
	for (const auto& r : rows) {
		auto& p = acc[{r.n_tasks, static_cast<int>(r.policy), r.dvs, r.dpd}];
		p.n_tasks = r.n_tasks;
		p.policy = r.policy;
		p.dvs = r.dvs;
		p.dpd = r.dpd;
		++p.runs;
		p.mean_avg_success_ratio += r.metrics.avg_success_ratio.to_double();
		p.mean_aggregate_success_ratio += r.metrics.aggregate_success_ratio.to_double();
		p.mean_normalized_energy += r.metrics.normalized_energy.to_double();
	}
	std::vector<PointSummary> out;
	for (auto& [_, p] : acc) {
		p.mean_avg_success_ratio /= p.runs;
		p.mean_aggregate_success_ratio /= p.runs;
		p.mean_normalized_energy /= p.runs;
		out.push_back(p);
	}
	return out;
}

void write_summary_csv(std::ostream& os, const std::vector<PointSummary>& points)
{
	os << "n_tasks,policy,dvs,dpd,runs,mean_avg_success_ratio,mean_aggregate_success_ratio,"
	      "mean_normalized_energy\n";
	os << std::fixed << std::setprecision(6);
	for (const auto& p : points)
		os << p.n_tasks << ',' << to_string(p.policy) << ',' << (p.dvs ? 1 : 0) << ','
		   << (p.dpd ? 1 : 0) << ',' << p.runs << ',' << p.mean_avg_success_ratio << ','
		   << p.mean_aggregate_success_ratio << ',' << p.mean_normalized_energy << '\n';
}

void write_gnuplot(const std::string& dir, const std::vector<PointSummary>& points)
{
	auto emit = [&](const std::string& file, auto filter, auto value) {
		std::map<int, std::map<int, double>> table;
		std::set<int> policies;
		for (const auto& p : points) {
			if (!filter(p))
				continue;
			table[p.n_tasks][static_cast<int>(p.policy)] = value(p);
			policies.insert(static_cast<int>(p.policy));
		}
		std::ofstream f(dir + "/" + file, std::ios::binary);
		if (!f)
			throw std::ios_base::failure("cannot open '" + dir + "/" + file + "' for writing");
		f << "# n_tasks";
		for (int pol : policies)
			f << ' ' << to_string(static_cast<PolicyId>(pol));
		f << '\n' << std::fixed << std::setprecision(6);
		for (const auto& [n, row] : table) {
			f << n;
			for (int pol : policies) {
				auto it = row.find(pol);
				f << ' ';
				if (it == row.end())
					f << '?';
				else
					f << it->second;
			}
			f << '\n';
		}
	};

	emit("success_ratio.dat", [](const PointSummary& p) { return !p.dvs && !p.dpd; },
	     [](const PointSummary& p) { return p.mean_avg_success_ratio; });

	bool any_dpd = std::any_of(points.begin(), points.end(), [](auto& p) { return p.dpd; });
	bool any_dvs = std::any_of(points.begin(), points.end(), [](auto& p) { return p.dvs; });
	if (any_dvs)
		emit("normalized_energy.dat",
		     [any_dpd](const PointSummary& p) { return p.dvs && p.dpd == any_dpd; },
		     [](const PointSummary& p) { return p.mean_normalized_energy; });
}

} // namespace skipsim
