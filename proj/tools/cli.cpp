#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "skipsim/config.hpp"
#include "skipsim/experiment.hpp"
#include "skipsim/metrics.hpp"
#include "skipsim/simulator.hpp"
#include "skipsim/trace_io.hpp"
#include "skipsim/workload.hpp"

namespace skipsim::cli {

namespace {

struct UsageError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

// 0.550000 -> 0.55
std::string short_decimal(const Rational& r)
{
	std::string s = r.decimal(6);
	if (s.find('.') != std::string::npos) {
		while (s.back() == '0')
			s.pop_back();
		if (s.back() == '.')
			s.pop_back();
	}
	return s;
}

std::string show(const Rational& r)
{
	if (r.is_integer())
		return std::to_string(r.num());
	return short_decimal(r) + " (" + r.str() + ")";
}

std::vector<std::string> split_list(const std::string& s)
{
	std::vector<std::string> out;
	std::stringstream ss(s);
	std::string item;
	while (std::getline(ss, item, ','))
		if (!item.empty())
			out.push_back(item);
	return out;
}

Config base_config(const std::string& path)
{
	if (!path.empty())
		return load_config(path);
	return default_config();
}

std::ofstream open_output(const std::string& path)
{
	std::ofstream f(path, std::ios::binary);
	if (!f)
		throw std::ios_base::failure("cannot open '" + path + "' for writing");
	return f;
}

struct SimulateArgs {
	std::string taskset;
	std::optional<int> n;
	std::uint64_t seed = 0;
	std::string policy = "rto";
	bool dvs = false;
	bool dpd = false;
	std::string horizon;
	std::string trace;
	std::string coloring;
	std::string config;
	std::string dump_taskset;
	bool edl_debug = false;
	bool strict_horizon = false;
};

int run_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err)
{
	Config cfg = base_config(a.config);
	if (!a.coloring.empty())
		cfg.coloring = parse_coloring_mode(a.coloring);
	const PolicyId policy = parse_policy(a.policy);

	if (a.taskset.empty() == !a.n.has_value())
		throw UsageError("simulate needs exactly one of --taskset or --n");

	std::optional<TaskSet> ts;
	if (!a.taskset.empty()) {
		auto specs = load_task_specs(a.taskset);
		for (auto& s : specs)
			s.bcet_fraction = cfg.gen.bcet_fraction;
		ts = validate_task_set(std::move(specs));
	} else {
		GenConfig g = cfg.gen;
		g.n_tasks = *a.n;
		g.seed = a.seed;
		ts = generate_task_set(g);
	}
	if (!a.dump_taskset.empty()) {
		auto f = open_output(a.dump_taskset);
		write_task_set(f, *ts);
	}

	SimOptions opts;
	opts.coloring = cfg.coloring;
	opts.seed = a.seed;
	opts.bwp_abort_literal = cfg.bwp_abort_literal;
	opts.dvs_outcome_guard = cfg.dvs_outcome_guard;
	opts.strict_horizon = a.strict_horizon;
	opts.record_edl = a.edl_debug;
	if (!a.horizon.empty())
		opts.horizon = Rational::parse(a.horizon);

	SimOptions managed = opts;
	managed.dvs = a.dvs;
	managed.dpd = a.dpd;
	Trace trace = run_simulation(*ts, policy, cfg.cpu, managed);
	EnergyReport energy = account(trace, cfg.cpu);
	Metrics m = success_ratios(trace, *ts);

	for (const auto& w : trace.warnings)
		err << "warning: " << w << '\n';

	out << "policy: " << to_string(policy) << '\n';
	out << "tasks: " << ts->size() << '\n';
	out << "utilization: " << show(ts->u_tot()) << '\n';
	out << "mandatory utilization: " << show(ts->u_mand()) << '\n';
	out << "hyperperiod: " << ts->hyperperiod() << '\n';
	out << "horizon: " << show(trace.horizon) << '\n';
	if (a.dvs)
		out << "nominal speed: " << show(trace.nominal_speed) << '\n';
	for (std::size_t i = 0; i < m.per_task.size(); ++i) {
		const auto& c = m.per_task[i];
		out << "task " << i << ": red " << c.red_hit << '/' << c.red_hit + c.red_miss << ", blue "
		    << c.blue_hit << '/' << c.blue_hit + c.blue_miss << ", success ratio "
		    << short_decimal(c.success_ratio()) << '\n';
	}
	out << "red misses: " << m.total.red_miss << '\n';
	out << "aggregate success ratio: " << short_decimal(m.aggregate_success_ratio) << '\n';
	out << "average success ratio: " << short_decimal(m.avg_success_ratio) << '\n';
	out << "energy: " << show(energy.e_total) << '\n';
	out << "  dynamic: " << show(energy.e_dynamic) << '\n';
	out << "  stand-by: " << show(energy.e_standby) << '\n';
	out << "  shutdown: " << show(energy.e_shutdown_total) << " (" << energy.shutdown_count
	    << " power-downs)\n";
	if (a.dvs || a.dpd) {
		Trace ref = run_simulation(*ts, policy, cfg.cpu, opts);
		out << "normalized energy: "
		    << short_decimal(normalized_energy(energy, account(ref, cfg.cpu))) << '\n';
	}
	if (policy == PolicyId::rlp && trace.edl_fallbacks > 0)
		out << "EDL fallbacks: " << trace.edl_fallbacks << '\n';

	if (!a.trace.empty()) {
		auto f = open_output(a.trace);
		write_trace(f, trace);
	}
	return kExitOk;
}

struct SweepArgs {
	int n_min = 2;
	int n_max = 10;
	int runs = 10;
	std::string policies = "rto,bwp,rlp";
	std::string modes = "none";
	std::uint64_t seed = 1;
	std::string out_dir = ".";
	std::string format = "csv";
	bool gnuplot = false;
	std::string config;
	std::string coloring;
	std::optional<std::int64_t> cap;
	unsigned threads = 0;
};

int run_sweep_cmd(const SweepArgs& a, std::ostream& out, std::ostream& err)
{
	Config cfg = base_config(a.config);
	if (!a.coloring.empty())
		cfg.coloring = parse_coloring_mode(a.coloring);
	if (a.cap)
		cfg.hyperperiod_cap = *a.cap;

	ExperimentPlan plan;
	plan.n_min = a.n_min;
	plan.n_max = a.n_max;
	plan.runs_per_point = a.runs;
	plan.base_seed = a.seed;
	plan.policies.clear();
	for (const auto& p : split_list(a.policies))
		plan.policies.push_back(parse_policy(p));
	plan.modes.clear();
	for (const auto& m : split_list(a.modes))
		plan.modes.push_back(parse_energy_mode(m));
	if (plan.policies.empty() || plan.modes.empty())
		throw UsageError("--policies and --modes must not be empty");
	const ExportFormat format = parse_export_format(a.format);

	std::error_code ec;
	std::filesystem::create_directories(a.out_dir, ec);
	if (ec)
		throw std::ios_base::failure("cannot create '" + a.out_dir + "': " + ec.message());

	SweepResult res = run_sweep(plan, cfg, a.threads);
	for (const auto& w : res.warnings)
		err << "warning: " << w << '\n';

	const std::string results =
	    a.out_dir + (format == ExportFormat::csv ? "/results.csv" : "/results.json");
	export_results(res.rows, format, results);
	auto points = summarize(res.rows);
	{
		auto f = open_output(a.out_dir + "/summary.csv");
		write_summary_csv(f, points);
	}
	if (a.gnuplot)
		write_gnuplot(a.out_dir, points);

	out << res.rows.size() << " rows written to " << results << '\n';
	out << points.size() << " points written to " << a.out_dir << "/summary.csv\n";
	return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
	CLI::App app{"Simulator for skippable periodic tasks"};
	app.require_subcommand(1);

	SimulateArgs sim;
	auto* simulate = app.add_subcommand("simulate", "Run one simulation");
	simulate->add_option("--taskset", sim.taskset, "Task set file (period wcet skip_factor per line)");
	simulate->add_option("--n", sim.n, "Generate a task set with N tasks")->check(CLI::PositiveNumber);
	simulate->add_option("--seed", sim.seed, "Seed for generation and execution-time draws");
	simulate->add_option("--policy", sim.policy, "rto, bwp or rlp")->capture_default_str();
	simulate->add_flag("--dvs", sim.dvs, "Enable dynamic voltage scaling");
	simulate->add_flag("--dpd", sim.dpd, "Enable dynamic power-down");
	simulate->add_option("--horizon", sim.horizon, "Simulation length (default: one hyperperiod)");
	simulate->add_option("--trace", sim.trace, "Write the JSON trace to this file");
	simulate->add_option("--coloring", sim.coloring, "automaton or random");
	simulate->add_option("--config", sim.config, "JSON configuration file");
	simulate->add_option("--dump-taskset", sim.dump_taskset, "Write the task set to this file");
	simulate->add_flag("--edl-debug", sim.edl_debug, "Include every EDL schedule in the trace");
	simulate->add_flag("--strict-horizon", sim.strict_horizon,
	                   "Reject horizons that are not a multiple of the hyperperiod");

	SweepArgs sw;
	auto* sweep = app.add_subcommand("sweep", "Run an experiment over generated task sets");
	sweep->add_option("--n-min", sw.n_min, "Smallest task count")->capture_default_str();
	sweep->add_option("--n-max", sw.n_max, "Largest task count")->capture_default_str();
	sweep->add_option("--runs", sw.runs, "Runs per point")->capture_default_str();
	sweep->add_option("--policies", sw.policies, "Comma-separated policies")->capture_default_str();
	sweep->add_option("--modes", sw.modes, "Comma-separated energy modes: none, dvs, dvs+dpd")
	    ->capture_default_str();
	sweep->add_option("--seed", sw.seed, "Base seed")->capture_default_str();
	sweep->add_option("--out", sw.out_dir, "Output directory")->capture_default_str();
	sweep->add_option("--format", sw.format, "csv or json")->capture_default_str();
	sweep->add_flag("--gnuplot", sw.gnuplot, "Also write gnuplot data files");
	sweep->add_option("--config", sw.config, "JSON configuration file");
	sweep->add_option("--coloring", sw.coloring, "automaton or random");
	sweep->add_option("--hyperperiod-cap", sw.cap, "Cap on the per-set horizon");
	sweep->add_option("--threads", sw.threads, "Worker threads (0: all cores)")->capture_default_str();

	try {
		std::vector<std::string> reversed(args.rbegin(), args.rend());
		app.parse(reversed);
	} catch (const CLI::CallForHelp&) {
		out << app.help();
		return kExitOk;
	} catch (const CLI::ParseError& e) {
		err << e.what() << "\n\n";
		const CLI::App* which = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
		err << which->help();
		return kExitUsage;
	}

	try {
		if (simulate->parsed())
			return run_simulate(sim, out, err);
		return run_sweep_cmd(sw, out, err);
	} catch (const UsageError& e) {
		err << "error: " << e.what() << "\n\n" << (simulate->parsed() ? simulate : sweep)->help();
		return kExitUsage;
	} catch (const InfeasibleNominalSpeedError& e) {
		err << "error: " << e.what() << '\n';
		return kExitInfeasible;
	} catch (const std::ios_base::failure& e) {
		err << "error: " << e.what() << '\n';
		return kExitIo;
	} catch (const std::invalid_argument& e) {
		err << "error: " << e.what() << '\n';
		return kExitUsage;
	} catch (const TaskModelError& e) {
		err << "error: " << e.what() << '\n';
		return kExitUsage;
	} catch (const ConfigError& e) {
		err << "error: " << e.what() << '\n';
		return kExitUsage;
	} catch (const HorizonNotMultipleOfHyperperiodError& e) {
		err << "error: " << e.what() << '\n';
		return kExitUsage;
	} catch (const std::exception& e) {
		err << "error: " << e.what() << '\n';
		return kExitFailure;
	}
}

} // namespace skipsim::cli
