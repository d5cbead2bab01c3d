#ifndef SKIPSIM_EXPERIMENT_HPP
#define SKIPSIM_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "skipsim/config.hpp"
#include "skipsim/metrics.hpp"
#include "skipsim/simulator.hpp"

namespace skipsim {

enum class EnergyMode { none, dvs, dvs_dpd };
const char* to_string(EnergyMode m);
EnergyMode parse_energy_mode(const std::string& s);

struct ExperimentPlan {
	int n_min = 2;
	int n_max = 10;
	int runs_per_point = 10;
	std::vector<PolicyId> policies{PolicyId::rto, PolicyId::bwp, PolicyId::rlp};
	std::vector<EnergyMode> modes{EnergyMode::none};
	std::uint64_t base_seed = 1;
};

// Injective in (n, run) for a fixed base seed.
std::uint64_t cell_seed(std::uint64_t base_seed, int n, int run);

// Horizon used for a generated set: one hyperperiod, capped.
Time sweep_horizon(const TaskSet& ts, std::int64_t cap);

struct CellRun {
	ResultRow row;
	Trace trace;
	EnergyReport energy;
	// DVS was requested but the nominal speed was infeasible
	bool dvs_fallback = false;
};

// Runs one policy/mode on one task set; energy modes are normalized against
// the same policy at full speed without power management.
CellRun run_cell(const TaskSet& ts, PolicyId policy, EnergyMode mode, const Config& cfg,
                 std::uint64_t seed, Time horizon);
// Same as run_cell for several modes, sharing one baseline run.
std::vector<CellRun> run_cell_modes(const TaskSet& ts, PolicyId policy,
                                    const std::vector<EnergyMode>& modes, const Config& cfg,
                                    std::uint64_t seed, Time horizon);

struct SweepResult {
	std::vector<ResultRow> rows;
	std::vector<std::string> warnings;
};

// Every policy and mode of a cell sees the same task set and the same
// execution-time draws. Rows are ordered by (n, policy, mode, run).
SweepResult run_sweep(const ExperimentPlan& plan, const Config& cfg, unsigned threads = 0);

struct PointSummary {
	int n_tasks = 0;
	PolicyId policy = PolicyId::rto;
	bool dvs = false;
	bool dpd = false;
	int runs = 0;
	double mean_avg_success_ratio = 0;
	double mean_aggregate_success_ratio = 0;
	double mean_normalized_energy = 0;
};

std::vector<PointSummary> summarize(const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& os, const std::vector<PointSummary>& points);
// success_ratio.dat (no power management) and normalized_energy.dat (most
// aggressive energy mode present): one line per n, one column per policy.
void write_gnuplot(const std::string& dir, const std::vector<PointSummary>& points);

} // namespace skipsim

#endif
