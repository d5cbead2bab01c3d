#ifndef SKIPSIM_ENERGY_HPP
#define SKIPSIM_ENERGY_HPP

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "skipsim/task_model.hpp"
#include "skipsim/trace.hpp"

namespace skipsim {

// Supply voltage and clock frequency of one speed level. When `frequency`
// is absent it follows from f = k (V_dd - V_t)^2 / V_dd.
struct PhysicalLevel {
	Rational v_dd;
	std::optional<Rational> frequency;
};

struct PhysicalModel {
	Rational c_ef = Rational(1);
	Rational k = Rational(1);
	Rational v_t;
	std::vector<PhysicalLevel> table; // one per speed level, same order
};

struct ProcessorModel {
	// normalized speeds, strictly ascending, last one is S_max = 1
	std::vector<Rational> levels{Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)};
	Rational p_standby = Rational(1, 20);
	// energy and wall time of one shutdown + wakeup cycle
	Rational e_shutdown = Rational(2, 5);
	Rational t_overhead = Rational(1, 2);
	std::optional<PhysicalModel> physical;

	Rational s_min() const { return levels.front(); }
	Rational s_max() const { return levels.back(); }
	bool has_level(const Rational& s) const;
	// e_shutdown / p_standby
	Rational break_even() const;
	// throws std::invalid_argument on a malformed model
	void validate() const;
};

struct EnergyError : std::runtime_error {
	using std::runtime_error::runtime_error;
};
struct UnknownLevelError : EnergyError {
	using EnergyError::EnergyError;
};
struct InfeasibleNominalSpeedError : EnergyError {
	using EnergyError::EnergyError;
};
struct MalformedTraceError : EnergyError {
	using EnergyError::EnergyError;
};

Rational frequency(const ProcessorModel& cpu, const Rational& s);
// Dynamic power at speed s: s^3 in normalized mode, C_ef V_dd^2 f in
// physical mode.
Rational power(const ProcessorModel& cpu, const Rational& s);
// Dynamic plus stand-by power while executing at speed s.
Rational execution_power(const ProcessorModel& cpu, const Rational& s);

// Red-only EDF schedule of the worst-case workload at a fixed speed, built
// from the synchronous deeply-red start (pending reds complete, blues are
// skipped).
struct CanonicalSchedule {
	struct Slice {
		Time start;
		Time end;
		JobKey job;
	};
	Rational speed = Rational(1);
	Time horizon;
	std::vector<Slice> slices;
	std::map<JobKey, Time> finish;
	std::vector<JobKey> misses;

	bool feasible() const { return misses.empty(); }
};

CanonicalSchedule build_canonical_schedule(const TaskSet& ts, Rational speed, Time horizon,
                                           ColoringMode mode = ColoringMode::automaton,
                                           std::uint64_t seed = 0);

// Smallest level >= u_mand whose canonical schedule has no misses.
Rational nominal_speed(const TaskSet& ts, const ProcessorModel& cpu,
                       ColoringMode mode = ColoringMode::automaton, std::uint64_t seed = 0,
                       std::optional<Time> horizon = std::nullopt);

// Smallest configured level >= s; S_max when s exceeds every level.
Rational ceil_level(const ProcessorModel& cpu, const Rational& s);

// True for a job that has finished in the actual schedule (completed,
// aborted or skipped).
using RetiredPredicate = std::function<bool(const JobKey&)>;

// Slack-reclaiming dispatch speed. The job may use its own canonical slots
// plus those of retired higher-priority jobs up to its canonical finish.
Rational dra_speed(const CanonicalSchedule& alpha, const JobInstance& job, Time now,
                   const ProcessorModel& cpu, const RetiredPredicate& retired);

// Lowest level that finishes `work` (normalized to S_max) within `window`,
// never above `cap`; `cap` when the window is too short.
Rational stretch_speed(const Rational& work, Time window, const Rational& cap,
                       const ProcessorModel& cpu);

enum class IdleDecision { standby, power_off };
const char* to_string(IdleDecision d);

IdleDecision dpd_decide(Time idle_start, Time next_event, const ProcessorModel& cpu);

struct EnergyReport {
	Rational e_dynamic;
	Rational e_standby;
	Rational e_shutdown_total;
	Rational e_total;
	Time t_exec;
	Time t_idle_on;
	Time t_off;
	Time t_overhead_total;
	std::int64_t shutdown_count = 0;
	// executed cycles per job (physical mode only)
	std::map<JobKey, Rational> cycles;
};

EnergyReport account(const Trace& trace, const ProcessorModel& cpu);

} // namespace skipsim

#endif
