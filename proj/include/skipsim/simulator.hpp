#ifndef SKIPSIM_SIMULATOR_HPP
#define SKIPSIM_SIMULATOR_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "skipsim/energy.hpp"
#include "skipsim/schedulers.hpp"
#include "skipsim/task_model.hpp"
#include "skipsim/trace.hpp"

namespace skipsim {

struct SimOptions {
	bool dvs = false;
	bool dpd = false;
	ColoringMode coloring = ColoringMode::automaton;
	std::uint64_t seed = 0;
	// defaults to one hyperperiod
	std::optional<Time> horizon;
	// BWP: abort a running blue the moment a red preempts it instead of
	// keeping it queued until its deadline
	bool bwp_abort_literal = false;
	// BWP/RLP: only slow a job down when that cannot change any job outcome
	// (it is the only pending job and finishes before the next release even
	// at its worst case); otherwise it runs at full speed
	bool dvs_outcome_guard = true;
	// a horizon that is not a multiple of the hyperperiod is an error
	// instead of a warning
	bool strict_horizon = false;
	// keep every EDL schedule in Trace::edl_log
	bool record_edl = false;
};

struct HorizonNotMultipleOfHyperperiodError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

// Deterministic in all arguments. Instances whose deadline lies beyond the
// horizon are not released.
Trace run_simulation(const TaskSet& ts, PolicyId policy, const ProcessorModel& cpu,
                     const SimOptions& opts);

} // namespace skipsim

#endif
