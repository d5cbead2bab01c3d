#ifndef SKIPSIM_TRACE_HPP
#define SKIPSIM_TRACE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "skipsim/schedulers.hpp"
#include "skipsim/task_model.hpp"

namespace skipsim {

enum class Occupant { job, idle_standby, powered_off, shutdown_overhead };
const char* to_string(Occupant o);

// One maximal piece of constant processor state. `job` and `speed` are only
// meaningful for Occupant::job.
struct ExecutionSlice {
	Time start;
	Time end;
	Occupant occupant = Occupant::idle_standby;
	JobKey job;
	Rational speed;

	Time length() const { return end - start; }
};

enum class Outcome { completed, aborted, skipped };
const char* to_string(Outcome o);

struct JobOutcome {
	JobKey job;
	Color color = Color::red;
	Outcome outcome = Outcome::completed;
	Time time;
	Time release;
	Time deadline;
	// wcet-normalized work drawn for the job
	Rational actual_work;
};

struct Trace {
	Time horizon;
	std::vector<ExecutionSlice> slices;
	std::vector<JobOutcome> outcomes;
	std::int64_t shutdown_count = 0;
	Rational nominal_speed = Rational(1);
	// EDL snapshots, only filled when SimOptions::record_edl is set
	std::vector<EDLSchedule> edl_log;
	std::int64_t edl_fallbacks = 0;
	std::vector<std::string> warnings;
};

} // namespace skipsim

#endif
