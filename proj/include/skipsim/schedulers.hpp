#ifndef SKIPSIM_SCHEDULERS_HPP
#define SKIPSIM_SCHEDULERS_HPP

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skipsim/task_model.hpp"

namespace skipsim {

enum class PolicyId { rto, bwp, rlp };
const char* to_string(PolicyId p);
PolicyId parse_policy(const std::string& s);

// Scheduling-relevant view of a pending job.
struct QueuedJob {
	JobKey key;
	Time release;
	Time deadline;
};

// EDF priority: earlier deadline, then earlier release, then lower task id.
bool higher_priority(const QueuedJob& a, const QueuedJob& b);

class ReadyQueues {
public:
	void insert(Color c, const QueuedJob& job);
	bool remove(const JobKey& key);

	const std::vector<QueuedJob>& red() const { return red_; }
	const std::vector<QueuedJob>& blue() const { return blue_; }
	bool empty() const { return red_.empty() && blue_.empty(); }

private:
	static void insert_sorted(std::vector<QueuedJob>& q, const QueuedJob& job);

	std::vector<QueuedJob> red_;
	std::vector<QueuedJob> blue_;
};

// Red work to be placed by the EDL construction. `work` is the remaining
// worst-case demand in time units at maximum speed.
struct RedWork {
	JobKey key;
	Time release;
	Time deadline;
	Rational work;
};

struct EdlEntry {
	Time start;
	Time end;
	std::optional<JobKey> job; // empty for idle
};

// As-late-as-possible schedule of the red workload at one speed.
struct EDLSchedule {
	Time computed_at;
	Time horizon;
	Rational speed = Rational(1);
	std::vector<EdlEntry> entries; // tiles [computed_at, horizon]
	std::map<JobKey, Time> latest_start;

	// idle time within [computed_at, t]
	Time idle_before(Time t) const;
	std::vector<EdlEntry> idle_intervals() const;
};

struct SchedulingError : std::runtime_error {
	using std::runtime_error::runtime_error;
};
struct InfeasibleRedLoadError : SchedulingError {
	using SchedulingError::SchedulingError;
};
struct StaleEdlError : SchedulingError {
	using SchedulingError::SchedulingError;
};

std::optional<JobKey> rto_select(const ReadyQueues& q);
std::optional<JobKey> bwp_select(const ReadyQueues& q);
std::optional<JobKey> rlp_select(const ReadyQueues& q, const EDLSchedule& edl, Time now);

// Places every job as late as its deadline allows: EDF in mirrored time
// (deadlines become releases), mirrored back. Pending jobs are treated as
// released at `now`.
EDLSchedule compute_edl_schedule(std::span<const RedWork> pending,
                                 std::span<const RedWork> future_releases,
                                 Time now, Time horizon, Rational speed);

enum class SchedEventKind { blue_release, blue_completion, red_release, red_completion, deadline };

struct SchedEvent {
	SchedEventKind kind;
	// blue instances pending besides the one the event concerns
	std::size_t other_blues_pending = 0;
};

bool edl_recompute_triggers(const SchedEvent& ev);

// Per-task state needed to project future colors.
struct TaskProjectionState {
	SkipState skip;
	std::optional<Color> pending_color; // color of the pending instance, if any
	std::int64_t next_index = 0;        // first instance not yet released
};

// Future red releases in [from, until) assuming pending reds complete and
// every blue (pending or future) is skipped. Only instances whose deadline is
// at most `until` are returned.
std::vector<RedWork> project_red_releases(const TaskSet& ts,
                                          std::span<const TaskProjectionState> state,
                                          ColoringMode mode, std::uint64_t seed, Time until);

} // namespace skipsim

#endif
