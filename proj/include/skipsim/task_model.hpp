#ifndef SKIPSIM_TASK_MODEL_HPP
#define SKIPSIM_TASK_MODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skipsim/rational.hpp"

namespace skipsim {

using Time = Rational;
using TaskId = std::size_t;

// Skip factor of a task. An empty value means no skips are permitted.
class SkipFactor {
public:
	constexpr SkipFactor() = default;
	constexpr explicit SkipFactor(std::int64_t sf) : value_(sf) {}
	static constexpr SkipFactor infinite() { return SkipFactor(); }

	bool is_infinite() const { return value_ == 0; }
	std::int64_t value() const;
	std::string str() const;

	friend bool operator==(const SkipFactor&, const SkipFactor&) = default;

private:
	std::int64_t value_ = 0; // 0 encodes infinity
};

struct TaskSpec {
	TaskId id = 0;
	std::int64_t period = 0;
	std::int64_t wcet = 0;
	SkipFactor skip_factor = SkipFactor(2);
	// lower bound of the actual execution time as a fraction of wcet
	Rational bcet_fraction = Rational(1, 2);

	// implicit deadlines
	std::int64_t relative_deadline() const { return period; }
	Rational utilization() const { return Rational(wcet, period); }
};

class TaskSet {
public:
	const std::vector<TaskSpec>& tasks() const { return tasks_; }
	std::size_t size() const { return tasks_.size(); }
	const TaskSpec& operator[](TaskId i) const { return tasks_.at(i); }
	auto begin() const { return tasks_.begin(); }
	auto end() const { return tasks_.end(); }

	std::int64_t hyperperiod() const { return hyperperiod_; }
	const Rational& u_tot() const { return u_tot_; }
	const Rational& u_mand() const { return u_mand_; }

private:
	friend TaskSet validate_task_set(std::vector<TaskSpec> specs);

	std::vector<TaskSpec> tasks_;
	std::int64_t hyperperiod_ = 1;
	Rational u_tot_;
	Rational u_mand_;
};

struct TaskModelError : std::runtime_error {
	using std::runtime_error::runtime_error;
};
struct EmptySetError : TaskModelError {
	EmptySetError() : TaskModelError("task set is empty") {}
};
struct InvalidWcetError : TaskModelError {
	using TaskModelError::TaskModelError;
};
struct InvalidSkipFactorError : TaskModelError {
	using TaskModelError::TaskModelError;
};

// Checks every spec and computes the set-level quantities. Task ids are
// reassigned to the position in the list.
TaskSet validate_task_set(std::vector<TaskSpec> specs);

std::int64_t hyperperiod(const TaskSet& ts);
Rational utilization(const TaskSet& ts);
// sum of c_i/p_i * (sf_i - 1)/sf_i; the factor is 1 for infinite skip factors
Rational mandatory_utilization(const TaskSet& ts);

enum class Color { red, blue };
const char* to_string(Color c);

enum class ColoringMode { automaton, random };
const char* to_string(ColoringMode m);
ColoringMode parse_coloring_mode(const std::string& s);

// Consecutive completed instances of one task since its last skip.
struct SkipState {
	TaskId task = 0;
	std::int64_t run_length = 0;

	void on_complete() { ++run_length; }
	void on_skip() { run_length = 0; }
};

// Color of the next instance. In random mode `coin` picks blue among the
// instances where the automaton permits a skip.
Color next_color(const SkipState& state, SkipFactor sf, ColoringMode mode, bool coin = true);

enum class JobState { pending, running, completed, aborted };

// Identifies the index-th instance of a task.
struct JobKey {
	TaskId task = 0;
	std::int64_t index = 0;

	friend auto operator<=>(const JobKey&, const JobKey&) = default;
	std::string str() const { return "T" + std::to_string(task) + "." + std::to_string(index); }
};

struct JobInstance {
	TaskId task = 0;
	std::int64_t index = 0;
	Color color = Color::red;
	Time release;
	Time deadline;
	Rational wcet_remaining;   // in time units at maximum speed
	Rational actual_remaining; // in time units at maximum speed
	JobState state = JobState::pending;
	bool executed = false;     // has received any processor time

	JobKey key() const { return {task, index}; }
};

// Plain-text task-set format: one task per line, "period wcet skip_factor",
// '#' starts a comment, skip_factor may be "inf".
std::vector<TaskSpec> parse_task_specs(std::istream& in);
std::vector<TaskSpec> load_task_specs(const std::string& path);
void write_task_set(std::ostream& os, const TaskSet& ts);

} // namespace skipsim

#endif
