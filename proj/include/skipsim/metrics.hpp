#ifndef SKIPSIM_METRICS_HPP
#define SKIPSIM_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skipsim/energy.hpp"
#include "skipsim/schedulers.hpp"
#include "skipsim/task_model.hpp"
#include "skipsim/trace.hpp"

namespace skipsim {

struct TaskCounters {
	std::int64_t red_hit = 0;
	std::int64_t red_miss = 0;
	std::int64_t blue_hit = 0;
	std::int64_t blue_miss = 0;

	std::int64_t hits() const { return red_hit + blue_hit; }
	std::int64_t instances() const { return red_hit + red_miss + blue_hit + blue_miss; }
	// hits / instances; 1 for a task without instances
	Rational success_ratio() const;
};

struct Metrics {
	std::vector<TaskCounters> per_task;
	TaskCounters total;
	// mean of the per-task ratios over tasks with at least one instance
	Rational avg_success_ratio = Rational(1);
	// total hits / total instances
	Rational aggregate_success_ratio = Rational(1);
	Rational e_total;
	Rational normalized_energy = Rational(1);
};

Metrics success_ratios(const Trace& trace, const TaskSet& ts);

struct ZeroBaselineError : std::runtime_error {
	ZeroBaselineError() : std::runtime_error("baseline energy is zero") {}
};

Rational normalized_energy(const EnergyReport& report, const EnergyReport& baseline);

struct ResultRow {
	int n_tasks = 0;
	PolicyId policy = PolicyId::rto;
	bool dvs = false;
	bool dpd = false;
	std::uint64_t seed = 0;
	Rational u_tot;
	Metrics metrics;
};

enum class ExportFormat { csv, json };
ExportFormat parse_export_format(const std::string& s);

// CSV header, in column order
extern const std::vector<std::string> kResultColumns;

void write_csv(std::ostream& os, std::span<const ResultRow> rows);
void write_json(std::ostream& os, std::span<const ResultRow> rows);
// throws std::ios_base::failure when the file cannot be written
void export_results(std::span<const ResultRow> rows, ExportFormat format, const std::string& path);

} // namespace skipsim

#endif
