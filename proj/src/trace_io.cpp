#include "skipsim/trace_io.hpp"

#include <ostream>

namespace skipsim {

using nlohmann::ordered_json;

const char* to_string(Occupant o)
{
	switch (o) {
	case Occupant::job: return "job";
	case Occupant::idle_standby: return "idle";
	case Occupant::powered_off: return "off";
	case Occupant::shutdown_overhead: return "overhead";
	}
	return "?";
}

const char* to_string(Outcome o)
{
	switch (o) {
	case Outcome::completed: return "completed";
	case Outcome::aborted: return "aborted";
	case Outcome::skipped: return "skipped";
	}
	return "?";
}

ordered_json edl_to_json(const EDLSchedule& edl)
{
	ordered_json j;
	j["computed_at"] = edl.computed_at.str();
	j["horizon"] = edl.horizon.str();
	j["speed"] = edl.speed.str();
	ordered_json entries = ordered_json::array();
	for (const auto& e : edl.entries) {
		ordered_json row;
		row["start"] = e.start.str();
		row["end"] = e.end.str();
		row["job"] = e.job ? ordered_json(e.job->str()) : ordered_json(nullptr);
		entries.push_back(std::move(row));
	}
	j["entries"] = std::move(entries);
	ordered_json ls = ordered_json::object();
	for (const auto& [k, t] : edl.latest_start)
		ls[k.str()] = t.str();
	j["latest_start"] = std::move(ls);
	return j;
}

ordered_json trace_to_json(const Trace& trace)
{
	ordered_json j;
	j["horizon"] = trace.horizon.str();
	j["nominal_speed"] = trace.nominal_speed.str();
	j["shutdown_count"] = trace.shutdown_count;
	j["edl_fallbacks"] = trace.edl_fallbacks;
	j["warnings"] = trace.warnings;

	ordered_json slices = ordered_json::array();
	for (const auto& s : trace.slices) {
		ordered_json row;
		row["start"] = s.start.str();
		row["end"] = s.end.str();
		row["occupant"] = s.occupant == Occupant::job ? s.job.str() : to_string(s.occupant);
		row["speed"] = s.occupant == Occupant::job ? ordered_json(s.speed.str()) : ordered_json(nullptr);
		slices.push_back(std::move(row));
	}
	j["slices"] = std::move(slices);

	ordered_json outcomes = ordered_json::array();
	for (const auto& o : trace.outcomes) {
		ordered_json row;
		row["job"] = o.job.str();
		row["task"] = o.job.task;
		row["index"] = o.job.index;
		row["color"] = to_string(o.color);
		row["outcome"] = to_string(o.outcome);
		row["time"] = o.time.str();
		row["release"] = o.release.str();
		row["deadline"] = o.deadline.str();
		row["actual_work"] = o.actual_work.str();
		outcomes.push_back(std::move(row));
	}
	j["outcomes"] = std::move(outcomes);

	if (!trace.edl_log.empty()) {
		ordered_json edl = ordered_json::array();
		for (const auto& e : trace.edl_log)
			edl.push_back(edl_to_json(e));
		j["edl"] = std::move(edl);
	}
	return j;
}

void write_trace(std::ostream& os, const Trace& trace)
{
	os << trace_to_json(trace).dump(2) << '\n';
}

} // namespace skipsim
