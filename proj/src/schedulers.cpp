#include "skipsim/schedulers.hpp"

#include <algorithm>
#include <queue>

#include "skipsim/random.hpp"

namespace skipsim {

const char* to_string(PolicyId p)
{
	switch (p) {
	case PolicyId::rto: return "RTO";
	case PolicyId::bwp: return "BWP";
	case PolicyId::rlp: return "RLP";
	}
	return "?";
}

PolicyId parse_policy(const std::string& s)
{
	std::string l;
	for (char c : s)
		l += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
	if (l == "rto")
		return PolicyId::rto;
	if (l == "bwp")
		return PolicyId::bwp;
	if (l == "rlp")
		return PolicyId::rlp;
	throw std::invalid_argument("unknown policy '" + s + "'");
}

bool higher_priority(const QueuedJob& a, const QueuedJob& b)
{
	if (a.deadline != b.deadline)
		return a.deadline < b.deadline;
	if (a.release != b.release)
		return a.release < b.release;
	return a.key < b.key;
}

void ReadyQueues::insert_sorted(std::vector<QueuedJob>& q, const QueuedJob& job)
{
	auto pos = std::upper_bound(q.begin(), q.end(), job, higher_priority);
	q.insert(pos, job);
}

void ReadyQueues::insert(Color c, const QueuedJob& job)
{
	insert_sorted(c == Color::red ? red_ : blue_, job);
}

bool ReadyQueues::remove(const JobKey& key)
{
	for (auto* q : {&red_, &blue_}) {
		auto it = std::find_if(q->begin(), q->end(),
		                       [&](const QueuedJob& j) { return j.key == key; });
		if (it != q->end()) {
			q->erase(it);
			return true;
		}
	}
	return false;
}

std::optional<JobKey> rto_select(const ReadyQueues& q)
{
	if (q.red().empty())
		return std::nullopt;
	return q.red().front().key;
}

std::optional<JobKey> bwp_select(const ReadyQueues& q)
{
	if (!q.red().empty())
		return q.red().front().key;
	if (!q.blue().empty())
		return q.blue().front().key;
	return std::nullopt;
}

std::optional<JobKey> rlp_select(const ReadyQueues& q, const EDLSchedule& edl, Time now)
{
	if (q.blue().empty())
		return rto_select(q);
	if (edl.computed_at > now)
		throw StaleEdlError("EDL schedule computed in the future");
	for (const auto& j : q.red()) {
		auto it = edl.latest_start.find(j.key);
		if (it == edl.latest_start.end())
			throw StaleEdlError("red job " + j.key.str() + " missing from EDL schedule");
		if (it->second <= now)
			return j.key;
	}
	return q.blue().front().key;
}

Time EDLSchedule::idle_before(Time t) const
{
	Time idle;
	for (const auto& e : entries) {
		if (e.start >= t)
			break;
		if (!e.job)
			idle += min(e.end, t) - e.start;
	}
	return idle;
}

std::vector<EdlEntry> EDLSchedule::idle_intervals() const
{
	std::vector<EdlEntry> out;
	for (const auto& e : entries)
		if (!e.job)
			out.push_back(e);
	return out;
}

namespace {

struct MirroredJob {
	JobKey key;
	Time release;  // mirrored
	Time deadline; // mirrored
	Time deadline_fwd;
	Rational remaining;
};

// Priority in mirrored time: earliest mirrored deadline; among equal forward
// releases the job with the later forward deadline goes first so that, once
// mirrored back, the earlier deadline runs earlier.
struct MirroredOrder {
	const std::vector<MirroredJob>* jobs;
	bool operator()(std::size_t a, std::size_t b) const
	{
		const auto& x = (*jobs)[a];
		const auto& y = (*jobs)[b];
		if (x.deadline != y.deadline)
			return x.deadline > y.deadline;
		if (x.deadline_fwd != y.deadline_fwd)
			return x.deadline_fwd < y.deadline_fwd;
		return x.key < y.key;
	}
};

} // namespace

EDLSchedule compute_edl_schedule(std::span<const RedWork> pending,
                                 std::span<const RedWork> future_releases,
                                 Time now, Time horizon, Rational speed)
{
	if (!speed.is_positive())
		throw std::invalid_argument("EDL speed must be positive");
	if (horizon < now)
		throw std::invalid_argument("EDL horizon before computation time");

	std::vector<MirroredJob> jobs;
	auto add = [&](const RedWork& w) {
		if (w.deadline > horizon)
			throw std::invalid_argument("job " + w.key.str() + " has deadline beyond EDL horizon");
		if (!w.work.is_positive())
			return;
		Time start = max(w.release, now);
		if (w.deadline <= start)
			throw InfeasibleRedLoadError("red job " + w.key.str() + " has no time left");
		jobs.push_back({w.key, horizon - w.deadline, horizon - start, w.deadline, w.work / speed});
	};
	for (const auto& w : pending)
		add(w);
	for (const auto& w : future_releases)
		add(w);

	std::vector<std::size_t> by_release(jobs.size());
	for (std::size_t i = 0; i < jobs.size(); ++i)
		by_release[i] = i;
	std::sort(by_release.begin(), by_release.end(), [&](std::size_t a, std::size_t b) {
		if (jobs[a].release != jobs[b].release)
			return jobs[a].release < jobs[b].release;
		return jobs[a].key < jobs[b].key;
	});

	std::priority_queue<std::size_t, std::vector<std::size_t>, MirroredOrder> ready(
	    MirroredOrder{&jobs});
	std::vector<EdlEntry> mirrored;
	Time t;
	std::size_t next = 0;
	while (next < by_release.size() || !ready.empty()) {
		if (ready.empty() && jobs[by_release[next]].release > t)
			t = jobs[by_release[next]].release;
		while (next < by_release.size() && jobs[by_release[next]].release <= t)
			ready.push(by_release[next++]);

		std::size_t cur = ready.top();
		MirroredJob& j = jobs[cur];
		Time until = t + j.remaining;
		if (next < by_release.size())
			until = min(until, jobs[by_release[next]].release);

		if (!mirrored.empty() && mirrored.back().job == j.key && mirrored.back().end == t)
			mirrored.back().end = until;
		else
			mirrored.push_back({t, until, j.key});
		j.remaining -= until - t;
		t = until;
		if (j.remaining.is_zero()) {
			ready.pop();
			if (t > j.deadline)
				throw InfeasibleRedLoadError("red job " + j.key.str()
				                             + " cannot complete by its deadline");
		}
	}

	EDLSchedule edl;
	edl.computed_at = now;
	edl.horizon = horizon;
	edl.speed = speed;

	Time cursor = now;
	for (auto it = mirrored.rbegin(); it != mirrored.rend(); ++it) {
		Time start = horizon - it->end;
		Time end = horizon - it->start;
		if (start > cursor)
			edl.entries.push_back({cursor, start, std::nullopt});
		edl.entries.push_back({start, end, it->job});
		auto [pos, inserted] = edl.latest_start.emplace(*it->job, start);
		if (!inserted && start < pos->second)
			pos->second = start;
		cursor = end;
	}
	if (cursor < horizon)
		edl.entries.push_back({cursor, horizon, std::nullopt});
	return edl;
}

bool edl_recompute_triggers(const SchedEvent& ev)
{
	switch (ev.kind) {
	case SchedEventKind::blue_release:
		return ev.other_blues_pending == 0;
	case SchedEventKind::blue_completion:
		return ev.other_blues_pending > 0;
	default:
		return false;
	}
}

std::vector<RedWork> project_red_releases(const TaskSet& ts,
                                          std::span<const TaskProjectionState> state,
                                          ColoringMode mode, std::uint64_t seed, Time until)
{
	if (state.size() != ts.size())
		throw std::invalid_argument("projection state does not match task set");
	std::vector<RedWork> out;
	for (const auto& spec : ts) {
		const auto& st = state[spec.id];
		SkipState skip = st.skip;
		if (st.pending_color) {
			if (*st.pending_color == Color::red)
				skip.on_complete();
			else
				skip.on_skip();
		}
		for (std::int64_t k = st.next_index;; ++k) {
			Time release(k * spec.period);
			Time deadline = release + Time(spec.period);
			if (deadline > until)
				break;
			bool coin = mode == ColoringMode::random ? color_coin(seed, spec.id, k) : true;
			if (next_color(skip, spec.skip_factor, mode, coin) == Color::red) {
				out.push_back({{spec.id, k}, release, deadline, Rational(spec.wcet)});
				skip.on_complete();
			} else {
				skip.on_skip();
			}
		}
	}
	return out;
}

} // namespace skipsim
