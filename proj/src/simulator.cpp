#include "skipsim/simulator.hpp"

#include <algorithm>

#include "skipsim/random.hpp"

namespace skipsim {

namespace {

struct SimJob {
	JobInstance inst;
	Rational drawn;
};

class Engine {
public:
	Engine(const TaskSet& ts, PolicyId policy, const ProcessorModel& cpu, const SimOptions& opt)
	    : ts_(ts), policy_(policy), cpu_(cpu), opt_(opt)
	{
	}

	Trace run();

private:
	JobInstance& job(const JobKey& k) { return jobs_[k.task][static_cast<std::size_t>(k.index)].inst; }
	const JobInstance& job(const JobKey& k) const
	{
		return jobs_[k.task][static_cast<std::size_t>(k.index)].inst;
	}

	bool release_valid(const TaskSpec& t, std::int64_t k) const
	{
		return Time((k + 1) * t.period) <= horizon_;
	}
	std::optional<Time> next_release_of(const TaskSpec& t) const
	{
		std::int64_t k = next_index_[t.id];
		if (!release_valid(t, k))
			return std::nullopt;
		return Time(k * t.period);
	}
	Time next_release() const;
	Time idle_wake() const;
	bool retired(const JobKey& k) const;

	void retire_deadlines();
	void release_jobs();
	void finish_job(const JobKey& k, Outcome outcome, Time at);
	void recompute_edl();
	std::optional<JobKey> select() const;
	void dispatch(const std::optional<JobKey>& sel, bool force_speed_update);
	Rational dispatch_speed(const JobInstance& j) const;
	Rational policy_speed(const JobInstance& j) const;
	Rational rlp_blue_speed() const;
	Time next_event_time() const;
	void advance(Time t);
	void append_slice(const ExecutionSlice& s);
	std::vector<TaskProjectionState> projection_state() const;

	const TaskSet& ts_;
	PolicyId policy_;
	const ProcessorModel& cpu_;
	const SimOptions& opt_;

	Time horizon_;
	Time now_;
	std::vector<std::vector<SimJob>> jobs_;
	std::vector<SkipState> skip_;
	std::vector<std::int64_t> next_index_;
	std::vector<std::optional<std::int64_t>> pending_;
	ReadyQueues queues_;

	std::optional<JobKey> running_;
	Rational speed_ = Rational(1);

	Rational s_nom_ = Rational(1);
	CanonicalSchedule canonical_;

	EDLSchedule edl_;
	bool edl_active_ = false;
	bool edl_fallback_ = false;
	bool edl_trigger_ = false;
	std::vector<JobKey> new_reds_;

	bool in_idle_ = false;
	Time covered_until_;

	Trace trace_;
};

Time Engine::next_release() const
{
	Time t = horizon_;
	for (const auto& spec : ts_)
		if (auto r = next_release_of(spec))
			t = min(t, *r);
	return t;
}

// Earliest instant at which the active policy can have something to run,
// given that nothing runs before it.
Time Engine::idle_wake() const
{
	if (policy_ != PolicyId::rto)
		return next_release();

	// RTO ignores blues: walk each task's skip automaton to its next red.
	Time t = horizon_;
	for (const auto& spec : ts_) {
		SkipState s = skip_[spec.id];
		if (pending_[spec.id])
			s.on_skip(); // a pending instance while RTO idles is a blue
		for (std::int64_t k = next_index_[spec.id]; release_valid(spec, k); ++k) {
			Time r(k * spec.period);
			if (r >= t)
				break;
			bool coin = opt_.coloring == ColoringMode::random ? color_coin(opt_.seed, spec.id, k)
			                                                  : true;
			if (next_color(s, spec.skip_factor, opt_.coloring, coin) == Color::red) {
				t = r;
				break;
			}
			s.on_skip();
		}
	}
	return t;
}

bool Engine::retired(const JobKey& k) const
{
	if (k.task >= jobs_.size() || k.index < 0
	    || static_cast<std::size_t>(k.index) >= jobs_[k.task].size())
		return false;
	auto st = job(k).state;
	return st == JobState::completed || st == JobState::aborted;
}

void Engine::finish_job(const JobKey& k, Outcome outcome, Time at)
{
	JobInstance& j = job(k);
	j.state = outcome == Outcome::completed ? JobState::completed : JobState::aborted;
	queues_.remove(k);
	pending_[k.task].reset();
	if (running_ == k)
		running_.reset();

	trace_.outcomes.push_back({k, j.color, outcome, at, j.release, j.deadline,
	                           jobs_[k.task][static_cast<std::size_t>(k.index)].drawn});
	if (outcome == Outcome::completed)
		skip_[k.task].on_complete();
	else
		skip_[k.task].on_skip();

	if (policy_ != PolicyId::rlp)
		return;
	if (queues_.blue().empty()) {
		edl_active_ = false;
		edl_fallback_ = false;
		return;
	}
	if (j.color == Color::blue && outcome == Outcome::completed
	    && edl_recompute_triggers({SchedEventKind::blue_completion, queues_.blue().size()}))
		edl_trigger_ = true;
	// a red miss breaks the projection the current plan was built on
	if (j.color == Color::red && outcome != Outcome::completed)
		edl_trigger_ = true;
}

void Engine::retire_deadlines()
{
	std::vector<QueuedJob> expired;
	for (const auto* q : {&queues_.red(), &queues_.blue()})
		for (const auto& qj : *q)
			if (qj.deadline <= now_)
				expired.push_back(qj);
	std::sort(expired.begin(), expired.end(), higher_priority);
	for (const auto& qj : expired) {
		const JobInstance& j = job(qj.key);
		Outcome o = Outcome::aborted;
		if (j.color == Color::blue && !j.executed)
			o = Outcome::skipped;
		finish_job(qj.key, o, now_);
	}
}

void Engine::release_jobs()
{
	for (const auto& spec : ts_) {
		auto r = next_release_of(spec);
		if (!r || *r != now_)
			continue;
		std::int64_t k = next_index_[spec.id]++;
		bool coin = opt_.coloring == ColoringMode::random ? color_coin(opt_.seed, spec.id, k) : true;

		SimJob sj;
		JobInstance& j = sj.inst;
		j.task = spec.id;
		j.index = k;
		j.color = next_color(skip_[spec.id], spec.skip_factor, opt_.coloring, coin);
		j.release = now_;
		j.deadline = now_ + Time(spec.relative_deadline());
		j.wcet_remaining = Rational(spec.wcet);
		sj.drawn = draw_actual_execution_time(spec, opt_.seed, k);
		j.actual_remaining = sj.drawn;
		jobs_[spec.id].push_back(sj);
		pending_[spec.id] = k;

		std::size_t blues_before = queues_.blue().size();
		queues_.insert(j.color, {j.key(), j.release, j.deadline});
		if (j.color == Color::red) {
			new_reds_.push_back(j.key());
		} else if (policy_ == PolicyId::rlp
		           && edl_recompute_triggers({SchedEventKind::blue_release, blues_before})) {
			edl_trigger_ = true;
		}
	}
}

std::vector<TaskProjectionState> Engine::projection_state() const
{
	std::vector<TaskProjectionState> st(ts_.size());
	for (const auto& spec : ts_) {
		auto& s = st[spec.id];
		s.skip = skip_[spec.id];
		s.next_index = next_index_[spec.id];
		if (pending_[spec.id])
			s.pending_color = job({spec.id, *pending_[spec.id]}).color;
	}
	return st;
}

void Engine::recompute_edl()
{
	edl_trigger_ = false;
	if (queues_.blue().empty()) {
		edl_active_ = false;
		edl_fallback_ = false;
		return;
	}

	std::vector<RedWork> pending;
	for (const auto& qj : queues_.red())
		pending.push_back({qj.key, qj.release, qj.deadline, job(qj.key).wcet_remaining});

	const Time period(ts_.hyperperiod());
	Time until = min(period * Time((now_ / period).floor() + 1), horizon_);
	auto state = projection_state();
	auto future = project_red_releases(ts_, state, opt_.coloring, opt_.seed, until);

	Rational speed = opt_.dvs ? s_nom_ : cpu_.s_max();
	edl_active_ = true;
	try {
		edl_ = compute_edl_schedule(pending, future, now_, until, speed);
		edl_fallback_ = false;
		if (opt_.record_edl)
			trace_.edl_log.push_back(edl_);
	} catch (const InfeasibleRedLoadError&) {
		// no valid plan: serve reds first until the next trigger
		edl_fallback_ = true;
		++trace_.edl_fallbacks;
	}
}

std::optional<JobKey> Engine::select() const
{
	switch (policy_) {
	case PolicyId::rto:
		return rto_select(queues_);
	case PolicyId::bwp:
		return bwp_select(queues_);
	case PolicyId::rlp:
		if (queues_.blue().empty())
			return rto_select(queues_);
		if (!edl_active_)
			throw StaleEdlError("blue instances pending without an EDL schedule");
		if (edl_fallback_)
			return bwp_select(queues_);
		return rlp_select(queues_, edl_, now_);
	}
	return std::nullopt;
}

Rational Engine::dispatch_speed(const JobInstance& j) const
{
	if (!opt_.dvs)
		return cpu_.s_max();
	Rational s = policy_speed(j);
	if (!opt_.dvs_outcome_guard || policy_ == PolicyId::rto || s == cpu_.s_max())
		return s;
	// Alone and done before anything else happens, the job leaves the same
	// state behind as at full speed.
	const bool alone = queues_.red().size() + queues_.blue().size() == 1;
	if (alone && now_ + j.wcet_remaining / s <= min(next_release(), j.deadline))
		return s;
	return cpu_.s_max();
}

Rational Engine::policy_speed(const JobInstance& j) const
{
	if (j.color == Color::blue) {
		if (policy_ == PolicyId::rlp && edl_active_ && !edl_fallback_)
			return rlp_blue_speed();
		return s_nom_;
	}
	if (policy_ == PolicyId::rlp && edl_active_)
		return edl_fallback_ ? cpu_.s_max() : s_nom_;
	return dra_speed(canonical_, j, now_, cpu_, [this](const JobKey& k) { return retired(k); });
}

// Lowest level at which every pending blue, taken in EDF order, still fits
// into the time the EDL plan leaves free before its deadline. Idle entries
// and slots of red jobs that already finished are free.
Rational Engine::rlp_blue_speed() const
{
	Rational speed = cpu_.s_min();
	Rational work;
	for (const auto& b : queues_.blue()) {
		work += job(b.key).wcet_remaining;
		Time free;
		for (const auto& e : edl_.entries) {
			if (e.start >= b.deadline)
				break;
			if (e.end <= now_ || (e.job && !retired(*e.job)))
				continue;
			free += min(e.end, b.deadline) - max(e.start, now_);
		}
		speed = max(speed, stretch_speed(work, free, s_nom_, cpu_));
		if (speed == s_nom_)
			break;
	}
	return speed;
}

void Engine::dispatch(const std::optional<JobKey>& sel, bool force_speed_update)
{
	if (sel && now_ < covered_until_)
		throw std::logic_error("job selected while the processor is powered off");

	if (sel != running_) {
		if (running_) {
			JobInstance& prev = job(*running_);
			prev.state = JobState::pending;
			if (policy_ == PolicyId::bwp && opt_.bwp_abort_literal && prev.color == Color::blue
			    && sel && job(*sel).color == Color::red)
				finish_job(*running_, Outcome::aborted, now_);
		}
		running_ = sel;
		if (sel) {
			JobInstance& j = job(*sel);
			j.state = JobState::running;
			speed_ = dispatch_speed(j);
			in_idle_ = false;
		}
	} else if (sel && force_speed_update) {
		speed_ = dispatch_speed(job(*sel));
	}

	if (sel || in_idle_ || now_ < covered_until_)
		return;

	in_idle_ = true;
	if (!opt_.dpd)
		return;
	Time wake = idle_wake();
	if (dpd_decide(now_, wake, cpu_) != IdleDecision::power_off)
		return;
	Time overhead = min(cpu_.t_overhead, wake - now_);
	if (wake - overhead > now_)
		append_slice({now_, wake - overhead, Occupant::powered_off, {}, Rational()});
	if (overhead.is_positive())
		append_slice({wake - overhead, wake, Occupant::shutdown_overhead, {}, Rational()});
	++trace_.shutdown_count;
	covered_until_ = wake;
	in_idle_ = false;
}

Time Engine::next_event_time() const
{
	Time t = min(horizon_, next_release());
	if (!queues_.red().empty())
		t = min(t, queues_.red().front().deadline);
	if (!queues_.blue().empty())
		t = min(t, queues_.blue().front().deadline);
	if (running_)
		t = min(t, now_ + job(*running_).actual_remaining / speed_);
	if (covered_until_ > now_)
		t = min(t, covered_until_);
	if (policy_ == PolicyId::rlp && edl_active_ && !edl_fallback_) {
		for (const auto& qj : queues_.red()) {
			auto it = edl_.latest_start.find(qj.key);
			if (it != edl_.latest_start.end() && it->second > now_)
				t = min(t, it->second);
		}
	}
	return t;
}

void Engine::append_slice(const ExecutionSlice& s)
{
	if (!trace_.slices.empty()) {
		auto& last = trace_.slices.back();
		if (last.end == s.start && last.occupant == s.occupant && last.occupant != Occupant::powered_off
		    && last.occupant != Occupant::shutdown_overhead && last.job == s.job
		    && last.speed == s.speed) {
			last.end = s.end;
			return;
		}
	}
	trace_.slices.push_back(s);
}

void Engine::advance(Time t)
{
	if (t < now_)
		throw std::logic_error("simulation time moved backwards");
	if (t == now_)
		return;
	if (running_) {
		JobKey k = *running_;
		JobInstance& j = job(k);
		Rational work = (t - now_) * speed_;
		j.actual_remaining -= work;
		j.wcet_remaining -= work;
		j.executed = true;
		append_slice({now_, t, Occupant::job, k, speed_});
		if (j.actual_remaining.is_zero())
			finish_job(k, Outcome::completed, t);
	} else if (now_ >= covered_until_) {
		append_slice({now_, t, Occupant::idle_standby, {}, Rational()});
	}
	now_ = t;
}

Trace Engine::run()
{
	const Time period(ts_.hyperperiod());
	horizon_ = opt_.horizon.value_or(period);
	if (!horizon_.is_positive())
		throw std::invalid_argument("simulation horizon must be positive");
	if (!(horizon_ / period).is_integer()) {
		std::string msg = "horizon " + horizon_.str() + " is not a multiple of the hyperperiod "
		                  + std::to_string(ts_.hyperperiod());
		if (opt_.strict_horizon)
			throw HorizonNotMultipleOfHyperperiodError(msg);
		trace_.warnings.push_back(msg);
	}

	jobs_.assign(ts_.size(), {});
	skip_.assign(ts_.size(), {});
	for (const auto& t : ts_)
		skip_[t.id].task = t.id;
	next_index_.assign(ts_.size(), 0);
	pending_.assign(ts_.size(), std::nullopt);

	if (opt_.dvs) {
		s_nom_ = nominal_speed(ts_, cpu_, opt_.coloring, opt_.seed, horizon_);
		canonical_ = build_canonical_schedule(ts_, s_nom_, horizon_, opt_.coloring, opt_.seed);
	} else {
		s_nom_ = cpu_.s_max();
	}
	trace_.horizon = horizon_;
	trace_.nominal_speed = s_nom_;

	for (;;) {
		new_reds_.clear();
		retire_deadlines();
		release_jobs();
		bool recomputed = false;
		if (edl_trigger_) {
			recompute_edl();
			recomputed = true;
		}
		if (edl_active_ && !edl_fallback_ && !recomputed) {
			for (const auto& k : new_reds_)
				if (!edl_.latest_start.contains(k))
					throw StaleEdlError("red job " + k.str() + " released outside the EDL projection");
		}
		if (now_ >= horizon_)
			break;
		dispatch(select(), recomputed);
		advance(next_event_time());
	}
	return std::move(trace_);
}

} // namespace

Trace run_simulation(const TaskSet& ts, PolicyId policy, const ProcessorModel& cpu,
                     const SimOptions& opts)
{
	cpu.validate();
	return Engine(ts, policy, cpu, opts).run();
}

} // namespace skipsim
