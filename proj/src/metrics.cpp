#include "skipsim/metrics.hpp"

#include <fstream>
#include <limits>
#include <ostream>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

namespace skipsim {

namespace {

using BigRational = boost::multiprecision::cpp_rational;

// Exact when the reduced value fits in 64 bits, otherwise the nearest
// multiple of 1e-12.
Rational narrow(const BigRational& q)
{
	using boost::multiprecision::cpp_int;
	const cpp_int num = boost::multiprecision::numerator(q);
	const cpp_int den = boost::multiprecision::denominator(q);
	const cpp_int limit = std::numeric_limits<std::int64_t>::max();
	if (abs(num) <= limit && den <= limit)
		return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
	const std::int64_t scale = 1000000000000;
	cpp_int rounded = (num * scale * 2 + den) / (den * 2);
	return Rational(static_cast<std::int64_t>(rounded), scale);
}

} // namespace

Rational TaskCounters::success_ratio() const
{
	if (instances() == 0)
		return Rational(1);
	return Rational(hits(), instances());
}

Metrics success_ratios(const Trace& trace, const TaskSet& ts)
{
	Metrics m;
	m.per_task.resize(ts.size());
	for (const auto& o : trace.outcomes) {
		if (o.job.task >= ts.size())
			throw MalformedTraceError("outcome for unknown task " + std::to_string(o.job.task));
		auto& c = m.per_task[o.job.task];
		bool hit = o.outcome == Outcome::completed;
		if (o.color == Color::red)
			++(hit ? c.red_hit : c.red_miss);
		else
			++(hit ? c.blue_hit : c.blue_miss);
	}

	// per-task denominators are unrelated, so the exact sum can outgrow 64 bits
	BigRational sum;
	std::int64_t counted = 0;
	for (const auto& c : m.per_task) {
		m.total.red_hit += c.red_hit;
		m.total.red_miss += c.red_miss;
		m.total.blue_hit += c.blue_hit;
		m.total.blue_miss += c.blue_miss;
		if (c.instances() > 0) {
			sum += BigRational(c.hits(), c.instances());
			++counted;
		}
	}
	if (counted > 0)
		m.avg_success_ratio = narrow(sum / counted);
	m.aggregate_success_ratio = m.total.success_ratio();
	return m;
}

Rational normalized_energy(const EnergyReport& report, const EnergyReport& baseline)
{
	if (baseline.e_total.is_zero())
		throw ZeroBaselineError();
	return report.e_total / baseline.e_total;
}

ExportFormat parse_export_format(const std::string& s)
{
	if (s == "csv")
		return ExportFormat::csv;
	if (s == "json")
		return ExportFormat::json;
	throw std::invalid_argument("unknown export format '" + s + "'");
}

const std::vector<std::string> kResultColumns = {
    "n_tasks",  "policy",  "dvs",      "dpd",       "seed",    "u_tot",
    "avg_success_ratio", "aggregate_success_ratio", "red_hit", "red_miss",
    "blue_hit", "blue_miss", "e_total", "normalized_energy",
};

void write_csv(std::ostream& os, std::span<const ResultRow> rows)
{
	for (std::size_t i = 0; i < kResultColumns.size(); ++i)
		os << (i ? "," : "") << kResultColumns[i];
	os << '\n';
	for (const auto& r : rows) {
		const auto& m = r.metrics;
		os << r.n_tasks << ',' << to_string(r.policy) << ',' << (r.dvs ? 1 : 0) << ','
		   << (r.dpd ? 1 : 0) << ',' << r.seed << ',' << r.u_tot.decimal() << ','
		   << m.avg_success_ratio.decimal() << ',' << m.aggregate_success_ratio.decimal() << ','
		   << m.total.red_hit << ',' << m.total.red_miss << ',' << m.total.blue_hit << ','
		   << m.total.blue_miss << ',' << m.e_total.decimal() << ','
		   << m.normalized_energy.decimal() << '\n';
	}
}

void write_json(std::ostream& os, std::span<const ResultRow> rows)
{
	using nlohmann::ordered_json;
	ordered_json out = ordered_json::array();
	auto put = [](ordered_json& j, const std::string& name, const Rational& v) {
		j[name] = v.decimal();
		j[name + "_exact"] = v.str();
	};
	for (const auto& r : rows) {
		const auto& m = r.metrics;
		ordered_json j;
		j["n_tasks"] = r.n_tasks;
		j["policy"] = to_string(r.policy);
		j["dvs"] = r.dvs;
		j["dpd"] = r.dpd;
		j["seed"] = r.seed;
		put(j, "u_tot", r.u_tot);
		put(j, "avg_success_ratio", m.avg_success_ratio);
		put(j, "aggregate_success_ratio", m.aggregate_success_ratio);
		j["red_hit"] = m.total.red_hit;
		j["red_miss"] = m.total.red_miss;
		j["blue_hit"] = m.total.blue_hit;
		j["blue_miss"] = m.total.blue_miss;
		put(j, "e_total", m.e_total);
		put(j, "normalized_energy", m.normalized_energy);
		out.push_back(std::move(j));
	}
	os << out.dump(2) << '\n';
}

void export_results(std::span<const ResultRow> rows, ExportFormat format, const std::string& path)
{
	std::ofstream f(path, std::ios::binary);
	if (!f)
		throw std::ios_base::failure("cannot open '" + path + "' for writing");
	if (format == ExportFormat::csv)
		write_csv(f, rows);
	else
		write_json(f, rows);
	f.flush();
	if (!f)
		throw std::ios_base::failure("error while writing '" + path + "'");
}

} // namespace skipsim
