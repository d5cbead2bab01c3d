#include "skipsim/task_model.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace skipsim {

std::int64_t SkipFactor::value() const
{
	if (is_infinite())
		throw std::logic_error("infinite skip factor has no finite value");
	return value_;
}

std::string SkipFactor::str() const
{
	return is_infinite() ? "inf" : std::to_string(value_);
}

TaskSet validate_task_set(std::vector<TaskSpec> specs)
{
	if (specs.empty())
		throw EmptySetError();

	TaskSet ts;
	std::int64_t p = 1;
	Rational u_tot;
	Rational u_mand;
	for (std::size_t i = 0; i < specs.size(); ++i) {
		TaskSpec& t = specs[i];
		t.id = i;
		if (t.period <= 0)
			throw InvalidWcetError("task " + std::to_string(i) + ": period must be positive");
		if (t.wcet <= 0 || t.wcet > t.period)
			throw InvalidWcetError("task " + std::to_string(i) + ": wcet "
			                       + std::to_string(t.wcet) + " outside (0, "
			                       + std::to_string(t.period) + "]");
		if (!t.skip_factor.is_infinite() && t.skip_factor.value() < 2)
			throw InvalidSkipFactorError("task " + std::to_string(i)
			                             + ": skip factor must be >= 2 or inf");
		if (t.bcet_fraction <= Rational(0) || t.bcet_fraction > Rational(1))
			throw TaskModelError("task " + std::to_string(i) + ": bcet fraction outside (0, 1]");

		p = lcm64(p, t.period);
		Rational u = t.utilization();
		u_tot += u;
		if (t.skip_factor.is_infinite())
			u_mand += u;
		else
			u_mand += u * Rational(t.skip_factor.value() - 1, t.skip_factor.value());
	}
	ts.tasks_ = std::move(specs);
	ts.hyperperiod_ = p;
	ts.u_tot_ = u_tot;
	ts.u_mand_ = u_mand;
	return ts;
}

std::int64_t hyperperiod(const TaskSet& ts) { return ts.hyperperiod(); }
Rational utilization(const TaskSet& ts) { return ts.u_tot(); }
Rational mandatory_utilization(const TaskSet& ts) { return ts.u_mand(); }

const char* to_string(Color c)
{
	return c == Color::red ? "red" : "blue";
}

const char* to_string(ColoringMode m)
{
	return m == ColoringMode::automaton ? "automaton" : "random";
}

ColoringMode parse_coloring_mode(const std::string& s)
{
	if (s == "automaton")
		return ColoringMode::automaton;
	if (s == "random")
		return ColoringMode::random;
	throw std::invalid_argument("unknown coloring mode '" + s + "'");
}

Color next_color(const SkipState& state, SkipFactor sf, ColoringMode mode, bool coin)
{
	if (sf.is_infinite())
		return Color::red;
	bool may_skip = state.run_length >= sf.value() - 1;
	if (!may_skip)
		return Color::red;
	if (mode == ColoringMode::random && !coin)
		return Color::red;
	return Color::blue;
}

std::vector<TaskSpec> parse_task_specs(std::istream& in)
{
	std::vector<TaskSpec> specs;
	std::string line;
	int lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		if (auto hash = line.find('#'); hash != std::string::npos)
			line.erase(hash);
		std::istringstream fields(line);
		std::string period, wcet, sf, extra;
		if (!(fields >> period))
			continue;
		if (!(fields >> wcet >> sf) || (fields >> extra))
			throw std::invalid_argument("line " + std::to_string(lineno)
			                            + ": expected 'period wcet skip_factor'");
		TaskSpec t;
		t.id = specs.size();
		auto integer = [&](const std::string& text) {
			std::int64_t v = 0;
			auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
			if (ec != std::errc() || end != text.data() + text.size())
				throw std::invalid_argument("line " + std::to_string(lineno) + ": malformed number '"
				                            + text + "'");
			return v;
		};
		t.period = integer(period);
		t.wcet = integer(wcet);
		if (sf == "inf" || sf == "INF" || sf == "infinity")
			t.skip_factor = SkipFactor::infinite();
		else
			t.skip_factor = SkipFactor(integer(sf));
		specs.push_back(t);
	}
	return specs;
}

std::vector<TaskSpec> load_task_specs(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		throw std::ios_base::failure("cannot open task set file '" + path + "'");
	return parse_task_specs(in);
}

void write_task_set(std::ostream& os, const TaskSet& ts)
{
	os << "# period wcet skip_factor\n";
	for (const auto& t : ts)
		os << t.period << ' ' << t.wcet << ' ' << t.skip_factor.str() << '\n';
}

} // namespace skipsim
