#include "skipsim/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "json.hpp"

namespace skipsim {

using nlohmann::json;

namespace {

Rational to_rational(const json& v, const std::string& key)
{
	if (v.is_string())
		return Rational::parse(v.get<std::string>());
	if (v.is_number_integer())
		return Rational(v.get<std::int64_t>());
	if (v.is_number())
		return Rational::from_double(v.get<double>());
	throw std::invalid_argument("config key '" + key + "' must be a number");
}

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> known)
{
	if (!obj.is_object())
		throw std::invalid_argument("config section '" + where + "' must be an object");
	for (const auto& [k, _] : obj.items())
		if (!known.contains(k))
			throw std::invalid_argument("unknown config key '" + where + "." + k + "'");
}

void read_processor(const json& p, ProcessorModel& cpu)
{
	reject_unknown(p, "processor", {"levels", "p_standby", "e_shutdown", "t_overhead", "physical"});
	if (p.contains("levels")) {
		cpu.levels.clear();
		for (const auto& l : p.at("levels"))
			cpu.levels.push_back(to_rational(l, "processor.levels"));
	}
	if (p.contains("p_standby"))
		cpu.p_standby = to_rational(p.at("p_standby"), "processor.p_standby");
	if (p.contains("e_shutdown"))
		cpu.e_shutdown = to_rational(p.at("e_shutdown"), "processor.e_shutdown");
	if (p.contains("t_overhead"))
		cpu.t_overhead = to_rational(p.at("t_overhead"), "processor.t_overhead");
	if (p.contains("physical")) {
		const auto& ph = p.at("physical");
		reject_unknown(ph, "processor.physical", {"c_ef", "k", "v_t", "table"});
		PhysicalModel m;
		if (ph.contains("c_ef"))
			m.c_ef = to_rational(ph.at("c_ef"), "c_ef");
		if (ph.contains("k"))
			m.k = to_rational(ph.at("k"), "k");
		if (ph.contains("v_t"))
			m.v_t = to_rational(ph.at("v_t"), "v_t");
		for (const auto& row : ph.at("table")) {
			reject_unknown(row, "processor.physical.table", {"v_dd", "f"});
			PhysicalLevel pl;
			pl.v_dd = to_rational(row.at("v_dd"), "v_dd");
			if (row.contains("f"))
				pl.frequency = to_rational(row.at("f"), "f");
			m.table.push_back(pl);
		}
		cpu.physical = m;
	}
}

void read_generator(const json& g, GenConfig& gen)
{
	reject_unknown(g, "generator", {"n_tasks", "period_min", "period_max", "wcet_min", "wcet_max",
	                                "skip_factor", "bcet_fraction", "multiples_rule"});
	if (g.contains("n_tasks"))
		gen.n_tasks = g.at("n_tasks").get<int>();
	if (g.contains("period_min"))
		gen.period_min = g.at("period_min").get<std::int64_t>();
	if (g.contains("period_max"))
		gen.period_max = g.at("period_max").get<std::int64_t>();
	if (g.contains("wcet_min"))
		gen.wcet_min = g.at("wcet_min").get<std::int64_t>();
	if (g.contains("wcet_max"))
		gen.wcet_max = g.at("wcet_max").get<std::int64_t>();
	if (g.contains("skip_factor")) {
		const auto& sf = g.at("skip_factor");
		if (sf.is_string() && sf.get<std::string>() == "inf")
			gen.skip_factor = SkipFactor::infinite();
		else
			gen.skip_factor = SkipFactor(sf.get<std::int64_t>());
	}
	if (g.contains("bcet_fraction"))
		gen.bcet_fraction = to_rational(g.at("bcet_fraction"), "generator.bcet_fraction");
	if (g.contains("multiples_rule"))
		gen.multiples_rule = g.at("multiples_rule").get<bool>();
}

} // namespace

Config parse_config(std::istream& in, Config base)
{
	json doc;
	try {
		doc = json::parse(in);
	} catch (const json::parse_error& e) {
		throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
	}
	try {
		reject_unknown(doc, "", {"processor", "generator", "simulation"});
		if (doc.contains("processor"))
			read_processor(doc.at("processor"), base.cpu);
		if (doc.contains("generator"))
			read_generator(doc.at("generator"), base.gen);
		if (doc.contains("simulation")) {
			const auto& s = doc.at("simulation");
			reject_unknown(s, "simulation", {"coloring", "bwp_abort_literal", "dvs_outcome_guard", "hyperperiod_cap"});
			if (s.contains("coloring"))
				base.coloring = parse_coloring_mode(s.at("coloring").get<std::string>());
			if (s.contains("bwp_abort_literal"))
				base.bwp_abort_literal = s.at("bwp_abort_literal").get<bool>();
			if (s.contains("dvs_outcome_guard"))
				base.dvs_outcome_guard = s.at("dvs_outcome_guard").get<bool>();
			if (s.contains("hyperperiod_cap"))
				base.hyperperiod_cap = s.at("hyperperiod_cap").get<std::int64_t>();
		}
	} catch (const json::exception& e) {
		throw std::invalid_argument(std::string("bad config value: ") + e.what());
	}
	base.cpu.validate();
	return base;
}

Config load_config(const std::string& path, Config base)
{
	std::ifstream in(path);
	if (!in)
		throw std::ios_base::failure("cannot open config file '" + path + "'");
	return parse_config(in, std::move(base));
}

Config default_config()
{
	if (const char* path = std::getenv(kConfigEnvVar); path && *path)
		return load_config(path);
	return {};
}

} // namespace skipsim
