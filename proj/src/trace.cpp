#include "dispersim/trace.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "dispersim/errors.hpp"
#include "dispersim/rules.hpp"

namespace dispersim {

using ordered_json = nlohmann::ordered_json;

std::string trace_record_line(const Configuration& c) {
  ordered_json rec;
  rec["t"] = c.t;
  ordered_json agents = ordered_json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const AgentState& a = c.agents[i];
    ordered_json ja;
    ja["id"] = a.id;
    ja["node"] = c.nodes[i];
    ja["mode"] = std::string(mode_name(a.mode));
    ja["slot"] = a.slot;
    ja["level"] = a.level;
    ja["leaderid"] = a.leaderid;
    ja["last"] = a.last;
    ja["inport"] = a.inport;
    ja["pin"] = a.pin;
    ja["pout"] = a.pout;
    agents.push_back(std::move(ja));
  }
  rec["agents"] = std::move(agents);
  return rec.dump();
}

std::vector<Configuration> read_trace(std::istream& in) {
  std::vector<Configuration> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json rec;
    try {
      rec = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw_error(Errc::ParseError, std::string("bad trace line: ") + e.what());
    }
    Configuration c;
    try {
      c.t = rec.at("t").get<std::int64_t>();
      for (const auto& ja : rec.at("agents")) {
        AgentState a;
        a.id = ja.at("id").get<AgentId>();
        a.mode = mode_from_name(ja.at("mode").get<std::string>());
        a.slot = ja.at("slot").get<std::int32_t>();
        a.level = ja.at("level").get<std::int32_t>();
        a.leaderid = ja.at("leaderid").get<AgentId>();
        a.last = ja.at("last").get<PortNumber>();
        a.inport = ja.at("inport").get<PortNumber>();
        a.pin = ja.at("pin").get<PortNumber>();
        a.pout = ja.at("pout").get<PortNumber>();
        c.agents.push_back(a);
        c.nodes.push_back(ja.at("node").get<NodeId>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw_error(Errc::ParseError, std::string("trace record missing field: ") + e.what());
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Configuration> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(Errc::Io, "cannot open '" + path + "'");
  return read_trace(in);
}

struct JsonlTraceSink::Impl {
  std::ofstream out;
};

JsonlTraceSink::JsonlTraceSink(const std::string& path) : impl_(new Impl) {
  impl_->out.open(path);
  if (!impl_->out) throw_error(Errc::Io, "cannot open '" + path + "' for writing");
}

JsonlTraceSink::~JsonlTraceSink() = default;

void JsonlTraceSink::record(const Configuration& c) { impl_->out << trace_record_line(c) << '\n'; }

std::string run_result_json(const RunResult& r) {
  ordered_json j;
  if (r.steps_to_dispersion.has_value())
    j["steps_to_dispersion"] = *r.steps_to_dispersion;
  else
    j["steps_to_dispersion"] = nullptr;
  j["timeout"] = r.timeout();
  j["max_level_observed"] = r.max_level_observed;
  j["m_prime"] = r.m_prime;
  j["l"] = r.l;
  j["moves_total"] = r.moves_total;
  ordered_json verdicts = ordered_json::array();
  for (const auto& v : r.invariant_verdicts) {
    ordered_json jv;
    jv["name"] = v.name;
    jv["pass"] = v.pass;
    if (v.first_failure_step.has_value())
      jv["first_failure_step"] = *v.first_failure_step;
    else
      jv["first_failure_step"] = nullptr;
    jv["details"] = v.details;
    verdicts.push_back(std::move(jv));
  }
  j["invariant_verdicts"] = std::move(verdicts);
  return j.dump(2) + "\n";
}

}  // namespace dispersim
