#include "flexsat/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace flexsat {
namespace {

using nlohmann::json;

void expect_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

VectorXd to_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array");
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json from_vector(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

SignalSpec parse_signal(const json& j, Eigen::Index dim, const std::string& where) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "zero") return SignalSpec::zero(dim);
    if (name == "paper") return dim == 2 ? paper_reference() : paper_disturbance();
    throw ConfigError("unknown " + where + " preset '" + name + "'");
  }
  expect_keys(j, {"offset", "terms"}, where);
  SignalSpec s = SignalSpec::zero(dim);
  if (j.contains("offset")) s.a0 = to_vector(j.at("offset"), where + ".offset");
  if (j.contains("terms")) {
    for (const json& t : j.at("terms")) {
      expect_keys(t, {"omega", "cos", "sin"}, where + ".terms[]");
      SignalSpec::Term term{t.at("omega").get<double>(), VectorXd::Zero(dim), VectorXd::Zero(dim)};
      if (t.contains("cos")) term.a = to_vector(t.at("cos"), where + ".cos");
      if (t.contains("sin")) term.b = to_vector(t.at("sin"), where + ".sin");
      s.terms.push_back(std::move(term));
    }
  }
  return s;
}

json signal_json(const SignalSpec& s) {
  json terms = json::array();
  for (const auto& t : s.terms)
    terms.push_back({{"omega", t.omega}, {"cos", from_vector(t.a)}, {"sin", from_vector(t.b)}});
  return {{"offset", from_vector(s.a0)}, {"terms", terms}};
}

RunConfig from_json(const json& j) {
  RunConfig rc;
  ExperimentConfig& e = rc.experiment;
  expect_keys(j,
              {"params", "N", "controller", "frequencies", "reference", "disturbance",
               "disturbance_shapes", "initial", "time", "perturb", "analyze", "sweep_grids",
               "output_dir", "workers"},
              "config");
  if (j.contains("params")) {
    const json& p = j.at("params");
    expect_keys(p, {"rho", "a", "E", "I", "gamma", "m", "I_m"}, "params");
    e.params.rho = p.value("rho", e.params.rho);
    e.params.a = p.value("a", e.params.a);
    e.params.E = p.value("E", e.params.E);
    e.params.I = p.value("I", e.params.I);
    e.params.gamma = p.value("gamma", e.params.gamma);
    e.params.m = p.value("m", e.params.m);
    e.params.I_m = p.value("I_m", e.params.I_m);
  }
  e.N = j.value("N", e.N);
  if (j.contains("controller")) {
    const json& c = j.at("controller");
    expect_keys(c, {"type", "c1", "c2", "q0", "r0"}, "controller");
    const std::string type = c.value("type", std::string("passive"));
    if (type == "passive")
      e.controller = ControllerKind::Passive;
    else if (type == "observer")
      e.controller = ControllerKind::Observer;
    else
      throw ConfigError("controller.type must be 'passive' or 'observer'");
    e.c1 = c.value("c1", e.c1);
    e.c2 = c.value("c2", e.c2);
    e.q0 = c.value("q0", e.q0);
    e.r0 = c.value("r0", e.r0);
  }
  if (j.contains("frequencies")) e.freqs = j.at("frequencies").get<std::vector<double>>();
  if (j.contains("reference")) e.reference = parse_signal(j.at("reference"), 2, "reference");
  if (j.contains("disturbance")) e.disturbance = parse_signal(j.at("disturbance"), 4, "disturbance");
  if (j.contains("disturbance_shapes")) {
    const json& d = j.at("disturbance_shapes");
    expect_keys(d, {"left", "right"}, "disturbance_shapes");
    if (d.contains("left")) e.bd_left = d.at("left").get<std::vector<double>>();
    if (d.contains("right")) e.bd_right = d.at("right").get<std::vector<double>>();
  }
  if (j.contains("initial")) {
    const json& i = j.at("initial");
    if (i.is_string()) {
      e.initial = InitialSpec{};
      e.initial.preset = i.get<std::string>();
    } else {
      expect_keys(i,
                  {"preset", "left_velocity", "left_moment", "right_velocity", "right_moment",
                   "hub_velocity", "hub_angular_velocity"},
                  "initial");
      e.initial.preset = i.value("preset", std::string("custom"));
      auto poly = [&i](const char* key) {
        return i.contains(key) ? i.at(key).get<std::vector<double>>() : std::vector<double>{};
      };
      e.initial.left_velocity = poly("left_velocity");
      e.initial.left_moment = poly("left_moment");
      e.initial.right_velocity = poly("right_velocity");
      e.initial.right_moment = poly("right_moment");
      e.initial.hub_velocity = i.value("hub_velocity", 0.0);
      e.initial.hub_angular_velocity = i.value("hub_angular_velocity", 0.0);
    }
  }
  if (j.contains("time")) {
    const json& t = j.at("time");
    expect_keys(t, {"T", "dt"}, "time");
    e.T = t.value("T", e.T);
    e.dt = t.value("dt", e.dt);
  }
  if (j.contains("perturb")) e.perturb = j.at("perturb").get<std::map<std::string, double>>();
  if (j.contains("analyze")) {
    const json& a = j.at("analyze");
    expect_keys(a,
                {"N_list", "transfer_omegas", "resolvent_lo", "resolvent_hi", "resolvent_n",
                 "interconnection_lo", "interconnection_hi", "interconnection_n"},
                "analyze");
    AnalyzeOptions& o = rc.analyze;
    if (a.contains("N_list")) o.Ns = a.at("N_list").get<std::vector<int>>();
    if (a.contains("transfer_omegas"))
      o.transfer_omegas = a.at("transfer_omegas").get<std::vector<double>>();
    o.resolvent_lo = a.value("resolvent_lo", o.resolvent_lo);
    o.resolvent_hi = a.value("resolvent_hi", o.resolvent_hi);
    o.resolvent_n = a.value("resolvent_n", o.resolvent_n);
    o.interconnection_lo = a.value("interconnection_lo", o.interconnection_lo);
    o.interconnection_hi = a.value("interconnection_hi", o.interconnection_hi);
    o.interconnection_n = a.value("interconnection_n", o.interconnection_n);
    if (o.resolvent_n < 2 || !(o.resolvent_hi > o.resolvent_lo))
      throw ConfigError("analyze: resolvent grid needs n >= 2 and hi > lo");
    if (o.interconnection_n < 2 || !(o.interconnection_lo > 0) ||
        !(o.interconnection_hi > o.interconnection_lo))
      throw ConfigError("analyze: interconnection grid needs n >= 2 and 0 < lo < hi");
    for (int n : o.Ns)
      if (n < 1) throw ConfigError("analyze: N_list entries must be positive");
  }
  if (j.contains("sweep_grids")) {
    for (const auto& [k, v] : j.at("sweep_grids").items()) {
      if (k != "c1" && k != "c2" && k != "q0" && k != "r0")
        throw ConfigError("unknown sweep parameter '" + k + "'");
      rc.sweep_grids[k] = v.get<std::string>();
      parse_grid(rc.sweep_grids[k]);
    }
  }
  rc.output_dir = j.value("output_dir", rc.output_dir);
  const int workers = j.value("workers", 0);
  if (workers < 0) throw ConfigError("workers must be non-negative");
  rc.workers = static_cast<unsigned>(workers);
  e.validate();
  return rc;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& rc) {
  const ExperimentConfig& e = rc.experiment;
  const auto& p = e.params;
  json j;
  j["params"] = {{"rho", p.rho}, {"a", p.a}, {"E", p.E}, {"I", p.I},
                 {"gamma", p.gamma}, {"m", p.m}, {"I_m", p.I_m}};
  j["N"] = e.N;
  j["controller"] = {{"type", e.controller == ControllerKind::Passive ? "passive" : "observer"},
                     {"c1", e.c1}, {"c2", e.c2}, {"q0", e.q0}, {"r0", e.r0}};
  j["frequencies"] = e.freqs;
  j["reference"] = signal_json(e.reference);
  j["disturbance"] = signal_json(e.disturbance);
  j["disturbance_shapes"] = {{"left", e.bd_left}, {"right", e.bd_right}};
  j["initial"] = {{"preset", e.initial.preset},
                  {"left_velocity", e.initial.left_velocity},
                  {"left_moment", e.initial.left_moment},
                  {"right_velocity", e.initial.right_velocity},
                  {"right_moment", e.initial.right_moment},
                  {"hub_velocity", e.initial.hub_velocity},
                  {"hub_angular_velocity", e.initial.hub_angular_velocity}};
  j["time"] = {{"T", e.T}, {"dt", e.dt}};
  j["perturb"] = e.perturb;
  const AnalyzeOptions& a = rc.analyze;
  j["analyze"] = {{"N_list", a.Ns},
                  {"transfer_omegas", a.transfer_omegas},
                  {"resolvent_lo", a.resolvent_lo},
                  {"resolvent_hi", a.resolvent_hi},
                  {"resolvent_n", a.resolvent_n},
                  {"interconnection_lo", a.interconnection_lo},
                  {"interconnection_hi", a.interconnection_hi},
                  {"interconnection_n", a.interconnection_n}};
  j["sweep_grids"] = rc.sweep_grids;
  j["output_dir"] = rc.output_dir;
  j["workers"] = rc.workers;
  return j.dump(2) + "\n";
}

}  // namespace flexsat
