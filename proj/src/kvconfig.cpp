#include "qtm/kvconfig.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qtm/errors.hpp"

namespace qtm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw config_error("key '" + key + "': cannot parse '" + v + "' as a number");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw config_error("key '" + key + "': cannot parse '" + v + "' as an integer");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw config_error("key '" + key + "': cannot parse '" + v + "' as a boolean");
}

}  // namespace

SpaRunConfig parse_spa_run_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw config_error("config line " + std::to_string(lineno) + ": empty key or value");
    }
    if (!kv.emplace(key, value).second) {
      throw config_error("duplicate config key '" + key + "'");
    }
  }

  static const std::set<std::string> known = {
      "l", "theta", "eta", "u", "t_list", "n_therm", "n_meas", "cluster_l", "seed",
      "out_dir", "mu", "move_width", "m_cap", "measure_every", "anneal", "gamma_dos",
      "quenched_lnz", "t_max"};
  static const std::set<std::string> required = {"l", "theta", "eta", "u", "t_list",
                                                 "n_therm", "n_meas", "cluster_l",
                                                 "seed", "out_dir"};
  for (const auto& [k, v] : kv) {
    if (!known.count(k)) throw config_error("unknown config key '" + k + "'");
  }
  for (const auto& k : required) {
    if (!kv.count(k)) throw config_error("missing required config key '" + k + "'");
  }

  SpaRunConfig c;
  c.l = static_cast<int>(to_int("l", kv["l"]));
  c.theta = to_double("theta", kv["theta"]);
  c.eta = to_double("eta", kv["eta"]);
  c.u = to_double("u", kv["u"]);
  {
    std::istringstream ts(kv["t_list"]);
    std::string tok;
    while (std::getline(ts, tok, ',')) {
      tok = trim(tok);
      if (!tok.empty()) c.t_list.push_back(to_double("t_list", tok));
    }
    if (c.t_list.empty()) throw config_error("t_list must contain at least one temperature");
  }
  c.n_therm = static_cast<int>(to_int("n_therm", kv["n_therm"]));
  c.n_meas = static_cast<int>(to_int("n_meas", kv["n_meas"]));
  c.cluster_l = static_cast<int>(to_int("cluster_l", kv["cluster_l"]));
  c.seed = static_cast<std::uint64_t>(to_int("seed", kv["seed"]));
  c.out_dir = kv["out_dir"];
  if (kv.count("mu")) c.mu = to_double("mu", kv["mu"]);
  if (kv.count("move_width")) c.move_width = to_double("move_width", kv["move_width"]);
  if (kv.count("m_cap")) c.m_cap = to_double("m_cap", kv["m_cap"]);
  if (kv.count("measure_every")) {
    c.measure_every = static_cast<int>(to_int("measure_every", kv["measure_every"]));
  }
  if (kv.count("anneal")) c.anneal = to_bool("anneal", kv["anneal"]);
  if (kv.count("gamma_dos")) c.gamma_dos = to_double("gamma_dos", kv["gamma_dos"]);
  if (kv.count("quenched_lnz")) c.quenched_lnz = to_bool("quenched_lnz", kv["quenched_lnz"]);
  if (kv.count("t_max")) c.t_max = to_double("t_max", kv["t_max"]);
  return c;
}

SpaRunConfig parse_spa_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_spa_run_text(ss.str());
}

}  // namespace qtm
