// SPDX-License-Identifier: Apache-2.0

#include "fonspn/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fonspn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: key '" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

// Fills an Ar1Params from the keys of one [input]/[noise] section.
Ar1Params source_from_map(const ConfigMap& map, const std::string& section,
                          Ar1Params fallback) {
  auto get = [&](const char* key) -> const std::string* {
    const auto it = map.find(section + "." + key);
    return it == map.end() ? nullptr : &it->second;
  };
  Ar1Params src = fallback;
  const std::string* kind = get("kind");
  if (kind) {
    if (*kind == "gaussian") {
      GaussianParams g;
      if (const auto* v = get("variance")) g.variance = to_double(section, *v);
      src.driving = g;
    } else if (*kind == "stable") {
      AlphaStableParams s;
      if (const auto* v = get("alpha")) s.alpha = to_double(section, *v);
      if (const auto* v = get("dispersion")) s.dispersion = to_double(section, *v);
      src.driving = s;
    } else {
      throw ConfigError("config: " + section + ".kind must be gaussian or stable");
    }
  } else if (get("variance") || get("alpha") || get("dispersion")) {
    throw ConfigError("config: " + section + " needs an explicit kind");
  }
  if (const auto* v = get("ar1_pole")) src.pole = to_double(section, *v);
  return src;
}

const char* const kKnownKeys[] = {
    "system.taps", "system.seed", "system.unit_norm", "system.coeffs",
    "input.kind", "input.variance", "input.alpha", "input.dispersion",
    "input.ar1_pole",
    "noise.kind", "noise.variance", "noise.alpha", "noise.dispersion",
    "noise.ar1_pole",
    "bank.bands", "bank.length",
    "algo.name", "algo.mu", "algo.p", "algo.beta", "algo.eps",
    "run.trials", "run.samples", "run.flip_at", "run.steady_window",
    "run.master_seed", "run.threads", "run.moment_frames", "run.theory_guard",
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap map;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string value = unquote(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty())
      throw ConfigError("config: empty key or value at line " + std::to_string(lineno));
    if (!section.empty()) key = section + "." + key;
    if (!map.emplace(key, value).second)
      throw ConfigError("config: duplicate key '" + key + "'");
  }
  return map;
}

ExperimentConfig config_from_map(const ConfigMap& map) {
  for (const auto& [key, value] : map) {
    (void)value;
    if (std::find_if(std::begin(kKnownKeys), std::end(kKnownKeys),
                     [&](const char* k) { return key == k; }) ==
        std::end(kKnownKeys))
      throw ConfigError("config: unknown key '" + key + "'");
  }

  ExperimentConfig cfg;
  auto get = [&](const char* key) -> const std::string* {
    const auto it = map.find(key);
    return it == map.end() ? nullptr : &it->second;
  };

  if (const auto* v = get("system.taps")) cfg.algo.taps = static_cast<int>(to_long("system.taps", *v));
  if (const auto* v = get("system.seed")) cfg.system.seed = static_cast<std::uint64_t>(to_long("system.seed", *v));
  if (const auto* v = get("system.unit_norm")) cfg.system.unit_norm = to_bool("system.unit_norm", *v);
  if (const auto* v = get("system.coeffs")) cfg.system.coeffs = to_list("system.coeffs", *v);

  cfg.input = source_from_map(map, "input", cfg.input);
  cfg.noise = source_from_map(map, "noise", cfg.noise);

  if (const auto* v = get("bank.bands")) cfg.bands = static_cast<int>(to_long("bank.bands", *v));
  if (const auto* v = get("bank.length")) cfg.bank_length = static_cast<int>(to_long("bank.length", *v));

  if (const auto* v = get("algo.name")) {
    if (*v == "nsaf") cfg.algo.algorithm = Algorithm::Nsaf;
    else if (*v == "nspn") cfg.algo.algorithm = Algorithm::Nspn;
    else if (*v == "fonspn") cfg.algo.algorithm = Algorithm::Fonspn;
    else throw ConfigError("config: algo.name must be nsaf, nspn, or fonspn");
  }
  if (const auto* v = get("algo.mu")) cfg.algo.mu = to_double("algo.mu", *v);
  if (const auto* v = get("algo.p")) cfg.algo.p = to_double("algo.p", *v);
  if (const auto* v = get("algo.beta")) cfg.algo.beta = to_double("algo.beta", *v);
  if (const auto* v = get("algo.eps")) cfg.algo.eps = to_double("algo.eps", *v);
  // The selector pins the parameters the named algorithm fixes.
  if (cfg.algo.algorithm == Algorithm::Nsaf) { cfg.algo.p = 2.0; cfg.algo.beta = 1.0; }
  if (cfg.algo.algorithm == Algorithm::Nspn) cfg.algo.beta = 1.0;

  if (const auto* v = get("run.trials")) cfg.trials = static_cast<int>(to_long("run.trials", *v));
  if (const auto* v = get("run.samples")) cfg.total_samples = to_long("run.samples", *v);
  if (const auto* v = get("run.flip_at")) cfg.flip_at = to_long("run.flip_at", *v);
  if (const auto* v = get("run.steady_window")) cfg.steady_window = to_long("run.steady_window", *v);
  if (const auto* v = get("run.master_seed")) cfg.master_seed = static_cast<std::uint64_t>(to_long("run.master_seed", *v));
  if (const auto* v = get("run.threads")) cfg.threads = static_cast<int>(to_long("run.threads", *v));
  if (const auto* v = get("run.moment_frames")) cfg.moment_frames = to_long("run.moment_frames", *v);
  if (const auto* v = get("run.theory_guard")) cfg.theory_guard = to_bool("run.theory_guard", *v);

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_map(parse_config_text(ss.str()));
}

std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("system.taps", std::to_string(cfg.algo.taps));
  rows.emplace_back("system.seed", std::to_string(cfg.system.seed));
  rows.emplace_back("system.unit_norm", cfg.system.unit_norm ? "true" : "false");
  if (!cfg.system.coeffs.empty()) {
    std::string list;
    for (double c : cfg.system.coeffs) {
      if (!list.empty()) list += ',';
      list += fmt(c);
    }
    rows.emplace_back("system.coeffs", list);
  }
  auto echo_source = [&](const std::string& section, const Ar1Params& src) {
    if (const auto* g = std::get_if<GaussianParams>(&src.driving)) {
      rows.emplace_back(section + ".kind", "gaussian");
      rows.emplace_back(section + ".variance", fmt(g->variance));
    } else {
      const auto& s = std::get<AlphaStableParams>(src.driving);
      rows.emplace_back(section + ".kind", "stable");
      rows.emplace_back(section + ".alpha", fmt(s.alpha));
      rows.emplace_back(section + ".dispersion", fmt(s.dispersion));
    }
    rows.emplace_back(section + ".ar1_pole", fmt(src.pole));
  };
  echo_source("input", cfg.input);
  echo_source("noise", cfg.noise);
  rows.emplace_back("bank.bands", std::to_string(cfg.bands));
  rows.emplace_back("bank.length", std::to_string(cfg.bank_length));
  const char* name = cfg.algo.algorithm == Algorithm::Nsaf   ? "nsaf"
                     : cfg.algo.algorithm == Algorithm::Nspn ? "nspn"
                                                             : "fonspn";
  rows.emplace_back("algo.name", name);
  rows.emplace_back("algo.mu", fmt(cfg.algo.mu));
  rows.emplace_back("algo.p", fmt(cfg.algo.p));
  rows.emplace_back("algo.beta", fmt(cfg.algo.beta));
  rows.emplace_back("algo.eps", fmt(cfg.algo.eps));
  rows.emplace_back("run.trials", std::to_string(cfg.trials));
  rows.emplace_back("run.samples", std::to_string(cfg.total_samples));
  if (cfg.flip_at) rows.emplace_back("run.flip_at", std::to_string(*cfg.flip_at));
  rows.emplace_back("run.steady_window", std::to_string(cfg.steady_window));
  rows.emplace_back("run.master_seed", std::to_string(cfg.master_seed));
  rows.emplace_back("run.threads", std::to_string(cfg.threads));
  rows.emplace_back("run.moment_frames", std::to_string(cfg.moment_frames));
  rows.emplace_back("run.theory_guard", cfg.theory_guard ? "true" : "false");
  return rows;
}

}  // namespace fonspn
