#include "floquet_sb/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "floquet_sb/errors.hpp"

namespace floquet_sb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, std::string>& common_defaults() {
  static const std::map<std::string, std::string> d = {
      {"omega0", "1"},          {"amplitude_ratio", "2.404826"},
      {"omegaL", "10"},         {"lambda", "0.15"},
      {"omega_c", "0.9"},       {"beta", "1"},
      {"zero_temperature", "false"},
      {"n_modes", "2"},         {"omega_max", "0"},
      {"fock_cutoff", "0"},     {"t_min", "0"},
      {"t_max", "50"},          {"n_points", "4001"},
      {"initial_state", "plus_z"},
      {"bloch_x", "0"},         {"bloch_y", "0"},
      {"bloch_z", "1"},         {"frame", "rotating"},
      {"series_tol", "1e-13"},  {"integral_tol", "1e-9"},
      {"zeroth_order", "false"}, {"t0", "0"},
  };
  return d;
}

std::map<std::string, std::string> command_defaults(const std::string& command) {
  std::map<std::string, std::string> d = common_defaults();
  if (command == "fig1b") {
    d["ratios"] = "3.83,2.404826";
    d["initial_state"] = "minus_y";
    d["frame"] = "lab";
  } else if (command == "fig1c") {
    d["ratio_min"] = "0";
    d["ratio_max"] = "5";
    d["n_ratios"] = "51";
    d["initial_state"] = "minus_y";
    d["frame"] = "lab";
  } else if (command == "fig1d") {
    d["omegaLs"] = "10,15,20,inf";
    d["lambda"] = "0.5";
    d["beta"] = std::to_string(1.0 / 7.0);
    d["t_max"] = "30";
    d["n_points"] = "3001";
  } else if (command == "fig2") {
    d["omegaL"] = "11";
    d["amplitude_ratio"] = "2.7";
    d["lambda"] = "0.5";
    d["omega_c"] = "1.3";
    d["beta"] = std::to_string(1.0 / 3.5);
    d["omega_max"] = "5.2";
    d["t_max"] = "10";
    d["n_points"] = "1001";
    d["tau_fractions"] = "0,0.5,0.38461538461538464";
    d["n_tau"] = "21";
    d["max_dim"] = "1200";
  } else if (command == "simulate") {
    d["bath"] = "continuum";
    d["columns"] = "sx,sy,sz";
    d["oracle"] = "false";
    d["t_max"] = "10";
    d["n_points"] = "201";
    d["steps_per_period"] = "200";
    d["max_dim"] = "400";
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return d;
}

}  // namespace

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const char* c : {"fig1b", "fig1c", "fig1d", "fig2", "simulate"})
      for (const auto& [key, v] : command_defaults(c)) {
        (void)v;
        if (std::find(k.begin(), k.end(), key) == k.end()) k.push_back(key);
      }
    std::sort(k.begin(), k.end());
    return k;
  }();
  return keys;
}

RunConfig RunConfig::defaults_for(const std::string& command) {
  RunConfig c;
  c.command_ = command;
  c.values_ = command_defaults(command);
  return c;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!values_.count(key)) {
    const auto& all = known_keys();
    if (std::find(all.begin(), all.end(), key) != all.end())
      throw ConfigError("config key '" + key + "' is not used by command '" + command_ + "'");
    throw ConfigError("unknown config key '" + key + "'");
  }
  values_[key] = trim(value);
}

void RunConfig::load_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  load_text(ss.str(), path);
}

std::string RunConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("config key '" + key + "' is not set");
  return it->second;
}

namespace {
double parse_real(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': '" + s + "' is not a number");
  }
  if (used != s.size()) throw ConfigError("config key '" + key + "': '" + s + "' is not a number");
  return v;
}
}  // namespace

double RunConfig::get_double(const std::string& key) const {
  const double v = parse_real(key, get_string(key));
  if (!std::isfinite(v)) throw ConfigError("config key '" + key + "' must be finite");
  return v;
}

int RunConfig::get_int(const std::string& key) const {
  const double v = get_double(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("config key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

bool RunConfig::get_bool(const std::string& key) const {
  const std::string s = get_string(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("config key '" + key + "' must be true or false");
}

std::vector<std::string> RunConfig::get_string_list(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(get_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw ConfigError("config key '" + key + "' must be a non-empty list");
  return out;
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& s : get_string_list(key)) out.push_back(parse_real(key, s));
  return out;
}

std::uint64_t RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  feed(command_ + "\n");
  for (const auto& [k, v] : values_) feed(k + "=" + v + "\n");
  return h;
}

std::string RunConfig::hash_hex() const {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << hash();
  return os.str();
}

}  // namespace floquet_sb
