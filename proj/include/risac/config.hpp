// SPDX-License-Identifier: Apache-2.0
//
// risac: RIS-assisted over-the-air computation optimization library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISAC_CONFIG_HPP
#define RISAC_CONFIG_HPP

#include "risac/channel.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace risac {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// `key = value` lines; '#' starts a comment, blank lines are ignored, keys are
/// case-insensitive. Tracks which keys were read so leftovers can be rejected.
class KeyValues {
 public:
  static KeyValues parse(std::istream& in, const std::string& source = "<input>") {
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const std::string body = trim(line);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos)
        throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
      std::string key = lower(trim(body.substr(0, eq)));
      const std::string value = trim(body.substr(eq + 1));
      if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
      if (kv.values_.count(key))
        throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
      kv.values_[key] = value;
    }
    return kv;
  }

  static KeyValues load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in, path);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    used_.insert(key);
    return it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return to_double(key, get_string(key, ""));
  }

  long long get_int(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    const std::string s = get_string(key, "");
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw ConfigError("key '" + key + "': not an integer: '" + s + "'");
    return v;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string s = lower(get_string(key, ""));
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("key '" + key + "': not a boolean: '" + s + "'");
  }

  /// Whitespace- or comma-separated numbers.
  std::vector<double> get_list(const std::string& key) const {
    std::string s = get_string(key, "");
    for (char& c : s)
      if (c == ',') c = ' ';
    std::istringstream is(s);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(to_double(key, tok));
    return out;
  }

  Vec3 get_vec3(const std::string& key, const Vec3& fallback) const {
    if (!has(key)) return fallback;
    const std::vector<double> v = get_list(key);
    if (v.size() != 3) throw ConfigError("key '" + key + "': expected three coordinates");
    return {v[0], v[1], v[2]};
  }

  /// Throws if any key was never read.
  void require_all_used() const {
    for (const auto& [key, value] : values_)
      if (!used_.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }
  static std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  }
  static double to_double(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw ConfigError("key '" + key + "': not a number: '" + s + "'");
    return v;
  }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

/// Reads the scenario keys (k, m, n, power_dbm, noise_dbm, t0_db, alpha_da,
/// alpha_dr, alpha_ra, rician_beta, ap_position, ris_position, device_center,
/// radius, ris_columns, element_spacing) on top of `base`.
inline SystemConfig system_config_from(const KeyValues& kv, SystemConfig base = {}) {
  SystemConfig c = std::move(base);
  c.K = static_cast<int>(kv.get_int("k", c.K));
  c.M = static_cast<int>(kv.get_int("m", c.M));
  c.N = static_cast<int>(kv.get_int("n", c.N));
  if (kv.has("power_dbm")) c.power = dbm_to_watts(kv.get_double("power_dbm", 0.0));
  if (kv.has("noise_dbm")) c.sigma2 = dbm_to_watts(kv.get_double("noise_dbm", 0.0));
  if (kv.has("t0_db")) c.t0 = db_to_linear(kv.get_double("t0_db", 0.0));
  c.alpha_direct = kv.get_double("alpha_da", c.alpha_direct);
  c.alpha_device_ris = kv.get_double("alpha_dr", c.alpha_device_ris);
  c.alpha_ris_ap = kv.get_double("alpha_ra", c.alpha_ris_ap);
  c.rician_beta = kv.get_double("rician_beta", c.rician_beta);
  c.geometry.ap = kv.get_vec3("ap_position", c.geometry.ap);
  c.geometry.ris = kv.get_vec3("ris_position", c.geometry.ris);
  c.geometry.device_center = kv.get_vec3("device_center", c.geometry.device_center);
  c.geometry.device_radius = kv.get_double("radius", c.geometry.device_radius);
  c.arrays.ris_columns = static_cast<int>(kv.get_int("ris_columns", c.arrays.ris_columns));
  c.arrays.spacing = kv.get_double("element_spacing", c.arrays.spacing);
  c.validate();
  return c;
}

struct Scenario {
  SystemConfig config;
  std::uint64_t seed = 1;
};

inline Scenario load_scenario(const std::string& path) {
  const KeyValues kv = KeyValues::load(path);
  Scenario s;
  s.config = system_config_from(kv);
  s.seed = static_cast<std::uint64_t>(kv.get_int("seed", 1));
  kv.require_all_used();
  return s;
}

}  // namespace risac

#endif  // RISAC_CONFIG_HPP
