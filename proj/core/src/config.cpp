#include "ans/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ans {
namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  }
}

}  // namespace

Config Config::from_string(std::string_view text) {
  Config cfg;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    if (cfg.entries_.count(key))
      throw ConfigError("config: duplicate key '" + key + "'");
    cfg.entries_[key] = value;
  }
  return cfg;
}

Config Config::from_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return from_string(buf.str());
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_double(key, it->second);
}

int Config::get_int(const std::string& key, int fallback) const {
  double v = get_double(key, static_cast<double>(fallback));
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("config key '" + key + "': expected an integer");
  return i;
}

std::uint64_t Config::get_u64(const std::string& key,
                              std::uint64_t fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(it->second.data(),
                                 it->second.data() + it->second.size(), v);
  if (ec != std::errc() || p != it->second.data() + it->second.size())
    throw ConfigError("config key '" + key + "': expected an unsigned integer");
  return v;
}

std::vector<double> Config::get_list(const std::string& key,
                                     std::vector<double> fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::vector<double> out;
  std::string item;
  std::istringstream is(it->second);
  while (std::getline(is, item, ',')) {
    std::string t = trim(item);
    if (t.empty())
      throw ConfigError("config key '" + key + "': empty list element");
    out.push_back(parse_double(key, t));
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

void Config::require_known_keys(
    std::span<const std::string_view> allowed) const {
  for (const auto& [key, value] : entries_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace ans
