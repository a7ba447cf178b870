#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ans {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Plain-text `key = value` configuration with `#` comments and dotted
/// section keys (grid.n1, solver.dt, sweep.epsilon = 0.125,0.0625). Unknown
/// keys are rejected by require_known_keys.
class Config {
 public:
  Config() = default;
  static Config from_file(const std::filesystem::path& path);
  static Config from_string(std::string_view text);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_list(const std::string& key,
                               std::vector<double> fallback) const;

  /// Throws ConfigError naming the first key not present in `allowed`.
  void require_known_keys(std::span<const std::string_view> allowed) const;

  const std::map<std::string, std::string>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace ans
