#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace floquet_sb {

/// Flat key=value run configuration. Only registered keys are accepted.
class RunConfig {
 public:
  /// Defaults for one command (fig1b, fig1c, fig1d, fig2, simulate).
  static RunConfig defaults_for(const std::string& command);

  /// Lines "key = value"; '#' starts a comment. Throws ConfigError naming the offending key or line.
  void load_file(const std::string& path);
  void load_text(const std::string& text, const std::string& origin = "<text>");
  void set(const std::string& key, const std::string& value);

  const std::string& command() const { return command_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  /// Comma-separated list of reals; "inf" is accepted.
  std::vector<double> get_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  /// 64-bit FNV-1a over the sorted effective "key=value" lines.
  std::uint64_t hash() const;
  std::string hash_hex() const;
  const std::map<std::string, std::string>& values() const { return values_; }

  static const std::vector<std::string>& known_keys();

 private:
  std::string command_;
  std::map<std::string, std::string> values_;
};

}  // namespace floquet_sb
