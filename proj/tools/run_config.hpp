#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spamri_cli {

class ConfigKeyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeyInfo {
  const char* key;
  const char* default_value;
  const char* help;
};

/// Every recognised key with its default, in documentation order.
const std::vector<KeyInfo>& known_keys();

/// Flat key = value settings. Unknown keys and malformed values raise
/// ConfigKeyError.
class RunConfig {
 public:
  RunConfig();

  /// Reads "key = value" lines; '#' starts a comment.
  void load_file(const std::string& path);
  void load_text(const std::string& text, const std::string& origin);
  void set(const std::string& key, const std::string& value);
  /// "key=value"
  void set_assignment(const std::string& assignment);

  const std::string& str(const std::string& key) const;
  double num(const std::string& key) const;
  std::uint64_t uint(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> num_list(const std::string& key) const;
  std::vector<std::uint64_t> uint_list(const std::string& key) const;
  std::vector<std::string> str_list(const std::string& key) const;

  /// A path key; empty means `<out_dir>/<fallback>`.
  std::string path(const std::string& key, const std::string& fallback) const;

  /// All settings as "key = value" lines.
  std::string dump() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace spamri_cli
