#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace fracpar {

// Flat key=value run configuration.  Files hold one `key = value` pair per
// line; blank lines and lines starting with `#` are ignored; values keep
// internal whitespace but are trimmed at both ends.  Command-line overrides
// (`--set key=value`) replace file values.  The canonicalized text (sorted
// unique `key=value` lines, one per line) feeds a 64-bit FNV-1a digest that
// is recorded in every output directory, so identical configurations are
// recognizable across runs.
struct RunConfig {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const;
  // Typed getters fall back when the key is absent and throw ConfigError
  // when the stored text does not parse or violates the documented range.
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_uint64(const std::string& key,
                           std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  void set(const std::string& key, const std::string& value);
};

// Parses configuration text; throws ConfigError on malformed lines or
// duplicate keys.
RunConfig parse_config_text(const std::string& text);
// Loads a file (IoError when unreadable) and parses it.
RunConfig load_config_file(const std::string& path);
// Applies one `key=value` override; throws ConfigError when the argument
// has no `=` or an empty key.
void apply_override(RunConfig& config, const std::string& key_equals_value);

// Sorted canonical `key=value` lines -- the digest input and the exact text
// written next to outputs.
std::string canonical_config_text(const RunConfig& config);
// 16 lowercase hex characters of the FNV-1a 64-bit hash of the canonical
// text.
std::string config_digest(const RunConfig& config);

// Validates every present key against the range its owning module declares
// (grid sizes even and >= 4, s in [0.01, 0.99], tolerances positive, node
// counts >= 2, enumerations spelled exactly, ...) and rejects keys no module
// owns.  Throws ConfigError naming the offending key.
void validate_config(const RunConfig& config);

}  // namespace fracpar
