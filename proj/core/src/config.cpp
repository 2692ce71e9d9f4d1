#include "fracpar/config.hpp"

#include <cctype>
#include <cerrno>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "fracpar/errors.hpp"

namespace fracpar {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw ConfigError("config key '" + key + "': " + why);
}

double parse_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (errno != 0 || end == text.c_str() || *end != '\0') {
    bad_key(key, "'" + text + "' is not a number");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (errno != 0 || end == text.c_str() || *end != '\0') {
    bad_key(key, "'" + text + "' is not an integer");
  }
  return v;
}

// Declared validation ranges, one entry per key a module owns.
struct KeyRule {
  const char* key;
  std::function<void(const std::string&, const std::string&)> check;
};

void check_even_ge4(const std::string& k, const std::string& v) {
  const long long n = parse_int(k, v);
  if (n < 4 || n % 2 != 0) bad_key(k, "must be an even integer >= 4");
}
void check_pos(const std::string& k, const std::string& v) {
  if (!(parse_double(k, v) > 0.0)) bad_key(k, "must be positive");
}
void check_nonneg(const std::string& k, const std::string& v) {
  if (!(parse_double(k, v) >= 0.0)) bad_key(k, "must be nonnegative");
}
void check_s(const std::string& k, const std::string& v) {
  const double s = parse_double(k, v);
  if (!(s >= 0.01 && s <= 0.99)) bad_key(k, "must lie in [0.01, 0.99]");
}
void check_enum(const std::string& k, const std::string& v,
                std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return;
  std::string msg = "must be one of {";
  bool first = true;
  for (const char* a : allowed) {
    if (!first) msg += ", ";
    msg += a;
    first = false;
  }
  bad_key(k, msg + "}");
}
void check_route_list(const std::string& k, const std::string& v) {
  std::stringstream ss(v);
  std::string item;
  int n = 0;
  while (std::getline(ss, item, ',')) {
    check_enum(k, trim(item), {"fourier", "balakrishnan", "semigroup"});
    ++n;
  }
  if (n == 0) bad_key(k, "must list at least one route");
}

const std::vector<KeyRule>& key_rules() {
  auto ge = [](long long lo) {
    return [lo](const std::string& k, const std::string& v) {
      if (parse_int(k, v) < lo)
        bad_key(k, "must be an integer >= " + std::to_string(lo));
    };
  };
  auto uint_any = [](const std::string& k, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    (void)std::strtoull(v.c_str(), &end, 10);
    if (errno != 0 || end == v.c_str() || *end != '\0')
      bad_key(k, "'" + v + "' is not an unsigned integer");
  };
  auto any_text = [](const std::string&, const std::string&) {};
  auto numeric_any = [](const std::string& k, const std::string& v) {
    parse_double(k, v);
  };
  auto tail_tol = [](const std::string& k, const std::string& v) {
    const double t = parse_double(k, v);
    if (!(t > 0.0 && t <= 1e-6)) bad_key(k, "must lie in (0, 1e-6]");
  };
  static const std::vector<KeyRule> rules = {
      {"grid.spatial_dims",
       [](const std::string& k, const std::string& v) {
         const long long n = parse_int(k, v);
         if (n != 1 && n != 2) bad_key(k, "must be 1 or 2");
       }},
      {"grid.nx", check_even_ge4},
      {"grid.nt", check_even_ge4},
      {"grid.Lx", check_pos},
      {"grid.Lt", check_pos},
      {"coeff.builtin",
       [](const std::string& k, const std::string& v) {
         check_enum(k, v, {"identity", "anisotropic", "rotating-nonsymmetric",
                           "checkerboard"});
       }},
      {"coeff.file", any_text},
      {"frac.s", check_s},
      {"frac.routes", check_route_list},
      {"quad.scheme",
       [](const std::string& k, const std::string& v) {
         check_enum(k, v, {"log_trapezoid", "gauss_jacobi", "gauss_laguerre"});
       }},
      {"quad.nodes", ge(2)},
      {"quad.lower", [](const std::string& k,
                        const std::string& v) { parse_double(k, v); }},
      {"quad.upper", [](const std::string& k,
                        const std::string& v) { parse_double(k, v); }},
      {"quad.target_tol", check_pos},
      {"yosida.sigma", check_nonneg},
      {"yosida.tail_tol", tail_tol},
      {"yosida.max_terms", ge(1000)},
      {"solver.tol", check_pos},
      {"solver.max_iter", ge(1)},
      {"time.mode",
       [](const std::string& k, const std::string& v) {
         check_enum(k, v, {"spectral", "factorized"});
       }},
      {"extend.lambda_max", check_pos},
      {"extend.nlambda", ge(16)},
      {"dtn.s_list",
       [](const std::string& k, const std::string& v) {
         std::stringstream ss(v);
         std::string item;
         int n = 0;
         while (std::getline(ss, item, ',')) {
           check_s(k, trim(item));
           ++n;
         }
         if (n == 0) bad_key(k, "must list at least one exponent");
       }},
      {"kernel.source_ix", ge(0)},
      {"kernel.source_iy", ge(0)},
      {"kernel.source_it", ge(0)},
      {"kernel.horizon", check_pos},
      {"kernel.sigma", check_pos},
      {"kernel.resolvent_order", ge(1)},
      {"kernel.fit_tmin", check_pos},
      {"kernel.fit_tmax", check_pos},
      {"kernel.radius_factor", check_pos},
      {"dirichlet.route",
       [](const std::string& k, const std::string& v) {
         check_enum(k, v, {"fourier", "balakrishnan", "semigroup"});
       }},
      {"dirichlet.center_x", check_nonneg},
      {"dirichlet.center_y", check_nonneg},
      {"dirichlet.center_t", check_nonneg},
      {"dirichlet.half_x", check_pos},
      {"dirichlet.half_y", check_pos},
      {"dirichlet.half_t", check_pos},
      {"cube.center_x", check_nonneg},
      {"cube.center_y", check_nonneg},
      {"cube.center_t", check_nonneg},
      {"cube.radius", check_pos},
      {"field.kind",
       [](const std::string& k, const std::string& v) {
         check_enum(k, v, {"constant", "smooth", "banded", "exp-smooth",
                           "file"});
       }},
      {"field.file", any_text},
      {"field.value", numeric_any},
      {"field.mx", ge(0)},
      {"field.mt", ge(0)},
      {"field.klo", ge(0)},
      {"field.khi", ge(0)},
      {"field.mean_free",
       [](const std::string& k, const std::string& v) {
         check_enum(k, v, {"true", "false", "0", "1"});
       }},
      {"seed", uint_any},
      {"threads", ge(0)},
      {"out.dir", any_text},
  };
  return rules;
}

}  // namespace

bool RunConfig::has(const std::string& key) const {
  return values.count(key) != 0;
}

std::string RunConfig::get(const std::string& key,
                           const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : parse_double(key, it->second);
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  const long long v = parse_int(key, it->second);
  if (v < INT_MIN || v > INT_MAX) bad_key(key, "integer out of range");
  return static_cast<int>(v);
}

std::uint64_t RunConfig::get_uint64(const std::string& key,
                                    std::uint64_t fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(it->second.c_str(), &end, 10);
  if (errno != 0 || end == it->second.c_str() || *end != '\0') {
    bad_key(key, "'" + it->second + "' is not an unsigned integer");
  }
  return v;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  bad_key(key, "'" + it->second + "' is not a boolean");
}

void RunConfig::set(const std::string& key, const std::string& value) {
  values[key] = value;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    }
    if (cfg.values.count(key)) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    }
    cfg.values[key] = value;
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_override(RunConfig& config, const std::string& key_equals_value) {
  const std::size_t eq = key_equals_value.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("--set expects key=value, got '" + key_equals_value +
                      "'");
  }
  const std::string key = trim(key_equals_value.substr(0, eq));
  if (key.empty()) throw ConfigError("--set has an empty key");
  config.set(key, trim(key_equals_value.substr(eq + 1)));
}

std::string canonical_config_text(const RunConfig& config) {
  std::string out;
  for (const auto& [k, v] : config.values) {  // std::map is already sorted
    out += k;
    out += "=";
    out += v;
    out += "\n";
  }
  return out;
}

std::string config_digest(const RunConfig& config) {
  const std::string text = canonical_config_text(config);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

void validate_config(const RunConfig& config) {
  for (const auto& [key, value] : config.values) {
    bool known = false;
    for (const KeyRule& rule : key_rules()) {
      if (key == rule.key) {
        rule.check(key, value);
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace fracpar
