#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "dfdr/error.hpp"

namespace dfdr::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

using Setter = std::function<void(ScenarioSpec&, std::string_view, const std::filesystem::path&)>;

template <class T>
Setter number(T ScenarioSpec::*field, const char* key) {
  return [field, key](ScenarioSpec& s, std::string_view v, const std::filesystem::path&) {
    if constexpr (std::is_floating_point_v<T>) {
      s.*field = parse_double(v, key);
    } else {
      const auto x = parse_integer(v, key);
      if constexpr (std::is_unsigned_v<T>) {
        if (x < 0) throw ConfigError(std::string(key) + " must be nonnegative");
      }
      s.*field = static_cast<T>(x);
    }
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"m", number(&ScenarioSpec::m, "m")},
      {"pi0", number(&ScenarioSpec::pi0, "pi0")},
      {"alpha", [](ScenarioSpec& s, std::string_view v, const auto&) {
         s.alphas = parse_double_list(v, "alpha");
       }},
      {"reps", number(&ScenarioSpec::reps, "reps")},
      {"seed", number(&ScenarioSpec::seed, "seed")},
      {"threads", number(&ScenarioSpec::threads, "threads")},
      {"lambda", number(&ScenarioSpec::lambda, "lambda")},
      {"epsilon", number(&ScenarioSpec::epsilon, "epsilon")},
      {"methods", [](ScenarioSpec& s, std::string_view v, const auto&) {
         s.methods.clear();
         for (auto name : split(v, ',')) s.methods.push_back(parse_method(name));
       }},
      {"convention", [](ScenarioSpec& s, std::string_view v, const auto&) {
         try {
           s.convention = parse_convention(v);
         } catch (const DomainError& e) {
           throw ConfigError(e.what());
         }
       }},
      {"theta_location", number(&ScenarioSpec::theta_location, "theta_location")},
      {"theta_shape", number(&ScenarioSpec::theta_shape, "theta_shape")},
      {"theta_min", number(&ScenarioSpec::theta_min, "theta_min")},
      {"theta_max", number(&ScenarioSpec::theta_max, "theta_max")},
      {"theta1_file", [](ScenarioSpec& s, std::string_view v, const std::filesystem::path& base) {
         std::filesystem::path p{std::string(v)};
         if (p.is_relative() && !base.empty()) p = base / p;
         s.theta1_values = load_values(p);
       }},
      {"rho_min", number(&ScenarioSpec::rho_min, "rho_min")},
      {"rho_max", number(&ScenarioSpec::rho_max, "rho_max")},
      {"rho_location", number(&ScenarioSpec::rho_location, "rho_location")},
      {"rho_shape", number(&ScenarioSpec::rho_shape, "rho_shape")},
      {"rho_fixed", [](ScenarioSpec& s, std::string_view v, const auto&) {
         s.rho_fixed = parse_double(v, "rho_fixed");
       }},
      {"trials_size", number(&ScenarioSpec::trials_size, "trials_size")},
      {"trials_mean", number(&ScenarioSpec::trials_mean, "trials_mean")},
      {"trials_offset", number(&ScenarioSpec::trials_offset, "trials_offset")},
      {"theta2_rule", [](ScenarioSpec& s, std::string_view v, const auto&) {
         s.theta2_rule = parse_theta2_rule(v);
       }},
      {"theta2_cap", number(&ScenarioSpec::theta2_cap, "theta2_cap")},
      {"dispersion", number(&ScenarioSpec::dispersion, "dispersion")},
      {"reps_per_group", number(&ScenarioSpec::reps_per_group, "reps_per_group")},
  };
  return table;
}

}  // namespace

const std::vector<std::string_view>& scenario_keys() {
  static const std::vector<std::string_view> keys = [] {
    std::vector<std::string_view> k{"kind"};
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(x)) {
    throw ConfigError(std::string(what) + ": expected a number, got '" + std::string(text) + "'");
  }
  return x;
}

long long parse_integer(std::string_view text, std::string_view what) {
  text = trim(text);
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(what) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return x;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (auto item : split(text, ',')) out.push_back(parse_double(item, what));
  return out;
}

std::vector<double> parse_grid_axis(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text.find(':') == std::string_view::npos) return parse_double_list(text, what);
  const auto parts = split(text, ':');
  if (parts.size() != 3) {
    throw ConfigError(std::string(what) + ": range must be start:stop:step, got '" +
                      std::string(text) + "'");
  }
  const double start = parse_double(parts[0], what);
  const double stop = parse_double(parts[1], what);
  const double step = parse_double(parts[2], what);
  if (!(step > 0.0) || stop < start) {
    throw ConfigError(std::string(what) + ": range needs step > 0 and stop >= start");
  }
  // Count steps with a little slack so 0:0.95:0.05 includes 0.95.
  const auto n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
  if (n > 100000) throw ConfigError(std::string(what) + ": range has too many points");
  std::vector<double> out;
  for (long long k = 0; k <= n; ++k) out.push_back(start + static_cast<double>(k) * step);
  return out;
}

std::vector<double> load_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    try {
      out.push_back(parse_double(body, "value"));
    } catch (const ConfigError& e) {
      throw ParseError(number, path.string() + ": " + e.what());
    }
  }
  if (out.empty()) throw ConfigError(path.string() + " holds no values");
  return out;
}

ScenarioSpec parse_scenario(std::istream& in, const std::filesystem::path& base_dir) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(number, "expected key = value, got '" + std::string(body) + "'");
    }
    std::string key(trim(body.substr(0, eq)));
    std::string value(trim(body.substr(eq + 1)));
    if (key != "kind" && setters().find(key) == setters().end()) {
      throw ConfigError("unknown config key '" + key + "' on line " + std::to_string(number));
    }
    if (!seen.insert(key).second) {
      throw ConfigError("config key '" + key + "' given twice");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }

  const auto kind_it = std::find_if(entries.begin(), entries.end(),
                                    [](const auto& e) { return e.first == "kind"; });
  if (kind_it == entries.end()) throw ConfigError("config is missing required key 'kind'");
  ScenarioSpec spec = ScenarioSpec::defaults(parse_scenario_kind(kind_it->second));
  for (const auto& [key, value] : entries) {
    if (key == "kind") continue;
    setters().find(key)->second(spec, value, base_dir);
  }
  spec.validate();
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_scenario(in, path.parent_path());
}

}  // namespace dfdr::cli
