#include "cubicrx/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>

#include "cubicrx/errors.hpp"

namespace cubicrx {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(item));
      item.clear();
    } else {
      item += c;
    }
  }
  out.push_back(trim(item));
  for (const auto& v : out)
    if (v.empty()) throw ConfigError("empty list element");
  return out;
}

struct Unit {
  const char* suffix;
  double scale;
};

// Multiplicative units per quantity kind; the empty suffix is the SI base.
const std::map<std::string, std::vector<Unit>>& unit_table() {
  static const std::map<std::string, std::vector<Unit>> table{
      {"time", {{"", 1.0}, {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}, {"fs", 1e-15}}},
      {"length", {{"", 1.0}, {"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}},
      {"gain", {{"", 1.0}}},
      {"power", {{"", 1.0}, {"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}}},
      {"resistance", {{"", 1.0}, {"ohm", 1.0}, {"kohm", 1e3}, {"Mohm", 1e6}}},
      {"temperature", {{"", 1.0}, {"K", 1.0}}},
      {"inverse_power", {{"", 1.0}, {"/W", 1.0}, {"1/W", 1.0}}},
      {"number", {{"", 1.0}}},
  };
  return table;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw ConfigError("expected a boolean, got '" + v + "'");
}

long long parse_integer(const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE) throw ConfigError("expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& v) {
  errno = 0;
  char* end = nullptr;
  if (v.empty() || v.front() == '-') throw ConfigError("expected an unsigned integer, got '" + v + "'");
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (*end != '\0' || errno == ERANGE) throw ConfigError("expected an unsigned integer, got '" + v + "'");
  return x;
}

// Values on the power axes are dBm; a bare number is accepted as dBm too.
double parse_dbm(const std::string& v) {
  std::string t = v;
  if (t.size() > 3 && t.compare(t.size() - 3, 3, "dBm") == 0) t = trim(t.substr(0, t.size() - 3));
  return parse_quantity(t, "number");
}

std::vector<double> range(double start, double stop, double step) {
  if (!(step > 0)) throw ConfigError("sweep_step must be > 0");
  if (stop < start) throw ConfigError("sweep_stop must not be below sweep_start");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = start + step * static_cast<double>(i);
  return xs;
}

}  // namespace

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::p_r_dbm:
      return "p_r_dbm";
    case SweepAxis::sigma0_sq_dbm:
      return "sigma0_sq_dbm";
    case SweepAxis::prd:
      return "prd";
  }
  return "?";
}

double parse_quantity(const std::string& text, const std::string& kind) {
  const auto kinds = unit_table().find(kind);
  if (kinds == unit_table().end()) throw std::invalid_argument("unknown quantity kind " + kind);
  const std::string t = trim(text);
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || errno == ERANGE || !std::isfinite(x))
    throw ConfigError("expected a number, got '" + text + "'");
  const std::string unit = trim(end);

  if (kind == "power" && unit == "dBm") return dbm_to_watts(x);
  if (kind == "gain" && unit == "dB") return std::pow(10.0, x / 10.0);
  for (const auto& u : kinds->second)
    if (unit == u.suffix) return x * u.scale;
  throw ConfigError("unit '" + unit + "' is not valid for a " + kind + " value");
}

bool SweepConfig::mc_enabled() const {
  return !analytic_only && std::any_of(variants.begin(), variants.end(), [](const std::string& v) { return v == "mc"; });
}

void SweepConfig::validate() const {
  try {
    base.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  if (sigma0_sq && !(*sigma0_sq >= 0)) throw ConfigError("sigma0_sq must be >= 0");
  if (x_values.empty()) throw ConfigError("sweep has no points");
  for (double x : x_values) {
    if (!std::isfinite(x)) throw ConfigError("sweep values must be finite");
    if (axis == SweepAxis::prd && !(x > 0)) throw ConfigError("prd sweep values must be > 0");
  }
  if (orders.empty()) throw ConfigError("orders must not be empty");
  for (int o : orders)
    if (o < 1 || o > 3) throw ConfigError("orders must be 1, 2 or 3");
  if (variants.empty()) throw ConfigError("variants must not be empty");
  static const std::set<std::string> known{"lp3", "lp3_shot_thermal", "gauss_approx", "mc"};
  for (const auto& v : variants)
    if (!known.count(v)) throw ConfigError("unknown variant '" + v + "'");
  if (r_l.empty()) throw ConfigError("r_l must not be empty");
  for (double r : r_l)
    if (!(r > 0)) throw ConfigError("r_l must be > 0");
  mc.validate();
  if (mc_enabled() && mc.trials < 1000) throw ConfigError("trials must be at least 1000 when Monte-Carlo is enabled");
}

SweepConfig parse_config(std::istream& is) {
  SweepConfig cfg;
  std::optional<double> start, stop, step;
  std::optional<std::vector<std::string>> values;
  std::set<std::string> seen;

  using Setter = std::function<void(const std::string&)>;
  auto& sp = cfg.base;
  const std::map<std::string, Setter> setters{
      {"tau_c", [&](const std::string& v) { sp.tau_c = parse_quantity(v, "time"); }},
      {"prd", [&](const std::string& v) { sp.prd = parse_quantity(v, "number"); }},
      {"lambda", [&](const std::string& v) { sp.lambda = parse_quantity(v, "length"); }},
      {"g_amp", [&](const std::string& v) { sp.g_amp = parse_quantity(v, "gain"); }},
      {"l1", [&](const std::string& v) { sp.l1 = parse_quantity(v, "gain"); }},
      {"l2", [&](const std::string& v) { sp.l2 = parse_quantity(v, "gain"); }},
      {"n_sp", [&](const std::string& v) { sp.n_sp = parse_quantity(v, "number"); }},
      {"eta", [&](const std::string& v) { sp.eta = parse_quantity(v, "number"); }},
      {"k", [&](const std::string& v) { sp.k = parse_quantity(v, "number"); }},
      {"gamma_nl", [&](const std::string& v) { sp.gamma_nl = parse_quantity(v, "inverse_power"); }},
      {"p_r", [&](const std::string& v) { sp.p_r = parse_quantity(v, "power"); }},
      {"t_r", [&](const std::string& v) { sp.t_r = parse_quantity(v, "temperature"); }},
      {"r_l",
       [&](const std::string& v) {
         cfg.r_l.clear();
         for (const auto& item : split_list(v)) cfg.r_l.push_back(parse_quantity(item, "resistance"));
         sp.r_l = cfg.r_l.front();
       }},
      {"sigma0_sq", [&](const std::string& v) { cfg.sigma0_sq = parse_quantity(v, "power"); }},
      {"sweep",
       [&](const std::string& v) {
         if (v == "p_r_dbm") cfg.axis = SweepAxis::p_r_dbm;
         else if (v == "sigma0_sq_dbm") cfg.axis = SweepAxis::sigma0_sq_dbm;
         else if (v == "prd") cfg.axis = SweepAxis::prd;
         else throw ConfigError("unknown sweep axis '" + v + "'");
       }},
      {"sweep_start", [&](const std::string& v) { start = parse_dbm(v); }},
      {"sweep_stop", [&](const std::string& v) { stop = parse_dbm(v); }},
      {"sweep_step", [&](const std::string& v) { step = parse_quantity(v, "number"); }},
      {"sweep_values", [&](const std::string& v) { values = split_list(v); }},
      {"orders",
       [&](const std::string& v) {
         cfg.orders.clear();
         for (const auto& item : split_list(v)) cfg.orders.push_back(static_cast<int>(parse_integer(item)));
       }},
      {"variants", [&](const std::string& v) { cfg.variants = split_list(v); }},
      {"trials",
       [&](const std::string& v) {
         const long long n = parse_integer(v);
         if (n <= 0) throw ConfigError("trials must be positive");
         cfg.mc.trials = static_cast<std::size_t>(n);
       }},
      {"seed", [&](const std::string& v) { cfg.mc.seed = parse_u64(v); }},
      {"oversample", [&](const std::string& v) { cfg.mc.oversample = static_cast<int>(parse_integer(v)); }},
      {"window", [&](const std::string& v) { cfg.mc.window = static_cast<int>(parse_integer(v)); }},
      {"threads", [&](const std::string& v) { cfg.mc.threads = static_cast<unsigned>(parse_u64(v)); }},
      {"analytic_only", [&](const std::string& v) { cfg.analytic_only = parse_bool(v); }},
      {"out", [&](const std::string& v) { cfg.out = v; }},
      {"samples_out", [&](const std::string& v) { cfg.samples_out = v; }},
      {"plot_script", [&](const std::string& v) { cfg.plot_script = parse_bool(v); }},
      {"reuse_bit0_law", [&](const std::string& v) { cfg.reuse_bit0_law = parse_bool(v); }},
  };

  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    line = trim(line);
    if (line.empty()) continue;
    const auto where = "line " + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'");
    try {
      it->second(value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + key + ": " + e.what());
    } catch (const std::domain_error& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }

  const auto as_axis_value = [&](const std::string& v) {
    return cfg.axis == SweepAxis::prd ? parse_quantity(v, "number") : parse_dbm(v);
  };
  if (values) {
    if (start || stop || step) throw ConfigError("use either sweep_values or sweep_start/stop/step");
    for (const auto& v : *values) cfg.x_values.push_back(as_axis_value(v));
  } else if (start || stop || step) {
    if (!start || !stop || !step) throw ConfigError("sweep_start, sweep_stop and sweep_step go together");
    cfg.x_values = range(*start, *stop, *step);
  } else {
    switch (cfg.axis) {
      case SweepAxis::p_r_dbm:
        cfg.x_values = {watts_to_dbm(sp.p_r)};
        break;
      case SweepAxis::sigma0_sq_dbm: {
        const double s2 = cfg.sigma0_sq ? *cfg.sigma0_sq : derive(sp).sigma0_sq;
        if (!(s2 > 0)) throw ConfigError("sigma0_sq sweep needs a positive ASE variance");
        cfg.x_values = {watts_to_dbm(s2)};
        break;
      }
      case SweepAxis::prd:
        cfg.x_values = {sp.prd};
        break;
    }
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in);
}

}  // namespace cubicrx
