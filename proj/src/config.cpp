#include "raisac/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "raisac/error.hpp"
#include "raisac/static_region.hpp"

namespace raisac {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::string_view key, std::string_view what) {
  throw Error(ErrorKind::ConfigError, std::string(key) + ": " + std::string(what));
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) fail(key, "expected a number");
  return v;
}

long long parse_integer(std::string_view key, std::string_view text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) fail(key, "expected an integer");
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  const long long v = parse_integer(key, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    fail(key, "integer out of range");
  }
  return static_cast<int>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  fail(key, "expected true or false");
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_double(key, item));
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += items[i];
  }
  return out;
}

std::string join(const std::vector<double>& items) {
  std::vector<std::string> s;
  for (double v : items) s.push_back(format_double(v));
  return join(s);
}

struct Field {
  const char* key;
  std::function<void(ScenarioConfig&, std::string_view)> read;
  std::function<std::string(const ScenarioConfig&)> write;
};

Field real(const char* key, double ScenarioConfig::*member) {
  return {key, [=](ScenarioConfig& c, std::string_view v) { c.*member = parse_double(key, v); },
          [=](const ScenarioConfig& c) { return format_double(c.*member); }};
}

Field real(const char* key, double SystemParams::*member) {
  return {key,
          [=](ScenarioConfig& c, std::string_view v) { c.params.*member = parse_double(key, v); },
          [=](const ScenarioConfig& c) { return format_double(c.params.*member); }};
}

Field integer(const char* key, int ScenarioConfig::*member) {
  return {key, [=](ScenarioConfig& c, std::string_view v) { c.*member = parse_int(key, v); },
          [=](const ScenarioConfig& c) { return std::to_string(c.*member); }};
}

Field integer(const char* key, int SystemParams::*member) {
  return {key,
          [=](ScenarioConfig& c, std::string_view v) { c.params.*member = parse_int(key, v); },
          [=](const ScenarioConfig& c) { return std::to_string(c.params.*member); }};
}

Field flag(const char* key, bool ScenarioConfig::*member) {
  return {key, [=](ScenarioConfig& c, std::string_view v) { c.*member = parse_bool(key, v); },
          [=](const ScenarioConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

Field coordinate(const char* key, Position2D SystemParams::*member, double Position2D::*axis) {
  return {key,
          [=](ScenarioConfig& c, std::string_view v) {
            (c.params.*member).*axis = parse_double(key, v);
          },
          [=](const ScenarioConfig& c) { return format_double((c.params.*member).*axis); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      integer("m_t", &SystemParams::m_t),
      integer("m_r", &SystemParams::m_r),
      real("p_max_w", &SystemParams::p_max),
      real("beta_0", &SystemParams::beta_0),
      real("sigma_c2_w", &SystemParams::sigma_c2),
      real("sigma_r2_w", &SystemParams::sigma_r2),
      real("alpha", &SystemParams::alpha),
      real("lambda_m", &SystemParams::lambda),
      real("h_alt_m", &SystemParams::h_alt),
      coordinate("q_u_x_m", &SystemParams::q_u, &Position2D::x),
      coordinate("q_u_y_m", &SystemParams::q_u, &Position2D::y),
      coordinate("q_t_x_m", &SystemParams::q_t, &Position2D::x),
      coordinate("q_t_y_m", &SystemParams::q_t, &Position2D::y),
      real("v_max_mps", &SystemParams::v_max),
      real("t_total_s", &SystemParams::t_total),
      {"include_mr_in_sensing",
       [](ScenarioConfig& c, std::string_view v) {
         c.params.include_mr_in_sensing = parse_bool("include_mr_in_sensing", v);
       },
       [](const ScenarioConfig& c) {
         return std::string(c.params.include_mr_in_sensing ? "true" : "false");
       }},
      real("gamma_th_db_min", &ScenarioConfig::gamma_th_db_min),
      real("gamma_th_db_max", &ScenarioConfig::gamma_th_db_max),
      integer("gamma_th_db_points", &ScenarioConfig::gamma_th_db_points),
      {"speeds_mps",
       [](ScenarioConfig& c, std::string_view v) {
         c.speeds_mps = parse_double_list("speeds_mps", v);
       },
       [](const ScenarioConfig& c) { return join(c.speeds_mps); }},
      integer("hfh_grid_n", &ScenarioConfig::hfh_grid_n),
      integer("pos_only_points", &ScenarioConfig::pos_only_points),
      integer("ts_curve_points", &ScenarioConfig::ts_curve_points),
      flag("scheme_midpoint", &ScenarioConfig::scheme_midpoint),
      flag("scheme_pos_only", &ScenarioConfig::scheme_pos_only),
      flag("scheme_midpoint_ra_opt", &ScenarioConfig::scheme_midpoint_ra_opt),
      flag("scheme_ts_bound", &ScenarioConfig::scheme_ts_bound),
      {"output_dir", [](ScenarioConfig& c, std::string_view v) { c.output_dir = std::string(v); },
       [](const ScenarioConfig& c) { return c.output_dir; }},
      {"seed",
       [](ScenarioConfig& c, std::string_view v) {
         const long long s = parse_integer("seed", v);
         if (s < 0) fail("seed", "must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       },
       [](const ScenarioConfig& c) { return std::to_string(c.seed); }},
      integer("threads", &ScenarioConfig::threads),
      {"verify_claims",
       [](ScenarioConfig& c, std::string_view v) { c.verify_claims = split_list(v); },
       [](const ScenarioConfig& c) { return join(c.verify_claims); }},
      integer("verify_lemma1_instances", &ScenarioConfig::verify_lemma1_instances),
      integer("verify_lemma1_grid_n", &ScenarioConfig::verify_lemma1_grid_n),
      integer("verify_theorem1_instances", &ScenarioConfig::verify_theorem1_instances),
      integer("verify_theorem1_grid_n", &ScenarioConfig::verify_theorem1_grid_n),
      integer("verify_theorem2_thresholds", &ScenarioConfig::verify_theorem2_thresholds),
      integer("verify_theorem2_grid_n", &ScenarioConfig::verify_theorem2_grid_n),
      integer("verify_theorem3_thresholds", &ScenarioConfig::verify_theorem3_thresholds),
      integer("verify_theorem3_steps", &ScenarioConfig::verify_theorem3_steps),
      integer("verify_theorem3_restarts", &ScenarioConfig::verify_theorem3_restarts),
      {"verify_theorem3_speeds_mps",
       [](ScenarioConfig& c, std::string_view v) {
         c.verify_theorem3_speeds_mps = parse_double_list("verify_theorem3_speeds_mps", v);
       },
       [](const ScenarioConfig& c) { return join(c.verify_theorem3_speeds_mps); }},
      real("mutation_rate_scale", &ScenarioConfig::mutation_rate_scale),
  };
  return table;
}

void check(const ScenarioConfig& c) {
  try {
    validate(c.params);
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  if (c.gamma_th_db_points < 1) fail("gamma_th_db_points", "must be >= 1");
  if (c.gamma_th_db_min > c.gamma_th_db_max) fail("gamma_th_db_min", "exceeds gamma_th_db_max");
  if (c.hfh_grid_n < 2) fail("hfh_grid_n", "must be >= 2");
  if (c.pos_only_points < 2) fail("pos_only_points", "must be >= 2");
  if (c.ts_curve_points < 2) fail("ts_curve_points", "must be >= 2");
  if (c.threads < 1) fail("threads", "must be >= 1");
  for (double v : c.speeds_mps) {
    if (!(v >= 0.0)) fail("speeds_mps", "speeds must be >= 0");
  }
  if (c.mutation_rate_scale <= 0.0) fail("mutation_rate_scale", "must be > 0");
  static const std::set<std::string> kClaims{"all",       "lemma1", "theorem1", "theorem2",
                                             "prop1",     "integrals", "theorem3"};
  for (const auto& claim : c.verify_claims) {
    if (!kClaims.contains(claim)) fail("verify_claims", "unknown claim family " + claim);
  }
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig config;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const Field& f) { return key == f.key; });
    if (it == table.end()) fail(key, "unknown key");
    if (!seen.emplace(key).second) fail(key, "duplicate key");
    it->read(config, value);
  }
  check(config);
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& config) {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.write(config);
    out += '\n';
  }
  return out;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

std::vector<double> threshold_grid(const ScenarioConfig& config,
                                   std::vector<std::string>* warnings) {
  const double limit = feasibility_limit(config.params);
  const double limit_db = linear_to_db(limit);
  double lo = config.gamma_th_db_min;
  double hi = config.gamma_th_db_max;
  if (hi > limit_db) {
    if (warnings) {
      warnings->push_back("gamma_th_db_max " + format_double(hi) +
                          " exceeds the feasibility limit; clipped to " + format_double(limit_db));
    }
    hi = limit_db;
  }
  if (lo > hi) {
    if (warnings) warnings->push_back("gamma_th_db_min clipped to the feasibility limit");
    lo = hi;
  }
  const int n = config.gamma_th_db_points;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double db = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    grid.push_back(db >= limit_db ? limit : db_to_linear(db));
  }
  return grid;
}

}  // namespace raisac
