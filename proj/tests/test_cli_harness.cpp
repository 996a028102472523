#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "raisac/config.hpp"
#include "raisac/error.hpp"
#include "raisac/experiments.hpp"
#include "raisac/output.hpp"

using namespace raisac;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::IoError;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ScenarioConfig small_config() {
  ScenarioConfig c;
  c.gamma_th_db_points = 12;
  c.pos_only_points = 201;
  c.ts_curve_points = 1001;
  c.hfh_grid_n = 51;
  return c;
}

const SchemeResult* find(const std::vector<SchemeResult>& v, const std::string& name) {
  for (const auto& s : v) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("defaults survive an empty file") {
    const auto c = parse_config("# nothing here\n\n");
    CHECK(c.params.m_t == 12);
    CHECK(c.params.h_alt == 50.0);
    CHECK(c.gamma_th_db_points == 60);
  }
  SUBCASE("values, comments and lists") {
    const auto c = parse_config(
        "h_alt_m = 80   # higher\n"
        "q_t_x_m=250\n"
        "speeds_mps = 1, 2.5 ,40\n"
        "scheme_pos_only = false\n"
        "verify_claims = lemma1,prop1\n"
        "seed = 99\n");
    CHECK(c.params.h_alt == 80.0);
    CHECK(c.params.q_t.x == 250.0);
    CHECK(c.speeds_mps == std::vector<double>{1.0, 2.5, 40.0});
    CHECK_FALSE(c.scheme_pos_only);
    CHECK(c.verify_claims == std::vector<std::string>{"lemma1", "prop1"});
    CHECK(c.seed == 99u);
  }
  SUBCASE("errors") {
    CHECK(kind_of([] { parse_config("bogus_key = 1\n"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_config("h_alt_m 50\n"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_config("h_alt_m = fifty\n"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_config("h_alt_m = -1\n"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_config("m_t = 3\nm_t = 4\n"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_config("verify_claims = lemma9\n"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { load_config("/nonexistent/raisac.cfg"); }) == ErrorKind::ConfigError);
  }
  SUBCASE("round trip keeps every field") {
    ScenarioConfig c;
    c.params.alpha = 0.123456789012345678;
    c.params.q_u = {-3.25, 7.0};
    c.params.include_mr_in_sensing = true;
    c.speeds_mps = {0.5, 1e4};
    c.output_dir = "some/dir";
    c.verify_claims = {"theorem1", "integrals"};
    c.mutation_rate_scale = 1.01;
    const std::string text = serialize_config(c);
    const auto back = parse_config(text);
    CHECK(serialize_config(back) == text);
    CHECK(back.params.alpha == c.params.alpha);
    CHECK(back.params.q_u == c.params.q_u);
    CHECK(back.speeds_mps == c.speeds_mps);
    CHECK(back.output_dir == c.output_dir);
  }
}

TEST_CASE("dB conversions are inverse") {
  for (double db : {-30.0, 0.0, 80.0, 105.89}) {
    CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
  }
  for (double lin : {1e-3, 1.0, 3.888e10}) {
    CHECK(db_to_linear(linear_to_db(lin)) == doctest::Approx(lin).epsilon(1e-12));
  }
}

TEST_CASE("threshold grid clips above the feasibility limit") {
  ScenarioConfig c;
  c.gamma_th_db_max = 110.0;
  std::vector<std::string> warnings;
  const auto grid = threshold_grid(c, &warnings);
  CHECK(warnings.size() == 1);
  CHECK(grid.size() == 60);
  CHECK(grid.front() == doctest::Approx(1e8));
  CHECK(grid.back() == doctest::Approx(3.888e10).epsilon(1e-12));
  for (double g : grid) CHECK(g <= 3.888e10 * (1 + 1e-12));
}

TEST_CASE("static comparison") {
  const auto c = small_config();
  const auto out = run_static_comparison(c);
  REQUIRE(out.schemes.size() == 5);
  const auto* mid = find(out.schemes, "midpoint");
  const auto* pos = find(out.schemes, "pos_only");
  const auto* ra = find(out.schemes, "midpoint_ra_opt");
  const auto* joint = find(out.schemes, "joint_opt");
  const auto* ts = find(out.schemes, "ts_bound");
  REQUIRE((mid && pos && ra && joint && ts));

  CHECK(joint->points.front().rate == doctest::Approx(35.48231535).epsilon(1e-9));
  CHECK(ra->points.front().rate == doctest::Approx(std::log2(1 + 1.2e14 / 27500)).epsilon(1e-9));

  auto rate_at = [](const SchemeResult* s, double g) -> std::optional<double> {
    for (const auto& pt : s->points) {
      if (pt.gamma_th == g) return pt.rate;
    }
    return std::nullopt;
  };
  for (const auto& pt : joint->points) {
    const double g = pt.gamma_th;
    const double j = pt.rate;
    if (auto m = rate_at(mid, g)) {
      if (auto r = rate_at(pos, g)) CHECK(*m <= *r + 1e-9);
      if (auto r = rate_at(ra, g)) CHECK(*m <= *r + 1e-9);
    }
    if (auto r = rate_at(pos, g)) CHECK(*r <= j + 1e-9);
    if (auto r = rate_at(ra, g)) CHECK(*r <= j + 1e-9);
    CHECK(j <= *rate_at(ts, g) + 1e-9);
  }
  // Optimized schemes are non-increasing.
  for (const auto* s : {pos, joint, ts}) {
    for (std::size_t i = 1; i < s->points.size(); ++i) {
      CHECK(s->points[i].rate <= s->points[i - 1].rate + 1e-9);
    }
  }
}

TEST_CASE("mobility sweep ordering") {
  auto c = small_config();
  c.speeds_mps = {3.0, 30.0};
  const auto out = run_mobility_sweep(c);
  REQUIRE(out.schemes.size() == 4);
  CHECK(out.schemes[0].name == "hfh_v0");
  CHECK(out.schemes[1].name == "hfh_v3");
  CHECK(out.schemes[2].name == "hfh_v30");
  CHECK(out.schemes[3].name == "ts_bound");
  for (std::size_t k = 0; k + 1 < out.schemes.size(); ++k) {
    const auto& lo = out.schemes[k].points;
    const auto& hi = out.schemes[k + 1].points;
    REQUIRE(lo.size() == hi.size());
    for (std::size_t i = 0; i < lo.size(); ++i) CHECK(lo[i].rate <= hi[i].rate + 1e-9);
  }
  CHECK(out.schemes[1].extra_columns == std::vector<std::string>{"s_a", "s_b", "mu", "t_fly"});
}

TEST_CASE("verification suite") {
  ScenarioConfig c;
  c.verify_lemma1_instances = 3;
  c.verify_lemma1_grid_n = 40;
  c.verify_theorem1_instances = 10;
  c.verify_theorem1_grid_n = 2000;
  c.verify_theorem2_thresholds = 5;
  c.verify_theorem2_grid_n = 200;
  c.verify_theorem3_thresholds = 2;
  c.verify_theorem3_steps = 30;
  c.verify_theorem3_restarts = 3;
  c.verify_theorem3_speeds_mps = {10.0};
  c.hfh_grid_n = 51;

  SUBCASE("all claims pass") {
    c.threads = 2;
    const auto reports = run_verification(c);
    CHECK(reports.size() >= 12);
    for (const auto& r : reports) {
      INFO(r.claim_id);
      CHECK(r.passed);
    }
  }
  SUBCASE("a perturbed rate formula is caught") {
    c.verify_claims = {"theorem2"};
    c.mutation_rate_scale = 1.01;
    bool any_failed = false;
    for (const auto& r : run_verification(c)) any_failed = any_failed || !r.passed;
    CHECK(any_failed);
  }
  SUBCASE("empty selection") {
    c.verify_claims = {};
    CHECK(run_verification(c).empty());
  }
  SUBCASE("thread count does not change results") {
    c.verify_claims = {"lemma1", "theorem1", "integrals"};
    c.threads = 1;
    const auto a = report_csv(run_verification(c));
    c.threads = 3;
    CHECK(report_csv(run_verification(c)) == a);
  }
}

TEST_CASE("csv output") {
  SchemeResult s{"demo", "Demo", {{1e8, 35.4823153547}, {3.888e10, 30.1247633512}}, {"q_star_x"}, {{0.0}, {300.0}}};
  const std::string csv = scheme_csv(s);
  CHECK(csv.rfind("gamma_th_db,gamma_th_linear,rate_bps_hz,q_star_x\n", 0) == 0);
  CHECK(csv.find("80,100000000,35.4823153547,0\n") != std::string::npos);

  const auto out = run_static_comparison(small_config());
  for (const auto& scheme : out.schemes) {
    const auto back = parse_scheme_csv(scheme_csv(scheme));
    REQUIRE(back.size() == scheme.points.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      // 12 significant digits bound the round-trip error.
      CHECK(std::abs(back[i].gamma_th - scheme.points[i].gamma_th) <= 5e-12 * scheme.points[i].gamma_th);
      CHECK(std::abs(back[i].rate - scheme.points[i].rate) <= 5e-12 * scheme.points[i].rate);
    }
  }
  CHECK(kind_of([] { parse_scheme_csv("x,y\n"); }) == ErrorKind::IoError);
}

TEST_CASE("emitted files") {
  const auto dir = std::filesystem::temp_directory_path() / "raisac_test_emit";
  std::filesystem::remove_all(dir);
  const auto out = run_static_comparison(small_config());
  const auto files = emit_outputs(out.schemes, dir, "static_region", "title & <more>");
  CHECK(files.size() == 6);
  const std::string svg = slurp(dir / "static_region.svg");
  CHECK(svg.find("width=\"800\" height=\"600\"") != std::string::npos);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(svg.find("Rate (bits/s/Hz)") != std::string::npos);
  CHECK(svg.find("title &amp; &lt;more&gt;") != std::string::npos);
  CHECK(svg == render_svg(out.schemes, "title & <more>"));

  // Re-emitting gives identical bytes.
  const std::string before = slurp(dir / "joint_opt.csv");
  emit_outputs(run_static_comparison(small_config()).schemes, dir, "static_region", "title & <more>");
  CHECK(slurp(dir / "joint_opt.csv") == before);
  std::filesystem::remove_all(dir);

  CHECK(kind_of([&] { emit_outputs(out.schemes, "/proc/raisac_no_such_dir", "x", "t"); }) ==
        ErrorKind::IoError);
}

TEST_CASE("report formats") {
  const std::vector<OracleReport> r{{"a.b", 1.0, 1.5, 0.5, 0.1, false, 7}};
  CHECK(report_csv(r) ==
        "claim_id,closed_form,brute_force,rel_error,tolerance,passed,seed\na.b,1,1.5,0.5,0.1,false,7\n");
  CHECK(report_table(r).find("FAIL") != std::string::npos);
}
