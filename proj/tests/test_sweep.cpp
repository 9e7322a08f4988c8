#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "rmc/sweep.hpp"

using namespace rmc;
using namespace rmc::sweep;

namespace {

SweepSpec small_spec() {
  SweepSpec spec;
  spec.a_values = {0.03, 0.06, 0.09};
  spec.lambda_values = {0.02, 0.05, 0.08};
  spec.mode = Mode::certify;
  return spec;
}

}  // namespace

TEST_CASE("spec validation") {
  SweepSpec spec = small_spec();
  CHECK_NOTHROW(spec.validate());
  spec.a_values = {};
  CHECK_THROWS_AS(spec.validate(), OutOfRangeError);
  spec = small_spec();
  spec.lambda_values = {0.05, 0.02};
  CHECK_THROWS_AS(spec.validate(), OutOfRangeError);
  spec = small_spec();
  spec.a_values = {0.05, 0.1};
  CHECK_THROWS_AS(spec.validate(), OutOfRangeError);
  spec = small_spec();
  spec.threads = 0;
  CHECK_THROWS_AS(spec.validate(), OutOfRangeError);
}

TEST_CASE("mode names round trip") {
  for (Mode m : {Mode::cycle, Mode::bounds, Mode::certify, Mode::tau}) {
    CHECK(mode_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(mode_from_string("nope"), OutOfRangeError);
}

TEST_CASE("default grid matches the documented values") {
  const auto g = default_grid();
  REQUIRE(g.size() == 10);
  CHECK(g.front() == doctest::Approx(0.01));
  CHECK(g[8] == doctest::Approx(0.09));
  CHECK(g.back() == doctest::Approx(0.099));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("sweep emits one record per cell in row-major order") {
  const SweepSpec spec = small_spec();
  const auto recs = run_sweep(spec);
  REQUIRE(recs.size() == 9);
  std::size_t k = 0;
  for (double a : spec.a_values) {
    for (double l : spec.lambda_values) {
      CHECK(recs[k].a == a);
      CHECK(recs[k].lambda == l);
      CHECK(recs[k].status == "ok");
      CHECK(recs[k].cert_total == 8);
      CHECK(recs[k].cert_passed == 8);
      ++k;
    }
  }
}

TEST_CASE("every ok record satisfies the nesting columns") {
  const auto recs = run_sweep(small_spec());
  for (const auto& r : recs) {
    REQUIRE(r.status == "ok");
    CHECK(r.ln_xmin_lo < r.ln_x_min);
    CHECK(r.ln_x_min < r.ln_xmin_hi);
    CHECK(r.ln_smin_lo < r.ln_s_min);
    CHECK(r.ln_s_min < r.ln_smin_hi);
    CHECK(r.x_max > 1.0);
    CHECK(r.x_max < r.xmax_hi_vg);
    CHECK(r.period > 0.0);
    CHECK(r.iterations > 0);
  }
}

TEST_CASE("repeated runs are byte-identical and thread-count independent") {
  SweepSpec spec = small_spec();
  spec.mode = Mode::cycle;
  const std::string csv1 = to_csv(run_sweep(spec));
  const std::string csv2 = to_csv(run_sweep(spec));
  CHECK(csv1 == csv2);
  spec.threads = 8;
  const std::string csv8 = to_csv(run_sweep(spec));
  CHECK(csv1 == csv8);
}

TEST_CASE("csv header is pinned") {
  const std::string csv = to_csv({});
  CHECK(csv ==
        "a,lambda,status,x_max,s_max,ln_x_min,ln_s_min,tau_s,tau_x,period,"
        "iterations,ln_xmin_lo,ln_xmin_hi,ln_smin_lo,ln_smin_hi,xmax_hi_vg,"
        "cert_passed,cert_total\n");
}

TEST_CASE("csv values round trip at 17 significant digits") {
  SweepSpec spec;
  spec.a_values = {0.07};
  spec.lambda_values = {0.04};
  spec.mode = Mode::cycle;
  const auto recs = run_sweep(spec);
  const std::string csv = to_csv(recs);
  // second line, fourth column is x_max
  const auto line = csv.substr(csv.find('\n') + 1);
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) pos = line.find(',', pos) + 1;
  const double parsed = std::stod(line.substr(pos));
  CHECK(parsed == recs[0].x_max);
}

TEST_CASE("diagonal cells keep tau_s near one") {
  SweepSpec spec;
  spec.a_values = {0.02, 0.05, 0.09};
  spec.lambda_values = {0.02, 0.05, 0.09};
  spec.mode = Mode::tau;
  const auto recs = run_sweep(spec);
  for (const auto& r : recs) {
    if (r.a == r.lambda) {
      CHECK(r.tau_s > 0.8);
      CHECK(r.tau_s < 1.2);
    }
  }
}

TEST_CASE("per-cell failures are recorded without aborting the sweep") {
  SweepSpec spec = small_spec();
  spec.mode = Mode::cycle;
  spec.max_iters = 1;  // cannot converge in one turn
  const auto recs = run_sweep(spec);
  REQUIRE(recs.size() == 9);
  for (const auto& r : recs) {
    CHECK(r.status == "not_converged");
    CHECK(std::isnan(r.x_max));
  }
}

TEST_CASE("bounds mode skips integration and fills the a-priori columns") {
  SweepSpec spec = small_spec();
  spec.mode = Mode::bounds;
  const auto recs = run_sweep(spec);
  for (const auto& r : recs) {
    CHECK(r.status == "ok");
    CHECK(std::isnan(r.x_max));
    CHECK(r.ln_xmin_lo < r.ln_xmin_hi);
    CHECK(r.ln_xmin_lo == doctest::Approx(-1.6 / r.a).epsilon(1e-12));
    CHECK(r.cert_total == 0);
  }
}

TEST_CASE("json output carries the same records") {
  SweepSpec spec;
  spec.a_values = {0.05};
  spec.lambda_values = {0.05};
  spec.mode = Mode::cycle;
  const auto recs = run_sweep(spec);
  const std::string js = to_json(recs);
  CHECK(js.find("\"x_max\"") != std::string::npos);
  CHECK(js.find("\"status\": \"ok\"") != std::string::npos);
}
