#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "rmc/model.hpp"

using namespace rmc;

TEST_CASE("params enforce the open parameter square") {
  CHECK_NOTHROW(Params(0.05, 0.05));
  CHECK_NOTHROW(Params(0.099, 0.001));
  CHECK_THROWS_AS(Params(0.1, 0.05), OutOfRangeError);
  CHECK_THROWS_AS(Params(0.05, 0.1), OutOfRangeError);
  CHECK_THROWS_AS(Params(0.0, 0.05), OutOfRangeError);
  CHECK_THROWS_AS(Params(0.05, -0.01), OutOfRangeError);
  CHECK_THROWS_AS(Params(0.2, 0.05), OutOfRangeError);
}

TEST_CASE("prey isocline values") {
  CHECK(isocline_h(0.9, 0.0) == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(isocline_h(1.0, 0.05) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(isocline_h(0.1, 0.1) == doctest::Approx(0.18).epsilon(1e-14));
}

TEST_CASE("isocline positive on (0,1) with maximum at (1-a)/2") {
  for (double a : {0.01, 0.05, 0.099}) {
    const double s_peak = (1.0 - a) / 2.0;
    const double peak = isocline_h(s_peak, a);
    for (int i = 1; i < 200; ++i) {
      const double s = i / 200.0;
      CHECK(isocline_h(s, a) > 0.0);
      CHECK(isocline_h(s, a) <= peak + 1e-15);
    }
    CHECK(isocline_h(s_peak - 1e-4, a) < peak);
    CHECK(isocline_h(s_peak + 1e-4, a) < peak);
  }
}

TEST_CASE("vector field vanishes at the equilibrium") {
  for (auto [a, l] : std::vector<std::pair<double, double>>{
           {0.099, 0.099}, {0.05, 0.025}, {0.01, 0.09}}) {
    const Params p(a, l);
    const State eq = equilibrium(p);
    const Deriv d = vector_field(eq, p);
    CHECK(std::abs(d.ds) < 1e-15);
    CHECK(std::abs(d.dx) < 1e-15);
  }
}

TEST_CASE("equilibrium location") {
  const Params p1(0.1 - 1e-15, 0.1 - 1e-15);
  const State e1 = equilibrium(p1);
  CHECK(e1.x == doctest::Approx(0.18).epsilon(1e-9));
  CHECK(e1.s == doctest::Approx(0.1).epsilon(1e-9));

  const State e2 = equilibrium(Params(0.05, 0.025));
  CHECK(e2.x == doctest::Approx(0.073125).epsilon(1e-14));
  CHECK(e2.s == doctest::Approx(0.025).epsilon(1e-14));
}

TEST_CASE("vector field on the invariant axis and at an interior point") {
  const Params p(0.1 - 1e-15, 0.1 - 1e-15);
  const Deriv axis = vector_field(State{0.0, 0.5}, p);
  CHECK(axis.ds == doctest::Approx(0.15).epsilon(1e-9));
  CHECK(axis.dx == 0.0);

  const Deriv d = vector_field(State{1.0, 0.5}, p);
  CHECK(d.ds == doctest::Approx(-0.35).epsilon(1e-9));
  CHECK(d.dx == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("hopf margin") {
  CHECK(hopf_margin(0.8, 0.1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(hopf_margin(0.1, 0.1) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(hopf_margin(0.01, 0.01) == doctest::Approx(0.97).epsilon(1e-14));
  CHECK(hopf_margin(Params(0.05, 0.02)) == doctest::Approx(0.91).epsilon(1e-14));
}

TEST_CASE("log field vanishes at the equilibrium and matches the linear field") {
  const Params p(0.09, 0.09);
  const LogState eq = LogState::from(equilibrium(p));
  const LogDeriv d = log_vector_field(eq, p);
  CHECK(std::abs(d.dv) < 1e-15);
  CHECK(std::abs(d.du) < 1e-15);

  const State st{1.0, 0.5};
  const LogDeriv lf = log_vector_field(LogState::from(st), p);
  const Deriv vf = vector_field(st, p);
  CHECK(lf.dv == doctest::Approx(vf.ds / st.s).epsilon(1e-14));
  CHECK(lf.du == doctest::Approx(vf.dx / st.x).epsilon(1e-14));
}

TEST_CASE("log field is finite far below representable linear scale") {
  const Params p(0.1 - 1e-15, 0.1 - 1e-15);
  const LogDeriv d = log_vector_field(LogState{std::log(1e-60), std::log(0.5)}, p);
  CHECK(std::isfinite(d.dv));
  CHECK(std::isfinite(d.du));
  CHECK(d.dv == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(d.du == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("log/linear field consistency across the phase-plane grid") {
  const Params p(0.07, 0.03);
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double x =
          std::exp(std::log(1e-8) + (std::log(2.0) - std::log(1e-8)) * i / 99.0);
      const double s =
          std::exp(std::log(1e-8) + (std::log(1.0) - std::log(1e-8)) * j / 99.0);
      const LogDeriv lf = log_vector_field(LogState::from(State{x, s}), p);
      const Deriv vf = vector_field(State{x, s}, p);
      // componentwise scales guard against cancellation exactly on an isocline
      const double sc_v = std::abs(isocline_h(s, p)) + x;
      const double sc_u = s + p.lambda();
      CHECK(std::abs(lf.dv - vf.ds / s) <= 1e-13 * sc_v);
      CHECK(std::abs(lf.du - vf.dx / x) <= 1e-13 * sc_u);
    }
  }
}

TEST_CASE("log state round trip is exact to representation precision") {
  for (double x : {1.3, 0.01, 1e-60, 2.0}) {
    for (double s : {0.099, 0.5, 1e-40}) {
      const State st{x, s};
      const State back = LogState::from(st).to_state();
      CHECK(back.x == doctest::Approx(x).epsilon(1e-15));
      CHECK(back.s == doctest::Approx(s).epsilon(1e-15));
    }
  }
}

TEST_CASE("region classification") {
  const Params p(0.1 - 1e-15, 0.1 - 1e-15);
  CHECK(classify_region(State{1.0, 0.5}, p) == Region::r1);
  CHECK(classify_region(State{1e-4, 0.5}, p) == Region::r4);
  CHECK(classify_region(State{1.0, 0.05}, p) == Region::r2);
  CHECK(classify_region(State{1e-4, 0.05}, p) == Region::r3);

  // corner of the two isoclines: either boundary tag is acceptable
  const double h_at_lambda = isocline_h(p.lambda(), p);
  const Region corner = classify_region(State{h_at_lambda, p.lambda()}, p);
  CHECK((corner == Region::on_isocline_h || corner == Region::on_isocline_s));

  CHECK(classify_region(State{isocline_h(0.5, p), 0.5}, p) == Region::on_isocline_h);
  CHECK(classify_region(State{1.0, p.lambda()}, p) == Region::on_isocline_s);
}

TEST_CASE("classification is exhaustive and exclusive away from isoclines") {
  const Params p(0.04, 0.06);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      const double x = 1e-6 + 1.8 * i / 39.0;
      const double s = 1e-6 + 0.99 * j / 39.0;
      if (std::abs(x - isocline_h(s, p)) < 1e-6) continue;
      if (std::abs(s - p.lambda()) < 1e-6) continue;
      const Region r = classify_region(State{x, s}, p);
      const bool above_h = x > isocline_h(s, p);
      const bool above_l = s > p.lambda();
      Region expect = Region::r1;
      if (above_h && !above_l) expect = Region::r2;
      if (!above_h && !above_l) expect = Region::r3;
      if (!above_h && above_l) expect = Region::r4;
      CHECK(r == expect);
    }
  }
}

TEST_CASE("standard parameter scaling") {
  // boundary a = H/K = 0.1 is rejected, 0.099 passes
  CHECK_THROWS_AS(from_standard(StandardParams{1, 1, 1, 0.1, 1.05, 0.05}),
                  OutOfRangeError);
  const Params p1 = from_standard(StandardParams{1, 1, 1, 0.099, 1.05, 0.05});
  CHECK(p1.a() == doctest::Approx(0.099).epsilon(1e-14));
  CHECK(p1.lambda() == doctest::Approx(0.00495).epsilon(1e-14));

  const Params p2 = from_standard(StandardParams{2, 10, 3, 0.5, 2.4, 0.4});
  CHECK(p2.a() == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(p2.lambda() == doctest::Approx(0.01).epsilon(1e-14));

  CHECK_THROWS_AS(from_standard(StandardParams{1, 1, 1, 0.05, 2.0, 0.1}),
                  ScalingViolationError);
  CHECK_THROWS_AS(from_standard(StandardParams{1, -1, 1, 0.05, 1.1, 0.1}),
                  OutOfRangeError);
}

// The scaled system is the standard one under s = S/K, x = qX/(rK) and the
// time change dtau = rK/(H+S) dt. Integrating both in tau with the same
// fixed-step scheme must give matching trajectories.
TEST_CASE("scaling map is consistent with the time reparameterization") {
  const StandardParams sp{2, 10, 3, 0.5, 2.4, 0.4};
  const Params p = from_standard(sp);

  struct Xy {
    double S, X;
  };
  const auto f_std = [&sp](const Xy& y) {
    const double gS = sp.r * y.S * (1.0 - y.S / sp.K) - sp.q * y.X * y.S / (sp.H + y.S);
    const double gX = sp.p * y.X * y.S / (sp.H + y.S) - sp.d * y.X;
    const double jac = (sp.H + y.S) / (sp.r * sp.K);  // dt/dtau
    return Xy{gS * jac, gX * jac};
  };
  const auto f_scaled = [&p](const State& y) { return vector_field(y, p); };

  Xy ys{0.5 * sp.K, 1.0 * sp.r * sp.K / sp.q};  // s0 = 0.5, x0 = 1.0
  State yc{1.0, 0.5};
  const double dt = 1e-3;
  for (int i = 0; i < 20000; ++i) {
    const auto k1 = f_std(ys);
    const auto k2 = f_std(Xy{ys.S + 0.5 * dt * k1.S, ys.X + 0.5 * dt * k1.X});
    const auto k3 = f_std(Xy{ys.S + 0.5 * dt * k2.S, ys.X + 0.5 * dt * k2.X});
    const auto k4 = f_std(Xy{ys.S + dt * k3.S, ys.X + dt * k3.X});
    ys = Xy{ys.S + dt / 6 * (k1.S + 2 * k2.S + 2 * k3.S + k4.S),
            ys.X + dt / 6 * (k1.X + 2 * k2.X + 2 * k3.X + k4.X)};
    const auto c1 = f_scaled(yc);
    const auto c2 = f_scaled(State{yc.x + 0.5 * dt * c1.dx, yc.s + 0.5 * dt * c1.ds});
    const auto c3 = f_scaled(State{yc.x + 0.5 * dt * c2.dx, yc.s + 0.5 * dt * c2.ds});
    const auto c4 = f_scaled(State{yc.x + dt * c3.dx, yc.s + dt * c3.ds});
    yc = State{yc.x + dt / 6 * (c1.dx + 2 * c2.dx + 2 * c3.dx + c4.dx),
               yc.s + dt / 6 * (c1.ds + 2 * c2.ds + 2 * c3.ds + c4.ds)};
    if (i % 5000 == 4999) {
      CHECK(ys.S / sp.K == doctest::Approx(yc.s).epsilon(1e-6));
      CHECK(sp.q * ys.X / (sp.r * sp.K) == doctest::Approx(yc.x).epsilon(1e-6));
    }
  }
}
