#include "rmc/model.hpp"

#include <cmath>
#include <string>

namespace rmc {

namespace {

void require_finite_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw OutOfRangeError(std::string(name) + " must be strictly positive");
  }
}

}  // namespace

Params::Params(double a, double lambda) : a_(a), lambda_(lambda) {
  if (!(a > 0.0 && a < 0.1)) {
    throw OutOfRangeError("a = " + std::to_string(a) + " outside (0, 0.1)");
  }
  if (!(lambda > 0.0 && lambda < 0.1)) {
    throw OutOfRangeError("lambda = " + std::to_string(lambda) + " outside (0, 0.1)");
  }
}

void StandardParams::validate() const {
  require_finite_positive(r, "r");
  require_finite_positive(K, "K");
  require_finite_positive(q, "q");
  require_finite_positive(H, "H");
  require_finite_positive(p, "p");
  require_finite_positive(d, "d");
}

LogState LogState::from(const State& st) {
  return LogState{std::log(st.x), std::log(st.s)};
}

State LogState::to_state() const {
  return State{std::exp(u), std::exp(v)};
}

double isocline_h(double s, double a) noexcept {
  return (1.0 - s) * (s + a);
}

double isocline_h(double s, const Params& p) noexcept {
  return isocline_h(s, p.a());
}

Deriv vector_field(const State& st, const Params& p) noexcept {
  return Deriv{(isocline_h(st.s, p.a()) - st.x) * st.s, (st.s - p.lambda()) * st.x};
}

LogDeriv log_vector_field(const LogState& ls, const Params& p) noexcept {
  const double s = std::exp(ls.v);
  const double x = std::exp(ls.u);
  return LogDeriv{isocline_h(s, p.a()) - x, s - p.lambda()};
}

Region classify_region(const State& st, const Params& p, double tol) noexcept {
  const double dh = st.x - isocline_h(st.s, p.a());
  const double dl = st.s - p.lambda();
  if (std::abs(dh) <= tol) return Region::on_isocline_h;
  if (std::abs(dl) <= tol) return Region::on_isocline_s;
  if (dh > 0.0) return dl > 0.0 ? Region::r1 : Region::r2;
  return dl > 0.0 ? Region::r4 : Region::r3;
}

State equilibrium(const Params& p) noexcept {
  return State{(1.0 - p.lambda()) * (p.lambda() + p.a()), p.lambda()};
}

double hopf_margin(double a, double lambda) noexcept {
  return 1.0 - 2.0 * lambda - a;
}

double hopf_margin(const Params& p) noexcept {
  return hopf_margin(p.a(), p.lambda());
}

Params from_standard(const StandardParams& sp) {
  sp.validate();
  const double b = (sp.p - sp.d) / sp.r;
  if (std::abs(b - 1.0) > 1e-9) {
    throw ScalingViolationError("(p - d)/r = " + std::to_string(b) + ", expected 1");
  }
  return Params(sp.H / sp.K, sp.d * sp.H / (sp.r * sp.K));
}

}  // namespace rmc
