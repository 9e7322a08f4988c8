#include "rmc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rmc::bounds {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Containment with 1e-6 relative log-space slack. The margin is reported
// signed; it can be arbitrarily small on the s_max side for small a, where
// the cycle passes exponentially close to (0, 1) and the true distance to the
// endpoint drops below representable resolution.
cert::CheckEntry log_space_entry(const std::string& name, double ln_value, double ln_lo,
                                 double ln_hi) {
  cert::CheckEntry e;
  e.name = name;
  e.margin = std::min(ln_value - ln_lo, ln_hi - ln_value) /
             std::max(1.0, std::abs(ln_value));
  e.passed = e.margin > -1e-6;
  e.detail = "ln value = " + fmt(ln_value) + " vs (" + fmt(ln_lo) + ", " + fmt(ln_hi) + ")";
  return e;
}

}  // namespace

BoundSet cycle_bounds(const Params& p, double x_max_used) {
  if (!(x_max_used >= 1.0 && x_max_used <= 1.6)) {
    throw OutOfRangeError("x_max_used must lie in [1, 1.6]");
  }
  const double a = p.a();
  const double lambda = p.lambda();
  BoundSet b;
  b.kappa1 = cert::kappa1(a, lambda);
  b.kappa2 = cert::kappa2(lambda);
  b.kappa3 = cert::kappa3(a, lambda);
  b.x_max_used = x_max_used;
  b.x_max = {1.0, std::min(1.6, cert::trapping_bound(lambda, a, lambda))};
  b.s_max = {0.9, 1.0};
  b.ln_x_min = {-x_max_used / a, -x_max_used / (a * b.kappa1)};
  b.ln_s_min = {-x_max_used / (lambda * b.kappa2), -x_max_used / (lambda * b.kappa3)};
  return b;
}

BoundSet standard_unit_bounds(const StandardParams& sp, double x_max_used) {
  const Params p = from_standard(sp);
  const BoundSet scaled = cycle_bounds(p, x_max_used);
  const double px = sp.r * sp.K / sp.q;  // predator scale X = x rK/q
  const double ln_px = std::log(px);
  const double ln_k = std::log(sp.K);
  BoundSet b = scaled;
  b.x_max = {scaled.x_max.lo * px, scaled.x_max.hi * px};
  b.s_max = {scaled.s_max.lo * sp.K, scaled.s_max.hi * sp.K};
  b.ln_x_min = {scaled.ln_x_min.lo + ln_px, scaled.ln_x_min.hi + ln_px};
  b.ln_s_min = {scaled.ln_s_min.lo + ln_k, scaled.ln_s_min.hi + ln_k};
  return b;
}

LogMinApprox log_min_approximations(const Params& p, double x_max) {
  if (!(x_max >= 1.0 && x_max <= 1.6)) {
    throw OutOfRangeError("x_max must lie in [1, 1.6]");
  }
  return LogMinApprox{-x_max / p.a(), -x_max / p.lambda()};
}

cert::CertificateReport check_bounds(const LimitCycleSummary& c, const BoundSet& b) {
  cert::CertificateReport rep;
  rep.entries.push_back(log_space_entry("x_max", std::log(c.x_max),
                                        std::log(b.x_max.lo), std::log(b.x_max.hi)));
  rep.entries.push_back(log_space_entry("s_max", std::log(c.s_max),
                                        std::log(b.s_max.lo), std::log(b.s_max.hi)));
  rep.entries.push_back(
      log_space_entry("x_min", c.ln_x_min, b.ln_x_min.lo, b.ln_x_min.hi));
  rep.entries.push_back(
      log_space_entry("s_min", c.ln_s_min, b.ln_s_min.lo, b.ln_s_min.hi));
  return rep;
}

}  // namespace rmc::bounds
