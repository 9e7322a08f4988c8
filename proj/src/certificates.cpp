#include "rmc/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rmc::cert {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// z_hat = 1/sqrt(k^2 - 4k) from ln k, stable when k would overflow.
double z_hat_from_ln_k(double ln_k) {
  if (ln_k > 350.0) return std::exp(-ln_k);
  const double k = std::exp(ln_k);
  return 1.0 / std::sqrt(k * (k - 4.0));
}

CheckEntry make_entry(std::string name, double margin, std::string detail) {
  CheckEntry e;
  e.name = std::move(name);
  e.margin = margin;
  e.passed = margin > 0.0;
  e.detail = std::move(detail);
  return e;
}

}  // namespace

bool CertificateReport::all_passed() const noexcept {
  for (const auto& e : entries) {
    if (!e.passed) return false;
  }
  return true;
}

int CertificateReport::passed_count() const noexcept {
  int n = 0;
  for (const auto& e : entries) n += e.passed ? 1 : 0;
  return n;
}

Region2Constants region2_constants(double a, double lambda, double c1, double c2) {
  if (!(0.0 < c2 && c2 < c1 && c1 < 1.0)) {
    throw OutOfRangeError("strip levels must satisfy 0 < c2 < c1 < 1");
  }
  Region2Constants rc;
  rc.c1 = c1;
  rc.c2 = c2;
  rc.C1 = (1.0 - c1 + std::log(c1)) * lambda;
  rc.C2 = (c1 - c2 + std::log(c2 / c1)) * lambda;
  rc.H0 = a + lambda;
  rc.H1 = a + c1 * lambda;
  rc.H2 = a + c2 * lambda;
  rc.M = c2 / c1;
  rc.A = (1.0 - c1) * lambda / rc.H1;
  return rc;
}

Region2Constants region2_constants(const Params& p, double c1, double c2) {
  return region2_constants(p.a(), p.lambda(), c1, c2);
}

double trapping_bound(double s, double a, double lambda) noexcept {
  const double alpha = 2.0 - lambda + a;
  const double beta = (lambda + 1.0) / (a - 2.0 * lambda + 3.0);
  return alpha * (1.0 - s) / (1.0 + beta * (1.0 - s));
}

double trapping_bound(double s, const Params& p) noexcept {
  return trapping_bound(s, p.a(), p.lambda());
}

CheckEntry verify_trapping_region(const Params& p, int n) {
  if (n < 100) throw OutOfRangeError("need at least 100 samples");
  const double a = p.a();
  const double lambda = p.lambda();
  const double alpha = 2.0 - lambda + a;
  const double beta = (lambda + 1.0) / (a - 2.0 * lambda + 3.0);

  // dV/dtau at x = V_g(s): V = (1 + beta(1-s)) x - alpha (1-s).
  const auto v_dot = [&](double s) {
    const double x = trapping_bound(s, a, lambda);
    const double sdot = (isocline_h(s, a) - x) * s;
    const double xdot = (s - lambda) * x;
    return (1.0 + beta * (1.0 - s)) * xdot + (alpha - beta * x) * sdot;
  };

  double worst = -std::numeric_limits<double>::infinity();
  double worst_s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = (i + 1.0) / (n + 1.0);
    const double vd = v_dot(s);
    if (vd > worst) {
      worst = vd;
      worst_s = s;
    }
  }
  const double at_one = std::abs(v_dot(1.0));
  const double margin = std::min(-worst, 1e-12 - at_one);
  return make_entry("trapping_region_inward_flow", margin,
                    "max dV/dtau = " + fmt(worst) + " at s = " + fmt(worst_s) +
                        ", |dV/dtau(1)| = " + fmt(at_one));
}

double region1_barrier(double s) {
  if (!(s >= 0.1 && s <= 0.9)) {
    throw OutOfDomainError("barrier defined on [0.1, 0.9]");
  }
  if (s > 0.7) return 0.513 + 1.33 * s - 2.0 * s * s;
  if (s > 0.5) return 1.045 - 0.13 * s - s * s;
  if (s > 0.3) return 1.08 - 0.2 * s - s * s;
  return 0.975 + 0.45 * s - 2.0 * s * s;
}

CheckEntry verify_region1_barrier(int n_per_piece) {
  if (n_per_piece < 100) throw OutOfRangeError("need at least 100 samples per piece");
  // Frozen worst case: the barrier is transversal for a = 0, lambda = 0.1 and
  // trajectories only cross it faster for any admissible (a, lambda).
  const double a = 0.0;
  const double lambda = 0.1;
  struct Piece {
    double lo, hi;
    double slope0, slope1;  // f' = slope0 + slope1 * s
  };
  const Piece pieces[4] = {
      {0.1, 0.3, 0.45, -4.0},
      {0.3, 0.5, -0.2, -2.0},
      {0.5, 0.7, -0.13, -2.0},
      {0.7, 0.9, 1.33, -4.0},
  };
  double worst = std::numeric_limits<double>::infinity();
  double worst_s = 0.0;
  for (const Piece& pc : pieces) {
    for (int i = 0; i < n_per_piece; ++i) {
      const double s = pc.lo + (pc.hi - pc.lo) * i / (n_per_piece - 1.0);
      const double x = region1_barrier(s);
      const double sdot = (isocline_h(s, a) - x) * s;
      const double xdot = (s - lambda) * x;
      const double fprime = pc.slope0 + pc.slope1 * s;
      const double y_dot = xdot - fprime * sdot;
      if (y_dot < worst) {
        worst = y_dot;
        worst_s = s;
      }
    }
  }
  return make_entry("region1_barrier_transversality", worst,
                    "min d(x - f(s))/dtau = " + fmt(worst) + " at s = " + fmt(worst_s));
}

double energy(double x, double s, double H, double lambda) noexcept {
  return x - H * std::log(x) + s - lambda * std::log(s);
}

double theta(double x, double H) noexcept {
  return x - H * std::log(x);
}

ThetaRoot solve_theta_small_branch(double C, double H) {
  if (!(H > 0.0 && H <= 0.2)) {
    throw OutOfDomainError("theta solve requires 0 < H <= 0.2");
  }
  if (!(C > theta(H, H))) {
    throw AssumptionError(Assumption::theta_level,
                          "assumption violated (theta_level): C = " + fmt(C) +
                              " <= theta(H) = " + fmt(theta(H, H)));
  }
  const double ln_k = std::log(H) + C / H;
  if (!(ln_k > std::log(4.0))) {
    throw AssumptionError(Assumption::theta_bracket,
                          "assumption violated (theta_bracket): k = H exp(C/H) = " +
                              fmt(std::exp(ln_k)) + " <= 4");
  }
  const double z = z_hat_from_ln_k(ln_k);

  // Bisection on w = ln x over [-C/H, ln H]; g(w) = e^w - H w - C is strictly
  // decreasing there with g(-C/H) = exp(-C/H) > 0 > g(ln H) = theta(H) - C.
  double w_lo = -C / H;
  double w_hi = std::log(H);
  double w = 0.5 * (w_lo + w_hi);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (w_lo + w_hi);
    if (mid == w_lo || mid == w_hi) break;
    w = mid;
    const double g = std::exp(w) - H * w - C;
    if (g > 0.0) {
      w_lo = w;
    } else {
      w_hi = w;
    }
  }

  ThetaRoot out;
  out.ln_x = w;
  out.x = std::exp(w);
  out.lo = std::exp(-C / H);
  out.hi = out.lo * (1.0 + z);
  out.k = ln_k > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(ln_k);
  out.z_hat = z;
  return out;
}

double q_root_plus(double H, double C, double u) {
  if (!(H > 0.0 && H <= 0.2)) {
    throw OutOfDomainError("drop root requires 0 < H <= 0.2");
  }
  if (!(H < u)) throw OutOfDomainError("drop root requires H < u");
  const double gap = std::sqrt(u) - std::sqrt(H);
  if (!(C > -gap * gap && C <= 0.0)) {
    throw OutOfDomainError("drop root requires -(sqrt(u)-sqrt(H))^2 < C <= 0");
  }
  const double B = H + C + u;
  const double disc = B * B - 4.0 * H * u;
  // disc = (C + gap^2)(C + (sqrt(u)+sqrt(H))^2) > 0 under the checks above.
  return 0.5 * (B + std::sqrt(std::max(disc, 0.0)));
}

XminUpperChain xmin_upper_chain(double a, double lambda, double x0, double c1,
                                double c2) {
  if (!(x0 > 0.0) || !std::isfinite(x0)) {
    throw OutOfRangeError("x0 must be positive and finite");
  }
  XminUpperChain ch;
  ch.rc = region2_constants(a, lambda, c1, c2);
  const Region2Constants& rc = ch.rc;

  double gap = std::sqrt(x0) - std::sqrt(rc.H0);
  if (!(x0 > rc.H0) || !(rc.C1 > -gap * gap)) {
    throw AssumptionError(Assumption::strip1_root,
                          "assumption violated (strip1_root): C1 = " + fmt(rc.C1) +
                              " <= -(sqrt(x0)-sqrt(H0))^2 = " + fmt(-gap * gap));
  }
  ch.x1_plus = q_root_plus(rc.H0, rc.C1, x0);

  gap = std::sqrt(ch.x1_plus) - std::sqrt(rc.H1);
  if (!(ch.x1_plus > rc.H1) || !(rc.C2 > -gap * gap)) {
    throw AssumptionError(Assumption::strip2_root,
                          "assumption violated (strip2_root): C2 = " + fmt(rc.C2) +
                              " <= -(sqrt(x1+)-sqrt(H1))^2 = " + fmt(-gap * gap));
  }
  ch.x2_plus = q_root_plus(rc.H1, rc.C2, ch.x1_plus);

  ch.c_tilde = theta(ch.x2_plus, rc.H2);
  const double ln_k = std::log(rc.H2) + ch.c_tilde / rc.H2;
  if (!(ln_k > std::log(4.0))) {
    throw AssumptionError(Assumption::theta_bracket,
                          "assumption violated (theta_bracket): k = H2 exp(C~/H2) = " +
                              fmt(std::exp(ln_k)) + " <= 4");
  }
  ch.k = ln_k > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(ln_k);
  ch.z_hat = z_hat_from_ln_k(ln_k);

  const double ln_ma = rc.A * std::log(rc.M);
  ch.ln_bound = std::log1p(ch.z_hat) + ln_ma - ch.c_tilde / rc.H2;
  ch.bound = std::exp(ch.ln_bound);

  // Frozen variant: strip roots at a = lambda = 0.1, x0 = 1.
  const double C1s = (1.0 - c1 + std::log(c1)) * 0.1;
  const double C2s = (c1 - c2 + std::log(c2 / c1)) * 0.1;
  const double H0s = 0.2;
  const double H1s = 0.1 * (1.0 + c1);
  const double x1s = q_root_plus(H0s, C1s, 1.0);
  const double x2s = q_root_plus(H1s, C2s, x1s);
  const double d1s = 1.0 - H0s / x1s;
  const double d2s = 1.0 - H1s / x2s;
  ch.x2_frozen = x0 + rc.C1 / d1s + rc.C2 / d2s;
  if (!(ch.x2_frozen > 0.0)) {
    throw OutOfDomainError("frozen drop estimate collapsed to non-positive value");
  }
  ch.ln_bound_frozen =
      std::log1p(ch.z_hat) + ln_ma - theta(ch.x2_frozen, rc.H2) / rc.H2;
  ch.bound_frozen = std::exp(ch.ln_bound_frozen);
  return ch;
}

XminUpperChain xmin_upper_chain(const Params& p, double x0, double c1, double c2) {
  return xmin_upper_chain(p.a(), p.lambda(), x0, c1, c2);
}

double xmin_upper_sharp(double a, double lambda, double x0) {
  // Assumption machinery as for the general chain with default strips.
  xmin_upper_chain(a, lambda, x0, default_c1, default_c2);
  const double H1 = a + default_c1 * lambda;
  const double H2 = a + default_c2 * lambda;
  const double A = (1.0 - default_c1) * lambda / H1;
  const double x2t = x0 - 3.8 * lambda;
  return 1.015 * std::exp(-2.0 * A - theta(x2t, H2) / H2);
}

double xmin_upper_sharp(const Params& p, double x0) {
  return xmin_upper_sharp(p.a(), p.lambda(), x0);
}

double kappa1(double a, double lambda) noexcept {
  return (1.0 + std::exp(-2.0) * lambda / a) / (1.0 - 2.1 * lambda - 0.31 * a);
}

double kappa2(double lambda) noexcept {
  return 1.0 / (1.0 + lambda * (1.0 - std::log(lambda)));
}

double kappa3(double a, double lambda) {
  const double den = 1.0 - 0.3 * lambda - a * (1.3 - std::log(a));
  if (!(den > 0.0)) {
    throw OutOfRangeError("kappa3 denominator not positive; parameters outside range");
  }
  return 1.0 / den;
}

XminBracket xmin_bracket(double a, double lambda, double x0) {
  XminBracket b;
  b.kappa1 = kappa1(a, lambda);
  b.ln_lo = -x0 / a;
  b.ln_hi = -x0 / (a * b.kappa1);
  return b;
}

SminBracket smin_bracket(double a, double lambda, double x0) {
  SminBracket b;
  b.kappa2 = kappa2(lambda);
  b.kappa3 = kappa3(a, lambda);
  b.ln_lo = -x0 / (lambda * b.kappa2);
  b.ln_hi = -x0 / (lambda * b.kappa3);
  return b;
}

double region4_growth_ln(double s, double a, double lambda) {
  if (!(s >= lambda && s < 1.0)) {
    throw OutOfDomainError("growth envelope defined for s in [lambda, 1)");
  }
  const double k2 = lambda / a;
  const double k3 = (1.0 - lambda) / (1.0 + a);
  const double ln_e12 = k2 * (std::log(s + a) - std::log(s) + std::log(lambda) -
                              std::log(a + lambda));
  const double ln_e34 = k3 * (std::log(s + a) + std::log(1.0 - lambda) -
                              std::log(1.0 - s) - std::log(a + lambda));
  return ln_e12 + ln_e34;
}

double region4_growth(double s, double a, double lambda) {
  return std::exp(region4_growth_ln(s, a, lambda));
}

double region4_growth_ln(double s, const Params& p) {
  return region4_growth_ln(s, p.a(), p.lambda());
}

double region4_growth(double s, const Params& p) {
  return region4_growth(s, p.a(), p.lambda());
}

double region4_height_bound(double a, double lambda, double k, double s7, double x0) {
  if (!(k > 0.0 && k < 1.0)) throw OutOfRangeError("k must lie in (0, 1)");
  if (!(s7 >= 0.5 && s7 < 1.0)) throw OutOfRangeError("s7 must lie in [0.5, 1)");
  const double H1 = a + default_c1 * lambda;
  const double H2 = a + default_c2 * lambda;
  const double A = (1.0 - default_c1) * lambda / H1;
  const double x2t = x0 - 3.8 * lambda;
  const double ln_k7 = (lambda / s7 + std::log((s7 + a) / (1.0 - s7))) / k;
  const double ln_inv = -std::log(a + lambda) / k;
  const double ln_sharp = std::log(1.015) - 2.0 * A - theta(x2t, H2) / H2;
  return std::exp(ln_k7 + ln_inv + ln_sharp);
}

double region4_exit_prey(double x7, double s7, double m) {
  if (!(m > 0.0 && m <= s7 && s7 < 1.0)) {
    throw OutOfDomainError("exit estimate requires 0 < m <= s7 < 1");
  }
  if (!(x7 > 0.0 && x7 < m * (1.0 - s7))) {
    throw OutOfDomainError("exit estimate requires 0 < x7 < m (1 - s7)");
  }
  const double d = s7 + x7 / (1.0 + m) - 1.0;
  if (!(d < 0.0)) throw OutOfDomainError("exit estimate requires d < 0");
  const double p = m / (m + 1.0);
  const double one_minus_s = std::pow(-d, 1.0 / (m + 1.0)) * std::pow(x7, p) *
                             std::pow(1.0 + m, 1.0 / (m + 1.0)) / std::pow(m, p);
  return 1.0 - one_minus_s;
}

CertificateReport certify_cycle(const LimitCycleSummary& c, const CycleCrossings& cr,
                                const Params& p) {
  const double a = p.a();
  const double lambda = p.lambda();
  const double x0 = c.x_max;
  CertificateReport rep;

  {
    const double vg = trapping_bound(lambda, a, lambda);
    const double margin = std::min(x0 - 1.0, vg - x0);
    rep.entries.push_back(make_entry(
        "xmax_window", margin, "1 < x_max = " + fmt(x0) + " < V_g(lambda) = " + fmt(vg)));
  }
  {
    const Region2Constants rc = region2_constants(a, lambda);
    const double x1p = q_root_plus(rc.H0, rc.C1, x0);
    const double b1 = x0 + rc.C1 / (1.0 - rc.H0 / x1p);
    const double x2p = q_root_plus(rc.H1, rc.C2, x1p);
    const double b2 = b1 + rc.C2 / (1.0 - rc.H1 / x2p);
    const double margin = std::min(cr.x1 - b1, cr.x2 - b2);
    rep.entries.push_back(make_entry("region2_entry_lower_bounds", margin,
                                     "x1 = " + fmt(cr.x1) + " > " + fmt(b1) +
                                         ", x2 = " + fmt(cr.x2) + " > " + fmt(b2)));
  }
  {
    const double b = x0 - 3.8 * lambda;
    rep.entries.push_back(make_entry("x2_linear_drop", cr.x2 - b,
                                     "x2 = " + fmt(cr.x2) + " > x_max - 3.8 lambda = " +
                                         fmt(b)));
  }
  {
    const XminBracket b = xmin_bracket(a, lambda, x0);
    const double ln_sharp = std::log(xmin_upper_sharp(a, lambda, x0));
    const double margin = std::min({cr.ln_x6 - b.ln_lo, b.ln_hi - cr.ln_x6,
                                    ln_sharp - cr.ln_x6});
    rep.entries.push_back(
        make_entry("xmin_bracket_refined", margin,
                   "ln x_min = " + fmt(cr.ln_x6) + " in (" + fmt(b.ln_lo) + ", " +
                       fmt(std::min(b.ln_hi, ln_sharp)) + ")"));
  }
  {
    const Region2Constants rc = region2_constants(a, lambda);
    const double bound = cr.ln_x4 + rc.A * std::log(rc.M);
    rep.entries.push_back(make_entry("region3_passage_factor", bound - cr.ln_x5,
                                     "ln x5 = " + fmt(cr.ln_x5) +
                                         " < ln x4 + A ln M = " + fmt(bound)));
  }
  {
    const SminBracket b = smin_bracket(a, lambda, x0);
    const ThetaRoot lo = solve_theta_small_branch(theta(x0, a), a);
    const ThetaRoot hi = solve_theta_small_branch(theta(x0, a + lambda), a + lambda);
    const double margin =
        std::min({cr.ln_s3 - b.ln_lo, b.ln_hi - cr.ln_s3, cr.ln_x6 - lo.ln_x,
                  hi.ln_x - cr.ln_x6});
    rep.entries.push_back(make_entry(
        "smin_bracket_energy", margin,
        "ln s_min = " + fmt(cr.ln_s3) + " in (" + fmt(b.ln_lo) + ", " + fmt(b.ln_hi) +
            "); ln x_min in (" + fmt(lo.ln_x) + ", " + fmt(hi.ln_x) + ")"));
  }
  {
    rep.entries.push_back(make_entry("region4_crossing_height", 0.012 - cr.x7,
                                     "x at s = 0.8 ascent = " + fmt(cr.x7) +
                                         " < 0.012"));
  }
  {
    rep.entries.push_back(make_entry("region4_exit_level", cr.s8 - 0.9,
                                     "s_max = " + fmt(cr.s8) + " > 0.9"));
  }
  return rep;
}

}  // namespace rmc::cert
