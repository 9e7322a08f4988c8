#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rmc/cycle.hpp"
#include "rmc/model.hpp"

// Evaluators and numerical verifiers for the barrier curves, energy
// functions, bracket equations and the Region-4 exit estimate that certify a
// computed cycle against the closed-form analysis. The scalar evaluators take
// raw (a, lambda) and are valid on the closed square [0, 0.1]^2: several
// frozen worst cases sit exactly on the boundary that the strict Params
// gate excludes.
namespace rmc::cert {

/// Default strip levels for the Region-2 analysis, c1 = e^-2, c2 = e^-4.
inline const double default_c1 = std::exp(-2.0);
inline const double default_c2 = std::exp(-4.0);

/// Derived constants for the Region-2 drop estimates with strip levels
/// s = c1*lambda and s = c2*lambda:
///   C1 = (1 - c1 + ln c1) lambda,  C2 = (c1 - c2 + ln(c2/c1)) lambda  (< 0)
///   H0 = a + lambda > H1 = a + c1 lambda > H2 = a + c2 lambda > a
///   M  = c2/c1,  A = (1 - c1) lambda / H1
struct Region2Constants {
  double c1, c2;
  double C1, C2;
  double H0, H1, H2;
  double M, A;
};

Region2Constants region2_constants(double a, double lambda, double c1 = default_c1,
                                   double c2 = default_c2);
Region2Constants region2_constants(const Params& p, double c1 = default_c1,
                                   double c2 = default_c2);

struct CheckEntry {
  std::string name;
  bool passed = false;
  double margin = 0.0;  // signed so that positive implies passed
  std::string detail;
};

struct CertificateReport {
  std::vector<CheckEntry> entries;

  bool all_passed() const noexcept;
  int passed_count() const noexcept;
};

/// Trapping curve V_g(s) = alpha (1-s) / (1 + beta (1-s)) with
/// alpha = 2 - lambda + a, beta = (lambda + 1)/(a - 2 lambda + 3). All
/// trajectories enter x < V_g(s) and stay there.
double trapping_bound(double s, double a, double lambda) noexcept;
double trapping_bound(double s, const Params& p) noexcept;

/// Samples n points on x = V_g(s), s in (0, 1), and checks that the time
/// derivative of V = (1 + beta(1-s)) x - alpha (1-s) along the field is
/// non-positive, vanishing only at s = 1.
CheckEntry verify_trapping_region(const Params& p, int n);

/// Piecewise-quadratic lower barrier forcing the Region-1 exit value above 1,
/// defined on [0.1, 0.9] with breakpoints at 0.3, 0.5, 0.7.
double region1_barrier(double s);

/// Checks transversality of the barrier for the frozen worst case a = 0,
/// lambda = 0.1: the time derivative of x - f(s) on x = f(s) is positive on
/// each piece (n samples per piece, endpoints included).
CheckEntry verify_region1_barrier(int n_per_piece);

/// U(x, s) = x - H ln x + s - lambda ln s.
double energy(double x, double s, double H, double lambda) noexcept;

/// theta(x) = x - H ln x; decreasing below its minimum at x = H.
double theta(double x, double H) noexcept;

/// Unique root of theta(x) = C on the branch x < H, with the certified
/// bracket exp(-C/H) < x < (1 + z_hat) exp(-C/H), z_hat = 1/sqrt(k^2 - 4k),
/// k = H exp(C/H). Requires 0 < H <= 0.2, C > theta(H) and k > 4.
struct ThetaRoot {
  double x;
  double ln_x;      // authoritative for tiny roots
  double lo, hi;    // certified bracket (linear)
  double k, z_hat;
};

ThetaRoot solve_theta_small_branch(double C, double H);

/// Larger root of x^2 - (H + C + u)x + Hu on (sqrt(Hu), u); satisfies the
/// fixed-point identity x+ = u + C/(1 - H/x+). Requires 0 < H <= 0.2, H < u
/// and -(sqrt(u) - sqrt(H))^2 < C <= 0.
double q_root_plus(double H, double C, double u);

/// Refined upper bound for the minimal predator value x6 reached at the
/// Region-2/3 exit, for the default strip levels:
///   1.015 exp(-2A - theta(x0 - 3.8 lambda)/H2).
double xmin_upper_sharp(double a, double lambda, double x0);
double xmin_upper_sharp(const Params& p, double x0);

/// General-strip upper bound chain for x6. `bound` composes the two strip
/// drop roots; `bound_frozen` replaces them by their frozen worst-case values
/// at a = lambda = 0.1, x0 = 1. The three existence assumptions are checked
/// explicitly and violations surface as AssumptionError naming the failed one.
struct XminUpperChain {
  Region2Constants rc;
  double x1_plus, x2_plus;
  double c_tilde;  // theta(x2_plus, H2)
  double k, z_hat;
  double ln_bound, bound;
  double x2_frozen;
  double ln_bound_frozen, bound_frozen;
};

XminUpperChain xmin_upper_chain(double a, double lambda, double x0, double c1,
                                double c2);
XminUpperChain xmin_upper_chain(const Params& p, double x0, double c1 = default_c1,
                                double c2 = default_c2);

/// Two-sided bracket for the minimal predator value:
///   exp(-x0/a) < x6 < exp(-x0/(a kappa1)).
struct XminBracket {
  double ln_lo, ln_hi;
  double kappa1;
};

XminBracket xmin_bracket(double a, double lambda, double x0);

/// Two-sided bracket for the minimal prey value:
///   exp(-x0/(lambda kappa2)) < s3 < exp(-x0/(lambda kappa3)).
struct SminBracket {
  double ln_lo, ln_hi;
  double kappa2, kappa3;
};

SminBracket smin_bracket(double a, double lambda, double x0);

double kappa1(double a, double lambda) noexcept;
double kappa2(double lambda) noexcept;
double kappa3(double a, double lambda);

/// Region-4 growth envelope B(s) = E1 E2 E3 E4 (the trajectory satisfies
/// x < x6 B^(1/k) while below x = (1-k) h(s)). ln form is authoritative.
double region4_growth_ln(double s, double a, double lambda);
double region4_growth(double s, double a, double lambda);
double region4_growth_ln(double s, const Params& p);
double region4_growth(double s, const Params& p);

/// Gate value eta(a, lambda) bounding the trajectory height at the s = s7
/// crossing in Region 4, built from the refined x6 bound with x0 = 1:
///   K7 (1/(a+lambda))^(1/k) * 1.015 exp(-2A - theta(x0 - 3.8 lambda)/H2),
/// K7 = (exp(lambda/s7) (s7+a)/(1-s7))^(1/k).
double region4_height_bound(double a, double lambda, double k, double s7,
                            double x0 = 1.0);

/// Prey level at which the comparison trajectory through (x7, s7) leaves the
/// region x < m(1-s): solves the linear-system envelope for 1 - s.
double region4_exit_prey(double x7, double s7, double m);

/// Runs the eight certificate checks on a converged cycle, each with a signed
/// margin (positive means satisfied): the x_max window, the two Region-2
/// entry lower bounds, the linear drop bound on x2, the x_min bracket plus
/// refined upper bound, the Region-3 passage factor, the s_min bracket plus
/// the two-sided energy bracket on x_min, the Region-4 crossing height, and
/// the Region-4 exit level.
CertificateReport certify_cycle(const LimitCycleSummary& c, const CycleCrossings& cr,
                                const Params& p);

}  // namespace rmc::cert
