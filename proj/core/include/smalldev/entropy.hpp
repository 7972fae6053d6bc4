#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smalldev/tauber.hpp"

// Entropy majorants Psi and their integral transforms. A profile evaluates
// its defining formula on (0, sigma) and equals 1 from sigma on; the
// non-increasing / >= 1 requirements hold in each family's intended regime
// (checked by regularity_report, not clamped into the formula, so that the
// transforms keep their closed forms).

namespace smalldev {

enum class ProfileFamily {
  Polynomial,      // Psi = C eps^{-gamma}
  LogPower,        // Psi = C |log eps|^beta
  ExpLogPower,     // Psi = C exp(A |log eps|^alpha_hat)
  CriticalStable,  // Psi = C eps^{-alpha} |log eps|^{-beta}
  ExpPolyLog,      // log Psi = C eps^{-gamma} |log eps|^{-beta}
  Tabulated,
};

struct EntropyProfile {
  ProfileFamily family = ProfileFamily::Polynomial;
  double sigma = 1.0;
  double C = 1.0;
  double gamma = 0.0;      // Polynomial / ExpPolyLog exponent
  double beta = 0.0;       // log-power exponent
  double A = 0.0;          // ExpLogPower amplitude
  double alpha_hat = 0.0;  // ExpLogPower exponent in (0,1)
  double alpha = 0.0;      // CriticalStable polynomial exponent
  // Tabulated knots in (log eps, log Psi), decreasing in eps.
  std::vector<double> knot_log_eps;
  std::vector<double> knot_log_psi;

  static EntropyProfile polynomial(double gamma, double C = 1.0, double sigma = 1.0);
  static EntropyProfile log_power(double C, double beta, double sigma = 1.0);
  static EntropyProfile exp_log_power(double C, double A, double alpha_hat,
                                      double sigma = 1.0);
  static EntropyProfile critical_stable(double C, double alpha, double beta,
                                        double sigma = 1.0);
  static EntropyProfile exp_poly_log(double C, double gamma, double beta,
                                     double sigma = 1.0);

  double value(double eps) const;      // Psi(eps); 1 for eps >= sigma
  double log_value(double eps) const;  // log Psi(eps)

  /// Limit of Psi(eps/2)/Psi(eps) as eps -> 0 (inf for ExpPolyLog; estimated
  /// from the deep knots for tabulated profiles).
  double halving_ratio_limit() const;

  /// Upper edge of the region where the formula is guaranteed non-increasing.
  double monotone_upper_limit() const;

  std::string describe() const;
};

/// Monotone log-log interpolant of user-supplied (eps, psi) pairs given in
/// decreasing eps; sigma is inferred as the smallest eps with psi = 1.
/// Non-monotone, non-positive, or psi < 1 input throws std::invalid_argument
/// naming the first offending index.
EntropyProfile ingest_tabulated(const std::vector<std::pair<double, double>>& pairs);

double eval_profile(const EntropyProfile& p, double eps);

/// Int_eps^sigma Psi(u)/u du for eps <= sigma/2; Psi(eps) for eps >= sigma/2.
double psi_tilde(const EntropyProfile& p, double eps, double tol = 1e-8);

/// Int_0^eps (Psi(u)/u)^{1/(alpha+1)} du, or nullopt when the integral
/// diverges (detected from non-decaying dyadic cell contributions).
std::optional<double> psi_hat(const EntropyProfile& p, double eps, double alpha,
                              double tol = 1e-8);

struct GridSpec {
  int j_min = 1;
  int j_max = 40;  // dyadic grid eps = sigma * 2^{-j}
};

struct RegularityReport {
  double c1_best = 1.0;  // min over the grid of Psi(eps/2)/Psi(eps)
  double c2_best = 1.0;  // max over the grid of the same ratio
  std::vector<double> grid;
};

RegularityReport regularity_report(const EntropyProfile& p, GridSpec spec = {});

enum class TheoremId { Thm1, Thm2, Thm3, Thm4, Thm5, Thm8 };
std::string theorem_name(TheoremId id);

struct HypothesisCheck {
  TheoremId theorem;
  bool applicable = false;
  std::string reason;
};

struct RegimeDecision {
  std::vector<TheoremId> applicable;
  std::vector<HypothesisCheck> reasons;
  // Predicted rate where the theory states one in power-log form.
  std::vector<std::pair<TheoremId, AsymptoticExpr>> predicted;

  bool lists(TheoremId id) const;
  std::optional<AsymptoticExpr> prediction(TheoremId id) const;
};

/// alpha = 2 selects the Gaussian branch; alpha in (0,2) the stable one.
RegimeDecision classify_regime(const EntropyProfile& p, double alpha,
                               const RegularityReport& report);

enum class Boundedness { Bounded, Unbounded, Unknown };

/// Sufficient boundedness test for symmetric stable processes: finite
/// psi_hat at sigma under C1 > 1, or the critical-profile condition
/// beta > max(1, alpha). Never returns Unbounded.
Boundedness boundedness_test(const EntropyProfile& p, double alpha);

}  // namespace smalldev
