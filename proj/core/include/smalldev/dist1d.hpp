#pragma once

#include <memory>
#include <string>
#include <vector>

#include "smalldev/rng.hpp"

// One-dimensional law machinery for the standard Gaussian and standard
// symmetric alpha-stable distributions (characteristic function e^{-|u|^a}).
// Everything is scale-1; callers handle scaling through their layer radii.

namespace smalldev {

/// Symmetric alpha-stable law, 0 < alpha < 2. Construction precomputes the
/// piecewise-Chebyshev log-CDF tables used on hot paths; instances are
/// immutable afterwards and safe to share across threads.
class StableLaw {
 public:
  explicit StableLaw(double alpha);

  double alpha() const { return alpha_; }

  // Reference-accuracy evaluations (series / Fourier dispatch).
  double cdf_abs(double r) const;       // P(|X| <= r)
  double tail_abs(double r) const;      // P(|X| > r)
  double log_tail_abs(double r) const;  // valid for arbitrarily large r
  double log_cdf_abs(double r) const;
  double density(double x) const;

  // Table-backed evaluations for inner loops (~1e-11 absolute).
  double fast_log_cdf_abs(double r) const;
  double fast_log_tail_abs(double r) const;

  /// Solve log P(|X| > m) = log_t for m.
  double quantile_from_log_tail(double log_t) const;

  double density_at_zero() const { return f0_; }
  /// Leading tail constant: P(|X| > r) ~ tail_c * r^{-alpha}.
  double tail_constant() const { return tail_c_; }

  /// Shared per-alpha instances (tables are built once per process).
  static std::shared_ptr<const StableLaw> get(double alpha);

 private:
  double maclaurin_cdf(double r, bool* ok) const;
  double tail_series(double r, bool* ok, double* log_form) const;
  double fourier_cdf(double r) const;
  void build_tables();

  double alpha_;
  double f0_;        // density at 0: Gamma(1/a)/(pi a)
  double tail_c_;    // (2/pi) Gamma(a) sin(pi a / 2)
  double r_tail_ok_; // tail series trusted from here on

  struct Cheb;
  std::shared_ptr<const Cheb> log_cdf_table_;   // log F on mid-range
  std::shared_ptr<const Cheb> log_tail_table_;  // log T on mid-range
};

struct Law {
  enum class Kind { Gaussian, Stable };
  Kind kind = Kind::Gaussian;
  double alpha = 2.0;  // stable index; 2 means the Gaussian branch
  double scale = 1.0;  // Gaussian std; alpha = 2 requests map to sqrt(2)

  static Law gaussian() { return Law{Kind::Gaussian, 2.0, 1.0}; }
  static Law stable(double a);  // a == 2 -> Gaussian with variance 2
  bool is_gaussian() const { return kind == Kind::Gaussian; }
  const StableLaw& stable_law() const;

  std::string describe() const;
};

/// Certified small-ball/tail constants for a law:
///   exp(-A r^{-alpha}) <= P(|xi| <= r) for all r > 0 (stable branch), and
///   P(|xi| <= t) >= c_floor * t for t in [0, 1].
/// For the Gaussian branch A certifies P(|xi| <= t) >= exp(-A e^{-t^2/2})
/// for t >= 1.
struct SmallBallConstants {
  double A = 0.0;
  double c_floor = 0.0;
  double tail_constant = 0.0;  // stable: lim r^alpha P(|xi| > r)
};

double cdf_abs(const Law& law, double r);
double tail_abs(const Law& law, double r);
double log_cdf_abs(const Law& law, double r);
double log_tail_abs(const Law& law, double r);
double density(const Law& law, double x);

SmallBallConstants small_ball_constant(const Law& law);

/// log E exp(-L max_{i<=N} |xi_i|) = log Int_0^inf e^{-y} P(L|xi| <= y)^N dy.
/// N is supplied as its natural logarithm; the N log P exponent is assembled
/// from the upper tail via log1p so counts up to e^{1e6} are exact.
double max_laplace(const Law& law, double L, double log_n, double tol = 1e-9);

enum class LaplaceRegime { SmallL, LargeN, Balanced, LargeL };

struct MaxLaplaceEnvelope {
  LaplaceRegime regime;
  double shape;  // envelope shape evaluated at (L, N)
  double lower;  // certified lower bound on -log E exp(-L max)
  double upper;  // certified upper bound
};

/// Regime-split envelopes for the Gaussian max-Laplace transform with
/// constants fitted once against quadrature (see dist1d.cpp). Partition:
/// L <= 1 first, then N >= 2L, N <= L/2, and the balanced band.
MaxLaplaceEnvelope max_laplace_regime_bounds(double L, double log_n);

/// log Int_0^inf exp(-y - L y^{-alpha}) dy.
double laplace_integral_heavy(double L, double alpha, double tol = 1e-9);
/// Saddle-point constant: the integral above is ~ exp(-C_a L^{1/(1+a)}).
double laplace_heavy_saddle_constant(double alpha);

double sample(const Law& law, const RngStream& rng, std::uint64_t counter);

/// One draw of max_{i <= round(e^{log_n})} |xi_i| via the quantile transform;
/// exact for astronomically large counts.
double sample_max_abs(const Law& law, double log_n, const RngStream& rng,
                      std::uint64_t counter);

/// Solve P(|xi| > m) = e^{log_t} for m.
double quantile_from_log_tail(const Law& law, double log_t);

/// Directory for the per-alpha constants sidecar (reads SMALLDEV_CACHE when
/// unset). Empty string disables persistence.
void set_constants_cache_dir(const std::string& dir);

}  // namespace smalldev
