#pragma once

#include <functional>
#include <optional>
#include <vector>

// Conversions between Laplace-transform asymptotics and small deviation
// asymptotics: exponent arithmetic on the two rate shapes used by the
// theory, plus numeric Chebyshev-type bounds at concrete arguments.

namespace smalldev {

/// Which iterated logarithm of the probability (or of the Laplace transform)
/// the rate describes.
enum class LogDepth { LogP, LogLogP, LogLogLogP };
enum class RateVariable { Eps, Lambda };

/// Rate shape c * x^{-a} * |log x|^{b} * (log|log x|)^{d} with x = eps, or
/// c * lambda^{a} * (log lambda)^{b} * (log log lambda)^{d}.
struct AsymptoticExpr {
  LogDepth depth = LogDepth::LogP;
  RateVariable variable = RateVariable::Eps;
  std::optional<double> c;  // leading constant; empty = unknown
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
};

/// Exponent map of the iterated-log Tauberian lemma. Accepts
///   log E e^{-lambda V} ~ -lambda (log lambda)^{-tau} (log log lambda)^{theta}
/// (depth LogP at Lambda with a=1, b=-tau<0) and returns the matching
///   log|log P(V<=eps)| ~ eps^{-1/tau} |log eps|^{theta/tau}
/// at depth LogLogP; the pure loglog shape (b=0, d=-theta<0) maps to depth
/// LogLogLogP with exponent 1/theta. Constants do not transfer.
AsymptoticExpr taub_convert(const AsymptoticExpr& at_lambda);

/// Inverse of taub_convert on the exponent maps.
AsymptoticExpr taub_invert(const AsymptoticExpr& at_eps);

/// de Bruijn conversion: log E e^{-lambda V} ~ -C lambda^p (log lambda)^q,
/// 0 < p < 1, gives log P(V <= eps) ~ -C' eps^{-p/(1-p)} |log eps|^{q/(1-p)}
/// with C' = (1-p) p^{p/(1-p)} C^{1/(1-p)} when q = 0 (constant marked
/// unknown otherwise).
AsymptoticExpr debruijn_convert(double C, double p, double q = 0.0);

using LaplaceFn = std::function<double(double)>;  // lambda -> log E e^{-lambda V}

struct LambdaGrid {
  double lo = 1.0;
  double hi = 1e6;
  int per_decade = 64;
  int max_extensions = 24;  // one-decade growth steps on either side
};

/// Exponential-Chebyshev upper bound on log P(V <= eps):
/// min over the grid of (lambda*eps + log-Laplace), with the grid extended
/// until the discrete minimum is interior (or the extension budget is spent).
double chebyshev_upper(double eps, const LaplaceFn& log_laplace,
                       LambdaGrid grid = {});

/// Lower bound from P(V <= eps) >= E e^{-lambda V} - e^{-lambda eps};
/// empty when the difference is non-positive on the whole grid.
std::optional<double> laplace_to_prob_lower(double eps,
                                            const LaplaceFn& log_laplace_lower,
                                            LambdaGrid grid = {});

}  // namespace smalldev
