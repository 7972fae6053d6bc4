#include "smalldev/tauber.hpp"

#include <cmath>
#include <stdexcept>

#include "smalldev/logspace.hpp"

namespace smalldev {

AsymptoticExpr taub_convert(const AsymptoticExpr& e) {
  if (e.variable != RateVariable::Lambda || e.depth != LogDepth::LogP ||
      e.a != 1.0)
    throw std::invalid_argument("taub_convert: expected -lambda(log)^b(loglog)^d shape");
  AsymptoticExpr out;
  out.variable = RateVariable::Eps;
  out.c = std::nullopt;
  if (e.b < 0.0) {
    double tau = -e.b, theta = e.d;
    out.depth = LogDepth::LogLogP;
    out.a = 1.0 / tau;
    out.b = theta / tau;
    out.d = 0.0;
    return out;
  }
  if (e.b == 0.0 && e.d < 0.0) {
    double theta = -e.d;
    out.depth = LogDepth::LogLogLogP;
    out.a = 1.0 / theta;
    out.b = 0.0;
    out.d = 0.0;
    return out;
  }
  throw std::invalid_argument("taub_convert: shape mismatch (need b<0 or b=0,d<0)");
}

AsymptoticExpr taub_invert(const AsymptoticExpr& e) {
  if (e.variable != RateVariable::Eps)
    throw std::invalid_argument("taub_invert: expected an eps-side rate");
  AsymptoticExpr out;
  out.variable = RateVariable::Lambda;
  out.depth = LogDepth::LogP;
  out.c = std::nullopt;
  out.a = 1.0;
  if (e.depth == LogDepth::LogLogP) {
    double tau = 1.0 / e.a;
    out.b = -tau;
    out.d = e.b * tau;
    return out;
  }
  if (e.depth == LogDepth::LogLogLogP && e.b == 0.0) {
    out.b = 0.0;
    out.d = -1.0 / e.a;
    return out;
  }
  throw std::invalid_argument("taub_invert: shape mismatch");
}

AsymptoticExpr debruijn_convert(double C, double p, double q) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("debruijn_convert: p must lie in (0,1)");
  AsymptoticExpr out;
  out.variable = RateVariable::Eps;
  out.depth = LogDepth::LogP;
  out.a = p / (1.0 - p);
  out.b = q / (1.0 - p);
  out.d = 0.0;
  if (q == 0.0 && C > 0.0) {
    out.c = (1.0 - p) * std::pow(p, p / (1.0 - p)) * std::pow(C, 1.0 / (1.0 - p));
  }
  return out;
}

namespace {

struct GridScan {
  double best_lambda = 0.0;
  double best = kInf;
  int best_index = -1;
  int count = 0;
};

template <class Obj>
GridScan scan(const Obj& f, double lo, double hi, int per_decade) {
  GridScan s;
  int n = std::max(2, int(std::log10(hi / lo) * per_decade) + 1);
  double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    double lam = lo * std::exp(i * step);
    double v = f(lam);
    if (v < s.best) {
      s.best = v;
      s.best_lambda = lam;
      s.best_index = i;
    }
    ++s.count;
  }
  return s;
}

}  // namespace

double chebyshev_upper(double eps, const LaplaceFn& log_laplace,
                       LambdaGrid grid) {
  if (!(eps > 0.0)) throw std::invalid_argument("chebyshev_upper: eps > 0");
  auto obj = [&](double lam) { return lam * eps + log_laplace(lam); };
  double lo = grid.lo, hi = grid.hi;
  GridScan s = scan(obj, lo, hi, grid.per_decade);
  for (int ext = 0; ext < grid.max_extensions; ++ext) {
    if (s.best_index == 0 && lo > 1e-12) {
      lo /= 10.0;
    } else if (s.best_index == s.count - 1) {
      hi *= 10.0;
    } else {
      break;
    }
    s = scan(obj, lo, hi, grid.per_decade);
  }
  // local refinement around the discrete minimizer
  double span = std::pow(10.0, 1.0 / grid.per_decade);
  double rlo = s.best_lambda / span, rhi = s.best_lambda * span;
  GridScan r = scan(obj, rlo, rhi, 16 * grid.per_decade);
  double bound = std::min(s.best, r.best);
  return std::min(bound, 0.0);
}

std::optional<double> laplace_to_prob_lower(double eps,
                                            const LaplaceFn& log_laplace_lower,
                                            LambdaGrid grid) {
  if (!(eps > 0.0)) throw std::invalid_argument("laplace_to_prob_lower: eps > 0");
  auto value_at = [&](double lam) -> double {
    double la = log_laplace_lower(lam);
    double sub = -lam * eps;
    if (la <= sub) return kNegInf;
    return log_diff_exp(la, sub);
  };
  double lo = grid.lo, hi = grid.hi;
  double best = kNegInf, best_lambda = 0.0;
  int best_index = -1, count = 0;
  auto sweep = [&]() {
    best = kNegInf;
    best_index = -1;
    int n = std::max(2, int(std::log10(hi / lo) * grid.per_decade) + 1);
    double step = std::log(hi / lo) / (n - 1);
    count = n;
    for (int i = 0; i < n; ++i) {
      double lam = lo * std::exp(i * step);
      double v = value_at(lam);
      if (v > best) {
        best = v;
        best_lambda = lam;
        best_index = i;
      }
    }
  };
  sweep();
  for (int ext = 0; ext < grid.max_extensions; ++ext) {
    if (best_index <= 0 && lo > 1e-12) {
      lo /= 10.0;
    } else if (best_index == count - 1) {
      hi *= 10.0;
    } else {
      break;
    }
    sweep();
  }
  if (best == kNegInf) return std::nullopt;
  double span = std::pow(10.0, 1.0 / grid.per_decade);
  for (int i = 0; i <= 64; ++i) {
    double lam = best_lambda / span * std::exp(i * std::log(span * span) / 64.0);
    best = std::max(best, value_at(lam));
  }
  return std::min(best, 0.0);
}

}  // namespace smalldev
