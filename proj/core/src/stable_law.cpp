#include "smalldev/dist1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "smalldev/logspace.hpp"
#include "smalldev/quadrature.hpp"

// Numerical scheme for the standard symmetric alpha-stable law,
// cf exp(-|u|^alpha). No closed form exists except alpha = 1 (Cauchy), so
// the CDF of |X| is assembled from three routes with guarded validity:
//   - Maclaurin series in r (convergent for alpha > 1, asymptotic below);
//   - Bergstrom tail series in r^{-alpha} (convergent for alpha < 1,
//     asymptotic above), carried in log form for huge r;
//   - Fourier inversion (2/pi) Int sin(ru)/u e^{-u^alpha} du, integrated
//     half-period by half-period. The oscillation count is r * 42^{1/alpha},
//     which stays small exactly where the series routes fail.
// Validity thresholds are calibrated at construction by cross-probing the
// routes against each other.

namespace smalldev {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoOverPi = 0.63661977236758134308;

double cauchy_cdf_abs(double r) { return kTwoOverPi * std::atan(r); }

}  // namespace

// ---------------------------------------------------------------------------
// Piecewise Chebyshev interpolation in t = log r.

struct StableLaw::Cheb {
  double t_lo = 0, t_hi = 0;
  int panels = 0;
  int order = 16;
  std::vector<double> coef;  // panels * order, Chebyshev coefficients

  bool covers(double t) const { return t >= t_lo && t <= t_hi; }

  double eval(double t) const {
    double w = (t_hi - t_lo) / panels;
    int p = std::min(panels - 1, std::max(0, int((t - t_lo) / w)));
    double a = t_lo + p * w, b = a + w;
    double x = 2.0 * (t - a) / (b - a) - 1.0;
    const double* c = &coef[size_t(p) * order];
    // Clenshaw
    double b1 = 0, b2 = 0;
    for (int j = order - 1; j >= 1; --j) {
      double tmp = 2.0 * x * b1 - b2 + c[j];
      b2 = b1;
      b1 = tmp;
    }
    return x * b1 - b2 + c[0];
  }

  template <class F>
  static Cheb build(double t_lo, double t_hi, int panels, const F& f) {
    Cheb out;
    out.t_lo = t_lo;
    out.t_hi = t_hi;
    out.panels = panels;
    const int n = out.order;
    out.coef.resize(size_t(panels) * n);
    double w = (t_hi - t_lo) / panels;
    std::vector<double> fx(n);
    for (int p = 0; p < panels; ++p) {
      double a = t_lo + p * w, b = a + w;
      for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.5) / n);
        fx[i] = f(0.5 * (a + b) + 0.5 * (b - a) * x);
      }
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int i = 0; i < n; ++i)
          s += fx[i] * std::cos(kPi * j * (i + 0.5) / n);
        out.coef[size_t(p) * n + j] = (j == 0 ? 1.0 : 2.0) * s / n;
      }
    }
    return out;
  }
};

// ---------------------------------------------------------------------------

StableLaw::StableLaw(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::invalid_argument("StableLaw: alpha must lie in (0, 2)");
  f0_ = std::tgamma(1.0 / alpha) / (kPi * alpha);
  tail_c_ = kTwoOverPi * std::tgamma(alpha) * std::sin(kPi * alpha / 2.0);
  r_tail_ok_ = 2.0;
  if (std::fabs(alpha - 1.0) > 1e-12) build_tables();
}

// Maclaurin: F(r) = (2/pi) sum_k (-1)^k G((2k+1)/a) r^{2k+1} / (a(2k+1)(2k)!)
// Returns with *ok=false when the truncation error or the cancellation level
// is incompatible with ~1e-13 absolute accuracy.
double StableLaw::maclaurin_cdf(double r, bool* ok) const {
  *ok = false;
  if (r <= 0) {
    *ok = true;
    return 0.0;
  }
  const double lr = std::log(r);
  KahanSum sum;
  double max_t = 0.0, prev = kInf;
  for (int k = 0; k < 400; ++k) {
    double m = 2.0 * k + 1.0;
    double lt = std::lgamma(m / alpha_) + m * lr - std::log(alpha_) -
                std::log(m) - std::lgamma(m + 1.0);
    double t = std::exp(lt);
    if (t > prev) {
      // asymptotic turnover: accept only if the smallest term is negligible
      if (prev < 1e-17 && max_t < 1e3) *ok = true;
      return kTwoOverPi * sum.value();
    }
    sum.add((k % 2 == 0) ? t : -t);
    max_t = std::max(max_t, t);
    prev = t;
    if (t < 1e-17 * std::max(1e-300, std::fabs(sum.value())) && k > 1) {
      if (max_t < 1e3) *ok = true;
      return kTwoOverPi * sum.value();
    }
  }
  return 0.0;
}

// Bergstrom tail: T(r) = (2/pi) sum_{k>=1} (-1)^{k+1} G(ak)/k! sin(k pi a/2)
// r^{-ak}. If log_form is non-null it receives log T assembled from the
// leading term, valid for arbitrarily large r.
double StableLaw::tail_series(double r, bool* ok, double* log_form) const {
  *ok = false;
  if (r <= 1e-2) return 0.0;
  const double lr = std::log(r);
  const double s1 = std::sin(kPi * alpha_ / 2.0);
  const double lt1 = std::lgamma(alpha_) - alpha_ * lr;  // k = 1, minus k!=1
  KahanSum rel;  // sum of t_k / |t_1|, k >= 2
  double max_rel = 0.0, prev = kInf;
  bool accepted = false;
  for (int k = 2; k <= 220; ++k) {
    double lt = std::lgamma(alpha_ * k) - std::lgamma(k + 1.0) - alpha_ * k * lr;
    double mag = std::exp(lt - lt1);
    if (mag > prev) {
      accepted = prev < 1e-15;
      break;
    }
    double sk = std::sin(kPi * alpha_ * k / 2.0);
    rel.add(((k % 2 == 1) ? -1.0 : 1.0) * mag * sk / s1);
    max_rel = std::max(max_rel, mag);
    prev = mag;
    if (mag < 1e-17) {
      accepted = true;
      break;
    }
  }
  if (!accepted || max_rel > 1e6) return 0.0;
  double rel_sum = rel.value();  // sum t_k/t_1 beyond the leading term
  if (rel_sum <= -1.0) return 0.0;
  *ok = true;
  if (log_form) *log_form = std::log(kTwoOverPi * s1) + lt1 + std::log1p(rel_sum);
  return kTwoOverPi * s1 * std::exp(lt1) * (1.0 + rel_sum);
}

double StableLaw::fourier_cdf(double r) const {
  if (r <= 0) return 0.0;
  const double u_max = std::pow(42.0, 1.0 / alpha_);
  auto f = [&](double u) {
    if (u == 0.0) return r;
    return std::sin(r * u) / u * std::exp(-std::pow(u, alpha_));
  };
  if (r * u_max <= 30.0) {
    QuadResult q = integrate(f, 0.0, u_max, 1e-14, 1e-15, 6000);
    return kTwoOverPi * q.value;
  }
  // Half-period cells; each is smooth enough for a single GK15 pass.
  KahanSum acc;
  double step = kPi / r;
  long n_cells = long(u_max / step) + 1;
  for (long j = 0; j < n_cells; ++j) {
    double a = j * step, b = std::min(u_max, (j + 1) * step);
    if (a >= u_max) break;
    acc.add(gk15(f, a, b).value);
    if (std::exp(-std::pow(b, alpha_)) < 1e-19) break;
  }
  return kTwoOverPi * acc.value();
}

double StableLaw::cdf_abs(double r) const {
  if (r <= 0) return 0.0;
  if (std::fabs(alpha_ - 1.0) <= 1e-12) return cauchy_cdf_abs(r);
  bool ok = false;
  if (r >= 0.5) {
    double t = tail_series(r, &ok, nullptr);
    if (ok) return 1.0 - t;
  }
  double v = maclaurin_cdf(r, &ok);
  if (ok) return std::min(1.0, v);
  if (r < 0.5) {
    double t = tail_series(r, &ok, nullptr);
    if (ok) return 1.0 - t;
  }
  return std::min(1.0, std::max(0.0, fourier_cdf(r)));
}

double StableLaw::tail_abs(double r) const {
  if (r <= 0) return 1.0;
  if (std::fabs(alpha_ - 1.0) <= 1e-12) return kTwoOverPi * std::atan(1.0 / r);
  bool ok = false;
  double t = tail_series(r, &ok, nullptr);
  if (ok) return t;
  return std::max(0.0, 1.0 - cdf_abs(r));
}

double StableLaw::log_tail_abs(double r) const {
  if (r <= 0) return 0.0;
  if (std::fabs(alpha_ - 1.0) <= 1e-12)
    return std::log(kTwoOverPi) + std::log(std::atan(1.0 / r));
  bool ok = false;
  double lf = 0.0;
  tail_series(r, &ok, &lf);
  if (ok) return lf;
  double t = 1.0 - cdf_abs(r);
  return std::log(std::max(t, 1e-300));
}

double StableLaw::log_cdf_abs(double r) const {
  if (r <= 0) return kNegInf;
  if (std::fabs(alpha_ - 1.0) <= 1e-12)
    return std::log(cauchy_cdf_abs(r));
  double F = cdf_abs(r);
  if (F > 0.5) return std::log1p(-tail_abs(r));
  if (F > 0.0) return std::log(F);
  // deep small-r regime: leading Maclaurin term in log form
  return std::log(kTwoOverPi / alpha_) + std::lgamma(1.0 / alpha_) + std::log(r);
}

double StableLaw::density(double x) const {
  x = std::fabs(x);
  if (std::fabs(alpha_ - 1.0) <= 1e-12) return 1.0 / (kPi * (1.0 + x * x));
  // Maclaurin attempt
  if (x < 3.0) {
    KahanSum sum;
    double max_t = 0, prev = kInf;
    double lx = x > 0 ? std::log(x) : kNegInf;
    bool ok = false;
    for (int k = 0; k < 300; ++k) {
      double lt = std::lgamma((2.0 * k + 1.0) / alpha_) -
                  std::lgamma(2.0 * k + 1.0) + (k == 0 ? 0.0 : 2.0 * k * lx);
      if (x == 0.0 && k > 0) break;
      double t = std::exp(lt);
      if (t > prev) {
        ok = prev < 1e-16 && max_t < 1e3;
        break;
      }
      sum.add((k % 2 == 0) ? t : -t);
      max_t = std::max(max_t, t);
      prev = t;
      if (t < 1e-17) {
        ok = max_t < 1e3;
        break;
      }
    }
    if (ok || x == 0.0) return sum.value() / (kPi * alpha_);
  }
  // tail series attempt
  {
    KahanSum sum;
    double max_t = 0, prev = kInf;
    double lx = std::log(x);
    bool ok = false;
    for (int k = 1; k <= 200; ++k) {
      double lt = std::lgamma(alpha_ * k + 1.0) - std::lgamma(k + 1.0) -
                  (alpha_ * k + 1.0) * lx;
      double mag = std::exp(lt);
      if (mag > prev) {
        ok = prev < 1e-16;
        break;
      }
      sum.add(((k % 2 == 1) ? 1.0 : -1.0) * mag *
              std::sin(kPi * alpha_ * k / 2.0));
      max_t = std::max(max_t, mag);
      prev = mag;
      if (mag < 1e-17) {
        ok = true;
        break;
      }
    }
    if (ok && max_t < 1e6) return sum.value() / kPi;
  }
  // Fourier fallback
  const double u_max = std::pow(42.0, 1.0 / alpha_);
  auto f = [&](double u) {
    return std::cos(x * u) * std::exp(-std::pow(u, alpha_));
  };
  if (x * u_max <= 30.0) return integrate(f, 0, u_max, 1e-13, 1e-16).value / kPi;
  KahanSum acc;
  double step = kPi / x;
  for (long j = 0;; ++j) {
    double a = j * step, b = std::min(u_max, (j + 1) * step);
    if (a >= u_max) break;
    acc.add(gk15(f, a, b).value);
  }
  return acc.value() / kPi;
}

void StableLaw::build_tables() {
  // trusted range of the 12-term log-form tail series used by fast paths
  bool ok = false;
  double r_tail_min = 5.0;
  while (r_tail_min > 0.05) {
    double probe = r_tail_min * 0.85;
    tail_series(probe, &ok, nullptr);
    if (!ok) break;
    r_tail_min = probe;
  }
  tail_series(r_tail_min, &ok, nullptr);
  while (!ok && r_tail_min < 1e4) {
    r_tail_min *= 1.15;
    tail_series(r_tail_min, &ok, nullptr);
  }
  r_tail_ok_ = std::max(1.5, r_tail_min);

  // median of |X| by bisection
  double lo = 1e-3, hi = 1e6;
  for (int it = 0; it < 200; ++it) {
    double mid = std::sqrt(lo * hi);
    (cdf_abs(mid) < 0.5 ? lo : hi) = mid;
  }
  double r_half = std::sqrt(lo * hi);

  double t_lo = std::log(1e-3);
  double t_mid_hi = std::log(std::max(2.0 * r_half, 2e-3));
  int panels1 = std::max(6, int((t_mid_hi - t_lo) / 0.5) + 1);
  log_cdf_table_ = std::make_shared<const Cheb>(Cheb::build(
      t_lo, t_mid_hi, panels1, [&](double t) {
        double r = std::exp(t);
        double F = cdf_abs(r);
        return F > 0.5 ? std::log1p(-tail_abs(r)) : std::log(F);
      }));

  double t2_lo = std::log(std::max(0.5 * r_half, 1e-3));
  double t2_hi = std::log(r_tail_ok_ * 1.1);
  if (t2_hi <= t2_lo) t2_hi = t2_lo + 0.5;
  int panels2 = std::max(6, int((t2_hi - t2_lo) / 0.5) + 1);
  log_tail_table_ = std::make_shared<const Cheb>(Cheb::build(
      t2_lo, t2_hi, panels2,
      [&](double t) { return std::log(std::max(tail_abs(std::exp(t)), 1e-300)); }));
}

double StableLaw::fast_log_cdf_abs(double r) const {
  if (r <= 0) return kNegInf;
  if (std::fabs(alpha_ - 1.0) <= 1e-12)
    return std::log(cauchy_cdf_abs(r));
  double t = std::log(r);
  if (log_cdf_table_ && log_cdf_table_->covers(t)) return log_cdf_table_->eval(t);
  if (t < log_cdf_table_->t_lo) return log_cdf_abs(r);
  // upper region: assemble from the tail
  double lt = fast_log_tail_abs(r);
  if (lt >= 0.0) return log_cdf_abs(r);
  return log1mexp(lt);
}

double StableLaw::fast_log_tail_abs(double r) const {
  if (r <= 0) return 0.0;
  if (std::fabs(alpha_ - 1.0) <= 1e-12)
    return std::log(kTwoOverPi) + std::log(std::atan(1.0 / r));
  double t = std::log(r);
  if (r >= r_tail_ok_) {
    bool ok = false;
    double lf = 0.0;
    tail_series(r, &ok, &lf);
    if (ok) return lf;
  }
  if (log_tail_table_ && log_tail_table_->covers(t)) return log_tail_table_->eval(t);
  if (t > log_tail_table_->t_hi) return log_tail_abs(r);
  double lc = fast_log_cdf_abs(r);
  if (lc >= 0.0) return log_tail_abs(r);
  return log1mexp(lc);
}

double StableLaw::quantile_from_log_tail(double log_t) const {
  if (log_t >= 0.0) return 0.0;
  double T = std::exp(log_t);
  // initial guess from the two ends
  double guess;
  if (T < 0.2) {
    guess = std::pow(std::max(tail_c_, 1e-300) / T, 1.0 / alpha_);
    if (!std::isfinite(guess))
      guess = std::exp((std::log(tail_c_) - log_t) / alpha_);
  } else {
    guess = std::max(1e-12, (1.0 - T) / (2.0 * f0_));
  }
  double lo = guess, hi = guess;
  auto g = [&](double m) { return fast_log_tail_abs(m) - log_t; };  // decreasing
  int grow = 0;
  while (g(lo) < 0 && grow++ < 400) lo *= 0.5;
  grow = 0;
  while (g(hi) > 0 && grow++ < 400) hi *= 2.0;
  for (int it = 0; it < 80; ++it) {
    double mid = std::sqrt(lo * hi);
    (g(mid) > 0 ? lo : hi) = mid;
    if (hi - lo <= 1e-13 * hi) break;
  }
  return std::sqrt(lo * hi);
}

std::shared_ptr<const StableLaw> StableLaw::get(double alpha) {
  static std::mutex mu;
  static std::map<std::int64_t, std::shared_ptr<const StableLaw>> registry;
  std::int64_t key;
  static_assert(sizeof(key) == sizeof(alpha));
  std::memcpy(&key, &alpha, sizeof(key));
  std::lock_guard<std::mutex> lock(mu);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second;
  auto law = std::make_shared<const StableLaw>(alpha);
  registry.emplace(key, law);
  return law;
}

}  // namespace smalldev
