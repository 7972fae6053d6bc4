#include "smalldev/dist1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

#include "json.hpp"
#include "smalldev/logspace.hpp"
#include "smalldev/quadrature.hpp"

namespace smalldev {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;

double gauss_log_tail_std(double t) {
  // log P(|xi| > t) for standard normal, valid to t ~ 1e8.
  if (t <= 0) return 0.0;
  if (t < 30.0) return std::log(std::erfc(t / kSqrt2));
  // asymptotic: erfc(x) = e^{-x^2}/(x sqrt(pi)) * sum (-1)^k (2k-1)!!/(2x^2)^k
  double inv = 1.0 / (t * t);
  double series = 0.0, term = 1.0;
  for (int k = 0; k <= 8; ++k) {
    series += term;
    term *= -(2.0 * k + 1.0) * inv;
  }
  return -0.5 * t * t - std::log(t * std::sqrt(kPi / 2.0)) + std::log(series);
}

double gauss_log_cdf_std(double t) {
  if (t <= 0) return kNegInf;
  if (t >= 1.0) {
    double lt = gauss_log_tail_std(t);
    if (lt < -700.0) return -std::exp(lt);
    return std::log1p(-std::exp(lt));
  }
  double x = t / kSqrt2;
  if (x < 0.1) {
    double x2 = x * x;
    return std::log(2.0 * x / std::sqrt(kPi)) +
           std::log1p(-x2 / 3.0 + x2 * x2 / 10.0 - x2 * x2 * x2 / 42.0);
  }
  return std::log(std::erf(x));
}

/// log(-log P(|xi| <= x)), stable over the full range of x.
double log_neg_log_cdf(const Law& law, double x) {
  double lt = log_tail_abs(law, x);
  if (lt > -4.0) {
    double nl = -std::log1p(-std::exp(lt));
    return std::log(nl);
  }
  double T = std::exp(lt);
  return lt + std::log1p(T * (0.5 + T * (1.0 / 3.0 + T * (0.25 + T / 5.0))));
}

struct CacheState {
  std::mutex mu;
  bool dir_initialized = false;
  std::string dir;
  std::map<std::int64_t, SmallBallConstants> memo;
};
CacheState& cache_state() {
  static CacheState s;
  return s;
}

std::int64_t alpha_key(const Law& law) {
  double a = law.is_gaussian() ? 2.0 : law.alpha;
  std::int64_t k;
  std::memcpy(&k, &a, sizeof(k));
  return k;
}

std::string cache_dir_locked(CacheState& s) {
  if (!s.dir_initialized) {
    const char* env = std::getenv("SMALLDEV_CACHE");
    s.dir = env ? env : "";
    s.dir_initialized = true;
  }
  return s.dir;
}

}  // namespace

void set_constants_cache_dir(const std::string& dir) {
  CacheState& s = cache_state();
  std::lock_guard<std::mutex> lock(s.mu);
  s.dir = dir;
  s.dir_initialized = true;
}

Law Law::stable(double a) {
  if (a == 2.0) return Law{Kind::Gaussian, 2.0, kSqrt2};  // variance 2
  if (!(a > 0.0) || !(a < 2.0))
    throw std::invalid_argument("Law::stable: alpha must lie in (0, 2]");
  return Law{Kind::Stable, a, 1.0};
}

const StableLaw& Law::stable_law() const {
  if (is_gaussian()) throw std::logic_error("stable_law() on Gaussian law");
  static std::mutex mu;
  static std::map<std::int64_t, std::shared_ptr<const StableLaw>> local;
  std::int64_t k;
  std::memcpy(&k, &alpha, sizeof(k));
  std::lock_guard<std::mutex> lock(mu);
  auto it = local.find(k);
  if (it == local.end()) it = local.emplace(k, StableLaw::get(alpha)).first;
  return *it->second;
}

std::string Law::describe() const {
  if (is_gaussian())
    return scale == 1.0 ? "gaussian" : "gaussian(var=2)";
  return "stable(alpha=" + std::to_string(alpha) + ")";
}

double cdf_abs(const Law& law, double r) {
  if (r <= 0) return 0.0;
  if (law.is_gaussian()) return std::erf(r / (law.scale * kSqrt2));
  return law.stable_law().cdf_abs(r);
}

double tail_abs(const Law& law, double r) {
  if (r <= 0) return 1.0;
  if (law.is_gaussian()) return std::erfc(r / (law.scale * kSqrt2));
  return law.stable_law().tail_abs(r);
}

double log_tail_abs(const Law& law, double r) {
  if (r <= 0) return 0.0;
  if (law.is_gaussian()) return gauss_log_tail_std(r / law.scale);
  return law.stable_law().fast_log_tail_abs(r);
}

double log_cdf_abs(const Law& law, double r) {
  if (r <= 0) return kNegInf;
  if (law.is_gaussian()) return gauss_log_cdf_std(r / law.scale);
  return law.stable_law().fast_log_cdf_abs(r);
}

double density(const Law& law, double x) {
  if (law.is_gaussian()) {
    double z = x / law.scale;
    return std::exp(-0.5 * z * z) / (law.scale * std::sqrt(2.0 * kPi));
  }
  return law.stable_law().density(x);
}

// ---------------------------------------------------------------------------
// Certified constants

SmallBallConstants small_ball_constant(const Law& law) {
  CacheState& st = cache_state();
  std::int64_t key = alpha_key(law);
  {
    std::lock_guard<std::mutex> lock(st.mu);
    auto it = st.memo.find(key);
    if (it != st.memo.end()) return it->second;
    std::string dir = cache_dir_locked(st);
    if (!dir.empty()) {
      std::filesystem::path p =
          std::filesystem::path(dir) /
          ("smalldev_constants_" + std::to_string(key) + ".json");
      std::ifstream in(p);
      if (in) {
        try {
          nlohmann::json j;
          in >> j;
          if (j.value("version", 0) == 1) {
            SmallBallConstants c{j.at("A").get<double>(),
                                 j.at("c_floor").get<double>(),
                                 j.at("tail_constant").get<double>()};
            st.memo.emplace(key, c);
            return c;
          }
        } catch (...) {
          // unreadable sidecar: fall through and recompute
        }
      }
    }
  }

  SmallBallConstants c;
  c.c_floor = density(law, 1.0);
  if (law.is_gaussian()) {
    // P(|xi| <= t) >= exp(-A e^{-t^2/2}) for t >= 1 (standardized units)
    double sup = 0.0;
    for (int i = 0; i <= 400; ++i) {
      double t = 1.0 + 39.0 * i / 400.0;
      double v = std::exp(0.5 * t * t) *
                 (-gauss_log_cdf_std(t));
      sup = std::max(sup, v);
    }
    c.A = 1.05 * sup;
    c.tail_constant = 0.0;
  } else {
    const StableLaw& sl = law.stable_law();
    double sup = sl.tail_constant();
    for (int i = 0; i <= 800; ++i) {
      double r = std::pow(10.0, -4.0 + 8.0 * i / 800.0);
      double v = std::pow(r, law.alpha) * (-sl.log_cdf_abs(r));
      sup = std::max(sup, v);
    }
    c.A = 1.05 * sup;
    c.tail_constant = sl.tail_constant();
  }

  std::lock_guard<std::mutex> lock(st.mu);
  st.memo.emplace(key, c);
  std::string dir = cache_dir_locked(st);
  if (!dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::filesystem::path p =
        std::filesystem::path(dir) /
        ("smalldev_constants_" + std::to_string(key) + ".json");
    nlohmann::json j{{"version", 1},
                     {"law", law.describe()},
                     {"A", c.A},
                     {"c_floor", c.c_floor},
                     {"tail_constant", c.tail_constant}};
    std::ofstream out(p);
    if (out) out << j.dump(2) << "\n";
  }
  return c;
}

// ---------------------------------------------------------------------------
// Laplace transforms of maxima

double max_laplace(const Law& law, double L, double log_n, double tol) {
  if (L <= 0.0) return 0.0;
  log_n = std::max(0.0, log_n);
  const double Ls = law.is_gaussian() ? L * law.scale : L;
  const Law base = law.is_gaussian() ? Law::gaussian() : law;

  auto phi = [&](double y) {  // N log P(Ls |xi_std| <= y)
    if (y <= 0) return kNegInf;
    double lnl = log_neg_log_cdf(base, y / Ls);
    double e = log_n + lnl;
    if (e > 700.0) return kNegInf;
    return -std::exp(e);
  };

  // Small-deviation regime: the transform is close to 1.
  if (-phi(46.0) < 0.25) {
    auto d_int = [&](double y) {
      double p = phi(y);
      return std::exp(-y) * (-std::expm1(p));
    };
    QuadResult q = integrate(d_int, 0.0, 46.0, tol, 1e-300, 4000);
    if (q.value < 0.5) return std::log1p(-q.value);
  }

  auto g = [&](double y) { return -y + phi(y); };

  // Anchor on the median of the max and expand to a bracket.
  double q_med = 0.693147180559945 * std::exp(-log_n);
  double log_t_med =
      q_med > 1e-3 ? std::log(-std::expm1(-q_med))
                   : std::log(0.693147180559945) - log_n +
                         std::log1p(-q_med / 2.0 + q_med * q_med / 6.0);
  double m_med = quantile_from_log_tail(base, log_t_med);
  double y0 = std::max(Ls * m_med, 1e-280);

  double gm = g(y0);
  double lo = y0, hi = y0;
  for (int i = 0; i < 2400; ++i) {
    double cand = lo * 0.7;
    double v = g(cand);
    gm = std::max(gm, v);
    lo = cand;
    if (v < gm - 60.0 || cand < 1e-290) break;
  }
  for (int i = 0; i < 2400; ++i) {
    double cand = hi * 1.4 + 1.0;
    double v = g(cand);
    gm = std::max(gm, v);
    hi = cand;
    if (v < gm - 60.0) break;
  }
  return log_integral_exp(g, lo, hi, y0, tol);
}

// Envelope constants for the Gaussian max-Laplace regimes, fitted once
// against quadrature on a dense grid covering the acceptance ranges and
// padded by 3% (see tests/acceptance). Shapes:
//   small L:   L sqrt(log N)          (L <= 1, N >= 2)
//   large N:   L sqrt(log(N/L))       (N >= 2L)
//   balanced:  L                      (L/2 <= N <= 2L)
//   large L:   N log(L/N)             (L >= 2N)
namespace envelope {
constexpr double kSmallLo = 0.537, kSmallHi = 1.516;
constexpr double kLargeNLo = 0.765, kLargeNHi = 1.670;
constexpr double kBalancedLo = 0.615, kBalancedHi = 1.344;
constexpr double kLargeLLo = 0.668, kLargeLHi = 1.798;
}  // namespace envelope

MaxLaplaceEnvelope max_laplace_regime_bounds(double L, double log_n) {
  if (!(L > 0.0)) throw std::invalid_argument("regime bounds need L > 0");
  const double kLog2 = 0.693147180559945;
  MaxLaplaceEnvelope out{};
  double logL = std::log(L);
  if (L <= 1.0 && log_n >= kLog2) {
    out.regime = LaplaceRegime::SmallL;
    out.shape = L * std::sqrt(log_n);
    out.lower = envelope::kSmallLo * out.shape;
    out.upper = envelope::kSmallHi * out.shape;
  } else if (log_n >= logL + kLog2) {
    out.regime = LaplaceRegime::LargeN;
    out.shape = L * std::sqrt(log_n - logL);
    out.lower = envelope::kLargeNLo * out.shape;
    out.upper = envelope::kLargeNHi * out.shape;
  } else if (log_n <= logL - kLog2) {
    out.regime = LaplaceRegime::LargeL;
    out.shape = std::exp(log_n) * (logL - log_n);
    out.lower = envelope::kLargeLLo * out.shape;
    out.upper = envelope::kLargeLHi * out.shape;
  } else {
    out.regime = LaplaceRegime::Balanced;
    out.shape = L;
    out.lower = envelope::kBalancedLo * out.shape;
    out.upper = envelope::kBalancedHi * out.shape;
  }
  return out;
}

double laplace_heavy_saddle_constant(double alpha) {
  double p = 1.0 / (1.0 + alpha);
  return std::pow(alpha, p) + std::pow(alpha, -alpha * p);
}

double laplace_integral_heavy(double L, double alpha, double tol) {
  if (L <= 0.0) return 0.0;
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::invalid_argument("laplace_integral_heavy: alpha in (0,2)");
  auto g = [&](double y) {
    if (y <= 0) return kNegInf;
    return -y - L * std::pow(y, -alpha);
  };
  double ystar = std::pow(alpha * L, 1.0 / (1.0 + alpha));
  if (-g(std::max(ystar, 46.0)) < 46.5) {
    // transform near 1: integrate the defect
    auto d_int = [&](double y) {
      double e = -L * std::pow(y, -alpha);
      return std::exp(-y) * (-std::expm1(e));
    };
    QuadResult q = integrate(d_int, 0.0, 46.0, tol, 1e-300, 4000);
    if (q.value < 0.5) return std::log1p(-q.value);
  }
  double hi = ystar + L * std::pow(ystar, -alpha) + 60.0;
  double lo = std::max(ystar * 1e-6, 1e-290);
  return log_integral_exp(g, lo, hi, ystar, tol);
}

// ---------------------------------------------------------------------------
// Sampling

double sample(const Law& law, const RngStream& rng, std::uint64_t counter) {
  if (law.is_gaussian()) return law.scale * rng.gaussian(counter);
  auto u = rng.uniform2(counter);
  double V = kPi * (u[0] - 0.5);
  if (std::fabs(law.alpha - 1.0) <= 1e-12) return std::tan(V);
  double W = -std::log(u[1]);
  double a = law.alpha;
  // Chambers-Mallows-Stuck, symmetric case
  return std::sin(a * V) / std::pow(std::cos(V), 1.0 / a) *
         std::pow(std::cos((1.0 - a) * V) / W, (1.0 - a) / a);
}

double quantile_from_log_tail(const Law& law, double log_t) {
  if (log_t >= 0.0) return 0.0;
  if (!law.is_gaussian()) return law.stable_law().quantile_from_log_tail(log_t);

  const double s = law.scale;
  auto h = [&](double m) { return gauss_log_tail_std(m) - log_t; };
  double m;
  if (log_t > -2.0) {
    double lo = 0.0, hi = 3.0;
    for (int it = 0; it < 70; ++it) {
      double mid = 0.5 * (lo + hi);
      (h(mid) > 0 ? lo : hi) = mid;
    }
    m = 0.5 * (lo + hi);
  } else {
    m = std::sqrt(-2.0 * log_t);
    for (int it = 0; it < 3; ++it) {
      double arg = -2.0 * (log_t + std::log(m * std::sqrt(kPi / 2.0)));
      m = std::sqrt(std::max(arg, 1e-8));
    }
    for (int it = 0; it < 40; ++it) {
      double lt = gauss_log_tail_std(m);
      double resid = lt - log_t;
      if (std::fabs(resid) < 1e-13 * std::max(1.0, std::fabs(log_t))) break;
      // d/dm log_tail = -sqrt(2/pi) exp(-m^2/2 - log_tail)
      double deriv = -std::exp(0.5 * std::log(2.0 / kPi) - 0.5 * m * m - lt);
      double step = resid / deriv;
      if (!std::isfinite(step)) break;
      double next = m - step;
      if (next <= 0) next = 0.5 * m;
      m = next;
    }
  }
  return s * m;
}

double sample_max_abs(const Law& law, double log_n, const RngStream& rng,
                      std::uint64_t counter) {
  if (log_n < 0) throw std::invalid_argument("sample_max_abs: log_n >= 0");
  double u = rng.uniform(counter);
  // Solve P(|xi| <= m)^N = u, i.e. -log F(m) = (-log u)/N.
  double w = std::log(-std::log(u));
  double e = w - log_n;
  double q = std::exp(e);
  double log_t;
  if (q > 1e-3) {
    log_t = std::log(-std::expm1(-q));
  } else {
    log_t = e + std::log1p(-q / 2.0 + q * q / 6.0 - q * q * q / 24.0);
  }
  return quantile_from_log_tail(law, log_t);
}

}  // namespace smalldev
