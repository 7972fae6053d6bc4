#pragma once

#include <cmath>
#include <limits>
#include <span>

// Log-domain arithmetic helpers. Probabilities and their powers are carried
// as logarithms throughout the library; these primitives keep the extreme
// ranges (|log p| up to ~1e300) free of catastrophic cancellation.

namespace smalldev {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// log(1 - e^x) for x < 0.
inline double log1mexp(double x) {
  if (x >= 0.0) return std::numeric_limits<double>::quiet_NaN();
  static const double kLog2 = std::log(2.0);
  if (x > -kLog2) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

/// log(e^a - e^b), requires a >= b.
inline double log_diff_exp(double a, double b) {
  if (b == kNegInf) return a;
  if (a == b) return kNegInf;
  return a + log1mexp(b - a);
}

/// log(e^a + e^b).
inline double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

/// Compensated (Kahan) accumulator; summation order is fixed by the caller,
/// which keeps results independent of threading decisions.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double kahan_total(std::span<const double> xs) {
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace smalldev
