#pragma once

#include <functional>

// Adaptive Gauss-Kronrod (7-15) quadrature with global error control.
// Integrands with |log u| factors are handled by the callers via the
// substitution u = e^{-t}, after which everything here sees smooth data.

namespace smalldev {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;       // conservative absolute error estimate
  bool converged = false;   // tolerance met before the cell budget ran out
  int evaluations = 0;
};

using Fn1 = std::function<double(double)>;

/// Integrate f over [a, b] until error <= max(abs_tol, rel_tol*|value|).
QuadResult integrate(const Fn1& f, double a, double b, double rel_tol,
                     double abs_tol = 0.0, int max_cells = 4000);

/// Integrate f over [a, +inf) via x = a + t/(1-t).
QuadResult integrate_to_inf(const Fn1& f, double a, double rel_tol,
                            double abs_tol = 0.0, int max_cells = 4000);

/// Single non-adaptive GK15 pass over [a, b]; error is |K15 - G7|.
QuadResult gk15(const Fn1& f, double a, double b);

/// log of integral of exp(h) over [a, b], where h is unimodal with an
/// interior or boundary peak near peak_hint. The integration window is
/// clipped to h > h_max - 46; contributions below that are lost in double
/// rounding anyway.
double log_integral_exp(const Fn1& h, double a, double b, double peak_hint,
                        double rel_tol);

}  // namespace smalldev
