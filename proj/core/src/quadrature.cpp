#include "smalldev/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace smalldev {
namespace {

// Kronrod-15 abscissae/weights and embedded Gauss-7 weights (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Cell {
  double a, b, value, err;
  bool operator<(const Cell& o) const { return err < o.err; }
};

Cell eval_cell(const Fn1& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double resg = 0.0, resk = 0.0;
  for (int j = 0; j < 8; ++j) {
    double fsum;
    if (j == 7) {
      fsum = f(c);
    } else {
      fsum = f(c - h * kXgk[j]) + f(c + h * kXgk[j]);
    }
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;  // j = 1,3,5 -> Gauss nodes
    if (j == 7) resg += kWg[3] * fsum;
  }
  Cell cell;
  cell.a = a;
  cell.b = b;
  cell.value = resk * h;
  double diff = std::fabs((resk - resg) * h);
  // QUADPACK-style sharpening of the raw K-G difference.
  cell.err = diff;
  if (diff > 0.0) {
    double scaled = std::pow(200.0 * diff, 1.5);
    if (scaled < diff) cell.err = scaled;
  }
  return cell;
}

}  // namespace

QuadResult gk15(const Fn1& f, double a, double b) {
  Cell c = eval_cell(f, a, b);
  return {c.value, c.err, true, 15};
}

QuadResult integrate(const Fn1& f, double a, double b, double rel_tol,
                     double abs_tol, int max_cells) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Cell> heap;
  Cell first = eval_cell(f, a, b);
  out.evaluations = 15;
  double total = first.value;
  double toterr = first.err;
  heap.push(first);
  int cells = 1;
  while (cells < max_cells) {
    double tol = std::max(abs_tol, rel_tol * std::fabs(total));
    if (toterr <= tol || heap.empty()) break;
    Cell worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) continue;  // interval exhausted
    Cell left = eval_cell(f, worst.a, mid);
    Cell right = eval_cell(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    toterr += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    ++cells;
  }
  out.value = total;
  out.error = toterr;
  out.converged = toterr <= std::max(abs_tol, rel_tol * std::fabs(total));
  return out;
}

QuadResult integrate_to_inf(const Fn1& f, double a, double rel_tol,
                            double abs_tol, int max_cells) {
  auto g = [&](double t) {
    double om = 1.0 - t;
    double x = a + t / om;
    double fx = f(x);
    if (fx == 0.0) return 0.0;
    return fx / (om * om);
  };
  return integrate(g, 0.0, 1.0, rel_tol, abs_tol, max_cells);
}

double log_integral_exp(const Fn1& h, double a, double b, double peak_hint,
                        double rel_tol) {
  const double kDrop = 46.0;  // exp(-46) ~ 1e-20
  double lo = a, hi = b;
  double x0 = std::clamp(peak_hint, a, b);

  // Golden-section refinement of the peak (h assumed unimodal).
  double gl = lo, gr = hi;
  const double phi = 0.6180339887498949;
  double m1 = gr - phi * (gr - gl), m2 = gl + phi * (gr - gl);
  double h1 = h(m1), h2 = h(m2);
  for (int it = 0; it < 80 && (gr - gl) > 1e-12 * (std::fabs(gl) + std::fabs(gr) + 1.0); ++it) {
    if (h1 < h2) {
      gl = m1;
      m1 = m2;
      h1 = h2;
      m2 = gl + phi * (gr - gl);
      h2 = h(m2);
    } else {
      gr = m2;
      m2 = m1;
      h2 = h1;
      m1 = gr - phi * (gr - gl);
      h1 = h(m1);
    }
  }
  double xpk = (h1 > h2) ? m1 : m2;
  double hpk = std::max(h1, h2);
  double h0 = h(x0);
  if (h0 > hpk) {
    xpk = x0;
    hpk = h0;
  }
  if (hpk == -std::numeric_limits<double>::infinity()) return hpk;

  // Shrink [lo, hi] to the window where the integrand is representable.
  auto find_edge = [&](double inner, double outer) {
    // h(inner) is near the peak; walk/bisect to h = hpk - kDrop.
    if (h(outer) > hpk - kDrop) return outer;
    double x_in = inner, x_out = outer;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (x_in + x_out);
      if (h(mid) > hpk - kDrop)
        x_in = mid;
      else
        x_out = mid;
    }
    return x_out;
  };
  lo = find_edge(xpk, a);
  hi = find_edge(xpk, b);

  auto g = [&](double x) { return std::exp(h(x) - hpk); };
  QuadResult left = integrate(g, lo, xpk, rel_tol, 0.0, 2000);
  QuadResult right = integrate(g, xpk, hi, rel_tol, 0.0, 2000);
  double mass = left.value + right.value;
  if (mass <= 0.0) return -std::numeric_limits<double>::infinity();
  return hpk + std::log(mass);
}

}  // namespace smalldev
