#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "raisac/error.hpp"

namespace raisac {

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_floor = 1e-15;
  int max_depth = 40;
};

namespace detail {

struct SimpsonPanel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

inline double simpson_recurse(const std::function<double(double)>& f, const SimpsonPanel& p,
                              double eps, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
  const double right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  if (depth <= 0) throw Error(ErrorKind::MaxDepthExceeded, "adaptive Simpson did not converge");
  return simpson_recurse(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * eps, depth - 1) +
         simpson_recurse(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * eps, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson integration of f over [a, b]. The absolute target is
/// rel_tol times a 16-panel composite estimate, floored at abs_floor.
/// Throws Error(MaxDepthExceeded) when a panel fails to converge.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               const QuadratureOptions& opt = {}) {
  if (a == b) return 0.0;
  constexpr int kPanels = 16;
  const double h = (b - a) / kPanels;
  double coarse = 0.0;
  detail::SimpsonPanel panels[kPanels];
  double f_left = f(a);
  for (int i = 0; i < kPanels; ++i) {
    const double pa = a + h * i;
    const double pb = (i == kPanels - 1) ? b : a + h * (i + 1);
    const double pm = 0.5 * (pa + pb);
    const double fm = f(pm);
    const double fb = f(pb);
    const double whole = (pb - pa) / 6.0 * (f_left + 4.0 * fm + fb);
    panels[i] = {pa, pm, pb, f_left, fm, fb, whole};
    coarse += whole;
    f_left = fb;
  }
  const double eps = std::max(opt.abs_floor, opt.rel_tol * std::abs(coarse)) / kPanels;
  double total = 0.0;
  for (const auto& p : panels) total += detail::simpson_recurse(f, p, eps, opt.max_depth);
  return total;
}

}  // namespace raisac
