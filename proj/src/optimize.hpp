#pragma once

// Small unconstrained minimisers for the two-parameter likelihoods.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace condgof::detail {

using Vec2 = std::array<double, 2>;

/// Returns f(x) and writes the gradient into `grad`. Non-finite f means
/// "outside the domain" and makes the line search back off.
using Objective2 = std::function<double(const Vec2& x, Vec2& grad)>;

struct MinimizeResult {
  Vec2 x;
  double f;
  Vec2 grad;
  int iterations;
  bool converged;
};

inline double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

/// BFGS with a backtracking Armijo line search.
inline MinimizeResult bfgs(const Objective2& fn, Vec2 x, double grad_tol, int max_iter) {
  Vec2 g{};
  double f = fn(x, g);
  std::array<double, 4> h{1, 0, 0, 1};  // inverse Hessian, row-major
  int it = 0;
  for (; it < max_iter; ++it) {
    if (!std::isfinite(f)) break;
    if (norm(g) < grad_tol) return {x, f, g, it, true};
    Vec2 d{-(h[0] * g[0] + h[1] * g[1]), -(h[2] * g[0] + h[3] * g[1])};
    double slope = d[0] * g[0] + d[1] * g[1];
    if (!(slope < 0)) {
      h = {1, 0, 0, 1};
      d = {-g[0], -g[1]};
      slope = d[0] * g[0] + d[1] * g[1];
    }
    double step = 1.0;
    Vec2 xn{};
    Vec2 gn{};
    double fn_new = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int k = 0; k < 80; ++k) {
      xn = {x[0] + step * d[0], x[1] + step * d[1]};
      fn_new = fn(xn, gn);
      if (std::isfinite(fn_new) && fn_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      // At the noise floor of f the Armijo test cannot succeed; accept a
      // step that still shrinks the gradient.
      if (std::isfinite(fn_new) && std::abs(fn_new - f) <= 1e-13 * (1.0 + std::abs(f)) &&
          norm(gn) < norm(g)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const Vec2 s{xn[0] - x[0], xn[1] - x[1]};
    const Vec2 y{gn[0] - g[0], gn[1] - g[1]};
    const double sy = s[0] * y[0] + s[1] * y[1];
    if (sy > 1e-300) {
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      const Vec2 hy{h[0] * y[0] + h[1] * y[1], h[2] * y[0] + h[3] * y[1]};
      const double yhy = y[0] * hy[0] + y[1] * hy[1];
      const double c = (1.0 + rho * yhy) * rho;
      h[0] += c * s[0] * s[0] - rho * (hy[0] * s[0] + s[0] * hy[0]);
      h[1] += c * s[0] * s[1] - rho * (hy[0] * s[1] + s[0] * hy[1]);
      h[2] += c * s[1] * s[0] - rho * (hy[1] * s[0] + s[1] * hy[0]);
      h[3] += c * s[1] * s[1] - rho * (hy[1] * s[1] + s[1] * hy[1]);
    }
    x = xn;
    f = fn_new;
    g = gn;
  }
  return {x, f, g, it, std::isfinite(f) && norm(g) < grad_tol};
}

/// Nelder-Mead on f alone; used to escape a stalled quasi-Newton run.
inline Vec2 nelder_mead(const Objective2& fn, Vec2 start, double scale, int max_iter) {
  Vec2 scratch{};
  auto f = [&](const Vec2& p) {
    const double v = fn(p, scratch);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  std::array<Vec2, 3> pts{start, Vec2{start[0] + scale, start[1]}, Vec2{start[0], start[1] + scale}};
  std::array<double, 3> vals{f(pts[0]), f(pts[1]), f(pts[2])};
  for (int it = 0; it < max_iter; ++it) {
    // order: best, middle, worst
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2 - i; ++j) {
        if (vals[j + 1] < vals[j]) {
          std::swap(vals[j], vals[j + 1]);
          std::swap(pts[j], pts[j + 1]);
        }
      }
    }
    if (std::abs(vals[2] - vals[0]) <= 1e-15 * (1.0 + std::abs(vals[0]))) break;
    const Vec2 c{(pts[0][0] + pts[1][0]) / 2, (pts[0][1] + pts[1][1]) / 2};
    auto along = [&](double t) { return Vec2{c[0] + t * (pts[2][0] - c[0]), c[1] + t * (pts[2][1] - c[1])}; };
    const Vec2 r = along(-1.0);
    const double fr = f(r);
    if (fr < vals[0]) {
      const Vec2 e = along(-2.0);
      const double fe = f(e);
      if (fe < fr) {
        pts[2] = e;
        vals[2] = fe;
      } else {
        pts[2] = r;
        vals[2] = fr;
      }
    } else if (fr < vals[1]) {
      pts[2] = r;
      vals[2] = fr;
    } else {
      const Vec2 k = fr < vals[2] ? along(-0.5) : along(0.5);
      const double fk = f(k);
      if (fk < std::min(fr, vals[2])) {
        pts[2] = k;
        vals[2] = fk;
      } else {
        for (int i = 1; i < 3; ++i) {
          pts[i] = {(pts[i][0] + pts[0][0]) / 2, (pts[i][1] + pts[0][1]) / 2};
          vals[i] = f(pts[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (vals[i] < vals[best]) best = i;
  }
  return pts[best];
}

/// BFGS from `start`; on a stall, Nelder-Mead followed by another BFGS pass.
/// Iterations are counted across all passes against `max_iter`.
inline MinimizeResult minimize(const Objective2& fn, Vec2 start, double grad_tol, int max_iter) {
  MinimizeResult r = bfgs(fn, start, grad_tol, max_iter);
  int used = r.iterations;
  for (int attempt = 0; attempt < 3 && !r.converged && used < max_iter; ++attempt) {
    const Vec2 from = std::isfinite(r.f) ? r.x : start;
    const Vec2 polished = nelder_mead(fn, from, 0.1, 400);
    MinimizeResult again = bfgs(fn, polished, grad_tol, max_iter - used);
    used += again.iterations + 1;
    if (!std::isfinite(r.f) || again.f <= r.f || again.converged) r = again;
  }
  r.iterations = used;
  return r;
}

}  // namespace condgof::detail
