#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "specwalk/raster.hpp"

namespace specwalk {

// Dyadic box sides 2^k, k = 0 .. floor(log2(min(w,h))) - 1.
inline std::vector<int> dyadic_epsilons(const RasterGrid& g) {
  const int m = std::min(g.width, g.height);
  std::vector<int> eps;
  for (int e = 1; 2 * e <= m; e *= 2) eps.push_back(e);
  return eps;
}

// N(eps): number of eps x eps tiles (anchored at the origin, non-overlapping)
// containing at least one occupied pixel.
inline std::vector<std::size_t> box_count(const RasterGrid& g, std::span<const int> epsilons) {
  std::vector<std::pair<int, int>> occupied;
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x)
      if (g.test(x, y)) occupied.emplace_back(x, y);
  std::vector<std::size_t> counts;
  counts.reserve(epsilons.size());
  for (int e : epsilons) {
    if (e < 1 || e > std::min(g.width, g.height))
      throw std::invalid_argument("box_count: box size exceeds grid");
    const int tw = (g.width + e - 1) / e;
    const int th = (g.height + e - 1) / e;
    std::vector<std::uint8_t> tile(static_cast<std::size_t>(tw) * th, 0);
    std::size_t n = 0;
    for (auto [x, y] : occupied) {
      auto& t = tile[static_cast<std::size_t>(y / e) * tw + x / e];
      if (!t) {
        t = 1;
        ++n;
      }
    }
    counts.push_back(n);
  }
  return counts;
}

struct BoxCountFit {
  std::vector<int> epsilons;        // descending box sides used
  std::vector<std::size_t> counts;  // N(eps)
  int win_lo = 0, win_hi = 0;       // inclusive index range of the fit window
  double slope = 0.0;               // d_F estimate
  double stderr_slope = 0.0;
  double r2 = 0.0;
};

struct WindowPolicy {
  bool automatic = true;
  // automatic: contiguous window of length >= min_len maximizing R^2, after
  // dropping drop_fine finest and drop_coarse coarsest scales
  int min_len = 5;
  int drop_fine = 2;
  int drop_coarse = 2;
  // manual override (inclusive indices into the scale list, finest-first)
  int lo = 0, hi = 0;
};

namespace detail {

struct LineFit {
  double slope, stderr_slope, r2;
};

inline LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LineFit f{};
  f.slope = sxy / sxx;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - my - f.slope * (xs[i] - mx);
    sse += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  f.stderr_slope = n > 2 ? std::sqrt(sse / (static_cast<double>(n) - 2.0) / sxx) : 0.0;
  return f;
}

} // namespace detail

// Least-squares slope of log N(eps) against log(1/eps) over a contiguous
// window of scales. The default policy drops the two finest scales
// (sub-resolution noise) and the two coarsest (pre-asymptotic), then picks
// the window of length >= 5 maximizing R^2; the optimum window is sample
// dependent, so a manual override is supported.
inline BoxCountFit fit_dimension(std::span<const std::size_t> counts,
                                 std::span<const int> epsilons,
                                 const WindowPolicy& policy = WindowPolicy{}) {
  const int n = static_cast<int>(counts.size());
  if (n != static_cast<int>(epsilons.size()))
    throw std::invalid_argument("fit_dimension: counts/epsilons size mismatch");
  if (n < 5) throw std::invalid_argument("fit_dimension: need at least 5 scales");
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    if (counts[i] == 0) throw std::invalid_argument("fit_dimension: zero box count");
    x[i] = -std::log(static_cast<double>(epsilons[i])); // log(1/eps)
    y[i] = std::log(static_cast<double>(counts[i]));
  }

  BoxCountFit fit;
  fit.epsilons.assign(epsilons.begin(), epsilons.end());
  fit.counts.assign(counts.begin(), counts.end());

  int lo = 0, hi = n - 1;
  if (policy.automatic) {
    // scales are finest-first (ascending eps); drop fine = drop low indices
    int a = policy.drop_fine, b = n - 1 - policy.drop_coarse;
    if (b - a + 1 < policy.min_len) { // not enough left: use everything
      a = 0;
      b = n - 1;
    }
    double best_r2 = -1.0;
    int best_lo = a, best_hi = b;
    for (int w = policy.min_len; w <= b - a + 1; ++w) {
      for (int s = a; s + w - 1 <= b; ++s) {
        const auto f = detail::fit_line(std::span(x).subspan(s, w), std::span(y).subspan(s, w));
        if (f.r2 > best_r2 + 1e-12 ||
            (std::abs(f.r2 - best_r2) <= 1e-12 && w > best_hi - best_lo + 1)) {
          best_r2 = f.r2;
          best_lo = s;
          best_hi = s + w - 1;
        }
      }
    }
    lo = best_lo;
    hi = best_hi;
  } else {
    lo = policy.lo;
    hi = policy.hi;
    if (lo < 0 || hi >= n || hi - lo + 1 < 2)
      throw std::invalid_argument("fit_dimension: bad manual window");
  }
  const auto f =
      detail::fit_line(std::span(x).subspan(lo, hi - lo + 1), std::span(y).subspan(lo, hi - lo + 1));
  fit.win_lo = lo;
  fit.win_hi = hi;
  fit.slope = f.slope;
  fit.stderr_slope = f.stderr_slope;
  fit.r2 = f.r2;
  return fit;
}

} // namespace specwalk
