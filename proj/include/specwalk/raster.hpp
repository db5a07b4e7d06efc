#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "specwalk/walker.hpp"

namespace specwalk {

struct Segment {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

// Binary occupancy grid plus the isotropic world->pixel map
// px = (x - ox) * scale, py = (y - oy) * scale. Pixel (i,j) covers
// [i, i+1) x [j, j+1) in pixel coordinates.
struct RasterGrid {
  int width = 0, height = 0;
  std::vector<std::uint8_t> bits;
  double scale = 1.0, ox = 0.0, oy = 0.0;

  RasterGrid() = default;
  RasterGrid(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

  bool test(int x, int y) const {
    if (x < 0 || y < 0 || x >= width || y >= height) return false;
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    bits[static_cast<std::size_t>(y) * width + x] = 1;
  }
  std::size_t occupied_count() const {
    std::size_t n = 0;
    for (auto b : bits) n += b;
    return n;
  }
};

// Supercover traversal: marks every cell the ideal segment passes through
// (Amanatides-Woo stepping; ties at cell corners step one axis at a time so
// the marked chain stays 4-connected with no diagonal gaps).
inline void supercover_segment(RasterGrid& g, double x0, double y0, double x1, double y1) {
  auto cell = [](double v) { return static_cast<int>(std::floor(v)); };
  int x = cell(x0), y = cell(y0);
  const int ex = cell(x1), ey = cell(y1);
  g.set(x, y);
  const double dx = x1 - x0, dy = y1 - y0;
  const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  const double inf = std::numeric_limits<double>::infinity();
  double t_max_x = inf, t_max_y = inf, t_dx = inf, t_dy = inf;
  if (step_x != 0) {
    const double next = step_x > 0 ? (std::floor(x0) + 1.0) : std::floor(x0);
    t_max_x = (next - x0) / dx;
    t_dx = static_cast<double>(step_x) / dx;
  }
  if (step_y != 0) {
    const double next = step_y > 0 ? (std::floor(y0) + 1.0) : std::floor(y0);
    t_max_y = (next - y0) / dy;
    t_dy = static_cast<double>(step_y) / dy;
  }
  // hard cap: a segment can cross at most this many cell boundaries
  long guard = std::labs(ex - x) + std::labs(ey - y) + 4;
  while ((x != ex || y != ey) && guard-- > 0) {
    if (t_max_x < t_max_y) {
      x += step_x;
      t_max_x += t_dx;
    } else if (t_max_y < t_max_x) {
      y += step_y;
      t_max_y += t_dy;
    } else {
      // exact corner crossing: pass through both edge-adjacent cells
      x += step_x;
      g.set(x, y);
      y += step_y;
      t_max_x += t_dx;
      t_max_y += t_dy;
    }
    g.set(x, y);
  }
  g.set(ex, ey);
}

namespace detail {

struct Bounds {
  double xmin, xmax, ymin, ymax;
};

inline RasterGrid make_grid_for(const Bounds& b, int resolution, double padding_frac) {
  const double ext = std::max(b.xmax - b.xmin, b.ymax - b.ymin);
  if (!(ext > 0.0)) throw std::invalid_argument("rasterize: degenerate (zero-extent) input");
  const double pad = padding_frac * ext;
  const double side = ext + 2.0 * pad;
  const double cx = 0.5 * (b.xmin + b.xmax), cy = 0.5 * (b.ymin + b.ymax);
  RasterGrid g(resolution, resolution);
  g.scale = resolution / side;
  g.ox = cx - 0.5 * side;
  g.oy = cy - 0.5 * side;
  return g;
}

inline void draw_world_segment(RasterGrid& g, double x0, double y0, double x1, double y1) {
  auto to_px = [&](double v, double o) {
    double p = (v - o) * g.scale;
    // keep endpoints strictly inside so floor() lands on a valid cell
    return std::clamp(p, 0.0, std::nextafter(static_cast<double>(g.width), 0.0));
  };
  supercover_segment(g, to_px(x0, g.ox), to_px(y0, g.oy), to_px(x1, g.ox), to_px(y1, g.oy));
}

} // namespace detail

inline RasterGrid rasterize_segments(std::span<const Segment> segments, int resolution,
                                     double padding_frac = 0.02) {
  if (resolution < 256) throw std::invalid_argument("rasterize_segments: resolution must be >= 256");
  if (segments.empty()) throw std::invalid_argument("rasterize_segments: no segments");
  detail::Bounds b{segments[0].x0, segments[0].x0, segments[0].y0, segments[0].y0};
  for (const auto& s : segments) {
    b.xmin = std::min({b.xmin, s.x0, s.x1});
    b.xmax = std::max({b.xmax, s.x0, s.x1});
    b.ymin = std::min({b.ymin, s.y0, s.y1});
    b.ymax = std::max({b.ymax, s.y0, s.y1});
  }
  RasterGrid g = detail::make_grid_for(b, resolution, padding_frac);
  for (const auto& s : segments) detail::draw_world_segment(g, s.x0, s.y0, s.x1, s.y1);
  return g;
}

inline RasterGrid rasterize_walk(const WalkPath& path, int resolution,
                                 double padding_frac = 0.02) {
  if (resolution < 256) throw std::invalid_argument("rasterize_walk: resolution must be >= 256");
  if (path.points.size() < 2) throw std::invalid_argument("rasterize_walk: path too short");
  detail::Bounds b{path.points[0].real(), path.points[0].real(), path.points[0].imag(),
                   path.points[0].imag()};
  for (const auto& p : path.points) {
    b.xmin = std::min(b.xmin, p.real());
    b.xmax = std::max(b.xmax, p.real());
    b.ymin = std::min(b.ymin, p.imag());
    b.ymax = std::max(b.ymax, p.imag());
  }
  RasterGrid g = detail::make_grid_for(b, resolution, padding_frac);
  for (std::size_t i = 1; i < path.points.size(); ++i)
    detail::draw_world_segment(g, path.points[i - 1].real(), path.points[i - 1].imag(),
                               path.points[i].real(), path.points[i].imag());
  return g;
}

// Frontier = boundary of the unbounded component of the complement.
// Flood-fills the empty background from the grid border (4-connected;
// out-of-grid counts as exterior), then keeps occupied pixels with at least
// one 8-neighbor in the exterior. Inner-island boundaries are dropped.
inline RasterGrid extract_frontier(const RasterGrid& g) {
  if (g.width == 0 || g.height == 0) throw std::invalid_argument("extract_frontier: empty grid");
  const int w = g.width, h = g.height;
  std::vector<std::uint8_t> exterior(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::pair<int, int>> stack;
  auto push = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return;
    const std::size_t i = static_cast<std::size_t>(y) * w + x;
    if (exterior[i] || g.bits[i]) return;
    exterior[i] = 1;
    stack.emplace_back(x, y);
  };
  for (int x = 0; x < w; ++x) {
    push(x, 0);
    push(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    push(0, y);
    push(w - 1, y);
  }
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    push(x + 1, y);
    push(x - 1, y);
    push(x, y + 1);
    push(x, y - 1);
  }
  RasterGrid out(w, h);
  out.scale = g.scale;
  out.ox = g.ox;
  out.oy = g.oy;
  auto is_exterior = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return true;
    return exterior[static_cast<std::size_t>(y) * w + x] != 0;
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!g.test(x, y)) continue;
      bool touches = false;
      for (int dy = -1; dy <= 1 && !touches; ++dy)
        for (int dx = -1; dx <= 1 && !touches; ++dx)
          if ((dx != 0 || dy != 0) && is_exterior(x + dx, y + dy)) touches = true;
      if (touches) out.set(x, y);
    }
  }
  return out;
}

// Binary PGM (P5), one byte per pixel: 0 empty, 255 occupied.
inline void write_pgm(const RasterGrid& g, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_pgm: cannot open " + path);
  f << "P5\n" << g.width << " " << g.height << "\n255\n";
  std::vector<std::uint8_t> row(g.width);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) row[x] = g.test(x, y) ? 255 : 0;
    f.write(reinterpret_cast<const char*>(row.data()), g.width);
  }
  if (!f) throw std::runtime_error("write_pgm: write failed for " + path);
}

} // namespace specwalk
