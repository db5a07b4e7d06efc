#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "specwalk/raster.hpp"

namespace specwalk {

// Deterministic iterated constructions with known Hausdorff dimension, used
// to validate the box-counting estimator:
//   line 1, square (outline) 1, koch log4/log3, sierpinski log3/log2.
inline std::vector<Segment> generate_calibration(const std::string& kind, int depth) {
  if (depth < 0) throw std::invalid_argument("generate_calibration: negative depth");
  if (kind == "line") return {{0.0, 0.0, 1.0, 0.0}};
  if (kind == "square")
    return {{0, 0, 1, 0}, {1, 0, 1, 1}, {1, 1, 0, 1}, {0, 1, 0, 0}};
  if (kind == "koch") {
    if (depth > 10) throw std::invalid_argument("generate_calibration: koch depth over budget");
    std::vector<Segment> segs{{0.0, 0.0, 1.0, 0.0}};
    const double s60 = std::sqrt(3.0) / 2.0;
    for (int d = 0; d < depth; ++d) {
      std::vector<Segment> next;
      next.reserve(segs.size() * 4);
      for (const auto& s : segs) {
        const double dx = (s.x1 - s.x0) / 3.0, dy = (s.y1 - s.y0) / 3.0;
        const double ax = s.x0 + dx, ay = s.y0 + dy;        // 1/3 point
        const double bx = s.x0 + 2 * dx, by = s.y0 + 2 * dy; // 2/3 point
        // apex: rotate (dx,dy) by +60 degrees about the 1/3 point
        const double px = ax + 0.5 * dx - s60 * dy;
        const double py = ay + 0.5 * dy + s60 * dx;
        next.push_back({s.x0, s.y0, ax, ay});
        next.push_back({ax, ay, px, py});
        next.push_back({px, py, bx, by});
        next.push_back({bx, by, s.x1, s.y1});
      }
      segs = std::move(next);
    }
    return segs;
  }
  if (kind == "sierpinski") {
    if (depth > 11)
      throw std::invalid_argument("generate_calibration: sierpinski depth over budget");
    std::vector<Segment> segs;
    const double h = std::sqrt(3.0) / 2.0;
    // The gasket contains the full boundary of every kept sub-triangle, so
    // drawing the 3^depth depth-level outlines converges to it from inside.
    auto rec = [&](auto&& self, double x, double y, double side, int d) -> void {
      if (d == 0) {
        const double x1 = x + side, ax = x + side / 2.0, ay = y + side * h;
        segs.push_back({x, y, x1, y});
        segs.push_back({x1, y, ax, ay});
        segs.push_back({ax, ay, x, y});
        return;
      }
      const double half = side / 2.0;
      self(self, x, y, half, d - 1);
      self(self, x + half, y, half, d - 1);
      self(self, x + half / 2.0, y + half * h, half, d - 1);
    };
    rec(rec, 0.0, 0.0, 1.0, depth);
    return segs;
  }
  throw std::invalid_argument("generate_calibration: unknown kind '" + kind + "'");
}

} // namespace specwalk
