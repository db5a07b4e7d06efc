#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "specwalk/boxcount.hpp"
#include "specwalk/calibration.hpp"
#include "specwalk/numeric.hpp"
#include "specwalk/parallel.hpp"
#include "specwalk/raster.hpp"
#include "specwalk/rng.hpp"
#include "specwalk/walker.hpp"

namespace specwalk {

struct FrontierDimensionResult {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::vector<double> per_walk;   // fitted d_F per trajectory
  std::vector<double> times;      // sampled t per trajectory
  std::vector<BoxCountFit> fits;
};

// Ensemble frontier-dimension estimate: per walk, draw one time t uniformly
// from the window, then run walk -> raster -> frontier -> box count -> fit.
// Reports the ensemble mean and the standard error of the mean.
inline FrontierDimensionResult estimate_frontier_dimension(
    const WeightedSpectrum& spec, int n_walks, double t0, double t1, int resolution,
    double padding_frac, std::uint64_t seed, int threads = 0,
    const WindowPolicy& policy = WindowPolicy{}) {
  if (n_walks < 1) throw std::invalid_argument("estimate_frontier_dimension: n_walks >= 1");
  if (!(t0 < t1)) throw std::invalid_argument("estimate_frontier_dimension: empty time window");
  FrontierDimensionResult res;
  res.per_walk.resize(n_walks);
  res.times.resize(n_walks);
  res.fits.resize(n_walks);
  parallel_chunks(n_walks, 1, threads, [&](std::size_t c, std::size_t b, std::size_t e) {
    (void)b;
    (void)e;
    Rng rng(stream_seed(seed, c));
    const double t = rng.uniform(t0, t1);
    const auto path = walk_path(spec, t);
    const auto grid = rasterize_walk(path, resolution, padding_frac);
    const auto frontier = extract_frontier(grid);
    const auto eps = dyadic_epsilons(frontier);
    const auto counts = box_count(frontier, eps);
    res.fits[c] = fit_dimension(counts, eps, policy);
    res.times[c] = t;
    res.per_walk[c] = res.fits[c].slope;
  });
  res.mean = sample_mean(res.per_walk);
  res.stderr_mean = sample_stderr(res.per_walk);
  return res;
}

// Calibration pipeline: known fractal -> raster -> box count -> fit.
// No frontier extraction; this checks the dimension estimator itself.
inline BoxCountFit calibrate_dimension(const std::string& kind, int depth, int resolution,
                                       double padding_frac = 0.02,
                                       const WindowPolicy& policy = WindowPolicy{}) {
  const auto segs = generate_calibration(kind, depth);
  const auto grid = rasterize_segments(segs, resolution, padding_frac);
  const auto eps = dyadic_epsilons(grid);
  const auto counts = box_count(grid, eps);
  return fit_dimension(counts, eps, policy);
}

} // namespace specwalk
