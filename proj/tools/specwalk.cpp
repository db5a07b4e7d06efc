// specwalk: spectral form factors as planar random walks.
//
// File-based pipeline: `spectrum` runs the (expensive) diagonalization once
// and caches the weighted spectrum as JSON; every analysis subcommand reads
// such a file, so runs are cheap to replay. All randomness is seeded and
// recorded in a manifest next to each output.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <specwalk/specwalk.hpp>

namespace sw = specwalk;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

sw::WeightedSpectrum load_weighted(const std::string& path) {
  const auto j = sw::load_json_file(path);
  if (sw::json_is_one_particle(j))
    throw sw::ValidationError(path + " is a one-particle spectrum; this command needs a "
                                     "weighted spectrum (use --enumerate when generating)");
  return sw::spectrum_from_json(j);
}

int run(int argc, char** argv) {
  CLI::App app{"spectral form factor random-walk toolkit"};
  app.set_help_flag("--help", "print help"); // frees -h; the XY field flag is --h
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker cap (default: SPECWALK_THREADS or hardware)");

  // ---- spectrum ------------------------------------------------------
  auto* sc_spec = app.add_subcommand("spectrum", "build a model spectrum and write it to JSON");
  std::string model = "xxz-nnn", out_path = "spectrum.json", in_path;
  int L = 8, n_majorana = 18, syk_k = 4;
  double delta = 0.0, alpha = 0.0, xy_h = 0.0, xy_gamma = 0.0, beta = 0.0;
  double tol = sw::kDefaultDegeneracyTol, syk_j = 1.0;
  std::uint64_t seed = 1;
  bool shift_ground = false, enumerate = false;
  sc_spec->add_option("--model", model, "xxz-nnn | xy | syk | file")->required();
  sc_spec->add_option("--L", L, "chain length");
  sc_spec->add_option("--delta", delta, "XXZ anisotropy");
  sc_spec->add_option("--alpha", alpha, "next-nearest-neighbor coupling");
  sc_spec->add_option("--h", xy_h, "XY transverse field");
  sc_spec->add_option("--gamma", xy_gamma, "XY anisotropy");
  sc_spec->add_option("--n-majorana", n_majorana, "SYK Majorana count (even)");
  sc_spec->add_option("--k", syk_k, "SYK interaction order (even)");
  sc_spec->add_option("--J", syk_j, "SYK coupling scale");
  sc_spec->add_option("--seed", seed, "SYK coupling seed");
  sc_spec->add_option("--beta", beta, "inverse temperature");
  sc_spec->add_option("--tol", tol, "degeneracy tolerance (absolute)");
  sc_spec->add_flag("--shift-ground", shift_ground,
                    "shift energies so the ground state sits at 0 (SFF-invariant; keeps "
                    "low-temperature weights inside double range)");
  sc_spec->add_flag("--enumerate", enumerate,
                    "for --model xy: enumerate the 2^L many-body spectrum instead of writing "
                    "the one-particle file");
  sc_spec->add_option("--in", in_path, "for --model file: JSON with {\"eigenvalues\": [...]}");
  sc_spec->add_option("-o,--out", out_path, "output path");

  // ---- walk ----------------------------------------------------------
  auto* sc_walk = app.add_subcommand("walk", "export one walk trajectory as CSV");
  std::string spec_path;
  double walk_t = -1.0;
  std::vector<double> window; // t0 t1; default depends on the subcommand
  sc_walk->add_option("--spec", spec_path, "spectrum JSON")->required();
  sc_walk->add_option("--t", walk_t, "time (if absent, one uniform draw from --window)");
  sc_walk->add_option("--window", window, "time window t0 t1 (default 1 2e5)")->expected(2);
  sc_walk->add_option("--seed", seed, "seed for the time draw");
  sc_walk->add_option("-o,--out", out_path, "output CSV");

  // ---- sff -----------------------------------------------------------
  auto* sc_sff = app.add_subcommand("sff", "sample |chi(t)|^2 at uniform random times");
  std::size_t n_samples = 100000;
  sc_sff->add_option("--spec", spec_path, "spectrum JSON (weighted or one-particle)")->required();
  sc_sff->add_option("--n", n_samples, "number of samples");
  sc_sff->add_option("--window", window, "time window t0 t1 (default 1e5 2e5)")->expected(2);
  sc_sff->add_option("--seed", seed, "sampling seed");
  sc_sff->add_option("-o,--out", out_path, "output CSV");

  // ---- moments -------------------------------------------------------
  auto* sc_mom = app.add_subcommand("moments", "exact, Gaussian and Monte-Carlo SFF moments");
  int p_max = 5;
  std::size_t mc_n = 0;
  sc_mom->add_option("--spec", spec_path, "weighted spectrum JSON")->required();
  sc_mom->add_option("--p-max", p_max, "highest moment order");
  sc_mom->add_option("--mc", mc_n, "Monte-Carlo samples (0 = skip)");
  sc_mom->add_option("--window", window, "MC window t0 t1 (default 1e5 2e5)")->expected(2);
  sc_mom->add_option("--seed", seed, "MC seed");
  sc_mom->add_option("-o,--out", out_path, "output JSON");

  // ---- lyapunov ------------------------------------------------------
  auto* sc_lyap = app.add_subcommand("lyapunov", "R_q ratios across spectra + windowed grid");
  std::vector<std::string> spec_paths;
  std::vector<double> qs{1.5, 2.0, 3.0, 4.0};
  std::vector<double> s_grid{0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> h_grid{0.05, 0.10, 0.15, 0.20, 0.25};
  std::string windowed_out;
  sc_lyap->add_option("--spec", spec_paths, "weighted spectrum JSON (repeatable)")->required();
  sc_lyap->add_option("--qs", qs, "q values");
  sc_lyap->add_option("-o,--out", out_path, "scan CSV (L,q,R)");
  sc_lyap->add_option("--windowed-out", windowed_out, "windowed CSV (s,h,R1), largest spectrum");
  sc_lyap->add_option("--s-grid", s_grid, "s values for the windowed grid");
  sc_lyap->add_option("--h-grid", h_grid, "h values for the windowed grid");

  // ---- dist ----------------------------------------------------------
  auto* sc_dist = app.add_subcommand("dist", "empirical-law tests (Exp(1), log-normal, Wiener)");
  std::string law = "exp1", hist_csv;
  double wiener_s = 0.2, wiener_h = 0.2;
  std::size_t wiener_N = 0;
  sc_dist->add_option("--spec", spec_path, "spectrum JSON")->required();
  sc_dist->add_option("--law", law, "exp1 | lognormal | wiener")->required();
  sc_dist->add_option("--n", n_samples, "number of samples");
  sc_dist->add_option("--window", window, "time window t0 t1 (default 1e5 2e5)")->expected(2);
  sc_dist->add_option("--seed", seed, "sampling seed");
  sc_dist->add_option("--s", wiener_s, "wiener: window origin s");
  sc_dist->add_option("--h", wiener_h, "wiener: window length h");
  sc_dist->add_option("--N", wiener_N, "wiener: N (default N_B)");
  sc_dist->add_option("--hist-csv", hist_csv, "also write histogram CSV");
  sc_dist->add_option("-o,--out", out_path, "report JSON");

  // ---- fractal -------------------------------------------------------
  auto* sc_frac = app.add_subcommand("fractal", "frontier dimension of walk ensembles");
  int n_walks = 20, resolution = 4096;
  double padding = 0.02;
  std::string pgm_prefix;
  sc_frac->add_option("--spec", spec_path, "weighted spectrum JSON")->required();
  sc_frac->add_option("--walks", n_walks, "ensemble size");
  sc_frac->add_option("--resolution", resolution, "raster resolution");
  sc_frac->add_option("--padding", padding, "bounding-box padding fraction");
  sc_frac->add_option("--window", window, "time window t0 t1 (default 1 2e5)")->expected(2);
  sc_frac->add_option("--seed", seed, "time sampling seed");
  sc_frac->add_option("--pgm-prefix", pgm_prefix, "export <prefix>frontier_<i>.pgm per walk");
  sc_frac->add_option("-o,--out", out_path, "fit report JSON");

  // ---- calibrate -----------------------------------------------------
  auto* sc_cal = app.add_subcommand("calibrate", "box-counting check on known fractals");
  std::string kind = "koch";
  int depth = 7;
  std::string pgm_path;
  sc_cal->add_option("--kind", kind, "line | square | koch | sierpinski")->required();
  sc_cal->add_option("--depth", depth, "construction depth");
  sc_cal->add_option("--resolution", resolution, "raster resolution");
  sc_cal->add_option("--padding", padding, "bounding-box padding fraction");
  sc_cal->add_option("--pgm", pgm_path, "export the rasterized set");
  sc_cal->add_option("-o,--out", out_path, "fit report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2; // flag/validation failure
  }
  Timer timer;

  auto win = [&window](double d0, double d1) {
    return window.size() == 2 ? std::pair{window[0], window[1]} : std::pair{d0, d1};
  };

  auto flags_json = [&](std::initializer_list<std::pair<std::string, nlohmann::json>> kv) {
    nlohmann::json j;
    for (const auto& [k, v] : kv) j[k] = v;
    return j;
  };

  if (*sc_spec) {
    nlohmann::json out;
    nlohmann::json flags = flags_json({{"model", model},
                                       {"beta", beta},
                                       {"tol", tol},
                                       {"shift_ground", shift_ground},
                                       {"out", out_path}});
    if (model == "xy" && !enumerate) {
      auto ops = sw::build_xy_one_particle(L, xy_h, xy_gamma, tol);
      ops.meta["model"] = {{"name", "xy"}, {"L", L}, {"h", xy_h}, {"gamma", xy_gamma}};
      out = sw::one_particle_to_json(ops);
      flags["L"] = L;
      flags["h"] = xy_h;
      flags["gamma"] = xy_gamma;
    } else {
      std::vector<double> eigs;
      nlohmann::json model_meta;
      if (model == "xxz-nnn") {
        eigs = sw::diagonalize(sw::build_xxz_nnn(L, delta, alpha));
        model_meta = {{"name", "xxz-nnn"}, {"L", L}, {"delta", delta}, {"alpha", alpha}};
        flags["L"] = L;
        flags["delta"] = delta;
        flags["alpha"] = alpha;
      } else if (model == "xy") {
        const auto ops = sw::build_xy_one_particle(L, xy_h, xy_gamma, tol);
        auto many = sw::enumerate_free_many_body(ops, 0.0, tol);
        eigs.clear();
        for (std::size_t j = 0; j < many.size(); ++j)
          for (int r = 0; r < static_cast<int>(many.weights[j]); ++r)
            eigs.push_back(many.energies[j]);
        model_meta = {{"name", "xy"}, {"L", L}, {"h", xy_h}, {"gamma", xy_gamma},
                      {"enumerated", true}};
        flags["L"] = L;
        flags["h"] = xy_h;
        flags["gamma"] = xy_gamma;
      } else if (model == "syk") {
        eigs = sw::diagonalize(sw::build_syk(n_majorana, syk_k, syk_j, seed));
        model_meta = sw::syk_meta(n_majorana, syk_k, syk_j, seed);
        model_meta["name"] = "syk";
        flags["n_majorana"] = n_majorana;
        flags["k"] = syk_k;
        flags["J"] = syk_j;
        flags["seed"] = seed;
      } else if (model == "file") {
        if (in_path.empty()) throw sw::ValidationError("--model file requires --in");
        const auto j = sw::load_json_file(in_path);
        if (!j.contains("eigenvalues"))
          throw sw::ValidationError(in_path + ": expected an \"eigenvalues\" array");
        eigs = j["eigenvalues"].get<std::vector<double>>();
        std::sort(eigs.begin(), eigs.end());
        model_meta = {{"name", "file"}, {"in", in_path}};
        flags["in"] = in_path;
      } else {
        throw sw::ValidationError("unknown model '" + model + "'");
      }
      if (shift_ground) eigs = sw::shift_to_ground(eigs);
      auto spec = sw::make_weighted_spectrum(eigs, beta, tol);
      spec.meta["model"] = model_meta;
      spec.meta["L"] = model_meta.contains("L") ? model_meta["L"] : nlohmann::json(0);
      spec.meta["shift_ground"] = shift_ground;
      if (model == "syk") spec.meta["seed"] = seed;
      out = sw::spectrum_to_json(spec);
    }
    sw::save_json_file(out, out_path);
    sw::write_manifest(out_path, "spectrum", flags, timer.seconds());
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
  }

  if (*sc_walk) {
    const auto spec = load_weighted(spec_path);
    double t = walk_t;
    if (!sc_walk->count("--t")) {
      const auto [w0, w1] = win(1.0, 2e5);
      sw::Rng rng(sw::stream_seed(seed, 0));
      t = rng.uniform(w0, w1);
    }
    const auto path = sw::walk_path(spec, t);
    sw::write_walk_csv(path, out_path);
    sw::write_manifest(out_path, "walk",
                       flags_json({{"spec", spec_path}, {"t", t}, {"seed", seed}}),
                       timer.seconds());
    std::printf("wrote %s (t=%.17g, %zu steps)\n", out_path.c_str(), t, spec.size());
    return 0;
  }

  if (*sc_sff) {
    const auto [sff_w0, sff_w1] = win(1e5, 2e5);
    const auto j = sw::load_json_file(spec_path);
    sw::SffSampleSet set;
    if (sw::json_is_one_particle(j)) {
      const auto ops = sw::one_particle_from_json(j);
      set.t_min = sff_w0;
      set.t_max = sff_w1;
      set.seed = seed;
      set.times.resize(n_samples);
      set.values.resize(n_samples);
      sw::parallel_chunks(n_samples, sw::kSampleChunk, threads,
                          [&](std::size_t c, std::size_t b, std::size_t e) {
                            sw::Rng rng(sw::stream_seed(seed, c));
                            for (std::size_t i = b; i < e; ++i) {
                              const double t = rng.uniform(sff_w0, sff_w1);
                              set.times[i] = t;
                              set.values[i] = sw::free_fermion_chi_abs2(ops, 0.0, t);
                            }
                          });
      set.mean = sw::sample_mean(set.values);
      set.stderr_mean = sw::sample_stderr(set.values);
    } else {
      set = sw::sample_sff(sw::spectrum_from_json(j), sff_w0, sff_w1, n_samples, seed, threads);
    }
    sw::write_sff_csv(set, out_path);
    sw::write_manifest(out_path, "sff",
                       flags_json({{"spec", spec_path},
                                   {"n", n_samples},
                                   {"window", {sff_w0, sff_w1}},
                                   {"seed", seed}}),
                       timer.seconds());
    std::printf("wrote %s (mean=%.6g, stderr=%.3g)\n", out_path.c_str(), set.mean,
                set.stderr_mean);
    return 0;
  }

  if (*sc_mom) {
    const auto [sff_w0, sff_w1] = win(1e5, 2e5);
    const auto spec = load_weighted(spec_path);
    auto rep = sw::moment_report(spec, p_max);
    if (mc_n > 0) rep.mc = sw::mc_moments(spec, p_max, mc_n, sff_w0, sff_w1, seed, threads);
    sw::save_json_file(sw::to_json(rep), out_path);
    sw::write_manifest(out_path, "moments",
                       flags_json({{"spec", spec_path},
                                   {"p_max", p_max},
                                   {"mc", mc_n},
                                   {"window", {sff_w0, sff_w1}},
                                   {"seed", seed}}),
                       timer.seconds());
    std::printf("wrote %s (%s I_1..I_%d)\n", out_path.c_str(),
                rep.log_domain ? "log-domain" : "linear", p_max);
    return 0;
  }

  if (*sc_lyap) {
    std::vector<sw::WeightedSpectrum> specs;
    for (const auto& p : spec_paths) specs.push_back(load_weighted(p));
    const auto rep = sw::lyapunov_scan(specs, qs);
    sw::write_lyapunov_csv(rep, out_path);
    sw::write_manifest(out_path, "lyapunov",
                       flags_json({{"specs", spec_paths}, {"qs", qs}}), timer.seconds());
    std::printf("wrote %s\n", out_path.c_str());
    if (!windowed_out.empty()) {
      std::size_t largest = 0;
      for (std::size_t i = 0; i < specs.size(); ++i)
        if (specs[i].size() > specs[largest].size()) largest = i;
      const auto& big = specs[largest];
      std::vector<std::array<double, 3>> rows;
      for (double s : s_grid)
        for (double h : h_grid)
          rows.push_back({s, h, sw::r_windowed(big.weights, 1.0, big.size(), h, s)});
      sw::write_windowed_csv(rows, windowed_out);
      sw::write_manifest(windowed_out, "lyapunov",
                         flags_json({{"specs", spec_paths},
                                     {"s_grid", s_grid},
                                     {"h_grid", h_grid}}),
                         timer.seconds());
      std::printf("wrote %s\n", windowed_out.c_str());
    }
    return 0;
  }

  if (*sc_dist) {
    const auto [sff_w0, sff_w1] = win(1e5, 2e5);
    const auto j = sw::load_json_file(spec_path);
    sw::DistTestReport rep;
    if (law == "exp1") {
      std::vector<double> vals;
      if (sw::json_is_one_particle(j)) {
        const auto ops = sw::one_particle_from_json(j);
        const auto logs =
            sw::sample_free_fermion_log_sff(ops, 0.0, sff_w0, sff_w1, n_samples, seed, threads);
        vals.resize(logs.size());
        for (std::size_t i = 0; i < logs.size(); ++i) vals[i] = std::exp(logs[i]);
      } else {
        vals = sw::sample_sff(sw::spectrum_from_json(j), sff_w0, sff_w1, n_samples, seed, threads)
                   .values;
      }
      rep = sw::ks_exp1(std::move(vals), true);
    } else if (law == "lognormal") {
      if (!sw::json_is_one_particle(j))
        throw sw::ValidationError("--law lognormal needs a one-particle spectrum file");
      const auto ops = sw::one_particle_from_json(j);
      auto logs =
          sw::sample_free_fermion_log_sff(ops, 0.0, sff_w0, sff_w1, n_samples, seed, threads);
      rep = sw::ks_lognormal_free_from_log(std::move(logs), ops.degeneracies);
    } else if (law == "wiener") {
      const auto spec = sw::spectrum_from_json(j);
      const std::size_t N = wiener_N == 0 ? spec.size() : wiener_N;
      rep = sw::wiener_increment_test(spec, N, wiener_s, wiener_h, n_samples, sff_w0, sff_w1,
                                      seed, threads);
    } else {
      throw sw::ValidationError("unknown law '" + law + "'");
    }
    sw::save_json_file(sw::to_json(rep), out_path);
    sw::write_manifest(out_path, "dist",
                       flags_json({{"spec", spec_path},
                                   {"law", law},
                                   {"n", n_samples},
                                   {"window", {sff_w0, sff_w1}},
                                   {"seed", seed}}),
                       timer.seconds());
    if (!hist_csv.empty()) {
      sw::CsvWriter w(hist_csv);
      w.row("bin_left", "bin_right", "density");
      for (std::size_t b = 0; b + 1 < rep.histogram.edges.size(); ++b)
        w.row(rep.histogram.edges[b], rep.histogram.edges[b + 1], rep.histogram.density[b]);
    }
    std::printf("wrote %s (law=%s, n=%zu, ks=%.5f)\n", out_path.c_str(), law.c_str(), rep.n,
                rep.ks);
    return 0;
  }

  if (*sc_frac) {
    const auto [frac_w0, frac_w1] = win(1.0, 2e5);
    const auto spec = load_weighted(spec_path);
    sw::FrontierDimensionResult res;
    if (pgm_prefix.empty()) {
      res = sw::estimate_frontier_dimension(spec, n_walks, frac_w0, frac_w1, resolution, padding,
                                            seed, threads);
    } else {
      res.per_walk.resize(n_walks);
      res.times.resize(n_walks);
      res.fits.resize(n_walks);
      for (int i = 0; i < n_walks; ++i) {
        sw::Rng rng(sw::stream_seed(seed, i));
        const double t = rng.uniform(frac_w0, frac_w1);
        const auto path = sw::walk_path(spec, t);
        const auto grid = sw::rasterize_walk(path, resolution, padding);
        const auto frontier = sw::extract_frontier(grid);
        sw::write_pgm(frontier, pgm_prefix + "frontier_" + std::to_string(i) + ".pgm");
        const auto eps = sw::dyadic_epsilons(frontier);
        res.fits[i] = sw::fit_dimension(sw::box_count(frontier, eps), eps);
        res.times[i] = t;
        res.per_walk[i] = res.fits[i].slope;
      }
      res.mean = sw::sample_mean(res.per_walk);
      res.stderr_mean = sw::sample_stderr(res.per_walk);
    }
    nlohmann::json out{{"d_F_mean", res.mean},
                       {"d_F_stderr", res.stderr_mean},
                       {"walks", nlohmann::json::array()}};
    for (std::size_t i = 0; i < res.per_walk.size(); ++i) {
      auto fj = sw::boxcount_fit_to_json(res.fits[i]);
      fj["t"] = res.times[i];
      out["walks"].push_back(fj);
    }
    sw::save_json_file(out, out_path);
    sw::write_manifest(out_path, "fractal",
                       flags_json({{"spec", spec_path},
                                   {"walks", n_walks},
                                   {"resolution", resolution},
                                   {"padding", padding},
                                   {"window", {frac_w0, frac_w1}},
                                   {"seed", seed}}),
                       timer.seconds());
    std::printf("wrote %s (d_F = %.4f +- %.4f)\n", out_path.c_str(), res.mean, res.stderr_mean);
    return 0;
  }

  if (*sc_cal) {
    const auto segs = sw::generate_calibration(kind, depth);
    const auto grid = sw::rasterize_segments(segs, resolution, padding);
    if (!pgm_path.empty()) sw::write_pgm(grid, pgm_path);
    const auto eps = sw::dyadic_epsilons(grid);
    const auto fit = sw::fit_dimension(sw::box_count(grid, eps), eps);
    sw::save_json_file(sw::boxcount_fit_to_json(fit), out_path);
    sw::write_manifest(out_path, "calibrate",
                       flags_json({{"kind", kind},
                                   {"depth", depth},
                                   {"resolution", resolution},
                                   {"padding", padding}}),
                       timer.seconds());
    std::printf("wrote %s (d_F = %.4f)\n", out_path.c_str(), fit.slope);
    return 0;
  }

  return 0;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sw::ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
