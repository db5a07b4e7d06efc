#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <specwalk/io.hpp>
#include <specwalk/models.hpp>
#include <specwalk/rng.hpp>

using namespace specwalk;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("specwalk_test_" + std::to_string(Rng(std::random_device{}()).raw()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("weighted spectrum round trips bit-exactly") {
  auto w = diagonalize(build_xxz_nnn(6, 0.37, 0.21));
  auto spec = make_weighted_spectrum(w, 0.123456789012345);
  spec.meta["model"] = {{"name", "xxz-nnn"}, {"L", 6}};

  TempDir tmp;
  save_json_file(spectrum_to_json(spec), tmp.file("s.json"));
  auto back = spectrum_from_json(load_json_file(tmp.file("s.json")));

  REQUIRE(back.size() == spec.size());
  for (std::size_t j = 0; j < spec.size(); ++j) {
    CHECK(back.energies[j] == spec.energies[j]); // bitwise
    CHECK(back.weights[j] == spec.weights[j]);
  }
  CHECK(back.beta == spec.beta);
}

TEST_CASE("one-particle spectrum round trips") {
  auto ops = build_xy_one_particle(18, 0.2, 0.3);
  ops.meta["model"] = {{"name", "xy"}, {"L", 18}};
  TempDir tmp;
  save_json_file(one_particle_to_json(ops), tmp.file("xy.json"));
  const auto j = load_json_file(tmp.file("xy.json"));
  CHECK(json_is_one_particle(j));
  auto back = one_particle_from_json(j);
  REQUIRE(back.size() == ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    CHECK(back.distinct_levels[i] == ops.distinct_levels[i]);
    CHECK(back.degeneracies[i] == ops.degeneracies[i]);
  }
  CHECK(back.offset == ops.offset);
  CHECK(back.n_modes == ops.n_modes);
}

TEST_CASE("schema violations raise ValidationError") {
  TempDir tmp;
  std::ofstream(tmp.file("bad.json")) << "{\"version\": 2, \"beta\": 0}";
  CHECK_THROWS_AS(spectrum_from_json(load_json_file(tmp.file("bad.json"))), ValidationError);
  std::ofstream(tmp.file("worse.json")) << "not json";
  CHECK_THROWS_AS(load_json_file(tmp.file("worse.json")), ValidationError);
  nlohmann::json j{{"version", 1},
                   {"beta", 0.0},
                   {"energies", {1.0, 0.5}}, // descending
                   {"weights", {1.0, 1.0}}};
  CHECK_THROWS_AS(spectrum_from_json(j), ValidationError);
}

TEST_CASE("csv outputs use CRLF and the documented headers") {
  TempDir tmp;
  WalkPath p;
  p.points = {{0.0, 0.0}, {1.0, 2.0}};
  write_walk_csv(p, tmp.file("walk.csv"));
  const auto text = slurp(tmp.file("walk.csv"));
  CHECK(text.rfind("step,re,im\r\n", 0) == 0);
  CHECK(text.find("1,1,2\r\n") != std::string::npos);

  SffSampleSet s;
  s.times = {1.5};
  s.values = {4.0};
  write_sff_csv(s, tmp.file("sff.csv"));
  CHECK(slurp(tmp.file("sff.csv")).rfind("t,sff\r\n", 0) == 0);
}

TEST_CASE("pgm export writes the documented binary format") {
  TempDir tmp;
  RasterGrid g(4, 2);
  g.set(0, 0);
  g.set(3, 1);
  write_pgm(g, tmp.file("g.pgm"));
  const auto bytes = slurp(tmp.file("g.pgm"));
  const std::string header = "P5\n4 2\n255\n";
  REQUIRE(bytes.size() == header.size() + 8);
  CHECK(bytes.rfind(header, 0) == 0);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 0]) == 255);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 1]) == 0);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 7]) == 255);
}

TEST_CASE("manifest records command, flags and version") {
  TempDir tmp;
  write_manifest(tmp.file("out.csv"), "sff", {{"n", 100}, {"seed", 7}}, 0.25);
  const auto j = load_json_file(tmp.file("out.csv.manifest.json"));
  CHECK(j["command"] == "sff");
  CHECK(j["flags"]["seed"] == 7);
  CHECK(j["tool_version"] == std::string(kVersion));
  CHECK(j.contains("wall_clock_s"));
}
