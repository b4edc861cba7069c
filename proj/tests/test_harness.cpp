#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "binembed/harness.hpp"

using namespace binembed;
namespace fs = std::filesystem;

namespace {

// Per-process scratch dir so concurrent suite instances cannot collide.
fs::path scratch_dir(const std::string& tag) {
  return fs::temp_directory_path() /
         (tag + "_" + std::to_string(::getpid()));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig tiny_config(const std::string& name, const std::string& out) {
  nlohmann::json j;
  j["name"] = name;
  j["n"] = 32;
  j["dims"] = {3};
  j["p"] = 24;
  j["m_grid"] = {8, 16};
  j["seeds"] = {0, 1, 2};
  j["output_path"] = out;
  return ExperimentConfig::from_json(j);
}

}  // namespace

TEST_CASE("config defaults and validation") {
  nlohmann::json j;
  j["name"] = "fig1a_bin_vs_lin";
  j["output_path"] = "x";
  const auto cfg = ExperimentConfig::from_json(j);
  CHECK(cfg.n == 128);
  CHECK(cfg.dims == std::vector<int>{3, 6});
  CHECK(cfg.p == 200);
  CHECK(cfg.m_grid.size() == 25);
  CHECK(cfg.m_grid.front() == 4);
  CHECK(cfg.m_grid.back() == 100);
  CHECK(cfg.seeds.size() == 20);

  nlohmann::json bad = j;
  bad["m_grid"] = nlohmann::json::array();
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), std::invalid_argument);
  bad = j;
  bad["m_grid"] = {8, 4};
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), std::invalid_argument);
  bad = j;
  bad["p"] = 1;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), std::invalid_argument);
  bad = j;
  bad["name"] = "fig97";
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), std::invalid_argument);
}

TEST_CASE("fig1a experiment writes the expected grid") {
  const auto dir = scratch_dir("binembed_h1");
  fs::create_directories(dir);
  const auto cfg = tiny_config("fig1a_bin_vs_lin", (dir / "out").string());
  const auto res = run(cfg);
  CHECK(res.rows == 1 * 2 * 3);  // dims x m_grid x seeds

  const std::string csv = slurp(res.csv_path);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "set,kind,n,d,p,m,seed,delta_bin,delta_lin,delta_nlin");
  int count = 0;
  for (std::string line; std::getline(lines, line);)
    if (!line.empty()) ++count;
  CHECK(count == res.rows);

  const auto summary = nlohmann::json::parse(slurp(res.json_path));
  CHECK(summary.at("schema") == 1);
  CHECK(summary.at("cells").size() == 2);  // (d=3, m=8), (d=3, m=16)
  for (const auto& cell : summary.at("cells")) {
    CHECK(cell.at("kind") == "dense");
    CHECK(cell.at("mean_delta_bin").get<double>() >= 0.0);
  }
  fs::remove_all(dir);
}

TEST_CASE("experiment reruns are byte-identical") {
  const auto dir = scratch_dir("binembed_h2");
  fs::create_directories(dir);
  const auto cfg_a = tiny_config("sparse_vs_gaussian", (dir / "a").string());
  const auto cfg_b = tiny_config("sparse_vs_gaussian", (dir / "b").string());
  const auto res_a = run(cfg_a);
  const auto res_b = run(cfg_b);
  CHECK(slurp(res_a.csv_path) == slurp(res_b.csv_path));
  CHECK(slurp(res_a.json_path) == slurp(res_b.json_path));
  fs::remove_all(dir);
}

TEST_CASE("comparison experiments carry both operator kinds") {
  const auto dir = scratch_dir("binembed_h3");
  fs::create_directories(dir);
  const auto cfg = tiny_config("fjlt_vs_gaussian", (dir / "out").string());
  const auto res = run(cfg);
  CHECK(res.rows == 2 * 1 * 2 * 3);  // kinds x dims x m_grid x seeds

  const std::string csv = slurp(res.csv_path);
  CHECK(csv.find(",dense,") != std::string::npos);
  CHECK(csv.find(",fast,") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("grid rows share clouds across kinds and nest across m") {
  const auto rows = distortion_grid(32, {3}, 20, {8, 16}, {0, 1},
                                    {OpKind::DenseGaussian});
  REQUIRE(rows.size() == 4);
  // ordering is (kind, d, m, seed)
  CHECK(rows[0].m == 8);
  CHECK(rows[0].seed == 0);
  CHECK(rows[1].seed == 1);
  CHECK(rows[2].m == 16);
  // the same (d, seed) cloud appears at every m
  CHECK(rows[0].report.seed == rows[2].report.seed);
}

TEST_CASE("summarize averages across seeds") {
  const auto rows = distortion_grid(32, {3}, 20, {8}, {0, 1, 2, 3},
                                    {OpKind::DenseGaussian});
  const auto cells = summarize(rows);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].n_seeds == 4);
  double manual = 0.0;
  for (const auto& r : rows) manual += r.report.delta_bin;
  CHECK(cells[0].mean_bin == doctest::Approx(manual / 4.0));
  CHECK(cells[0].se_bin >= 0.0);
}

TEST_CASE("local sweep and complexity table produce their schemas") {
  const auto dir = scratch_dir("binembed_h4");
  fs::create_directories(dir);

  nlohmann::json j;
  j["name"] = "local_embedding_sweep";
  j["n"] = 32;
  j["dims"] = {2};
  j["p"] = 16;
  j["m_grid"] = {128};
  j["seeds"] = {0, 1};
  j["deltas"] = {0.2, 0.4};
  j["output_path"] = (dir / "sweep").string();
  const auto sweep = run(ExperimentConfig::from_json(j));
  const std::string sweep_csv = slurp(sweep.csv_path);
  CHECK(sweep_csv.rfind("set,kind,n,d,p,m,seed,delta,eps,close_ok,far_ok,violations",
                        0) == 0);
  CHECK(sweep.rows == 1 * 1 * 2 * 2);

  nlohmann::json jc;
  jc["name"] = "complexity_table";
  jc["dims"] = {3, 6};
  jc["output_path"] = (dir / "table").string();
  const auto table = run(ExperimentConfig::from_json(jc));
  const std::string table_csv = slurp(table.csv_path);
  CHECK(table_csv.rfind("regime,delta,omega_sq,m_required", 0) == 0);
  // subspace bound at omega^2 = 3, delta = 0.1 evaluates to 300
  CHECK(table_csv.find("subspace-global,0.1,3,300") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("unwritable output path raises a runtime error") {
  auto cfg = tiny_config("fig1a_bin_vs_lin", "/nonexistent_dir_zz/out");
  CHECK_THROWS_AS(run(cfg), std::runtime_error);
}
