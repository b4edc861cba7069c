#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "binembed/embedders.hpp"
#include "binembed/harness.hpp"

using namespace binembed;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("complexity subcommand evaluates the subspace bound") {
  const auto res = run_cli({"complexity", "--regime", "subspace-global",
                            "--omega-sq", "9", "--delta", "0.1"});
  CHECK(res.code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j.at("m_required").get<double>() == doctest::Approx(900.0));
}

TEST_CASE("width subcommand estimates a subspace width") {
  const auto res =
      run_cli({"width", "--set", R"({"kind":"subspace","n":128,"d":9})",
               "--trials", "10000", "--seed", "1"});
  CHECK(res.code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j.at("estimate").get<double>() == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"nonsense"}).code == 2);
  CHECK(run_cli({"complexity", "--regime", "bogus", "--omega-sq", "1",
                 "--delta", "0.1"})
            .code == 2);
  CHECK(run_cli({"embed", "--m", "8"}).code == 2);  // missing input/output
}

TEST_CASE("help exits cleanly") {
  const auto res = run_cli({"--help"});
  CHECK(res.code == 0);
  CHECK(res.out.find("embed") != std::string::npos);
}

TEST_CASE("embed subcommand writes codes and rejects the zero vector") {
  const auto dir = fs::temp_directory_path() / ("binembed_cli1_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto input = (dir / "vecs.txt").string();
  const auto output = (dir / "codes.bnh").string();

  {
    std::ofstream f(input);
    f << "1 0 0 0\n0 1 0 0\n0 0 2 0\n";  // third line is normalized
  }
  const auto ok = run_cli({"embed", "--m", "16", "--input", input, "--output",
                           output, "--seed", "5"});
  CHECK(ok.code == 0);
  CHECK(ok.err.find("normalized") != std::string::npos);
  const auto codes = read_codes(output);
  REQUIRE(codes.size() == 3);
  CHECK(codes[0].m == 16);

  {
    std::ofstream f(input);
    f << "0 0 0 0\n";
  }
  const auto bad =
      run_cli({"embed", "--m", "16", "--input", input, "--output", output});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("zero vector has no direction") != std::string::npos);

  const auto missing = run_cli(
      {"embed", "--m", "16", "--input", (dir / "nope.txt").string(),
       "--output", output});
  CHECK(missing.code == 1);
  fs::remove_all(dir);
}

TEST_CASE("sketched operators need m_lin and accept it") {
  const auto missing = run_cli({"distortion", "--set",
                                R"({"kind":"subspace","n":32,"d":3})", "--p",
                                "10", "--op", "sketched", "--m", "16"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("m_lin") != std::string::npos);

  const auto ok = run_cli({"distortion", "--set",
                           R"({"kind":"subspace","n":32,"d":3})", "--p", "10",
                           "--op", "sketched", "--m", "16", "--m-lin", "24",
                           "--inner", "fjlt"});
  CHECK(ok.code == 0);
  CHECK(nlohmann::json::parse(ok.out).at("m") == 16);
}

TEST_CASE("distortion subcommand reports in both formats") {
  const auto json_res = run_cli({"distortion", "--set",
                                 R"({"kind":"subspace","n":32,"d":3})", "--p",
                                 "20", "--m", "24", "--seed", "3"});
  CHECK(json_res.code == 0);
  const auto j = nlohmann::json::parse(json_res.out);
  CHECK(j.at("m") == 24);
  CHECK(j.at("p") == 20);

  const auto csv_res = run_cli({"distortion", "--set",
                                R"({"kind":"subspace","n":32,"d":3})", "--p",
                                "20", "--m", "24", "--seed", "3", "--format",
                                "csv"});
  CHECK(csv_res.code == 0);
  CHECK(csv_res.out.rfind("set,kind,n,d,p,m,seed", 0) == 0);
}

TEST_CASE("experiment output does not depend on the thread count") {
  const auto dir = fs::temp_directory_path() /
                   ("binembed_cli3_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto cfg_path = (dir / "cfg.json").string();
  nlohmann::json j;
  j["name"] = "sparse_vs_gaussian";
  j["n"] = 32;
  j["dims"] = {2, 3};
  j["p"] = 20;
  j["m_grid"] = {8, 16};
  j["seeds"] = {0, 1, 2};

  std::string csv_by_threads[2];
  for (int which = 0; which < 2; ++which) {
    j["output_path"] = (dir / ("t" + std::to_string(which))).string();
    {
      std::ofstream f(cfg_path);
      f << j.dump();
    }
    const auto res = run_cli({"experiment", "--config", cfg_path, "--threads",
                              which == 0 ? "1" : "2"});
    REQUIRE(res.code == 0);
    std::ifstream in(j["output_path"].get<std::string>() + ".csv",
                     std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    csv_by_threads[which] = ss.str();
  }
  CHECK(!csv_by_threads[0].empty());
  CHECK(csv_by_threads[0] == csv_by_threads[1]);
  fs::remove_all(dir);
}

TEST_CASE("experiment subcommand runs a config file") {
  const auto dir = fs::temp_directory_path() / ("binembed_cli2_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto cfg_path = (dir / "cfg.json").string();
  {
    nlohmann::json j;
    j["name"] = "fig1a_bin_vs_lin";
    j["n"] = 32;
    j["dims"] = {2};
    j["p"] = 12;
    j["m_grid"] = {8};
    j["seeds"] = {0};
    j["output_path"] = (dir / "out").string();
    std::ofstream f(cfg_path);
    f << j.dump();
  }
  const auto res = run_cli({"experiment", "--config", cfg_path});
  CHECK(res.code == 0);
  CHECK(fs::exists(dir / "out.csv"));
  CHECK(fs::exists(dir / "out.json"));

  const auto bad = run_cli({"experiment", "--config", (dir / "no.json").string()});
  CHECK(bad.code == 1);
  fs::remove_all(dir);
}
