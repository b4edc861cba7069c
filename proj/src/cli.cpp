#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "binembed/harness.hpp"
#include "binembed/rng.hpp"
#include "binembed/sets.hpp"
#include "binembed/theory.hpp"

namespace binembed {

namespace {

// CLI seeds feed the library through fixed substreams so that e.g. the
// cloud and the operator of a `distortion` call stay independent.
constexpr std::uint64_t kCliCloudStream = 1;
constexpr std::uint64_t kCliOpStream = 2;
constexpr std::uint64_t kCliWidthStream = 3;

std::vector<Vec> read_vectors(const std::string& path, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::vector<Vec> vectors;
  std::string line;
  std::size_t lineno = 0;
  int warned = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    Vec v;
    double value;
    while (ls >> value) v.push_back(value);
    if (v.empty()) continue;  // blank line
    if (!vectors.empty() && v.size() != vectors[0].size())
      throw std::runtime_error("inconsistent vector length at line " +
                               std::to_string(lineno));
    if (!is_unit(v, 1e-9)) {
      v = normalized(std::move(v));  // throws on the zero vector
      if (++warned <= 5)
        err << "warning: line " << lineno << " is not a unit vector; normalized\n";
    }
    vectors.push_back(std::move(v));
  }
  if (vectors.empty()) throw std::runtime_error("no vectors in " + path);
  if (warned > 5)
    err << "warning: normalized " << warned << " non-unit vectors in total\n";
  return vectors;
}

SetDescriptor parse_set(const std::string& text) {
  return SetDescriptor::from_json(nlohmann::json::parse(text));
}

struct CliOptions {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string format = "json";
};

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"binary embeddings of sphere subsets into the Hamming cube"};
  app.require_subcommand(1);
  app.fallthrough();

  CliOptions opt;
  app.add_option("--seed", opt.seed, "base RNG seed")->capture_default_str();
  app.add_option("--threads", opt.threads, "worker threads (0 = default)");
  app.add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  // embed
  auto* embed_cmd =
      app.add_subcommand("embed", "read vectors, write binary codes");
  std::string embed_op = "dense", embed_inner = "gaussian";
  std::string embed_input, embed_output;
  int embed_m = 0, embed_m_lin = 0;
  embed_cmd->add_option("--op", embed_op, "operator kind")
      ->check(CLI::IsMember({"dense", "sparse", "fjlt", "sketched", "fast"}));
  embed_cmd->add_option("--m", embed_m, "code length")->required();
  embed_cmd->add_option("--m-lin", embed_m_lin, "sketch width (sketched)");
  embed_cmd->add_option("--inner", embed_inner, "sketched inner stage")
      ->check(CLI::IsMember({"gaussian", "fjlt"}));
  embed_cmd->add_option("--input", embed_input, "vector file, one per line")
      ->required();
  embed_cmd->add_option("--output", embed_output, "code file (BNH1)")
      ->required();

  // distortion
  auto* dist_cmd =
      app.add_subcommand("distortion", "sample a cloud and report distortion");
  std::string dist_set, dist_op = "dense", dist_inner = "gaussian", dist_out;
  int dist_p = 200, dist_m = 0, dist_m_lin = 0;
  dist_cmd->add_option("--set", dist_set, "set descriptor JSON")->required();
  dist_cmd->add_option("--p", dist_p, "points to sample");
  dist_cmd->add_option("--op", dist_op, "operator kind")
      ->check(CLI::IsMember({"dense", "sparse", "fjlt", "sketched", "fast"}));
  dist_cmd->add_option("--m", dist_m, "code length")->required();
  dist_cmd->add_option("--m-lin", dist_m_lin, "sketch width (sketched)");
  dist_cmd->add_option("--inner", dist_inner, "sketched inner stage")
      ->check(CLI::IsMember({"gaussian", "fjlt"}));
  dist_cmd->add_option("--out", dist_out, "write report to file");

  // width
  auto* width_cmd =
      app.add_subcommand("width", "Monte Carlo Gaussian width of a set");
  std::string width_set;
  int width_trials = 10000;
  width_cmd->add_option("--set", width_set, "set descriptor JSON")->required();
  width_cmd->add_option("--trials", width_trials, "Monte Carlo trials");

  // complexity
  auto* cx_cmd =
      app.add_subcommand("complexity", "evaluate a sample-complexity bound");
  std::string cx_regime;
  double cx_omega_sq = 0.0, cx_delta = 0.0, cx_c1 = 1.0;
  double cx_logn = 0.0, cx_wloc = 0.0, cx_ck = 0.0;
  cx_cmd->add_option("--regime", cx_regime, "bound regime")
      ->required()
      ->check(CLI::IsMember({"subspace-global", "arbitrary-global",
                             "subspace-local", "arbitrary-local",
                             "general-sharp", "general-sharp-local",
                             "structured-optimal", "sketched-gaussian",
                             "sketched-fjlt"}));
  cx_cmd->add_option("--omega-sq", cx_omega_sq, "squared Gaussian width")
      ->required();
  cx_cmd->add_option("--delta", cx_delta, "target distortion")->required();
  auto* cx_logn_opt =
      cx_cmd->add_option("--log-n-eps", cx_logn, "log covering number");
  auto* cx_wloc_opt = cx_cmd->add_option("--omega-sq-local", cx_wloc,
                                         "squared width of the local set");
  auto* cx_ck_opt =
      cx_cmd->add_option("--c-k", cx_ck, "structured-set constant C(K)");
  cx_cmd->add_option("--c1", cx_c1, "absolute constant")->capture_default_str();

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run a config-file study");
  std::string exp_config;
  exp_cmd->add_option("--config", exp_config, "experiment config JSON file")
      ->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

#ifdef _OPENMP
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif

  try {
    if (*embed_cmd) {
      const auto vectors = read_vectors(embed_input, err);
      const int n = static_cast<int>(vectors[0].size());
      const auto kind = op_kind_from_name(embed_op);
      const auto inner = embed_inner == "fjlt" ? InnerSketch::Fjlt
                                               : InnerSketch::Gaussian;
      const auto op = build(kind, embed_m, n, derive_stream(opt.seed, kCliOpStream),
                            embed_m_lin, inner);
      const auto codes = embed_batch(op, vectors);
      write_codes(embed_output, codes);
      out << "wrote " << codes.size() << " codes of length " << embed_m
          << " to " << embed_output << "\n";
      return 0;
    }

    if (*dist_cmd) {
      const SetDescriptor set = parse_set(dist_set);
      const PointCloud cloud =
          sample_points(set, dist_p, derive_stream(opt.seed, kCliCloudStream));
      const auto kind = op_kind_from_name(dist_op);
      const auto inner =
          dist_inner == "fjlt" ? InnerSketch::Fjlt : InnerSketch::Gaussian;
      const auto op = build(kind, dist_m, cloud.source.ambient_dim(),
                            derive_stream(opt.seed, kCliOpStream), dist_m_lin,
                            inner);
      DistortionReport rep = distortion_report(cloud, op);
      rep.seed = opt.seed;  // report the user-facing seed, not the substream
      std::ostringstream body;
      if (opt.format == "csv")
        body << DistortionReport::csv_header() << "\n" << rep.csv_row(dist_op)
             << "\n";
      else
        body << rep.to_json().dump(2) << "\n";
      if (dist_out.empty()) {
        out << body.str();
      } else {
        std::ofstream f(dist_out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open for writing: " + dist_out);
        f << body.str();
      }
      return 0;
    }

    if (*width_cmd) {
      const SetDescriptor set = parse_set(width_set);
      const WidthEstimate w = gaussian_width(
          set, width_trials, derive_stream(opt.seed, kCliWidthStream));
      if (opt.format == "csv") {
        out << "set,trials,seed,estimate,std_error\n";
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s,%d,%llu,%.10g,%.10g\n",
                      set_kind_name(set.kind).c_str(), w.trials,
                      static_cast<unsigned long long>(opt.seed), w.estimate,
                      w.std_error);
        out << buf;
      } else {
        nlohmann::json j;
        j["set"] = set.to_json();
        j["trials"] = w.trials;
        j["seed"] = opt.seed;
        j["estimate"] = w.estimate;
        j["std_error"] = w.std_error;
        out << j.dump(2) << "\n";
      }
      return 0;
    }

    if (*cx_cmd) {
      ComplexityQuery q;
      q.regime = regime_from_name(cx_regime);
      q.omega_sq = cx_omega_sq;
      q.delta = cx_delta;
      if (cx_logn_opt->count()) q.log_n_eps = cx_logn;
      if (cx_wloc_opt->count()) q.omega_sq_local = cx_wloc;
      if (cx_ck_opt->count()) q.c_k = cx_ck;
      q.c1 = cx_c1;
      nlohmann::json j;
      j["regime"] = cx_regime;
      nlohmann::json inputs;
      inputs["omega_sq"] = q.omega_sq;
      inputs["delta"] = q.delta;
      inputs["c1"] = q.c1;
      if (q.log_n_eps) inputs["log_n_eps"] = *q.log_n_eps;
      if (q.omega_sq_local) inputs["omega_sq_local"] = *q.omega_sq_local;
      if (q.regime == Regime::StructuredOptimal && !q.c_k) {
        q.c_k = q.omega_sq;  // width-derived C(K)
        inputs["c_k_from_omega_sq"] = true;
      }
      if (q.c_k) inputs["c_k"] = *q.c_k;
      j["inputs"] = inputs;
      j["m_required"] = required_samples(q);
      j["note"] = "up to unspecified absolute constant";
      out << j.dump(2) << "\n";
      return 0;
    }

    if (*exp_cmd) {
      std::ifstream f(exp_config);
      if (!f) throw std::runtime_error("cannot open config: " + exp_config);
      nlohmann::json j;
      f >> j;
      const ExperimentConfig config = ExperimentConfig::from_json(j);
      const ExperimentResult res = run(config);
      out << "experiment " << config.name << ": " << res.rows
          << " rows -> " << res.csv_path << ", summary -> " << res.json_path
          << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  err << "error: no subcommand\n";
  return 2;
}

}  // namespace binembed
