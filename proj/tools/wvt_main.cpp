#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "wvt/bounds.hpp"
#include "wvt/json_io.hpp"
#include "wvt/mcverify.hpp"
#include "wvt/model.hpp"

namespace {

using nlohmann::json;

// Configs are flat objects whose keys mirror the long option names. A
// previously written artifact is also accepted: its "config" object is used,
// which makes every --out file replayable.
json load_config(const std::string& path) {
  json j = wvt::io::read_json_file(path);
  if (j.is_object() && j.contains("config") && j["config"].is_object())
    return j["config"];
  if (!j.is_object())
    throw std::invalid_argument("config file must hold a JSON object");
  return j;
}

// Matrix arguments: the literal "identity", a path to a JSON file, an inline
// {"n", "rows"} object, or inline nested rows.
wvt::SymMatrix matrix_argument(const json& value, int n_hint, const char* what) {
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s == "identity") {
      if (n_hint < 1)
        throw std::invalid_argument(std::string(what) +
                                    ": \"identity\" requires --n");
      return wvt::SymMatrix::identity(n_hint);
    }
    const std::size_t head = s.find_first_not_of(" \t");
    if (head != std::string::npos && (s[head] == '[' || s[head] == '{')) {
      json inline_value = json::parse(s, nullptr, false);
      if (inline_value.is_discarded())
        throw std::invalid_argument(std::string(what) + ": malformed inline JSON");
      return matrix_argument(inline_value, n_hint, what);
    }
    return matrix_argument(wvt::io::read_json_file(s), n_hint, what);
  }
  if (value.is_array()) {
    const Eigen::MatrixXd m = wvt::io::matrix_from_rows(value, what);
    const json wrapped{{"n", static_cast<int>(m.rows())},
                       {"rows", wvt::io::matrix_rows(m)}};
    return wvt::io::sym_from_json(wrapped);
  }
  return wvt::io::sym_from_json(value);
}

bool parse_number_list(const std::string& s, Eigen::VectorXd& out) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::string token =
        s.substr(start, comma == std::string::npos ? comma : comma - start);
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      while (used < token.size() && std::isspace(static_cast<unsigned char>(
                                        token[used])))
        ++used;
      if (used != token.size()) return false;
      values.push_back(v);
    } catch (const std::exception&) {
      return false;
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (values.empty()) return false;
  out.resize(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = values[i];
  return true;
}

// Vector arguments: an inline comma-separated list, a path to a JSON file,
// or an inline JSON array.
Eigen::VectorXd vector_argument(const json& value, const char* what) {
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    Eigen::VectorXd inline_values;
    if (parse_number_list(s, inline_values)) return inline_values;
    return vector_argument(wvt::io::read_json_file(s), what);
  }
  return wvt::io::vector_from_json(value, what);
}

// Fills option targets that were not given on the command line from the
// config object; the command line always wins.
struct ConfigMerge {
  const CLI::App* cmd;
  const json& config;

  template <typename T>
  void fill(const char* flag, const char* key, T& target) const {
    if (cmd->count(flag) > 0) return;
    if (!config.contains(key)) return;
    target = config.at(key).get<T>();
  }

  void fill_json(const char* flag, const char* key, json& target) const {
    if (cmd->count(flag) > 0) return;
    if (config.contains(key)) target = config.at(key);
  }
};

int write_artifact_or_fail(const std::string& path, const std::string& text) {
  try {
    wvt::io::write_text_file(path, text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct DensityOptions {
  int n = 0;
  double p = std::nan("");
  std::string sigma_flag;
  std::string x_flag;
  bool log = false;
  std::string out;
  std::string config_path;
};

int run_density(const CLI::App* cmd, DensityOptions& opt) {
  json config = json::object();
  if (!opt.config_path.empty()) config = load_config(opt.config_path);
  const ConfigMerge merge{cmd, config};
  merge.fill("--n", "n", opt.n);
  merge.fill("--p", "p", opt.p);
  merge.fill("--log", "log", opt.log);
  merge.fill("--out", "out", opt.out);
  json sigma_value = opt.sigma_flag.empty() ? json() : json(opt.sigma_flag);
  merge.fill_json("--sigma", "sigma", sigma_value);
  json x_value = opt.x_flag.empty() ? json() : json(opt.x_flag);
  merge.fill_json("--x", "x", x_value);

  if (sigma_value.is_null()) throw std::invalid_argument("--sigma is required");
  if (x_value.is_null()) throw std::invalid_argument("--x is required");
  if (std::isnan(opt.p)) throw std::invalid_argument("--p is required");

  const wvt::SymMatrix sigma = matrix_argument(sigma_value, opt.n, "--sigma");
  if (opt.n > 0 && sigma.order() != opt.n)
    throw std::invalid_argument("--sigma order does not match --n");
  const Eigen::VectorXd x = vector_argument(x_value, "--x");
  if (x.size() != sigma.order())
    throw std::invalid_argument("--x length does not match the matrix order");

  const wvt::model::ModelParams params{opt.p, sigma};
  params.validate();
  const double log_value = wvt::model::log_density(params, x);
  std::cout << wvt::io::format_digits(opt.log ? log_value : std::exp(log_value))
            << "\n";

  if (!opt.out.empty()) {
    json x_rows = json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) x_rows.push_back(x(i));
    const json artifact{
        {"command", "density"},
        {"config",
         json{{"n", sigma.order()},
              {"p", opt.p},
              {"sigma", wvt::io::sym_to_json(sigma)},
              {"x", std::move(x_rows)},
              {"log", opt.log}}},
        {"log_value", log_value},
        {"value", std::exp(log_value)}};
    return write_artifact_or_fail(opt.out, artifact.dump(2) + "\n");
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct FisherOptions {
  int n = 0;
  double p = std::nan("");
  std::string sigma_flag;
  bool inverse = false;
  bool dense = false;
  std::string format = "json";
  std::string out;
  std::string config_path;
};

int run_fisher(const CLI::App* cmd, FisherOptions& opt) {
  json config = json::object();
  if (!opt.config_path.empty()) config = load_config(opt.config_path);
  const ConfigMerge merge{cmd, config};
  merge.fill("--n", "n", opt.n);
  merge.fill("--p", "p", opt.p);
  merge.fill("--inverse", "inverse", opt.inverse);
  merge.fill("--dense", "dense", opt.dense);
  merge.fill("--format", "format", opt.format);
  merge.fill("--out", "out", opt.out);
  json sigma_value = opt.sigma_flag.empty() ? json() : json(opt.sigma_flag);
  merge.fill_json("--sigma", "sigma", sigma_value);

  if (sigma_value.is_null()) throw std::invalid_argument("--sigma is required");
  if (std::isnan(opt.p)) throw std::invalid_argument("--p is required");
  if (opt.format != "json" && opt.format != "csv")
    throw std::invalid_argument("--format must be json or csv");
  if (opt.out.empty()) throw std::invalid_argument("--out is required");

  const wvt::SymMatrix sigma = matrix_argument(sigma_value, opt.n, "--sigma");
  if (opt.n > 0 && sigma.order() != opt.n)
    throw std::invalid_argument("--sigma order does not match --n");
  const wvt::model::ModelParams params{opt.p, sigma};
  params.validate();
  const wvt::PQOperator op = opt.inverse ? wvt::model::fisher_inverse(params)
                                         : wvt::model::fisher_information(params);
  std::cout << (opt.inverse ? "inverse information" : "information")
            << ": a=" << wvt::io::format_digits(op.a)
            << " b=" << wvt::io::format_digits(op.b) << "\n";

  if (opt.format == "csv")
    return write_artifact_or_fail(opt.out, wvt::io::dense_to_csv(to_dense(op)));

  json artifact{{"command", "fisher"},
                {"config", json{{"n", sigma.order()},
                                {"p", opt.p},
                                {"sigma", wvt::io::sym_to_json(sigma)},
                                {"inverse", opt.inverse},
                                {"dense", opt.dense},
                                {"format", opt.format}}},
                {"operator", wvt::io::pq_to_json(op)}};
  if (opt.dense) artifact["dense"] = wvt::io::dense_to_json(to_dense(op));
  return write_artifact_or_fail(opt.out, artifact.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

struct VanTreesOptions {
  int n = 0;
  double p = std::nan("");
  double p1 = std::nan("");
  std::string sigma1_flag;
  int k = 1;
  std::string simulate;  // empty, "constant", or "clipped_moment"
  std::int64_t samples = 100000;
  std::uint64_t seed = 20260816ull;
  int batches = 10;
  double eig_floor = 0.0;
  double eig_cap = 0.0;
  std::string out;
  std::string config_path;
};

int run_vantrees(const CLI::App* cmd, VanTreesOptions& opt) {
  json config = json::object();
  if (!opt.config_path.empty()) config = load_config(opt.config_path);
  const ConfigMerge merge{cmd, config};
  merge.fill("--n", "n", opt.n);
  merge.fill("--p", "p", opt.p);
  merge.fill("--p1", "p1", opt.p1);
  merge.fill("--k", "k", opt.k);
  merge.fill("--simulate", "simulate", opt.simulate);
  merge.fill("--samples", "samples", opt.samples);
  merge.fill("--seed", "seed", opt.seed);
  merge.fill("--batches", "batches", opt.batches);
  merge.fill("--floor", "floor", opt.eig_floor);
  merge.fill("--cap", "cap", opt.eig_cap);
  merge.fill("--out", "out", opt.out);
  json sigma_value = opt.sigma1_flag.empty() ? json() : json(opt.sigma1_flag);
  merge.fill_json("--sigma1", "sigma1", sigma_value);

  if (sigma_value.is_null()) throw std::invalid_argument("--sigma1 is required");
  if (std::isnan(opt.p)) throw std::invalid_argument("--p is required");
  if (std::isnan(opt.p1)) throw std::invalid_argument("--p1 is required");
  if (!opt.simulate.empty() && opt.simulate != "constant" &&
      opt.simulate != "clipped_moment")
    throw std::invalid_argument("--simulate must be constant or clipped_moment");

  const wvt::SymMatrix sigma1 = matrix_argument(sigma_value, opt.n, "--sigma1");
  if (opt.n > 0 && sigma1.order() != opt.n)
    throw std::invalid_argument("--sigma1 order does not match --n");
  const wvt::bounds::VanTreesProblem problem{opt.p, {opt.p1, sigma1}, opt.k};
  problem.validate();

  const wvt::bounds::BoundReport report = wvt::bounds::van_trees_bound(problem);
  std::cout << "bound coefficients: A=" << wvt::io::format_digits(report.A)
            << " B_signed=" << wvt::io::format_digits(report.B_signed) << "\n";

  json artifact{{"command", "vantrees"},
                {"config", json{{"n", sigma1.order()},
                                {"p", opt.p},
                                {"p1", opt.p1},
                                {"sigma1", wvt::io::sym_to_json(sigma1)},
                                {"k", opt.k},
                                {"simulate", opt.simulate},
                                {"samples", opt.samples},
                                {"seed", opt.seed},
                                {"batches", opt.batches},
                                {"floor", opt.eig_floor},
                                {"cap", opt.eig_cap}}},
                {"report", wvt::io::bound_report_to_json(report)}};

  if (!opt.simulate.empty()) {
    wvt::mc::EstimatorSpec spec;
    if (opt.simulate == "constant") {
      spec.kind = wvt::mc::EstimatorSpec::Kind::constant;
      spec.value = sigma1 * opt.p1;  // prior mean
    } else {
      spec.kind = wvt::mc::EstimatorSpec::Kind::clipped_moment;
      spec.eig_floor = opt.eig_floor;
      spec.eig_cap = opt.eig_cap;
    }
    const wvt::mc::McConfig mc_config{opt.seed, opt.samples, opt.batches};
    mc_config.validate();
    const wvt::mc::SimulationResult sim =
        wvt::mc::simulate_estimator(problem, spec, mc_config);
    std::cout << "empirical gap: " << wvt::io::format_digits(sim.gap)
              << " (se " << wvt::io::format_digits(sim.gap_se) << ")\n";
    json diagnostics = json::object();
    for (const auto& [key, value] : sim.diagnostics) diagnostics[key] = value;
    artifact["simulation"] =
        json{{"estimator", opt.simulate},
             {"empirical_c", wvt::io::dense_to_json(sim.empirical_c)},
             {"se", wvt::io::dense_to_json(sim.se)},
             {"gap", sim.gap},
             {"gap_se", sim.gap_se},
             {"diagnostics", std::move(diagnostics)}};
  }

  if (!opt.out.empty())
    return write_artifact_or_fail(opt.out, artifact.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
  bool fast = false;
  bool full = false;
  std::uint64_t seed = 20260816ull;
  std::int64_t samples = 1000000;
  int batches = 10;
  std::string out;
  std::string config_path;
};

int run_verify(const CLI::App* cmd, VerifyOptions& opt) {
  json config = json::object();
  if (!opt.config_path.empty()) config = load_config(opt.config_path);
  const ConfigMerge merge{cmd, config};
  merge.fill("--seed", "seed", opt.seed);
  merge.fill("--samples", "samples", opt.samples);
  merge.fill("--batches", "batches", opt.batches);
  merge.fill("--out", "out", opt.out);
  std::string scope_name = opt.fast ? "fast" : (opt.full ? "full" : "");
  if (scope_name.empty() && config.contains("scope"))
    scope_name = config.at("scope").get<std::string>();
  if (scope_name.empty()) scope_name = "full";
  if (scope_name != "fast" && scope_name != "full")
    throw std::invalid_argument("scope must be fast or full");

  const wvt::mc::Scope scope =
      scope_name == "fast" ? wvt::mc::Scope::fast : wvt::mc::Scope::full;
  const wvt::mc::McConfig mc_config{opt.seed, opt.samples, opt.batches};
  mc_config.validate();

  const std::vector<wvt::mc::CheckResult> checks =
      wvt::mc::run_verification_suite(scope, mc_config);
  int failed = 0;
  for (const auto& c : checks) {
    if (!c.pass) ++failed;
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.check_id
              << " measured=" << wvt::io::format_digits(c.measured)
              << " tolerance=" << wvt::io::format_digits(c.tolerance) << " ("
              << wvt::io::format_digits(c.runtime_ms) << " ms)\n";
  }
  std::cout << "verification: " << checks.size() << " checks, " << failed
            << " failed (scope " << scope_name << ", seed " << opt.seed
            << ")\n";

  if (!opt.out.empty()) {
    const json artifact{{"command", "verify"},
                        {"config", json{{"scope", scope_name},
                                        {"seed", opt.seed},
                                        {"samples", opt.samples},
                                        {"batches", opt.batches}}},
                        {"all_pass", failed == 0},
                        {"checks", wvt::io::check_results_to_json(checks)}};
    const int code = write_artifact_or_fail(opt.out, artifact.dump(2) + "\n");
    if (code != 0) return code;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "closed-form statistics of the Wishart-randomized Gaussian model"};
  app.require_subcommand(1);

  DensityOptions density;
  CLI::App* density_cmd =
      app.add_subcommand("density", "evaluate the observation density");
  density_cmd->add_option("--n", density.n, "matrix order");
  density_cmd->add_option("--p", density.p, "shape parameter");
  density_cmd->add_option("--sigma", density.sigma_flag,
                          "matrix parameter: \"identity\" or a JSON file");
  density_cmd->add_option("--x", density.x_flag,
                          "observation: comma-separated list or a JSON file");
  density_cmd->add_flag("--log", density.log, "print the log density");
  density_cmd->add_option("--out", density.out, "write a JSON artifact");
  density_cmd->add_option("--config", density.config_path,
                          "JSON config (command line wins)");

  FisherOptions fisher;
  CLI::App* fisher_cmd =
      app.add_subcommand("fisher", "information operator in closed form");
  fisher_cmd->add_option("--n", fisher.n, "matrix order");
  fisher_cmd->add_option("--p", fisher.p, "shape parameter");
  fisher_cmd->add_option("--sigma", fisher.sigma_flag,
                         "matrix parameter: \"identity\" or a JSON file");
  fisher_cmd->add_flag("--inverse", fisher.inverse, "emit the closed inverse");
  fisher_cmd->add_flag("--dense", fisher.dense,
                       "embed the dense matrix in the artifact");
  fisher_cmd->add_option("--format", fisher.format, "json or csv");
  fisher_cmd->add_option("--out", fisher.out, "output file");
  fisher_cmd->add_option("--config", fisher.config_path,
                         "JSON config (command line wins)");

  VanTreesOptions vantrees;
  CLI::App* vantrees_cmd =
      app.add_subcommand("vantrees", "Bayesian lower bound and simulation");
  vantrees_cmd->add_option("--n", vantrees.n, "matrix order");
  vantrees_cmd->add_option("--p", vantrees.p, "model shape");
  vantrees_cmd->add_option("--p1", vantrees.p1, "prior shape");
  vantrees_cmd->add_option("--sigma1", vantrees.sigma1_flag,
                           "prior matrix: \"identity\" or a JSON file");
  vantrees_cmd->add_option("--k", vantrees.k, "observations per draw");
  vantrees_cmd->add_option("--simulate", vantrees.simulate,
                           "constant or clipped_moment");
  vantrees_cmd->add_option("--samples", vantrees.samples, "prior draws");
  vantrees_cmd->add_option("--seed", vantrees.seed, "random seed");
  vantrees_cmd->add_option("--batches", vantrees.batches,
                           "batches for standard errors");
  vantrees_cmd->add_option("--floor", vantrees.eig_floor,
                           "clipped_moment eigenvalue floor");
  vantrees_cmd->add_option("--cap", vantrees.eig_cap,
                           "clipped_moment eigenvalue cap");
  vantrees_cmd->add_option("--out", vantrees.out, "write a JSON artifact");
  vantrees_cmd->add_option("--config", vantrees.config_path,
                           "JSON config (command line wins)");

  VerifyOptions verify;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the verification suite");
  CLI::Option* fast_flag =
      verify_cmd->add_flag("--fast", verify.fast, "reduced sample counts");
  verify_cmd->add_flag("--full", verify.full, "full sample counts (default)")
      ->excludes(fast_flag);
  verify_cmd->add_option("--seed", verify.seed, "random seed");
  verify_cmd->add_option("--samples", verify.samples,
                         "draws for the heaviest full-scope checks");
  verify_cmd->add_option("--batches", verify.batches,
                         "batches for estimator standard errors");
  verify_cmd->add_option("--out", verify.out, "write a JSON report");
  verify_cmd->add_option("--config", verify.config_path,
                         "JSON config (command line wins)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (density_cmd->parsed()) return run_density(density_cmd, density);
    if (fisher_cmd->parsed()) return run_fisher(fisher_cmd, fisher);
    if (vantrees_cmd->parsed()) return run_vantrees(vantrees_cmd, vantrees);
    if (verify_cmd->parsed()) return run_verify(verify_cmd, verify);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
