#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "wvt/json_io.hpp"
#include "wvt/lops.hpp"
#include "wvt/symspace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wvt;

namespace {
struct RunResult {
  int code = -1;
  std::string out;
};

std::string cli_path() {
  const char* env = std::getenv("WVT_CLI");
  return env ? env : "./wvt";
}

RunResult run(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("wvt_cli_test_" + name);
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return json::parse(in);
}
}  // namespace

TEST_CASE("density value on stdout") {
  auto r = run("density --n 1 --p 1 --sigma identity --x 0");
  CHECK(r.code == 0);
  CHECK(std::stod(r.out) == doctest::Approx(0.353553390593274).epsilon(1e-12));

  auto lg = run("density --n 1 --p 1 --sigma identity --x 0 --log");
  CHECK(lg.code == 0);
  CHECK(std::stod(lg.out) == doctest::Approx(-1.0397207708399179).epsilon(1e-12));
}

TEST_CASE("density artifact replays to the same value") {
  auto artifact = temp_file("density.json");
  auto first = run("density --n 2 --p 2 --sigma identity --x 0,0 --out " +
                   artifact.string());
  CHECK(first.code == 0);
  auto blob = read_json(artifact);
  CHECK(blob.at("command") == "density");
  CHECK(blob.at("config").at("p") == doctest::Approx(2.0));
  CHECK(blob.at("value").get<double>() ==
        doctest::Approx(1.5 / (2 * M_PI)).epsilon(1e-12));

  auto replay = run("density --config " + artifact.string());
  CHECK(replay.code == 0);
  CHECK(std::stod(replay.out) == doctest::Approx(std::stod(first.out)).epsilon(1e-15));

  // Command line overrides the replayed configuration.
  auto shifted = run("density --config " + artifact.string() + " --p 3");
  CHECK(shifted.code == 0);
  CHECK(std::stod(shifted.out) != doctest::Approx(std::stod(first.out)));
  fs::remove(artifact);
}

TEST_CASE("fisher artifact and csv export") {
  auto artifact = temp_file("fisher.json");
  auto r = run("fisher --n 1 --p 1 --sigma identity --out " + artifact.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("a=0.3") != std::string::npos);
  CHECK(r.out.find("b=-0.1") != std::string::npos);
  auto blob = read_json(artifact);
  CHECK(blob.at("operator").at("a").get<double>() == doctest::Approx(0.3));
  CHECK(blob.at("operator").at("b").get<double>() == doctest::Approx(-0.1));
  fs::remove(artifact);

  auto csv_file = temp_file("fisher.csv");
  auto c = run("fisher --n 2 --p 2 --sigma identity --dense --format csv --out " +
               csv_file.string());
  CHECK(c.code == 0);
  std::ifstream in(csv_file);
  std::string header;
  std::getline(in, header);
  CHECK(header == "row,e00,e11,e01");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
  fs::remove(csv_file);
}

TEST_CASE("fisher inverse through the same entry point") {
  auto artifact = temp_file("fisher_inv.json");
  auto r = run("fisher --n 2 --p 2 --sigma identity --inverse --out " +
               artifact.string());
  CHECK(r.code == 0);
  auto blob = read_json(artifact);
  CHECK(blob.at("operator").at("a").get<double>() == doctest::Approx(2.8).epsilon(1e-12));
  CHECK(blob.at("operator").at("b").get<double>() ==
        doctest::Approx(14.0 / 15.0).epsilon(1e-12));
  fs::remove(artifact);
}

TEST_CASE("vantrees scalar benchmark artifact") {
  auto artifact = temp_file("vantrees.json");
  auto r = run("vantrees --n 1 --p 1 --p1 4 --sigma1 identity --k 1 --out " +
               artifact.string());
  CHECK(r.code == 0);
  auto blob = read_json(artifact);
  const auto& report = blob.at("report");
  CHECK(report.at("A").get<double>() == doctest::Approx(7.0 / 15.0).epsilon(1e-12));
  CHECK(report.at("B_signed").get<double>() ==
        doctest::Approx(1.0 / 15.0).epsilon(1e-12));
  CHECK(report.at("dense_bound").at("rows")[0][0].get<double>() ==
        doctest::Approx(1.875).epsilon(1e-12));
  fs::remove(artifact);
}

TEST_CASE("matrix arguments accept inline json and files") {
  auto sigma_file = temp_file("sigma.json");
  {
    std::ofstream out(sigma_file);
    out << "[[2.0, 0.5], [0.5, 1.5]]";
  }
  auto from_file = run("density --n 2 --p 1.5 --sigma " + sigma_file.string() +
                       " --x 0.4,-0.2");
  CHECK(from_file.code == 0);
  auto inline_arg = run("density --n 2 --p 1.5 --sigma [[2.0,0.5],[0.5,1.5]]"
                        " --x 0.4,-0.2");
  CHECK(inline_arg.code == 0);
  CHECK(std::stod(from_file.out) == doctest::Approx(std::stod(inline_arg.out)));
  fs::remove(sigma_file);
}

TEST_CASE("errors use distinct exit codes") {
  // Unknown option or missing subcommand: usage error.
  CHECK(run("density --n 1 --p 1 --sigma identity").code == 2);  // missing --x
  CHECK(run("nonsense").code == 2);

  // Nonsymmetric matrix argument: domain error surfaces as a clean message.
  auto bad = run("density --n 2 --p 1 --sigma [[1.0,2.0],[0.0,1.0]] --x 0,0");
  CHECK(bad.code == 2);
  CHECK(bad.out.find("error") != std::string::npos);

  // Unwritable artifact path.
  auto blocked =
      run("density --n 1 --p 1 --sigma identity --x 0 --out /nonexistent/x.json");
  CHECK(blocked.code == 3);
}

TEST_CASE("symmetric matrix json round trip") {
  Eigen::MatrixXd m(2, 2);
  m << 1.25, -0.5, -0.5, 2.0;
  SymMatrix u(m);
  json j = io::sym_to_json(u);
  SymMatrix back = io::sym_from_json(j);
  CHECK(inner(back - u, back - u) == 0.0);

  json bad = {{"n", 2}, {"rows", {{1.0, 2.0}, {0.0, 1.0}}}};
  CHECK_THROWS_AS(io::sym_from_json(bad), std::invalid_argument);
}

TEST_CASE("operator json round trip") {
  Eigen::MatrixXd m(2, 2);
  m << 1.5, 0.25, 0.25, 0.75;
  wvt::PQOperator op{SymMatrix(m), 0.8, -0.1};
  json j = io::pq_to_json(op);
  auto back = io::pq_from_json(j);
  CHECK(back.a == doctest::Approx(op.a));
  CHECK(back.b == doctest::Approx(op.b));
  CHECK(inner(back.u - op.u, back.u - op.u) == 0.0);
}

TEST_CASE("csv export labels rows by basis element") {
  DenseOperator id = DenseOperator::identity(2);
  std::string csv = io::dense_to_csv(id);
  CHECK(csv.rfind("row,e00,e11,e01\n", 0) == 0);
  CHECK(csv.find("\ne01,0,0,1") != std::string::npos);
}
