#include "wvt/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace wvt {
namespace io {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_rows(const json& j, const char* what) {
  require(j.is_array() && !j.empty(), std::string(what) + ": expected a row array");
  const std::size_t rows = j.size();
  require(j[0].is_array() && !j[0].empty(),
          std::string(what) + ": rows must be arrays of numbers");
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    require(j[i].is_array() && j[i].size() == cols,
            std::string(what) + ": ragged rows");
    for (std::size_t k = 0; k < cols; ++k) {
      require(j[i][k].is_number(), std::string(what) + ": non-numeric entry");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
  require(j.is_array() && !j.empty(), std::string(what) + ": expected an array");
  if (j[0].is_array()) {
    const Eigen::MatrixXd m = matrix_from_rows(j, what);
    require(m.cols() == 1 || m.rows() == 1,
            std::string(what) + ": expected a single row or column");
    return m.cols() == 1 ? Eigen::VectorXd(m.col(0))
                         : Eigen::VectorXd(m.row(0).transpose());
  }
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    require(j[i].is_number(), std::string(what) + ": non-numeric entry");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json sym_to_json(const SymMatrix& u) {
  return json{{"n", u.order()}, {"rows", matrix_rows(u.mat())}};
}

SymMatrix sym_from_json(const json& j) {
  require(j.is_object() && j.contains("n") && j.contains("rows"),
          "symmetric matrix: expected {\"n\", \"rows\"}");
  require(j["n"].is_number_integer(), "symmetric matrix: n must be an integer");
  const int n = j["n"].get<int>();
  require(n >= 1, "symmetric matrix: order must be positive");
  const Eigen::MatrixXd m = matrix_from_rows(j["rows"], "symmetric matrix");
  require(m.rows() == n && m.cols() == n,
          "symmetric matrix: rows do not match the declared order");
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  const double skew = (m - m.transpose()).cwiseAbs().maxCoeff();
  require(skew <= 1e-9 * scale, "symmetric matrix: rows are not symmetric");
  return SymMatrix(m);
}

json pq_to_json(const PQOperator& op) {
  return json{{"u", sym_to_json(op.u)}, {"a", op.a}, {"b", op.b}};
}

PQOperator pq_from_json(const json& j) {
  require(j.is_object() && j.contains("u") && j.contains("a") && j.contains("b"),
          "operator: expected {\"u\", \"a\", \"b\"}");
  require(j["a"].is_number() && j["b"].is_number(),
          "operator: coefficients must be numbers");
  return PQOperator{sym_from_json(j["u"]), j["a"].get<double>(),
                    j["b"].get<double>()};
}

json dense_to_json(const DenseOperator& op) {
  return json{{"n", op.n}, {"rows", matrix_rows(op.matrix)}};
}

json bound_report_to_json(const bounds::BoundReport& report) {
  json checks = json::object();
  for (const auto& [key, value] : report.min_eig_checks) checks[key] = value;
  return json{{"A", report.A},
              {"B_signed", report.B_signed},
              {"bound", pq_to_json(report.bound)},
              {"dense_bound", dense_to_json(report.dense_bound)},
              {"min_eig_checks", std::move(checks)}};
}

json check_results_to_json(const std::vector<mc::CheckResult>& checks) {
  json rows = json::array();
  for (const auto& c : checks) {
    rows.push_back(json{{"check_id", c.check_id},
                        {"claim", c.claim},
                        {"status", c.pass ? "pass" : "fail"},
                        {"measured", c.measured},
                        {"tolerance", c.tolerance},
                        {"runtime_ms", c.runtime_ms}});
  }
  return rows;
}

std::string format_digits(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.15g", value);
  return buffer;
}

std::string dense_to_csv(const DenseOperator& op) {
  const OrthoBasis basis(op.n);
  std::ostringstream out;
  out << "row";
  for (int j = 0; j < basis.dim(); ++j) out << ',' << basis.label(j);
  out << '\n';
  for (int i = 0; i < basis.dim(); ++i) {
    out << basis.label(i);
    for (int j = 0; j < basis.dim(); ++j)
      out << ',' << format_digits(op.matrix(i, j));
    out << '\n';
  }
  return out.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out.good()) throw std::runtime_error("cannot write " + path);
}

}  // namespace io
}  // namespace wvt
