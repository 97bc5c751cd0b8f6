#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "wvt/bounds.hpp"
#include "wvt/lops.hpp"
#include "wvt/mcverify.hpp"
#include "wvt/symspace.hpp"

namespace wvt {
namespace io {

// Symmetric matrices travel as {"n": order, "rows": [[...], ...]}; input rows
// whose asymmetry exceeds 1e-9 relative to the largest entry are rejected.
nlohmann::json sym_to_json(const SymMatrix& u);
SymMatrix sym_from_json(const nlohmann::json& j);

// Operators in the two-dimensional algebra travel as {"u", "a", "b"}.
nlohmann::json pq_to_json(const PQOperator& op);
PQOperator pq_from_json(const nlohmann::json& j);

nlohmann::json dense_to_json(const DenseOperator& op);

nlohmann::json bound_report_to_json(const bounds::BoundReport& report);

// One row per check: check_id, claim, status ("pass"/"fail"), measured,
// tolerance, runtime_ms.
nlohmann::json check_results_to_json(const std::vector<mc::CheckResult>& checks);

// Matrix (or vector) of plain numbers as nested JSON arrays.
nlohmann::json matrix_rows(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_rows(const nlohmann::json& j, const char* what);
Eigen::VectorXd vector_from_json(const nlohmann::json& j, const char* what);

// value printed with 15 significant digits.
std::string format_digits(double value);

// CSV of an operator matrix in the orthonormal basis: a header of basis
// labels, then one labeled row per basis vector, row-major.
std::string dense_to_csv(const DenseOperator& op);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace io
}  // namespace wvt
