#include "wvt/lops.hpp"

#include <cmath>

namespace wvt {

SymMatrix apply(const PQOperator& op, const SymMatrix& v) {
  require_same_order(op.order(), v.order(), "lops::apply");
  const Eigen::MatrixXd& u = op.u.mat();
  Eigen::MatrixXd out = op.a * (u * v.mat() * u);
  if (op.b != 0.0) out += op.b * inner(op.u, v) * u;
  return SymMatrix(out);
}

DenseOperator to_dense(const PQOperator& op, const OrthoBasis& basis) {
  require_same_order(op.order(), basis.order(), "lops::to_dense");
  const int m = basis.dim();
  Eigen::MatrixXd d(m, m);
  for (int k = 0; k < m; ++k) d.col(k) = half_vec(apply(op, basis[k]));
  return DenseOperator{op.order(), d};
}

DenseOperator to_dense(const PQOperator& op) {
  return to_dense(op, OrthoBasis(op.order()));
}

PQOperator invert(const PQOperator& op) {
  if (op.a == 0.0)
    throw SingularOperator("lops::invert: zero P-coefficient, operator is rank one");
  const int n = op.order();
  const double c = -op.b / op.a;
  if (std::abs(1.0 - n * c) < 1e-12)
    throw SingularOperator("lops::invert: singular element (c = 1/n)");
  const SymMatrix uinv = inverse(op.u);  // definedness check lives here
  return PQOperator{uinv, 1.0 / op.a, c / (op.a * (1.0 - n * c))};
}

double det(const PQOperator& op) {
  const int n = op.order();
  const int m = sym_dim(n);
  if (op.a == 0.0) {
    if (m == 1) return op.b * op.u(0, 0) * op.u(0, 0);
    return 0.0;
  }
  const double c = -op.b / op.a;
  return std::pow(op.a, m) * std::exp((n + 1) * logdet(op.u)) * (1.0 - n * c);
}

bool is_posdef(const PQOperator& op) {
  chol(op.u);  // base point must be positive definite
  const int n = op.order();
  // congruence by the inverse square root of the base reduces the pencil to
  // a id + b I(x)I, whose spectrum is a + b n on span{I} and a on the
  // trace-free complement; the complement is empty exactly when n = 1
  if (n == 1) return op.a + op.b > 0.0;
  return op.a > 0.0 && op.a + op.b * n > 0.0;
}

}  // namespace wvt
