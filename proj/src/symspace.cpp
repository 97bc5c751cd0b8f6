#include "wvt/symspace.hpp"

#include <cmath>
#include <limits>

namespace wvt {

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw DimensionMismatch("SymMatrix requires a square matrix of order >= 1");
  mat_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(int n) { return SymMatrix(Eigen::MatrixXd::Identity(n, n)); }
SymMatrix SymMatrix::zero(int n) { return SymMatrix(Eigen::MatrixXd::Zero(n, n)); }
SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
  return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  require_same_order(order(), o.order(), "SymMatrix::operator+");
  return SymMatrix(mat_ + o.mat_);
}
SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  require_same_order(order(), o.order(), "SymMatrix::operator-");
  return SymMatrix(mat_ - o.mat_);
}
SymMatrix SymMatrix::operator*(double s) const { return SymMatrix(mat_ * s); }

void require_same_order(int nu, int nv, const char* where) {
  if (nu != nv)
    throw DimensionMismatch(std::string(where) + ": incompatible orders " +
                            std::to_string(nu) + " and " + std::to_string(nv));
}

double inner(const SymMatrix& u, const SymMatrix& v) {
  require_same_order(u.order(), v.order(), "inner");
  return (u.mat().array() * v.mat().array()).sum();  // tr(uv) for symmetric u, v
}

OrthoBasis::OrthoBasis(int n) : n_(n) {
  if (n < 1) throw DimensionMismatch("OrthoBasis requires order >= 1");
  vectors_.reserve(sym_dim(n));
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    b(i, i) = 1.0;
    vectors_.push_back(SymMatrix(b));
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
      b(i, j) = b(j, i) = r;
      vectors_.push_back(SymMatrix(b));
    }
}

std::string OrthoBasis::label(int k) const {
  int i = 0, j = 0;
  if (k < n_) {
    i = j = k;
  } else {
    int t = k - n_;
    for (i = 0; i < n_; ++i) {
      const int row = n_ - 1 - i;
      if (t < row) break;
      t -= row;
    }
    j = i + 1 + t;
  }
  return "e" + std::to_string(i) + std::to_string(j);
}

Eigen::VectorXd half_vec(const SymMatrix& u) {
  const int n = u.order();
  Eigen::VectorXd c(sym_dim(n));
  for (int i = 0; i < n; ++i) c(i) = u(i, i);
  const double r = std::sqrt(2.0);
  int k = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c(k++) = r * u(i, j);
  return c;
}

Eigen::VectorXd half_vec(const SymMatrix& u, const OrthoBasis& basis) {
  require_same_order(u.order(), basis.order(), "half_vec");
  return half_vec(u);
}

SymMatrix half_unvec(const Eigen::VectorXd& c, int n) {
  if (c.size() != sym_dim(n))
    throw DimensionMismatch("half_unvec: coordinate length " + std::to_string(c.size()) +
                            " does not match order " + std::to_string(n));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = c(i);
  const double r = 1.0 / std::sqrt(2.0);
  int k = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = m(j, i) = r * c(k++);
    }
  return SymMatrix(m);
}

DenseOperator DenseOperator::identity(int n) {
  return DenseOperator{n, Eigen::MatrixXd::Identity(sym_dim(n), sym_dim(n))};
}
DenseOperator DenseOperator::operator+(const DenseOperator& o) const {
  require_same_order(n, o.n, "DenseOperator::operator+");
  return DenseOperator{n, matrix + o.matrix};
}
DenseOperator DenseOperator::operator-(const DenseOperator& o) const {
  require_same_order(n, o.n, "DenseOperator::operator-");
  return DenseOperator{n, matrix - o.matrix};
}
DenseOperator DenseOperator::operator*(double s) const { return DenseOperator{n, matrix * s}; }
DenseOperator DenseOperator::compose(const DenseOperator& o) const {
  require_same_order(n, o.n, "DenseOperator::compose");
  return DenseOperator{n, matrix * o.matrix};
}
SymMatrix DenseOperator::apply(const SymMatrix& v) const {
  require_same_order(n, v.order(), "DenseOperator::apply");
  return half_unvec(matrix * half_vec(v), n);
}

DenseOperator congruence_dense(const Eigen::MatrixXd& t) {
  const int n = static_cast<int>(t.rows());
  if (t.cols() != n) throw DimensionMismatch("congruence_dense: t must be square");
  OrthoBasis basis(n);
  const int m = basis.dim();
  Eigen::MatrixXd d(m, m);
  for (int k = 0; k < m; ++k)
    d.col(k) = half_vec(SymMatrix(t * basis[k].mat() * t.transpose()));
  return DenseOperator{n, d};
}

Eigen::MatrixXd RankOneUpdate::to_dense() const {
  const auto dim = a.size();
  return Eigen::MatrixXd::Identity(dim, dim) + coefficient * (a * a.transpose());
}

RankOneUpdate rank_one_update_inverse(const Eigen::VectorXd& a, double c) {
  const double den = 1.0 - c * a.squaredNorm();
  if (std::abs(den) < 1e-12)
    throw SingularOperator("rank_one_update_inverse: c * |a|^2 = 1, no inverse");
  return RankOneUpdate{a, c / den};
}
RankOneUpdate rank_one_update_inverse(const SymMatrix& a, double c) {
  return rank_one_update_inverse(half_vec(a), c);
}

double rank_one_det(const Eigen::VectorXd& a, double c) { return 1.0 - c * a.squaredNorm(); }
double rank_one_det(const SymMatrix& a, double c) { return 1.0 - c * inner(a, a); }

Eigen::MatrixXd chol(const SymMatrix& u) {
  const int n = u.order();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = u(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0))  // zero pivot tolerance: any d <= 0 or NaN fails here
      throw NotPositiveDefinite(
          "matrix is not positive definite (pivot " + std::to_string(j) + ")", j);
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = u(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

bool is_positive_definite(const SymMatrix& u) {
  try {
    chol(u);
    return true;
  } catch (const NotPositiveDefinite&) {
    return false;
  }
}

SymMatrix inverse(const SymMatrix& u) {
  const Eigen::MatrixXd l = chol(u);
  const int n = u.order();
  const Eigen::MatrixXd linv =
      l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
  return SymMatrix(linv.transpose() * linv);
}

double logdet(const SymMatrix& u) {
  const Eigen::MatrixXd l = chol(u);
  return 2.0 * l.diagonal().array().log().sum();
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double min_eigenvalue(const SymMatrix& u) { return min_eigenvalue(u.mat()); }

SymMatrix sym_sqrt(const SymMatrix& u) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(u.mat());
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < 0.0)
    throw NotPositiveDefinite("sym_sqrt requires a positive semidefinite matrix", 0);
  return SymMatrix(es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
                   es.eigenvectors().transpose());
}

}  // namespace wvt
