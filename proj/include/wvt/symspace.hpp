#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wvt/errors.hpp"

namespace wvt {

// Element of E, the Euclidean space of real symmetric n x n matrices with
// inner product <u,v> = tr(uv). Storage is symmetrized on construction so
// that asymmetry can never drift in from arithmetic.
class SymMatrix {
 public:
  SymMatrix() : mat_(Eigen::MatrixXd::Zero(1, 1)) {}

  explicit SymMatrix(const Eigen::MatrixXd& m);

  static SymMatrix identity(int n);
  static SymMatrix zero(int n);
  static SymMatrix diagonal(const Eigen::VectorXd& d);

  int order() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& mat() const { return mat_; }
  double operator()(int i, int j) const { return mat_(i, j); }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double s) const;

 private:
  Eigen::MatrixXd mat_;
};

inline SymMatrix operator*(double s, const SymMatrix& u) { return u * s; }

// dim of E for order n.
inline int sym_dim(int n) { return n * (n + 1) / 2; }

double inner(const SymMatrix& u, const SymMatrix& v);

// Orthonormal basis of E: diagonal units e_ii first (i = 0..n-1), then
// (e_i e_j^T + e_j e_i^T)/sqrt(2) in lexicographic (i,j), i < j.
class OrthoBasis {
 public:
  explicit OrthoBasis(int n);
  int order() const { return n_; }
  int dim() const { return static_cast<int>(vectors_.size()); }
  const std::vector<SymMatrix>& vectors() const { return vectors_; }
  const SymMatrix& operator[](int k) const { return vectors_[k]; }
  // "e00", "e11", ..., then "e01", "e02", ...
  std::string label(int k) const;

 private:
  int n_;
  std::vector<SymMatrix> vectors_;
};

// Coordinates of u in the orthonormal basis: (u_00..u_(n-1)(n-1), sqrt(2)*u_ij).
// An isometry: |half_vec(u)|^2 = <u,u>.
Eigen::VectorXd half_vec(const SymMatrix& u);
Eigen::VectorXd half_vec(const SymMatrix& u, const OrthoBasis& basis);
SymMatrix half_unvec(const Eigen::VectorXd& c, int n);

// Endomorphism of E as an m x m matrix in the orthonormal basis, m = n(n+1)/2.
struct DenseOperator {
  int n = 1;
  Eigen::MatrixXd matrix;  // m x m

  static DenseOperator identity(int n);
  DenseOperator operator+(const DenseOperator& o) const;
  DenseOperator operator-(const DenseOperator& o) const;
  DenseOperator operator*(double s) const;
  DenseOperator compose(const DenseOperator& o) const;  // this after o
  SymMatrix apply(const SymMatrix& v) const;
  double max_abs() const { return matrix.cwiseAbs().maxCoeff(); }
};

// Dense form of the congruence v -> t v t^T for arbitrary (not necessarily
// symmetric) invertible t. For symmetric t this is P(t).
DenseOperator congruence_dense(const Eigen::MatrixXd& t);

// Rank-one perturbations of the identity on a Euclidean space, given through
// coordinates: (id - c a(x)a)^{-1} = id + c' a(x)a with c' = c/(1 - c|a|^2).
struct RankOneUpdate {
  Eigen::VectorXd a;
  double coefficient;  // c' above
  Eigen::MatrixXd to_dense() const;
};

RankOneUpdate rank_one_update_inverse(const Eigen::VectorXd& a, double c);
RankOneUpdate rank_one_update_inverse(const SymMatrix& a, double c);
double rank_one_det(const Eigen::VectorXd& a, double c);
double rank_one_det(const SymMatrix& a, double c);

// Lower Cholesky factor; throws NotPositiveDefinite carrying the 0-based
// index of the first nonpositive pivot. This is the definedness test for
// every "requires positive definite" precondition in the library.
Eigen::MatrixXd chol(const SymMatrix& u);
bool is_positive_definite(const SymMatrix& u);

SymMatrix inverse(const SymMatrix& u);
double logdet(const SymMatrix& u);
double min_eigenvalue(const SymMatrix& u);
double min_eigenvalue(const Eigen::MatrixXd& symmetric);
SymMatrix sym_sqrt(const SymMatrix& u);

void require_same_order(int nu, int nv, const char* where);

}  // namespace wvt
