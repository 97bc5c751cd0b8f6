#pragma once

#include "wvt/symspace.hpp"

namespace wvt {

// Element a*P(u) + b*(u(x)u) of the two-dimensional operator algebra over
// base point u, where P(u): v -> uvu and the tensor square u(x)u: v -> u tr(uv).
struct PQOperator {
  SymMatrix u;
  double a = 0.0;
  double b = 0.0;

  int order() const { return u.order(); }
};

SymMatrix apply(const PQOperator& op, const SymMatrix& v);
DenseOperator to_dense(const PQOperator& op);
DenseOperator to_dense(const PQOperator& op, const OrthoBasis& basis);

// Inverse in closed form. Writing op = a(P(u) - c u(x)u) with c = -b/a, the
// inverse lives over the flipped base point u^{-1}:
//   (1/a) P(u^{-1}) + (c/(a(1-nc))) u^{-1}(x)u^{-1}.
// Requires a != 0 (pure tensor squares are singular for n >= 2 and rejected
// uniformly) and u positive definite; c = 1/n is the singular ray.
PQOperator invert(const PQOperator& op);

// det(a P(u) + b u(x)u) = a^m (det u)^(n+1) (1 - nc), m = n(n+1)/2, c = -b/a.
// For a = 0 the operator is rank one: 0 for m > 1, b*u^2 for n = 1.
double det(const PQOperator& op);

// Exact classification over positive definite base points: the pencil is
// positive definite iff a + b n > 0 and (for n >= 2) a > 0; for a > 0 this
// is the familiar c < 1/n with c = -b/a.
bool is_posdef(const PQOperator& op);

}  // namespace wvt
