#pragma once

#include <functional>

namespace wvt {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |I_k - I_{k-1}| at the accepted level
  int levels = 0;
  bool converged = false;
};

// Double-exponential (tanh-sinh family) quadrature. The integrand must be
// finite on the open interval; endpoint singularities integrable under the
// transform are fine.
QuadratureResult integrate_finite(const std::function<double(double)>& f, double a,
                                  double b, double abs_tol = 1e-12,
                                  double rel_tol = 1e-12);

// (0, infinity), exp-sinh transform.
QuadratureResult integrate_positive_axis(const std::function<double(double)>& f,
                                         double abs_tol = 1e-12, double rel_tol = 1e-12);

// (-infinity, infinity), sinh-sinh transform.
QuadratureResult integrate_real_line(const std::function<double(double)>& f,
                                     double abs_tol = 1e-12, double rel_tol = 1e-12);

}  // namespace wvt
