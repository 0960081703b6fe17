#pragma once

#include <functional>

namespace kslog {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) integral of `f` over [a, b]. Accepts when
/// the estimated error is below max(abs_tol, rel_tol * |value|); otherwise
/// throws QuadratureError. a > b integrates with the usual sign flip.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol = 1e-10, double rel_tol = 1e-13);

}  // namespace kslog
