#pragma once

#include <functional>
#include <vector>

namespace complab {

struct QuadRule {
    std::vector<double> nodes, weights;
};

// Gauss-Legendre rule with n nodes on [a, b].
QuadRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Composite Gauss-Legendre rule: `panels` equal panels of `order` nodes each.
QuadRule composite_gauss(double a, double b, int panels, int order);

// Adaptive Gauss-Kronrod integral; throws std::runtime_error when the
// error estimate stays above abs_tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-10, double* error = nullptr);

}  // namespace complab
