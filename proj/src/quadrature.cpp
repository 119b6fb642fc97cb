#include "complab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

namespace complab {

namespace {

QuadRule legendre_reference(int n)
{
    QuadRule q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        q.nodes[i] = -x;
        q.nodes[n - 1 - i] = x;
        q.weights[i] = q.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return q;
}

}  // namespace

QuadRule gauss_legendre(int n, double a, double b)
{
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    static std::mutex mu;
    static std::map<int, QuadRule> cache;
    QuadRule ref;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it == cache.end()) it = cache.emplace(n, legendre_reference(n)).first;
        ref = it->second;
    }
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        ref.nodes[i] = c + h * ref.nodes[i];
        ref.weights[i] *= h;
    }
    return ref;
}

QuadRule composite_gauss(double a, double b, int panels, int order)
{
    QuadRule q;
    q.nodes.reserve(static_cast<size_t>(panels) * order);
    q.weights.reserve(static_cast<size_t>(panels) * order);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        QuadRule g = gauss_legendre(order, a + p * h, a + (p + 1) * h);
        q.nodes.insert(q.nodes.end(), g.nodes.begin(), g.nodes.end());
        q.weights.insert(q.weights.end(), g.weights.begin(), g.weights.end());
    }
    return q;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                          double* error)
{
    if (a == b) {
        if (error) *error = 0;
        return 0.0;
    }
    gsl_set_error_handler_off();
    constexpr std::size_t kLimit = 2000;
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(kLimit);
    gsl_function gf;
    gf.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
    gf.params = const_cast<std::function<double(double)>*>(&f);
    double v = 0, err = 0;
    const int status = gsl_integration_qags(&gf, a, b, abs_tol, 1e-13, kLimit, ws, &v, &err);
    gsl_integration_workspace_free(ws);
    if (error) *error = err;
    if (status != GSL_SUCCESS && !(err <= abs_tol))
        throw std::runtime_error("adaptive quadrature did not reach tolerance (error estimate " + std::to_string(err) +
                                 ", " + gsl_strerror(status) + ")");
    return v;
}

}  // namespace complab
