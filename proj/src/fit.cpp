#include "complab/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace complab {

bool FitReport::passed() const {
    if (!std::isfinite(fitted_slope)) return false;
    if (upper_bound_only) return fitted_slope <= predicted + tolerance;
    return std::abs(fitted_slope - predicted) <= tolerance;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need two or more paired points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("fit_line: degenerate abscissa");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

FitReport fit_loglog(std::string observable, std::vector<double> abscissa, std::vector<double> defects,
                     double predicted, double tolerance) {
    FitReport rep;
    rep.observable = std::move(observable);
    rep.predicted = predicted;
    rep.tolerance = tolerance;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < abscissa.size() && i < defects.size(); ++i) {
        if (abscissa[i] > 0 && std::abs(defects[i]) > 0 && std::isfinite(defects[i])) {
            lx.push_back(std::log(abscissa[i]));
            ly.push_back(std::log(std::abs(defects[i])));
        }
    }
    rep.abscissa = std::move(abscissa);
    rep.defects = std::move(defects);
    if (lx.size() < 2) {
        rep.fitted_slope = std::nan("");
        return rep;
    }
    const LineFit f = fit_line(lx, ly);
    rep.fitted_slope = f.slope;
    rep.intercept = f.intercept;
    return rep;
}

}  // namespace complab
