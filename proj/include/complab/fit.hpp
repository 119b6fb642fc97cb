#pragma once

#include <string>
#include <vector>

namespace complab {

// Log-log slope of an observed convergence or scaling law.
struct FitReport {
    std::string observable;
    std::vector<double> abscissa;
    std::vector<double> defects;
    double fitted_slope = 0;
    double intercept = 0;  // log of the prefactor
    double predicted = 0;
    double tolerance = 0;
    // One-sided fits pass when fitted <= predicted + tolerance.
    bool upper_bound_only = false;

    bool passed() const;
};

struct LineFit {
    double slope = 0, intercept = 0;
};

// Ordinary least squares y = slope x + intercept. Needs at least two points.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Fits log|defect| against log(abscissa). Entries with zero defect are rejected.
FitReport fit_loglog(std::string observable, std::vector<double> abscissa,
                     std::vector<double> defects, double predicted, double tolerance);

}  // namespace complab
