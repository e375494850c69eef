#pragma once

// Least-squares slope fitting on log-log data, for convergence-order
// diagnostics.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace zeromode {

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double residual_rms = 0.0;  // rms residual in log space
    int points_used = 0;
    int points_excluded = 0;  // non-finite or non-positive samples
};

/// Fits log(y) = slope * log(x) + intercept. Non-positive or non-finite
/// samples are excluded and counted.
inline LogLogFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit_loglog: size mismatch");
    LogLogFit fit;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
            ++fit.points_excluded;
            continue;
        }
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    const std::size_t n = lx.size();
    fit.points_used = static_cast<int>(n);
    if (n < 2) throw std::invalid_argument("fit_loglog: fewer than two usable points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_loglog: degenerate abscissae");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(n));
    if (n > 2) fit.slope_stderr = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
    return fit;
}

}  // namespace zeromode
