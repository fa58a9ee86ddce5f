#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nlsist {

/// Result of a log-log power-law regression. `exponent` is the decay rate p
/// in values ~ C * times^{-p}, so positive exponents mean decay.
struct DecayFit {
    std::vector<double> times;
    std::vector<double> values;
    double exponent = 0.0;
    double r2 = 0.0;
};

/// Least-squares fit of log(values) against log(times). Throws if fewer than
/// two samples or any nonpositive entry (the fit would be degenerate).
inline DecayFit fit_loglog(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size() || times.size() < 2)
        throw std::invalid_argument("fit_loglog: need at least two matching samples");
    const std::size_t n = times.size();
    std::vector<double> lt(n), lv(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (times[i] <= 0.0 || values[i] <= 0.0)
            throw std::domain_error("fit_loglog: times and values must be positive");
        lt[i] = std::log(times[i]);
        lv[i] = std::log(values[i]);
    }
    double mt = 0.0, mv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mt += lt[i];
        mv += lv[i];
    }
    mt /= static_cast<double>(n);
    mv /= static_cast<double>(n);
    double stt = 0.0, stv = 0.0, svv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        stt += (lt[i] - mt) * (lt[i] - mt);
        stv += (lt[i] - mt) * (lv[i] - mv);
        svv += (lv[i] - mv) * (lv[i] - mv);
    }
    if (stt == 0.0) throw std::domain_error("fit_loglog: all times coincide");
    const double slope = stv / stt;

    DecayFit fit;
    fit.times = times;
    fit.values = values;
    fit.exponent = -slope;
    fit.r2 = (svv == 0.0) ? 1.0 : (stv * stv) / (stt * svv);
    return fit;
}

}  // namespace nlsist
