#pragma once

#include <cmath>

namespace spclass {

inline double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

// Inverse standard normal CDF, Acklam's rational approximation polished with one
// Halley step. Accurate to ~1e-15 over (0,1); p at the endpoints is the caller's bug.
double normal_quantile(double p);

}  // namespace spclass
