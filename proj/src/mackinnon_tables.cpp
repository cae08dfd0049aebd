#include "panelbreak/stats.hpp"

#include <array>
#include <cmath>

namespace panelbreak::stats {

// Response-surface coefficients for the p-value of the Dickey-Fuller t-ratio,
// single-series case, from MacKinnon, "Approximate asymptotic distribution
// functions for unit-root and cointegration tests" (1994) with the updated
// coefficients circulated in MacKinnon (2010, QED working paper 1227). The
// tau axis is split at tau_star: below it a quadratic surface applies, above
// it a cubic one; outside [tau_min, tau_max] the p-value saturates at 0 or 1.
// The fitted polynomial is mapped through the standard normal CDF.
namespace {

struct TauSurface {
    double tau_star;
    double tau_min;
    double tau_max;
    std::array<double, 3> small_p;  // quadratic, used for tau <= tau_star
    std::array<double, 4> large_p;  // cubic, used for tau > tau_star
};

constexpr TauSurface kNone = {
    -1.04, -19.04, 1e10,
    {0.6344, 1.2378, 0.032496},
    {0.4797, 0.93557, -0.06999, 0.033066},
};

constexpr TauSurface kConstant = {
    -1.61, -18.83, 2.74,
    {2.1659, 1.4412, 0.038269},
    {1.7339, 0.93202, -0.12745, -0.010368},
};

constexpr TauSurface kConstantTrend = {
    -2.89, -16.18, 0.70,
    {3.2512, 1.6047, 0.049588},
    {2.5261, 0.61654, -0.37956, -0.060285},
};

const TauSurface& surface_for(Deterministic det) {
    switch (det) {
        case Deterministic::none: return kNone;
        case Deterministic::constant: return kConstant;
        case Deterministic::constant_trend: return kConstantTrend;
    }
    return kConstant;
}

}  // namespace

double mackinnon_pvalue(double tau, Deterministic det) {
    const TauSurface& s = surface_for(det);
    if (tau > s.tau_max) return 1.0;
    if (tau < s.tau_min) return 0.0;
    double z;
    if (tau <= s.tau_star) {
        z = s.small_p[0] + tau * (s.small_p[1] + tau * s.small_p[2]);
    } else {
        z = s.large_p[0] + tau * (s.large_p[1] + tau * (s.large_p[2] + tau * s.large_p[3]));
    }
    double p = normal_cdf(z);
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

}  // namespace panelbreak::stats
