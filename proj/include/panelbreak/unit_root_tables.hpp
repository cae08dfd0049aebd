#pragma once

#include "panelbreak/stats.hpp"

namespace panelbreak::unit_root_tables {

// Mean/variance adjustment pair for the pooled adjusted t* statistic,
// indexed by the average effective per-entity sample length T~ (linear
// interpolation between grid rows, clamped at the ends).
struct LlcAdjustment {
    double mu = 0.0;
    double sigma = 1.0;
};
LlcAdjustment llc_adjustment(stats::Deterministic det, double t_tilde);

// Mean and variance of the Dickey-Fuller t-ratio at a given series length
// and lag augmentation, for the group-mean standardization. Linear
// interpolation in the length; lag clamped to the tabulated range.
struct IpsMoments {
    double mean = 0.0;
    double var = 1.0;
};
IpsMoments ips_moments(stats::Deterministic det, int series_len, int lags);

}  // namespace panelbreak::unit_root_tables
