#pragma once

#include <string>

namespace panelbreak::stats {

// Deterministic terms of an autoregressive test regression.
enum class Deterministic { none, constant, constant_trend };

std::string to_string(Deterministic d);

// Standard normal distribution.
double normal_cdf(double x);
double normal_sf(double x);         // survival function 1 - CDF
double normal_ppf(double p);        // quantile, p in (0,1)

// Chi-square distribution with df > 0.
double chi2_cdf(double x, double df);
double chi2_sf(double x, double df);

// F distribution.
double f_sf(double x, double df1, double df2);

// p-value of the Dickey-Fuller t-ratio via the MacKinnon (1994, 2010)
// response-surface approximation. Coefficients are embedded constants
// (see mackinnon_tables.cpp). Returns a value clamped to [0, 1].
double mackinnon_pvalue(double tau, Deterministic det);

}  // namespace panelbreak::stats
