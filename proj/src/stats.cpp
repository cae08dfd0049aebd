#include "panelbreak/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <stdexcept>

namespace panelbreak::stats {

namespace {
const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);
}

std::string to_string(Deterministic d) {
    switch (d) {
        case Deterministic::none: return "none";
        case Deterministic::constant: return "constant";
        case Deterministic::constant_trend: return "constant_trend";
    }
    return "?";
}

double normal_cdf(double x) { return boost::math::cdf(kStdNormal, x); }

double normal_sf(double x) { return boost::math::cdf(boost::math::complement(kStdNormal, x)); }

double normal_ppf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_ppf: p must lie in (0,1)");
    return boost::math::quantile(kStdNormal, p);
}

double chi2_cdf(double x, double df) {
    if (x <= 0.0) return 0.0;
    boost::math::chi_squared_distribution<double> d(df);
    return boost::math::cdf(d, x);
}

double chi2_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    boost::math::chi_squared_distribution<double> d(df);
    return boost::math::cdf(boost::math::complement(d, x));
}

double f_sf(double x, double df1, double df2) {
    if (x <= 0.0) return 1.0;
    boost::math::fisher_f_distribution<double> d(df1, df2);
    return boost::math::cdf(boost::math::complement(d, x));
}

}  // namespace panelbreak::stats
