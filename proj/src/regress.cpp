#include "panelbreak/regress.hpp"

#include <algorithm>
#include <cmath>

#include "panelbreak/stats.hpp"

namespace panelbreak {

namespace {
constexpr double kConditionLimit = 1e12;
}

OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
    const int n = static_cast<int>(X.rows());
    const int k = static_cast<int>(X.cols());
    if (y.size() != n) throw ShapeMismatch("ols: rows(X) != len(y)");
    if (n <= k) throw ShapeMismatch("ols: need more observations than coefficients");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    const Eigen::MatrixXd& qrm = qr.matrixQR();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        const double d = std::abs(qrm(i, i));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    if (!(dmin > 0.0) || dmax / dmin > kConditionLimit)
        throw RankDeficient("ols: design condition number exceeds 1e12");

    OlsFit fit;
    fit.coefficients = qr.solve(y);
    fit.residuals = y - X * fit.coefficients;
    fit.nobs = n;
    fit.df_resid = n - k;
    const double rss = fit.residuals.squaredNorm();
    fit.sigma2 = rss / fit.df_resid;

    // (X'X)^{-1} = P R^{-1} R^{-T} P'
    Eigen::MatrixXd rinv = qrm.topRows(k).triangularView<Eigen::Upper>().solve(
        Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd xtx_inv = rinv * rinv.transpose();
    xtx_inv = qr.colsPermutation() * xtx_inv * qr.colsPermutation().transpose();
    fit.covariance = fit.sigma2 * 0.5 * (xtx_inv + xtx_inv.transpose());

    // Centered R^2 when the design spans a constant, uncentered otherwise.
    bool has_const = false;
    for (int j = 0; j < k && !has_const; ++j) {
        const double mx = X.col(j).maxCoeff(), mn = X.col(j).minCoeff();
        if (std::abs(mx - mn) <= 1e-12 * std::max(1.0, std::abs(mx))) has_const = true;
    }
    double tss;
    if (has_const) {
        tss = (y.array() - y.mean()).square().sum();
    } else {
        tss = y.squaredNorm();
    }
    fit.r_squared = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 0.0;
    return fit;
}

TestReport wald(const OlsFit& fit, const Eigen::MatrixXd& R, const Eigen::VectorXd& r) {
    const int k = static_cast<int>(fit.coefficients.size());
    const int q = static_cast<int>(R.rows());
    if (R.cols() != k) throw ShapeMismatch("wald: cols(R) != #coefficients");
    if (r.size() != q) throw ShapeMismatch("wald: len(r) != rows(R)");
    if (q < 1) throw ShapeMismatch("wald: empty restriction set");

    const Eigen::VectorXd d = R * fit.coefficients - r;
    Eigen::MatrixXd S = R * fit.covariance * R.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible())
        throw SingularRestriction("wald: restriction covariance is singular (R not full row rank?)");

    TestReport report;
    report.name = "wald";
    report.statistic = d.dot(lu.solve(d));
    if (report.statistic < 0.0) report.statistic = 0.0;  // guard tiny negative round-off
    report.distribution = {Distribution::Kind::chi_square, static_cast<double>(q), 0.0};
    report.p_value = stats::chi2_sf(report.statistic, q);
    report.reject_5pct = report.p_value < 0.05;
    return report;
}

int newey_west_bandwidth(int n) {
    return static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 2.0 / 9.0)));
}

double long_run_variance(std::span<const double> u, int bandwidth, bool demean) {
    const int n = static_cast<int>(u.size());
    if (n < 2) throw SeriesTooShort("long_run_variance: need at least 2 points");
    int L = bandwidth < 0 ? newey_west_bandwidth(n) : bandwidth;
    if (L >= n) throw SeriesTooShort("long_run_variance: bandwidth must be < length");

    double mean = 0.0;
    if (demean) {
        for (double x : u) mean += x;
        mean /= n;
    }
    auto gamma = [&](int j) {
        double s = 0.0;
        for (int t = j; t < n; ++t) s += (u[t] - mean) * (u[t - j] - mean);
        return s / n;
    };
    double omega = gamma(0);
    for (int j = 1; j <= L; ++j) omega += 2.0 * (1.0 - static_cast<double>(j) / (L + 1)) * gamma(j);
    return std::max(omega, 1e-12);
}

Eigen::MatrixXd long_run_covariance(const Eigen::MatrixXd& u, int bandwidth, bool demean) {
    const int n = static_cast<int>(u.rows());
    const int k = static_cast<int>(u.cols());
    if (n < 2) throw SeriesTooShort("long_run_covariance: need at least 2 rows");
    int L = bandwidth < 0 ? newey_west_bandwidth(n) : bandwidth;
    if (L >= n) throw SeriesTooShort("long_run_covariance: bandwidth must be < length");

    Eigen::MatrixXd v = u;
    if (demean) v.rowwise() -= u.colwise().mean();
    Eigen::MatrixXd omega = (v.transpose() * v) / n;
    for (int j = 1; j <= L; ++j) {
        const double w = 1.0 - static_cast<double>(j) / (L + 1);
        Eigen::MatrixXd g = (v.bottomRows(n - j).transpose() * v.topRows(n - j)) / n;
        omega += w * (g + g.transpose());
    }
    (void)k;
    return omega;
}

}  // namespace panelbreak
