#include "panelbreak/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "panelbreak/errors.hpp"
#include "panelbreak/rng.hpp"

namespace panelbreak {

namespace {

void check_blocks(const std::vector<Eigen::MatrixXd>& A) {
    if (A.empty()) throw ShapeMismatch("empty coefficient list");
    const Eigen::Index k = A.front().rows();
    for (const auto& a : A) {
        if (a.rows() != k || a.cols() != k) {
            throw ShapeMismatch("coefficient blocks must be square and equally sized");
        }
    }
}

// MA coefficients Psi_0..Psi_H of the VAR.
std::vector<Eigen::MatrixXd> ma_coefficients(const std::vector<Eigen::MatrixXd>& A, int horizon) {
    const Eigen::Index k = A.front().rows();
    const int p = static_cast<int>(A.size());
    std::vector<Eigen::MatrixXd> psi(static_cast<std::size_t>(horizon) + 1);
    psi[0] = Eigen::MatrixXd::Identity(k, k);
    for (int h = 1; h <= horizon; ++h) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
        for (int j = 1; j <= std::min(h, p); ++j) {
            m += A[static_cast<std::size_t>(j - 1)] * psi[static_cast<std::size_t>(h - j)];
        }
        psi[static_cast<std::size_t>(h)] = std::move(m);
    }
    return psi;
}

}  // namespace

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& sigma, std::vector<std::string>* log) {
    if (sigma.rows() != sigma.cols()) throw ShapeMismatch("covariance must be square");
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    Eigen::MatrixXd ridged = sigma;
    ridged.diagonal().array() += 1e-10;
    Eigen::LLT<Eigen::MatrixXd> retry(ridged);
    if (retry.info() != Eigen::Success) {
        throw CholeskyFailure("covariance is not positive semidefinite even after a 1e-10 ridge");
    }
    if (log) log->push_back("covariance not positive definite; 1e-10 ridge applied before factorization");
    return retry.matrixL();
}

CompanionForm companion_roots(const std::vector<Eigen::MatrixXd>& A) {
    check_blocks(A);
    const Eigen::Index k = A.front().rows();
    const Eigen::Index p = static_cast<Eigen::Index>(A.size());
    const Eigen::Index dim = k * p;

    CompanionForm cf;
    cf.matrix = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index j = 0; j < p; ++j) {
        cf.matrix.block(0, j * k, k, k) = A[static_cast<std::size_t>(j)];
    }
    if (p > 1) {
        cf.matrix.block(k, 0, dim - k, dim - k).setIdentity();
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(cf.matrix, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NumericError("companion eigenvalue computation failed");
    for (Eigen::Index i = 0; i < dim; ++i) {
        cf.roots.emplace_back(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
    }
    std::sort(cf.roots.begin(), cf.roots.end(), [](const auto& a, const auto& b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    cf.moduli.reserve(cf.roots.size());
    for (const auto& r : cf.roots) cf.moduli.push_back(std::abs(r));
    return cf;
}

IrfResult irf(const std::vector<Eigen::MatrixXd>& A, const Eigen::MatrixXd& sigma, int horizon,
              const std::vector<double>& scales, std::vector<std::string>* log) {
    check_blocks(A);
    if (horizon < 0) throw InvalidSpec("impulse-response horizon must be nonnegative");
    if (sigma.rows() != A.front().rows()) throw ShapeMismatch("covariance does not match the system size");

    const Eigen::MatrixXd pmat = cholesky_factor(sigma, log);
    IrfResult out;
    out.horizon = horizon;
    out.scales = scales;
    std::vector<Eigen::MatrixXd> psi = ma_coefficients(A, horizon);
    out.unit.reserve(psi.size());
    for (auto& m : psi) out.unit.push_back(m * pmat);
    return out;
}

FevdResult fevd(const std::vector<Eigen::MatrixXd>& A, const Eigen::MatrixXd& sigma, int horizon,
                std::vector<std::string>* log) {
    check_blocks(A);
    if (horizon < 1) throw InvalidSpec("variance decomposition needs a horizon of at least 1");
    const Eigen::Index k = A.front().rows();

    IrfResult u = irf(A, sigma, horizon - 1, {}, log);
    FevdResult out;
    Eigen::MatrixXd cum = Eigen::MatrixXd::Zero(k, k);  // running sum of squared responses
    for (int h = 1; h <= horizon; ++h) {
        cum += u.unit[static_cast<std::size_t>(h - 1)].array().square().matrix();
        Eigen::VectorXd total = cum.rowwise().sum();
        Eigen::MatrixXd share(k, k);
        for (Eigen::Index i = 0; i < k; ++i) {
            if (total(i) <= 0.0) {
                throw NumericError("zero forecast-error variance at horizon " + std::to_string(h));
            }
            share.row(i) = cum.row(i) / total(i) * 100.0;
        }
        out.shares.push_back(std::move(share));
        out.se.push_back(total.cwiseSqrt());
    }
    return out;
}

Eigen::MatrixXd simulate_path(const std::vector<Eigen::MatrixXd>& A, const Eigen::MatrixXd& shocks,
                              bool allow_explosive) {
    check_blocks(A);
    const Eigen::Index k = A.front().rows();
    if (shocks.cols() != k) throw ShapeMismatch("shock matrix width does not match the system size");
    if (!allow_explosive) {
        const double mx = companion_roots(A).max_modulus();
        if (mx > 1.01) {
            throw ExplosiveWithoutFlag("largest companion root " + std::to_string(mx) +
                                       " exceeds 1.01; pass the explicit flag to simulate anyway");
        }
    }
    const Eigen::Index t_len = shocks.rows();
    const int p = static_cast<int>(A.size());
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(t_len, k);
    for (Eigen::Index t = 0; t < t_len; ++t) {
        Eigen::VectorXd v = shocks.row(t).transpose();
        for (int j = 1; j <= p && t - j >= 0; ++j) {
            v += A[static_cast<std::size_t>(j - 1)] * y.row(t - j).transpose();
        }
        y.row(t) = v.transpose();
    }
    return y;
}

Eigen::MatrixXd simulate(const std::vector<Eigen::MatrixXd>& A, const Eigen::MatrixXd& sigma,
                         int periods, std::uint64_t seed, bool allow_explosive) {
    check_blocks(A);
    if (periods < 0) throw InvalidSpec("negative simulation length");
    const Eigen::Index k = A.front().rows();
    const Eigen::MatrixXd pmat = cholesky_factor(sigma, nullptr);
    SplitRng rng(seed);
    Eigen::MatrixXd z(periods, k);
    for (Eigen::Index t = 0; t < periods; ++t) {
        for (Eigen::Index j = 0; j < k; ++j) z(t, j) = rng.normal();
    }
    return simulate_path(A, z * pmat.transpose(), allow_explosive);
}

std::pair<std::vector<Eigen::MatrixXd>, Eigen::MatrixXd> permute_system(
    const std::vector<Eigen::MatrixXd>& A, const Eigen::MatrixXd& sigma,
    const std::vector<int>& perm) {
    check_blocks(A);
    const Eigen::Index k = A.front().rows();
    if (static_cast<Eigen::Index>(perm.size()) != k) {
        throw ShapeMismatch("permutation length does not match the system size");
    }
    Eigen::MatrixXd pm = Eigen::MatrixXd::Zero(k, k);  // pm(i, perm[i]) = 1
    for (Eigen::Index i = 0; i < k; ++i) {
        const int o = perm[static_cast<std::size_t>(i)];
        if (o < 0 || o >= k) throw InvalidSpec("permutation index out of range");
        pm(i, o) = 1.0;
    }
    std::vector<Eigen::MatrixXd> ap;
    ap.reserve(A.size());
    for (const auto& a : A) ap.push_back(pm * a * pm.transpose());
    return {std::move(ap), pm * sigma * pm.transpose()};
}

}  // namespace panelbreak
