#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace panelbreak {

struct CompanionForm {
    Eigen::MatrixXd matrix;                   // K*(p+1) square companion matrix
    std::vector<std::complex<double>> roots;  // eigenvalues, modulus descending
    std::vector<double> moduli;

    double max_modulus() const { return moduli.empty() ? 0.0 : moduli.front(); }
};

// Stacks A_1..A_{p+1} into companion form and reports its eigenvalues.
CompanionForm companion_roots(const std::vector<Eigen::MatrixXd>& A);

// Orthogonalized impulse responses. Only the one-standard-deviation
// responses are stored; scaling is linear and applied on read.
struct IrfResult {
    int horizon = 24;
    std::vector<double> scales;          // signed shock multiples for rendering
    std::vector<Eigen::MatrixXd> unit;   // h = 0..H: Psi_h * P  (variable x shock)

    double response(int h, int variable, int shock, double scale) const {
        return scale * unit[static_cast<std::size_t>(h)](variable, shock);
    }
};

IrfResult irf(const std::vector<Eigen::MatrixXd>& A, const Eigen::MatrixXd& sigma, int horizon,
              const std::vector<double>& scales, std::vector<std::string>* log = nullptr);

// Forecast-error variance decomposition; shares are percentages and each
// row sums to 100. `se` is the forecast-error standard deviation.
struct FevdResult {
    std::vector<Eigen::MatrixXd> shares;  // h = 1..H: variable x shock
    std::vector<Eigen::VectorXd> se;      // h = 1..H
};

FevdResult fevd(const std::vector<Eigen::MatrixXd>& A, const Eigen::MatrixXd& sigma, int horizon,
                std::vector<std::string>* log = nullptr);

// y_t = sum_j A_j y_{t-j} + shocks_t from a zero pre-sample history; one row
// per period. Refuses explosive systems (max companion modulus > 1.01)
// unless allowed explicitly.
Eigen::MatrixXd simulate_path(const std::vector<Eigen::MatrixXd>& A, const Eigen::MatrixXd& shocks,
                              bool allow_explosive = false);

// Convenience wrapper: Gaussian shocks N(0, sigma) drawn deterministically
// from `seed` (lower-Cholesky factor times standard normals).
Eigen::MatrixXd simulate(const std::vector<Eigen::MatrixXd>& A, const Eigen::MatrixXd& sigma,
                         int periods, std::uint64_t seed, bool allow_explosive = false);

// Lower Cholesky factor with a logged 1e-10 ridge fallback for
// semidefinite inputs.
Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& sigma, std::vector<std::string>* log = nullptr);

// Same system expressed in a permuted variable order: perm[i] is the old
// index of the variable now in position i. Applies to each A block and sigma.
std::pair<std::vector<Eigen::MatrixXd>, Eigen::MatrixXd> permute_system(
    const std::vector<Eigen::MatrixXd>& A, const Eigen::MatrixXd& sigma,
    const std::vector<int>& perm);

}  // namespace panelbreak
