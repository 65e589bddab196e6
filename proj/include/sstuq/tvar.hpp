#pragma once

#include "sstuq/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sstuq {

enum class TvarBasis { Legendre, Path };

/// Orthonormal shifted Legendre polynomial of degree k on [0, 1]: sqrt(2k+1) P_k(2u - 1).
double shifted_legendre(Index k, double u);

/// Time-varying AR(b) model x_i = sum_j phi_j(i/n) x_{i-j} + sigma_i e_i.
///
/// A Legendre model stores coefficients a_{jk} (b x m) with phi_j(u) = sum_k a_{jk} psi_k(u).
/// A Path model stores phi_j(i/n) directly for every sample (used for the known generating
/// model in simulations). Both keep the evaluated path in `phi_path` (n x b).
struct TvarModel {
    Index order_b = 0;
    Index basis_order_m = 0;
    TvarBasis basis = TvarBasis::Legendre;
    Eigen::MatrixXd coeffs;     // b x m (Legendre) or b x n (Path)
    Eigen::MatrixXd phi_path;   // n x b
    Eigen::VectorXd sigma_path; // n, strictly positive
    double sigma_floor = 0.0;
    bool regularized = false;

    Index length() const { return sigma_path.size(); }
    /// phi_j at rescaled time u (Legendre) or at the nearest sample (Path); j is 1-based.
    double phi(Index j, double u) const;
};

/// Evaluates coeffs on the grid u_i = (i+1)/n, i = 0..n-1.
Eigen::MatrixXd legendre_phi_path(const Eigen::MatrixXd& coeffs, Index n);

struct TvarFitOptions {
    Index order_b = 2;
    Index basis_order_m = 4;
    Index half_window = 20;
};

/// Least-squares fit of x_i ~ sum_{j,k} a_{jk} psi_k(i/n) x_{i-j}, i = b+1..n, then
/// sigma_path = local_std of the implied innovations. A rank-deficient design falls back
/// to a ridge solve (penalty 1e-8 * trace scale) and sets `regularized`.
TvarModel fit_tvar(const TimeSeries& resid, const TvarFitOptions& opt = {});

/// e_i = x_i - sum_j phi_j(i/n) x_{i-j} for i > b; e_i = x_i for the first b samples.
Eigen::VectorXd innovations(const TvarModel& model, const Eigen::VectorXd& resid);

/// Moving-window sample std over [i - I, i + I] clipped to the series, floored at sigma_floor.
Eigen::VectorXd local_std(const Eigen::VectorXd& innov, Index half_window, double sigma_floor);

/// 1e-6 * std(resid), or 1e-12 when the series is constant.
double default_sigma_floor(const Eigen::VectorXd& resid);

/// Gaussian tvAR recursion driven by N(0,1) draws from Rng(seed). Throws NonFiniteSample
/// at the first index where the recursion blows up.
Eigen::VectorXd sample_bootstrap(const TvarModel& model, std::uint64_t seed);

struct OrderChoice {
    Index order_b = 0;
    Index basis_order_m = 0;
    double score = 0.0;
};

/// Picks (b, m) minimizing blocked 5-fold one-step prediction MSE. Ties go to the smaller model.
OrderChoice select_order(const TimeSeries& resid, const std::vector<Index>& b_candidates,
                         const std::vector<Index>& m_candidates);

/// Plain text: "b,m,basis", then one comma-separated row per coefficient function, then
/// one line with the sigma path. Numbers use 17 significant digits.
void write_model(std::ostream& os, const TvarModel& model);
TvarModel read_model(std::istream& is);

}  // namespace sstuq
