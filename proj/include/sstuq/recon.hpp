#pragma once

#include "sstuq/core.hpp"

#include <string>
#include <vector>

namespace sstuq {

struct Ridge {
    Eigen::VectorXd if_hz;
    std::vector<Index> bins;
    double band_halfwidth_hz = 0.0;
    Eigen::VectorXd quality;
};

struct RidgeOptions {
    double lambda = 1.0;
    double delta_r_hz = 0.0;  // <= 0: three output bins
    Index jump_cap_bins = 2;
};

/// Maximizes sum_l |s(l, k_l)| - lambda sum_l (eta_{k_l} - eta_{k_{l-1}})^2 over bin paths
/// with |k_l - k_{l-1}| <= jump_cap, exactly, by dynamic programming. Ties go to the
/// lowest bin index.
Ridge extract_ridge(const Tfr& s, const RidgeOptions& opt = {});

struct ComponentEstimate {
    Eigen::VectorXcd complex_f;
    Eigen::VectorXd amplitude;
    Eigen::VectorXd phase_cycles;
    Eigen::VectorXd time_axis;
    Index valid_begin = 0;  // first interior row (sample m)
    Index valid_end = 0;    // one past the last interior row (sample n-m)

    /// Real part of complex_f, i.e. the reconstructed real component.
    Eigen::VectorXd real_part() const { return complex_f.real(); }
};

inline constexpr double kAmpFloor = 1e-8;

/// f(t_l) = (2 / h(0)) * dxi * sum_{|xi_k - if_l| <= delta_r} S(t_l, xi_k).
/// The factor 2 restores the negative-frequency half of a real input, so a real
/// A cos(2 pi phi) yields A e^{i 2 pi phi}. Amplitude is |f|; phase is unwrapped in cycles.
ComponentEstimate reconstruct(const Tfr& s, const Ridge& ridge, const WindowPair& win, Index series_length);

/// Cumulative argument differences mapped to (-0.5, 0.5] cycles; held where |z| < floor.
Eigen::VectorXd unwrap_phase_cycles(const Eigen::VectorXcd& z, double amp_floor = kAmpFloor);

/// Noise-floor proxy for nu: the `quantile` of |V_h| over bins farther than the window's
/// spectral half-width from the per-row maximum. A proxy, not the theoretical threshold.
double data_driven_nu(const Tfr& v_h, const WindowPair& win, double rate_hz, double quantile = 0.95);

}  // namespace sstuq
