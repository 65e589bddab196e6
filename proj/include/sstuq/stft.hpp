#pragma once

#include "sstuq/core.hpp"

#include <span>

namespace sstuq {

enum class WindowKind { Bump, TruncGauss };

/// Compactly supported window profile on [-beta_s, beta_s].
/// Bump: exp(-1/(1-t^2)). TruncGauss: exp(-t^2/(2 s^2)) truncated to |t| <= 1.
struct WindowFamily {
    WindowKind kind = WindowKind::Bump;
    double beta_s = 1.0;
    double gauss_rel_std = 0.25;
};

/// Unnormalized profile h0 on the unit support and its first derivative.
double window_profile(const WindowFamily& fam, double t);
double window_profile_deriv(const WindowFamily& fam, double t);

/// Samples the window at (k - m)/rate, k = 0..2m, with m = ceil(beta * rate).
/// Both vectors share one scale chosen so that sum(h^2) == 1.
WindowPair make_window(const WindowFamily& fam, double rate_hz);

/// |hat h(xi)| of the continuous window (approximated by the discrete sum), xi in Hz.
double window_spectrum_abs(const WindowPair& win, double rate_hz, double xi_hz);

/// Smallest Delta such that |hat h(xi)| < level * |hat h(0)| for all |xi| > Delta,
/// scanning up to rate/2 in steps of `step_hz`.
double spectral_halfwidth(const WindowPair& win, double rate_hz, double level = 0.05, double step_hz = 0.005);

enum class Taper { Window, Derivative };

/// Precomputed modulation tables for one (window, grid, rate) triple. The STFT of a
/// block of rows is two real matrix products of windowed segments with the cosine and
/// sine tables, so each (row, frequency) cell is a fixed-order sum over 2m+1 taps.
class StftPlan {
public:
    StftPlan(const WindowPair& win, const FreqGrid& grid, double rate_hz);

    /// V(t_l, eta) = rate^{-1/2} sum_{|j-l|<=m} X_j w(j-l) exp(-i 2 pi eta (t_j - t_l)),
    /// zero-padded outside the series, for the requested rows (all rows if empty).
    Tfr apply(const TimeSeries& ts, Taper taper, std::span<const Index> rows = {}, int jobs = 1) const;

    const WindowPair& window() const { return win_; }
    const FreqGrid& grid() const { return grid_; }
    double rate_hz() const { return rate_; }

private:
    WindowPair win_;
    FreqGrid grid_;
    double rate_;
    Eigen::MatrixXd cos_;  // (2m+1) x d
    Eigen::MatrixXd sin_;  // (2m+1) x d
};

Tfr stft(const TimeSeries& ts, const WindowPair& win, const FreqGrid& grid, Taper taper, int jobs = 1);

}  // namespace sstuq
