#include "sstuq/stft.hpp"

#include "sstuq/parallel.hpp"

#include <cmath>
#include <numeric>

namespace sstuq {

namespace {

constexpr Index kRowBlock = 128;

void check_family(const WindowFamily& fam) {
    if (!(fam.beta_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "window beta_s must be positive");
    if (fam.kind == WindowKind::TruncGauss && !(fam.gauss_rel_std > 0.0 && fam.gauss_rel_std <= 0.5))
        throw Error(ErrorCode::InvalidArgument, "truncated Gaussian relative std must lie in (0, 0.5]");
}

}  // namespace

double window_profile(const WindowFamily& fam, double t) {
    if (std::abs(t) >= 1.0) {
        if (fam.kind == WindowKind::TruncGauss && std::abs(t) == 1.0)
            return std::exp(-0.5 / (fam.gauss_rel_std * fam.gauss_rel_std));
        return 0.0;
    }
    switch (fam.kind) {
        case WindowKind::Bump: return std::exp(-1.0 / (1.0 - t * t));
        case WindowKind::TruncGauss: return std::exp(-t * t / (2.0 * fam.gauss_rel_std * fam.gauss_rel_std));
    }
    return 0.0;
}

double window_profile_deriv(const WindowFamily& fam, double t) {
    if (std::abs(t) > 1.0) return 0.0;
    switch (fam.kind) {
        case WindowKind::Bump: {
            if (std::abs(t) == 1.0) return 0.0;
            const double u = 1.0 - t * t;
            return window_profile(fam, t) * (-2.0 * t / (u * u));
        }
        case WindowKind::TruncGauss: {
            const double s2 = fam.gauss_rel_std * fam.gauss_rel_std;
            return -t / s2 * window_profile(fam, t);
        }
    }
    return 0.0;
}

WindowPair make_window(const WindowFamily& fam, double rate_hz) {
    check_family(fam);
    if (!(rate_hz > 0.0)) throw Error(ErrorCode::NonPositiveRate, "rate_hz must be positive");
    const Index m = static_cast<Index>(std::ceil(fam.beta_s * rate_hz - 1e-9));
    if (m < 4) throw Error(ErrorCode::WindowTooShort, "window half-length ceil(beta*rate) = " + std::to_string(m) + " < 4");

    WindowPair w;
    w.m = m;
    w.beta_s = fam.beta_s;
    w.h.resize(2 * m + 1);
    w.dh.resize(2 * m + 1);
    for (Index k = 0; k <= 2 * m; ++k) {
        // Fill symmetric pairs from the same |t| so symmetry holds bit-for-bit.
        const Index off = k - m;
        const double u = static_cast<double>(std::abs(off)) / (rate_hz * fam.beta_s);
        const double sign = off < 0 ? -1.0 : 1.0;
        w.h(k) = window_profile(fam, u);
        w.dh(k) = off == 0 ? 0.0 : sign * window_profile_deriv(fam, u) / fam.beta_s;
    }
    // Continuous window hs(t) = K h0(t/beta); samples are hs(t_k)/sqrt(rate) = c h0(t_k/beta)
    // with c = K/sqrt(rate). Pick c so that sum h^2 = 1 and carry it to Dh and hs(0).
    const double c = 1.0 / w.h.norm();
    w.h *= c;
    w.dh *= c;
    w.h_at_zero = c * std::sqrt(rate_hz) * window_profile(fam, 0.0);
    return w;
}

double window_spectrum_abs(const WindowPair& win, double rate_hz, double xi_hz) {
    // hat h(xi) ~ (1/rate) sum_k hs(t_k) e^{-i 2 pi xi t_k}; hs(t_k) = sqrt(rate) h[k].
    // The window is even, so the transform is real.
    double acc = 0.0;
    for (Index k = 0; k < win.h.size(); ++k) {
        const double t = static_cast<double>(k - win.m) / rate_hz;
        acc += win.h(k) * std::cos(kTwoPi * xi_hz * t);
    }
    return std::abs(acc) / std::sqrt(rate_hz);
}

double spectral_halfwidth(const WindowPair& win, double rate_hz, double level, double step_hz) {
    const double peak = window_spectrum_abs(win, rate_hz, 0.0);
    double last_above = 0.0;
    for (double xi = 0.0; xi <= rate_hz / 2.0; xi += step_hz) {
        if (window_spectrum_abs(win, rate_hz, xi) >= level * peak) last_above = xi;
    }
    return last_above + step_hz;
}

StftPlan::StftPlan(const WindowPair& win, const FreqGrid& grid, double rate_hz) : win_(win), grid_(grid), rate_(rate_hz) {
    if (grid.size() == 0) throw Error(ErrorCode::GridEmpty, "frequency grid is empty");
    if (!(rate_hz > 0.0)) throw Error(ErrorCode::NonPositiveRate, "rate_hz must be positive");
    for (Index c = 0; c < grid.size(); ++c) {
        if (grid.freqs_hz(c) > rate_hz / 2.0 * (1.0 + 1e-12))
            throw Error(ErrorCode::FrequencyAboveNyquist,
                        "grid frequency " + std::to_string(grid.freqs_hz(c)) + " Hz exceeds rate/2");
    }
    const Index taps = 2 * win.m + 1;
    cos_.resize(taps, grid.size());
    sin_.resize(taps, grid.size());
    for (Index c = 0; c < grid.size(); ++c) {
        for (Index k = 0; k < taps; ++k) {
            const double theta = kTwoPi * grid.freqs_hz(c) * static_cast<double>(k - win.m) / rate_hz;
            cos_(k, c) = std::cos(theta);
            sin_(k, c) = std::sin(theta);
        }
    }
}

Tfr StftPlan::apply(const TimeSeries& ts, Taper taper, std::span<const Index> rows, int jobs) const {
    validate_series(ts);
    const Index n = ts.size();
    std::vector<Index> all;
    if (rows.empty()) {
        all.resize(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), Index{0});
        rows = all;
    }
    for (Index l : rows) {
        if (l < 0 || l >= n) throw Error(ErrorCode::GridOutsideAxes, "row " + std::to_string(l) + " outside series");
    }

    const Eigen::VectorXd& w = taper == Taper::Window ? win_.h : win_.dh;
    const Index m = win_.m;
    const Index taps = 2 * m + 1;
    const Index nrows = static_cast<Index>(rows.size());
    const double scale = 1.0 / std::sqrt(rate_);

    Tfr out;
    out.kind = taper == Taper::Window ? TfrKind::Stft : TfrKind::StftDeriv;
    out.freq_axis = grid_;
    out.sample_index.assign(rows.begin(), rows.end());
    out.time_axis.resize(nrows);
    for (Index r = 0; r < nrows; ++r) out.time_axis(r) = ts.time(rows[static_cast<std::size_t>(r)]);
    out.values.resize(nrows, grid_.size());

    const long blocks = static_cast<long>((nrows + kRowBlock - 1) / kRowBlock);
    parallel_for(blocks, jobs, [&](long b) {
        const Index r0 = static_cast<Index>(b) * kRowBlock;
        const Index len = std::min(kRowBlock, nrows - r0);
        Eigen::MatrixXd seg = Eigen::MatrixXd::Zero(len, taps);
        for (Index r = 0; r < len; ++r) {
            const Index l = rows[static_cast<std::size_t>(r0 + r)];
            const Index k_lo = std::max<Index>(0, m - l);
            const Index k_hi = std::min<Index>(taps - 1, n - 1 - l + m);
            for (Index k = k_lo; k <= k_hi; ++k) seg(r, k) = ts.samples(l + k - m) * w(k);
        }
        const Eigen::MatrixXd re = seg * cos_;
        const Eigen::MatrixXd im = seg * sin_;
        out.values.middleRows(r0, len).real() = scale * re;
        out.values.middleRows(r0, len).imag() = -scale * im;
    });
    return out;
}

Tfr stft(const TimeSeries& ts, const WindowPair& win, const FreqGrid& grid, Taper taper, int jobs) {
    return StftPlan(win, grid, ts.rate_hz).apply(ts, taper, {}, jobs);
}

}  // namespace sstuq
