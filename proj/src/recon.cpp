#include "sstuq/recon.hpp"

#include "sstuq/stats.hpp"
#include "sstuq/stft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sstuq {

Ridge extract_ridge(const Tfr& s, const RidgeOptions& opt) {
    if (s.rows() == 0 || s.cols() == 0) throw Error(ErrorCode::EmptyTfr, "cannot extract a ridge from an empty TFR");
    if (s.kind != TfrKind::Sst && s.kind != TfrKind::Stft && s.kind != TfrKind::Thresholded)
        throw Error(ErrorCode::InvalidArgument, "ridge extraction needs an SST or STFT magnitude");
    if (!(opt.lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be nonnegative");
    if (opt.jump_cap_bins < 0) throw Error(ErrorCode::InvalidArgument, "jump cap must be nonnegative");

    const Index rows = s.rows();
    const Index bins = s.cols();
    const Eigen::VectorXd& eta = s.freq_axis.freqs_hz;
    const Index cap = opt.jump_cap_bins;

    Eigen::MatrixXd mag = s.values.cwiseAbs();
    Eigen::VectorXd score = mag.row(0).transpose();
    Eigen::VectorXd next(bins);
    Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic> back(rows, bins);
    back.row(0).setConstant(-1);

    for (Index l = 1; l < rows; ++l) {
        for (Index k = 0; k < bins; ++k) {
            double best = -std::numeric_limits<double>::infinity();
            Index arg = -1;
            const Index lo = std::max<Index>(0, k - cap);
            const Index hi = std::min<Index>(bins - 1, k + cap);
            for (Index kp = lo; kp <= hi; ++kp) {
                const double jump = eta(k) - eta(kp);
                const double v = score(kp) - opt.lambda * jump * jump;
                if (v > best) {
                    best = v;
                    arg = kp;
                }
            }
            next(k) = best + mag(l, k);
            back(l, k) = arg;
        }
        score.swap(next);
    }

    Index k_end = 0;
    for (Index k = 1; k < bins; ++k) {
        if (score(k) > score(k_end)) k_end = k;
    }

    Ridge r;
    r.band_halfwidth_hz = opt.delta_r_hz > 0.0 ? opt.delta_r_hz : 3.0 * s.freq_axis.bin_width_hz;
    if (!(r.band_halfwidth_hz > 0.0) && bins > 1) r.band_halfwidth_hz = 3.0 * (eta(1) - eta(0));
    r.bins.resize(static_cast<std::size_t>(rows));
    r.if_hz.resize(rows);
    r.quality.resize(rows);
    Index k = k_end;
    for (Index l = rows - 1; l >= 0; --l) {
        r.bins[static_cast<std::size_t>(l)] = k;
        r.if_hz(l) = eta(k);
        r.quality(l) = mag(l, k);
        if (l > 0) k = back(l, k);
    }
    return r;
}

Eigen::VectorXd unwrap_phase_cycles(const Eigen::VectorXcd& z, double amp_floor) {
    Eigen::VectorXd phase(z.size());
    if (z.size() == 0) return phase;
    phase(0) = std::abs(z(0)) > amp_floor ? std::arg(z(0)) / kTwoPi : 0.0;
    Index last = std::abs(z(0)) > amp_floor ? 0 : -1;
    for (Index i = 1; i < z.size(); ++i) {
        if (!(std::abs(z(i)) > amp_floor)) {
            phase(i) = phase(i - 1);
            continue;
        }
        if (last < 0) {
            phase(i) = std::arg(z(i)) / kTwoPi;
        } else {
            double step = std::arg(z(i) * std::conj(z(last))) / kTwoPi;  // in [-0.5, 0.5]
            if (step <= -0.5) step += 1.0;
            phase(i) = phase(last) + step;
        }
        last = i;
    }
    return phase;
}

ComponentEstimate reconstruct(const Tfr& s, const Ridge& ridge, const WindowPair& win, Index series_length) {
    if (s.kind != TfrKind::Sst && s.kind != TfrKind::Thresholded)
        throw Error(ErrorCode::AxisMismatch, "reconstruction needs a synchrosqueezed TFR");
    if (ridge.if_hz.size() != s.rows()) throw Error(ErrorCode::AxisMismatch, "ridge length differs from TFR rows");
    if (!(win.h_at_zero > 0.0)) throw Error(ErrorCode::InvalidArgument, "window value at zero must be positive");

    double dxi = s.freq_axis.bin_width_hz;
    if (!(dxi > 0.0)) dxi = s.freq_axis.c_max_hz / static_cast<double>(s.cols());
    const double scale = 2.0 * dxi / win.h_at_zero;
    const Eigen::VectorXd& xi = s.freq_axis.freqs_hz;
    const double tol = 1e-9 * dxi;

    ComponentEstimate est;
    est.complex_f.resize(s.rows());
    est.time_axis = s.time_axis;
    for (Index l = 0; l < s.rows(); ++l) {
        Complex acc = 0.0;
        Index count = 0;
        for (Index k = 0; k < s.cols(); ++k) {
            if (std::abs(xi(k) - ridge.if_hz(l)) <= ridge.band_halfwidth_hz + tol) {
                acc += s.values(l, k);
                ++count;
            }
        }
        if (count == 0)
            throw Error(ErrorCode::EmptyBand, "no output bins within the ridge band at row " + std::to_string(l));
        est.complex_f(l) = scale * acc;
    }
    est.amplitude = est.complex_f.cwiseAbs();
    est.phase_cycles = unwrap_phase_cycles(est.complex_f);

    // Interior: samples m .. n-m-1 (0-based), mapped onto the TFR's rows.
    const Index lo = win.m;
    const Index hi = series_length - win.m;
    est.valid_begin = s.rows();
    est.valid_end = 0;
    for (Index r = 0; r < s.rows(); ++r) {
        const Index i = s.sample_index[static_cast<std::size_t>(r)];
        if (i >= lo && i < hi) {
            est.valid_begin = std::min(est.valid_begin, r);
            est.valid_end = std::max(est.valid_end, r + 1);
        }
    }
    if (est.valid_end <= est.valid_begin) est.valid_begin = est.valid_end = 0;
    return est;
}

double data_driven_nu(const Tfr& v_h, const WindowPair& win, double rate_hz, double quantile) {
    if (!(quantile > 0.0 && quantile < 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile must lie in (0, 1)");
    if (v_h.rows() == 0 || v_h.cols() == 0) return 0.0;
    const double width = spectral_halfwidth(win, rate_hz);
    const Eigen::VectorXd& eta = v_h.freq_axis.freqs_hz;
    const Eigen::MatrixXd mag = v_h.values.cwiseAbs();
    std::vector<double> off;
    off.reserve(static_cast<std::size_t>(mag.size()));
    for (Index l = 0; l < mag.rows(); ++l) {
        Index arg = 0;
        mag.row(l).maxCoeff(&arg);
        for (Index k = 0; k < mag.cols(); ++k) {
            if (std::abs(eta(k) - eta(arg)) > width) off.push_back(mag(l, k));
        }
    }
    if (off.empty()) return stats::quantile(mag.reshaped(), quantile);
    return stats::quantile(std::span<const double>(off), quantile);
}

}  // namespace sstuq
