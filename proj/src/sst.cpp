#include "sstuq/sst.hpp"

#include "sstuq/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace sstuq {

namespace {

// exp(-40) ~ 4e-18: kernel weights below this are skipped.
constexpr double kKernelCutoff = 40.0;

}  // namespace

ReassignMap reassign(const Tfr& v_h, const Tfr& v_dh, double nu, OmegaMode mode) {
    if (v_h.kind != TfrKind::Stft || v_dh.kind != TfrKind::StftDeriv)
        throw Error(ErrorCode::AxisMismatch, "reassign needs an Stft and a StftDeriv transform");
    if (!same_axes(v_h, v_dh)) throw Error(ErrorCode::AxisMismatch, "window and derivative transforms differ in axes");
    if (!(nu >= 0.0)) throw Error(ErrorCode::InvalidArgument, "nu must be nonnegative");

    ReassignMap map;
    map.nu = nu;
    map.omega.resize(v_h.rows(), v_h.cols());
    map.omega_imag.setZero(v_h.rows(), v_h.cols());
    for (Index k = 0; k < v_h.cols(); ++k) {
        const double eta = v_h.freq_axis.freqs_hz(k);
        for (Index r = 0; r < v_h.rows(); ++r) {
            const Complex vh = v_h.values(r, k);
            if (!(std::abs(vh) > nu)) {
                map.omega(r, k) = kSuppressed;
                continue;
            }
            // -1/(2 pi i) * ratio = (i / 2 pi) * ratio
            const Complex ratio = v_dh.values(r, k) / vh;
            map.omega(r, k) = eta - ratio.imag() / kTwoPi;
            if (mode == OmegaMode::Complex) map.omega_imag(r, k) = ratio.real() / kTwoPi;
        }
    }
    return map;
}

Tfr synchrosqueeze(const Tfr& v_h, const ReassignMap& map, const SstParams& p, int jobs) {
    if (map.omega.rows() != v_h.rows() || map.omega.cols() != v_h.cols())
        throw Error(ErrorCode::AxisMismatch, "reassignment map does not match the transform");
    if (p.out_grid.size() == 0) throw Error(ErrorCode::EmptyOutGrid, "output frequency grid is empty");
    if (!(p.alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");

    const double prefactor = v_h.freq_axis.c_max_hz / static_cast<double>(v_h.cols());
    const double norm = 1.0 / std::sqrt(kPi * p.alpha);
    const Eigen::VectorXd& xi = p.out_grid.freqs_hz;
    const double* xi_begin = xi.data();
    const double* xi_end = xi.data() + xi.size();

    Tfr out;
    out.kind = TfrKind::Sst;
    out.time_axis = v_h.time_axis;
    out.sample_index = v_h.sample_index;
    out.freq_axis = p.out_grid;
    out.values.setZero(v_h.rows(), p.out_grid.size());

    parallel_for(static_cast<long>(v_h.rows()), jobs, [&](long rl) {
        const Index r = static_cast<Index>(rl);
        Eigen::VectorXcd row = Eigen::VectorXcd::Zero(p.out_grid.size());
        for (Index k = 0; k < v_h.cols(); ++k) {
            const double re_o = map.omega(r, k);
            if (re_o == kSuppressed) continue;
            const double im_o = map.omega_imag(r, k);
            const double im2 = im_o * im_o;
            const double budget = kKernelCutoff * p.alpha - im2;
            if (budget <= 0.0) continue;
            const double reach = std::sqrt(budget);
            const Complex weight = prefactor * norm * v_h.values(r, k);
            const double* lo = std::lower_bound(xi_begin, xi_end, re_o - reach);
            for (const double* it = lo; it != xi_end && *it <= re_o + reach; ++it) {
                const double dz = *it - re_o;
                row(it - xi_begin) += weight * std::exp(-(dz * dz + im2) / p.alpha);
            }
        }
        out.values.row(r) = row.transpose();
    });
    return out;
}

double default_alpha(const FreqGrid& out_grid) {
    double spacing = out_grid.bin_width_hz;
    if (!(spacing > 0.0) && out_grid.size() > 1)
        spacing = (out_grid.freqs_hz(out_grid.size() - 1) - out_grid.freqs_hz(0)) / static_cast<double>(out_grid.size() - 1);
    if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidGridParams, "cannot infer output grid spacing");
    return (4.0 * spacing) * (4.0 * spacing);
}

double alpha_from_band(double delta_r_hz, double c_alpha) {
    if (!(delta_r_hz > 0.0) || !(c_alpha > 1.0))
        throw Error(ErrorCode::InvalidArgument, "need delta_r > 0 and c_alpha > 1");
    const double s = delta_r_hz / c_alpha;
    return s * s;
}

double band_from_alpha(double alpha, double c_alpha) {
    if (!(alpha > 0.0) || !(c_alpha > 1.0)) throw Error(ErrorCode::InvalidArgument, "need alpha > 0 and c_alpha > 1");
    return c_alpha * std::sqrt(alpha);
}

double default_band_halfwidth(const SstParams& p, double c_alpha) {
    double spacing = p.out_grid.bin_width_hz;
    if (!(spacing > 0.0)) spacing = std::sqrt(default_alpha(p.out_grid)) / 4.0;
    return std::max(3.0 * spacing, band_from_alpha(p.alpha, c_alpha));
}

SstPipeline::SstPipeline(const WindowPair& win, const FreqGrid& grid, const SstParams& params, double rate_hz)
    : plan_(win, grid, rate_hz), params_(params) {
    if (params_.out_grid.size() == 0) params_.out_grid = grid;
    if (!(params_.alpha > 0.0)) params_.alpha = default_alpha(params_.out_grid);
    if (!(params_.nu >= 0.0)) throw Error(ErrorCode::InvalidArgument, "nu must be nonnegative");
}

SstPipeline::Result SstPipeline::run(const TimeSeries& ts, std::span<const Index> rows, int jobs,
                                     const std::optional<FreqGrid>& out_grid) const {
    Result res;
    res.v_h = plan_.apply(ts, Taper::Window, rows, jobs);
    res.v_dh = plan_.apply(ts, Taper::Derivative, rows, jobs);
    res.map = reassign(res.v_h, res.v_dh, params_.nu, params_.omega_mode);
    SstParams p = params_;
    if (out_grid) p.out_grid = *out_grid;
    res.sst = synchrosqueeze(res.v_h, res.map, p, jobs);
    return res;
}

Tfr SstPipeline::sst(const TimeSeries& ts, std::span<const Index> rows, int jobs,
                     const std::optional<FreqGrid>& out_grid) const {
    return run(ts, rows, jobs, out_grid).sst;
}

}  // namespace sstuq
