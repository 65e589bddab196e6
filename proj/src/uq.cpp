#include "sstuq/uq.hpp"

#include "sstuq/parallel.hpp"
#include "sstuq/random.hpp"
#include "sstuq/spline.hpp"
#include "sstuq/stats.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sstuq {

namespace {

constexpr Index kMinReplicates = 40;

Eigen::VectorXd index_axis(const std::vector<Index>& idx) {
    Eigen::VectorXd v(static_cast<Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) v(static_cast<Index>(i)) = static_cast<double>(idx[i]);
    return v;
}

Eigen::VectorXd freq_axis_at(const FreqGrid& grid, const std::vector<Index>& bins) {
    Eigen::VectorXd v(static_cast<Index>(bins.size()));
    for (std::size_t i = 0; i < bins.size(); ++i) v(static_cast<Index>(i)) = grid.freqs_hz(bins[i]);
    return v;
}

Eigen::VectorXd full_time_axis(Index n) { return Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1)); }

}  // namespace

BandSpec default_band_spec(Index n, Index out_bins, Index time_stride, Index n_freqs, double alpha_level, Index n_boot) {
    if (n < 1 || out_bins < 1 || time_stride < 1 || n_freqs < 1)
        throw Error(ErrorCode::InvalidArgument, "band grid parameters must be positive");
    BandSpec spec;
    spec.alpha_level = alpha_level;
    spec.n_boot = n_boot;
    for (Index i = 0; i < n; i += time_stride) spec.grid_times.push_back(i);
    if (spec.grid_times.back() != n - 1) spec.grid_times.push_back(n - 1);
    const Index nf = std::min(n_freqs, out_bins);
    for (Index j = 0; j < nf; ++j) {
        const Index bin = nf == 1 ? 0 : static_cast<Index>(std::llround(static_cast<double>(j) * static_cast<double>(out_bins - 1) / static_cast<double>(nf - 1)));
        if (spec.grid_freqs.empty() || spec.grid_freqs.back() != bin) spec.grid_freqs.push_back(bin);
    }
    return spec;
}

void validate_band_spec(const BandSpec& spec, Index n, Index out_bins) {
    if (spec.grid_times.empty() || spec.grid_freqs.empty()) throw Error(ErrorCode::GridOutsideAxes, "coarse grid is empty");
    if (!(spec.alpha_level > 0.0 && spec.alpha_level < 1.0))
        throw Error(ErrorCode::InvalidArgument, "alpha level must lie in (0, 1)");
    if (spec.n_boot < kMinReplicates)
        throw Error(ErrorCode::MTooSmall, fmt::format("need at least {} bootstrap replicates, got {}", kMinReplicates, spec.n_boot));
    auto check = [](const std::vector<Index>& v, Index limit, const char* what) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] < 0 || v[i] >= limit || (i > 0 && v[i] <= v[i - 1]))
                throw Error(ErrorCode::GridOutsideAxes, fmt::format("{} grid must be sorted and inside [0, {})", what, limit));
        }
    };
    check(spec.grid_times, n, "time");
    check(spec.grid_freqs, out_bins, "frequency");
}

Eigen::MatrixXd replicate_magnitudes(const std::optional<Eigen::VectorXd>& signal, const TvarModel& model,
                                     const BandSpec& spec, const SstPipeline& pipeline, std::uint64_t seed, int jobs) {
    const Index n = model.length();
    validate_band_spec(spec, n, pipeline.params().out_grid.size());
    if (signal && signal->size() != n) throw Error(ErrorCode::DimMismatch, "signal length differs from the model length");

    const FreqGrid coarse_grid = pipeline.params().out_grid.subset(spec.grid_freqs);
    const Index nt = static_cast<Index>(spec.grid_times.size());
    const Index nf = static_cast<Index>(spec.grid_freqs.size());
    Eigen::MatrixXd reservoir(nt * nf, spec.n_boot);

    parallel_for(static_cast<long>(spec.n_boot), jobs, [&](long rep) {
        TimeSeries ts;
        ts.rate_hz = pipeline.rate_hz();
        ts.samples = sample_bootstrap(model, replicate_seed(seed, static_cast<std::uint64_t>(rep) + 1));
        if (signal) ts.samples += *signal;
        const Tfr s = pipeline.sst(ts, spec.grid_times, 1, coarse_grid);
        for (Index t = 0; t < nt; ++t)
            for (Index f = 0; f < nf; ++f) reservoir(t * nf + f, static_cast<Index>(rep)) = std::abs(s.values(t, f));
    });
    return reservoir;
}

Eigen::MatrixXd node_quantile(const Eigen::MatrixXd& reservoir, const BandSpec& spec, double p) {
    const Index nt = static_cast<Index>(spec.grid_times.size());
    const Index nf = static_cast<Index>(spec.grid_freqs.size());
    if (reservoir.rows() != nt * nf) throw Error(ErrorCode::DimMismatch, "reservoir does not match the coarse grid");
    Eigen::MatrixXd out(nt, nf);
    std::vector<double> buf(static_cast<std::size_t>(reservoir.cols()));
    for (Index node = 0; node < reservoir.rows(); ++node) {
        for (Index r = 0; r < reservoir.cols(); ++r) buf[static_cast<std::size_t>(r)] = reservoir(node, r);
        std::sort(buf.begin(), buf.end());
        out(node / nf, node % nf) = stats::quantile_sorted(buf, p);
    }
    return out;
}

Eigen::MatrixXd spline_lift(const Eigen::MatrixXd& coarse, const Eigen::VectorXd& coarse_times,
                            const Eigen::VectorXd& coarse_freqs, const Eigen::VectorXd& full_times,
                            const Eigen::VectorXd& full_freqs) {
    if (coarse_times.size() < 4 || coarse_freqs.size() < 4)
        throw Error(ErrorCode::GridTooCoarse, "spline lifting needs at least 4 nodes per axis");
    Eigen::MatrixXd out = tensor_spline<double>(coarse, coarse_times, coarse_freqs, full_times, full_freqs);
    return out.cwiseMax(0.0);
}

Bands bands_from_reservoir(const Eigen::MatrixXd& reservoir, const BandSpec& spec, Index n, const FreqGrid& out_grid) {
    Bands b;
    b.coarse_lower = node_quantile(reservoir, spec, spec.alpha_level / 2.0);
    b.coarse_upper = node_quantile(reservoir, spec, 1.0 - spec.alpha_level / 2.0);
    const Eigen::VectorXd ct = index_axis(spec.grid_times);
    const Eigen::VectorXd cf = freq_axis_at(out_grid, spec.grid_freqs);
    const Eigen::VectorXd ft = full_time_axis(n);
    b.lower = spline_lift(b.coarse_lower, ct, cf, ft, out_grid.freqs_hz);
    b.upper = spline_lift(b.coarse_upper, ct, cf, ft, out_grid.freqs_hz);
    // Independent splines can cross between nodes; keep lower <= upper.
    b.lower = b.lower.cwiseMin(b.upper);
    return b;
}

Bands bootstrap_bands(const std::optional<Eigen::VectorXd>& signal, const TvarModel& model, const BandSpec& spec,
                      const SstPipeline& pipeline, std::uint64_t seed, int jobs) {
    const Eigen::MatrixXd reservoir = replicate_magnitudes(signal, model, spec, pipeline, seed, jobs);
    return bands_from_reservoir(reservoir, spec, model.length(), pipeline.params().out_grid);
}

ThresholdSurface noise_threshold(const TvarModel& model, const BandSpec& spec, const SstPipeline& pipeline,
                                 std::uint64_t seed, int jobs) {
    const Eigen::MatrixXd reservoir = replicate_magnitudes(std::nullopt, model, spec, pipeline, seed, jobs);
    ThresholdSurface t;
    t.coarse = node_quantile(reservoir, spec, 1.0 - spec.alpha_level);
    const FreqGrid& out_grid = pipeline.params().out_grid;
    t.full = spline_lift(t.coarse, index_axis(spec.grid_times), freq_axis_at(out_grid, spec.grid_freqs),
                         full_time_axis(model.length()), out_grid.freqs_hz);
    return t;
}

Tfr apply_threshold(const Tfr& s, const Eigen::MatrixXd& t) {
    if (t.rows() != s.rows() || t.cols() != s.cols()) throw Error(ErrorCode::DimMismatch, "threshold does not match the TFR");
    Tfr out = s;
    out.kind = TfrKind::Thresholded;
    for (Index k = 0; k < s.cols(); ++k)
        for (Index r = 0; r < s.rows(); ++r)
            if (!(std::abs(s.values(r, k)) >= t(r, k))) out.values(r, k) = 0.0;
    return out;
}

}  // namespace sstuq
