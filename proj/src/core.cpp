#include "sstuq/core.hpp"

#include <cmath>

namespace sstuq {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptySeries: return "EmptySeries";
        case ErrorCode::NonFiniteSample: return "NonFiniteSample";
        case ErrorCode::NonPositiveRate: return "NonPositiveRate";
        case ErrorCode::InvalidGridParams: return "InvalidGridParams";
        case ErrorCode::WindowTooShort: return "WindowTooShort";
        case ErrorCode::FrequencyAboveNyquist: return "FrequencyAboveNyquist";
        case ErrorCode::GridEmpty: return "GridEmpty";
        case ErrorCode::AxisMismatch: return "AxisMismatch";
        case ErrorCode::EmptyOutGrid: return "EmptyOutGrid";
        case ErrorCode::EmptyTfr: return "EmptyTfr";
        case ErrorCode::EmptyBand: return "EmptyBand";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::GridOutsideAxes: return "GridOutsideAxes";
        case ErrorCode::MTooSmall: return "MTooSmall";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

const char* to_string(TfrKind kind) {
    switch (kind) {
        case TfrKind::Stft: return "stft";
        case TfrKind::StftDeriv: return "stft_deriv";
        case TfrKind::Sst: return "sst";
        case TfrKind::Thresholded: return "thresholded";
    }
    return "unknown";
}

Eigen::VectorXd TimeSeries::time_axis() const {
    Eigen::VectorXd t(size());
    for (Index i = 0; i < size(); ++i) t(i) = time(i);
    return t;
}

void validate_series(const TimeSeries& ts) {
    if (ts.samples.size() == 0) throw Error(ErrorCode::EmptySeries, "series has no samples");
    if (!(ts.rate_hz > 0.0) || !std::isfinite(ts.rate_hz))
        throw Error(ErrorCode::NonPositiveRate, "rate_hz must be positive and finite");
    for (Index i = 0; i < ts.samples.size(); ++i) {
        if (!std::isfinite(ts.samples(i)))
            throw Error(ErrorCode::NonFiniteSample, "sample " + std::to_string(i) + " is not finite", i);
    }
}

FreqGrid FreqGrid::subset(const std::vector<Index>& bins) const {
    FreqGrid out;
    out.c_max_hz = c_max_hz;
    out.bin_width_hz = bin_width_hz;
    out.freqs_hz.resize(static_cast<Index>(bins.size()));
    for (std::size_t j = 0; j < bins.size(); ++j) {
        if (bins[j] < 0 || bins[j] >= size())
            throw Error(ErrorCode::GridOutsideAxes, "frequency bin " + std::to_string(bins[j]) + " outside grid");
        out.freqs_hz(static_cast<Index>(j)) = freqs_hz(bins[j]);
    }
    return out;
}

FreqGrid uniform_grid(double c_max_hz, Index d) {
    if (!(c_max_hz > 0.0) || !std::isfinite(c_max_hz) || d < 1)
        throw Error(ErrorCode::InvalidGridParams, "need c_max_hz > 0 and d >= 1");
    FreqGrid g;
    g.c_max_hz = c_max_hz;
    g.bin_width_hz = c_max_hz / static_cast<double>(d);
    g.freqs_hz.resize(d);
    for (Index k = 0; k < d; ++k) g.freqs_hz(k) = static_cast<double>(k + 1) * c_max_hz / static_cast<double>(d);
    return g;
}

void check_dims(const Tfr& tfr) {
    if (tfr.values.rows() != tfr.time_axis.size() || tfr.values.cols() != tfr.freq_axis.size() ||
        static_cast<Index>(tfr.sample_index.size()) != tfr.values.rows())
        throw Error(ErrorCode::DimMismatch, "TFR values do not match its axes");
    if (!tfr.values.allFinite()) throw Error(ErrorCode::DimMismatch, "TFR contains non-finite entries");
}

bool same_axes(const Tfr& a, const Tfr& b) {
    return a.values.rows() == b.values.rows() && a.values.cols() == b.values.cols() &&
           a.sample_index == b.sample_index && a.freq_axis.freqs_hz == b.freq_axis.freqs_hz;
}

}  // namespace sstuq
