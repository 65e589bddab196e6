#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sstuq {

using Index = Eigen::Index;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class ErrorCode {
    EmptySeries,
    NonFiniteSample,
    NonPositiveRate,
    InvalidGridParams,
    WindowTooShort,
    FrequencyAboveNyquist,
    GridEmpty,
    AxisMismatch,
    EmptyOutGrid,
    EmptyTfr,
    EmptyBand,
    TooFewSamples,
    SeriesTooShort,
    GridOutsideAxes,
    MTooSmall,
    DimMismatch,
    GridTooCoarse,
    InvalidArgument,
    Io,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
/// `index()` is meaningful for NonFiniteSample (first offending sample), -1 otherwise.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, Index index = -1)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), index_(index) {}

    ErrorCode code() const noexcept { return code_; }
    Index index() const noexcept { return index_; }

private:
    ErrorCode code_;
    Index index_;
};

/// Uniformly sampled real series; sample i sits at start_time_s + i / rate_hz.
struct TimeSeries {
    Eigen::VectorXd samples;
    double rate_hz = 1.0;
    double start_time_s = 0.0;

    Index size() const { return samples.size(); }
    double time(Index i) const { return start_time_s + static_cast<double>(i) / rate_hz; }
    Eigen::VectorXd time_axis() const;
};

void validate_series(const TimeSeries& ts);

/// Positive, strictly increasing frequencies. Uniform grids hold (k+1)*c_max/d.
struct FreqGrid {
    Eigen::VectorXd freqs_hz;
    double c_max_hz = 0.0;
    double bin_width_hz = 0.0;

    Index size() const { return freqs_hz.size(); }
    /// Sub-grid at the given bin indices, keeping c_max and bin width.
    FreqGrid subset(const std::vector<Index>& bins) const;
};

FreqGrid uniform_grid(double c_max_hz, Index d);

/// Discretized window h and derivative window Dh, both of length 2m+1 and scaled by 1/sqrt(rate).
struct WindowPair {
    Eigen::VectorXd h;
    Eigen::VectorXd dh;
    Index m = 0;
    double beta_s = 0.0;
    double h_at_zero = 0.0;
};

enum class TfrKind { Stft, StftDeriv, Sst, Thresholded };

const char* to_string(TfrKind kind);

/// Complex time-frequency representation. Rows are time samples, columns frequency bins.
/// `sample_index[r]` is the position of row r in the source series; rows may be a subset.
struct Tfr {
    Eigen::MatrixXcd values;
    Eigen::VectorXd time_axis;
    std::vector<Index> sample_index;
    FreqGrid freq_axis;
    TfrKind kind = TfrKind::Stft;

    Index rows() const { return values.rows(); }
    Index cols() const { return values.cols(); }
};

/// Throws DimMismatch unless values are (time_axis x freq_axis) shaped and finite.
void check_dims(const Tfr& tfr);

bool same_axes(const Tfr& a, const Tfr& b);

}  // namespace sstuq
