#pragma once

#include "sstuq/core.hpp"
#include "sstuq/recon.hpp"
#include "sstuq/uq.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sstuq::io {

/// Reads `time_s,value` (rate inferred from the time step unless given) or a single
/// `value` column (rate required). A header line is required.
TimeSeries read_series_csv(const std::filesystem::path& path, std::optional<double> rate_hz);

/// `time_s,value[,extra...]` with 17 significant digits.
void write_series_csv(const std::filesystem::path& path, const TimeSeries& ts,
                      const std::vector<std::pair<std::string, Eigen::VectorXd>>& extra = {});

/// Long format `time_s,freq_hz,re,im`.
void write_tfr_csv(const std::filesystem::path& path, const Tfr& tfr);

/// `time_s,re,im,amplitude,phase_cycles`.
void write_component_csv(const std::filesystem::path& path, const ComponentEstimate& est);

/// `time_s,if_hz,quality`.
void write_ridge_csv(const std::filesystem::path& path, const Eigen::VectorXd& time_axis, const Ridge& ridge);

/// `time_s,freq_hz,lower,upper` over the full grid.
void write_bands_csv(const std::filesystem::path& path, const Eigen::VectorXd& time_axis, const FreqGrid& grid,
                     const Bands& bands);

/// `time_s,freq_hz,threshold` over the full grid.
void write_threshold_csv(const std::filesystem::path& path, const Eigen::VectorXd& time_axis, const FreqGrid& grid,
                         const Eigen::MatrixXd& threshold);

void write_model_file(const std::filesystem::path& path, const TvarModel& model);
TvarModel read_model_file(const std::filesystem::path& path);

enum class ValueMap { Linear, Log1p };
enum class Colormap { Gray, Heat };

/// Rows of `magnitude` are time, columns frequency. The image has frequency on the
/// vertical axis (low at the bottom) and time on the horizontal axis. Values are mapped
/// (linear or log1p), divided by the maximum, and coloured:
///   Gray: v -> (v, v, v) * 255
///   Heat: piecewise linear black -> red -> yellow -> white at v = 0, 1/3, 2/3, 1.
/// An optional ridge (one bin per time row) is drawn in pure green.
void write_raster_png(const std::filesystem::path& path, const Eigen::MatrixXd& magnitude, ValueMap map, Colormap cmap,
                      const std::vector<Index>* ridge_bins = nullptr);

/// Colour of a normalized value in [0, 1] under the given map.
std::array<unsigned char, 3> colour(double v, Colormap cmap);

std::string format_double(double v);

}  // namespace sstuq::io
