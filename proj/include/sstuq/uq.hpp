#pragma once

#include "sstuq/core.hpp"
#include "sstuq/sst.hpp"
#include "sstuq/tvar.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sstuq {

/// Coarse evaluation grid: sample indices (time) x bin indices of the SST output grid.
struct BandSpec {
    std::vector<Index> grid_times;
    std::vector<Index> grid_freqs;
    double alpha_level = 0.05;
    Index n_boot = 1000;
};

/// Every `time_stride`-th sample plus the last one, by `n_freqs` bins spread evenly over
/// the output grid (first and last bin included).
BandSpec default_band_spec(Index n, Index out_bins, Index time_stride = 8, Index n_freqs = 64,
                           double alpha_level = 0.05, Index n_boot = 1000);

void validate_band_spec(const BandSpec& spec, Index n, Index out_bins);

/// |S| of every replicate at every coarse node: row = node (time-major), col = replicate.
/// Replicate m (1-based) is signal + sample_bootstrap(model, replicate_seed(seed, m)).
Eigen::MatrixXd replicate_magnitudes(const std::optional<Eigen::VectorXd>& signal, const TvarModel& model,
                                     const BandSpec& spec, const SstPipeline& pipeline, std::uint64_t seed, int jobs = 1);

/// Pointwise quantile over replicates at each node, reshaped to (times x freqs).
Eigen::MatrixXd node_quantile(const Eigen::MatrixXd& reservoir, const BandSpec& spec, double p);

struct Bands {
    Eigen::MatrixXd lower;  // n x out_bins
    Eigen::MatrixXd upper;
    Eigen::MatrixXd coarse_lower;  // grid_times x grid_freqs
    Eigen::MatrixXd coarse_upper;
};

/// Percentile bands of |SST(signal + bootstrap noise)|, lifted to the full grid.
Bands bootstrap_bands(const std::optional<Eigen::VectorXd>& signal, const TvarModel& model, const BandSpec& spec,
                      const SstPipeline& pipeline, std::uint64_t seed, int jobs = 1);

/// Same as above from an already computed reservoir.
Bands bands_from_reservoir(const Eigen::MatrixXd& reservoir, const BandSpec& spec, Index n, const FreqGrid& out_grid);

struct ThresholdSurface {
    Eigen::MatrixXd full;    // n x out_bins
    Eigen::MatrixXd coarse;  // grid_times x grid_freqs
};

/// (1 - alpha) quantile of |SST(bootstrap noise)| per coarse node, lifted to the full grid.
ThresholdSurface noise_threshold(const TvarModel& model, const BandSpec& spec, const SstPipeline& pipeline,
                                 std::uint64_t seed, int jobs = 1);

/// Keeps s(i, k) where |s(i, k)| >= t(i, k), zero elsewhere.
Tfr apply_threshold(const Tfr& s, const Eigen::MatrixXd& t);

/// Tensor-product natural cubic spline from the coarse nodes onto (full_times x full_freqs),
/// clamped below at zero. Needs at least four nodes on each axis.
Eigen::MatrixXd spline_lift(const Eigen::MatrixXd& coarse, const Eigen::VectorXd& coarse_times,
                            const Eigen::VectorXd& coarse_freqs, const Eigen::VectorXd& full_times,
                            const Eigen::VectorXd& full_freqs);

}  // namespace sstuq
