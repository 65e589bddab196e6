#pragma once

#include "sstuq/core.hpp"
#include "sstuq/stats.hpp"
#include "sstuq/tvar.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace sstuq {

// Null-case noise: tvAR(2) with
//   phi_1(u) = -0.5 (0.7 + 0.3 cos(2 pi u)),  phi_2(u) = 0.3 sqrt(0.1 + u/4),
// modulated by g(u) = 1 + 0.5 cos(2 pi u). Sampled at sqrt(n) Hz, t_i = i / sqrt(n), i = 1..n.
double null_phi1(double u);
double null_phi2(double u);
double null_modulation(double u);

/// The null process sampled at rate sqrt(n), starting at t = 1/sqrt(n).
TimeSeries gen_null(Index n, std::uint64_t seed);

/// x = g e with e the tvAR(2) above is itself a tvAR(2) in x with
/// phi_j(i/n) g_i / g_{i-j} and innovation std g_i; that exact model as a Path TvarModel.
TvarModel null_true_model(Index n);

enum class SmoothingKernel { Flat, Hann };

struct AhmTruth {
    TimeSeries f;
    Eigen::VectorXd am;
    Eigen::VectorXd inst_freq;
    Eigen::VectorXd phase;  // cycles
};

struct AhmOptions {
    Index am_support = 700;
    Index if_support = 500;
    SmoothingKernel kernel = SmoothingKernel::Flat;
};

/// Smoothed-Brownian AM and IF:
///   A = 3 + b / max|b|,  phi' = 4 + 0.5 i / (17 sqrt n) + 1.2 p / max|p|,
///   phi_i = (1/sqrt n) sum_{j<=i} phi'_j,  f = A cos(2 pi phi).
AhmTruth gen_ahm(Index n, std::uint64_t seed, const AhmOptions& opt = {});

/// Centered moving average with the given support; near the edges the average runs over
/// the in-range points only.
Eigen::VectorXd smooth(const Eigen::VectorXd& x, Index support, SmoothingKernel kernel);

struct SlowVariation {
    double am_rate = 0.0;  // max |A'| / A
    double if_rate = 0.0;  // max |phi''| / phi'
    double min_if = 0.0;
};

/// Finite-difference estimates of the slowly-varying constants of a generated AHM signal.
SlowVariation measure_slow_variation(const AhmTruth& truth);

struct Probe {
    Index sample = 0;
    double freq_hz = 0.0;
};

struct GaussianityReport {
    std::vector<Probe> probes;
    std::vector<stats::TestResult> re_tests;
    std::vector<stats::TestResult> im_tests;
    double level = 0.01;
    double pass_fraction = 0.0;  // over all Re and Im tests
};

using NoiseGenerator = std::function<TimeSeries(std::uint64_t seed)>;

/// STFT at each probe for n_mc independent realizations (seeds seed0 + r), then a
/// D'Agostino-Pearson normality test on Re and Im at each probe.
GaussianityReport gaussianity_check(const NoiseGenerator& noise_gen, const WindowPair& win,
                                    const std::vector<Probe>& probes, Index n_mc, std::uint64_t seed0 = 1,
                                    double level = 0.01, int jobs = 1);

/// Probes on an interior (times x freqs) lattice: times at fractions {1..nt}/(nt+1) of the
/// series, frequencies the same fractions of `f_max`.
std::vector<Probe> lattice_probes(Index n, Index nt, double f_max_hz, Index nf);

}  // namespace sstuq
