#include "sstuq/random.hpp"
#include "sstuq/recon.hpp"
#include "sstuq/simgen.hpp"
#include "sstuq/sst.hpp"

#include "signals.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace sstuq;
using sstuq::testing::tone;

namespace {

constexpr Index kN = 2048;
const double kRate = std::sqrt(2048.0);

Tfr tone_sst(const SstPipeline& pipe, double amp = 2.0) { return pipe.sst(tone(kN, kRate, amp, 4.0)); }

SstPipeline tone_pipeline() {
    return SstPipeline(make_window({WindowKind::Bump, 1.0}, kRate), uniform_grid(10.0, 200), SstParams{}, kRate);
}

}  // namespace

TEST_CASE("ridge of a tone stays within one bin of its frequency for any penalty") {
    const SstPipeline pipe = tone_pipeline();
    const Tfr s = tone_sst(pipe);
    const Index m = pipe.window().m;
    for (double lambda : {0.0, 0.5, 1.0, 10.0}) {
        RidgeOptions opt;
        opt.lambda = lambda;
        const Ridge r = extract_ridge(s, opt);
        for (Index l = m; l < kN - m; ++l) REQUIRE(std::abs(r.if_hz(l) - 4.0) <= s.freq_axis.bin_width_hz + 1e-12);
    }
}

TEST_CASE("ridge equals the per-row argmax when the tone dominates every row") {
    const SstPipeline pipe = tone_pipeline();
    const Tfr s = tone_sst(pipe);
    RidgeOptions opt;
    opt.lambda = 0.0;
    const Ridge r = extract_ridge(s, opt);
    const Index m = pipe.window().m;
    for (Index l = m; l < kN - m; ++l) {
        Index k = 0;
        s.values.row(l).cwiseAbs().maxCoeff(&k);
        REQUIRE(r.bins[static_cast<std::size_t>(l)] == k);
    }
}

TEST_CASE("ridge respects the jump cap and breaks ties to the lowest bin") {
    Tfr s;
    s.kind = TfrKind::Sst;
    s.freq_axis = uniform_grid(10.0, 10);
    s.values = Eigen::MatrixXcd::Zero(6, 10);
    s.time_axis = Eigen::VectorXd::LinSpaced(6, 0.0, 5.0);
    for (Index l = 0; l < 6; ++l) s.sample_index.push_back(l);
    s.values(0, 0) = 1.0;
    for (Index l = 1; l < 6; ++l) s.values(l, 9) = 5.0;
    RidgeOptions opt;
    opt.lambda = 0.0;
    opt.jump_cap_bins = 2;
    const Ridge r = extract_ridge(s, opt);
    for (Index l = 1; l < 6; ++l)
        CHECK(std::abs(r.bins[static_cast<std::size_t>(l)] - r.bins[static_cast<std::size_t>(l - 1)]) <= 2);

    s.values.setZero();
    const Ridge flat = extract_ridge(s, opt);
    for (Index l = 0; l < 6; ++l) {
        CHECK(flat.bins[static_cast<std::size_t>(l)] == 0);
        CHECK(flat.quality(l) == 0.0);
    }
}

TEST_CASE("ridge rejects an empty TFR") {
    Tfr s;
    s.kind = TfrKind::Sst;
    try {
        extract_ridge(s);
        FAIL("expected EmptyTfr");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyTfr);
    }
}

TEST_CASE("reconstructing a zero SST gives zero") {
    const SstPipeline pipe = tone_pipeline();
    Tfr s = tone_sst(pipe);
    s.values.setZero();
    RidgeOptions opt;
    opt.delta_r_hz = default_band_halfwidth(pipe.params());
    const ComponentEstimate c = reconstruct(s, extract_ridge(s, opt), pipe.window(), kN);
    CHECK(c.complex_f.cwiseAbs().maxCoeff() == 0.0);
    CHECK(c.amplitude.maxCoeff() == 0.0);
}

TEST_CASE("tone is reconstructed with its amplitude and phase") {
    const SstPipeline pipe = tone_pipeline();
    const Tfr s = tone_sst(pipe);
    RidgeOptions opt;
    opt.delta_r_hz = default_band_halfwidth(pipe.params());
    const ComponentEstimate c = reconstruct(s, extract_ridge(s, opt), pipe.window(), kN);
    REQUIRE(c.valid_begin == pipe.window().m);
    REQUIRE(c.valid_end == kN - pipe.window().m);
    double worst = 0.0;
    for (Index l = c.valid_begin; l < c.valid_end; ++l) {
        const Complex truth = 2.0 * std::exp(Complex(0.0, kTwoPi * 4.0 * s.time_axis(l)));
        worst = std::max(worst, std::abs(c.complex_f(l) - truth));
    }
    CHECK(worst <= 0.05 * 2.0);
    // Unwrapped phase advances by f0 / rate cycles per sample.
    const double slope = (c.phase_cycles(c.valid_end - 1) - c.phase_cycles(c.valid_begin)) /
                         static_cast<double>(c.valid_end - 1 - c.valid_begin);
    CHECK(std::abs(slope - 4.0 / kRate) < 1e-4);
}

TEST_CASE("a band narrower than the grid spacing is an error") {
    const SstPipeline pipe = tone_pipeline();
    const Tfr s = tone_sst(pipe);
    Ridge r = extract_ridge(s);
    r.band_halfwidth_hz = 0.0;
    for (Index l = 0; l < r.if_hz.size(); ++l) r.if_hz(l) += 0.5 * s.freq_axis.bin_width_hz;
    try {
        reconstruct(s, r, pipe.window(), kN);
        FAIL("expected EmptyBand");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyBand);
    }
}

TEST_CASE("noise-free AHM signal: amplitude within 5% and IF within 0.2 Hz") {
    const AhmTruth truth = gen_ahm(kN, 3);
    const WindowPair win = make_window({WindowKind::Bump, 1.0}, kRate);
    const SstPipeline pipe(win, uniform_grid(kRate / 2.0, kN / 3), SstParams{}, kRate);
    const Tfr s = pipe.sst(truth.f);
    RidgeOptions opt;
    opt.delta_r_hz = default_band_halfwidth(pipe.params());
    const Ridge r = extract_ridge(s, opt);
    const ComponentEstimate c = reconstruct(s, r, win, kN);
    double amp_err = 0.0, if_err = 0.0;
    for (Index l = c.valid_begin; l < c.valid_end; ++l) {
        amp_err = std::max(amp_err, std::abs(c.amplitude(l) - truth.am(l)) / truth.am(l));
        if_err = std::max(if_err, std::abs(r.if_hz(l) - truth.inst_freq(l)));
    }
    INFO("amp " << amp_err << " if " << if_err);
    CHECK(amp_err <= 0.05);
    CHECK(if_err <= 0.2);
}

TEST_CASE("data-driven nu sits between the noise floor and the ridge peak") {
    const SstPipeline pipe = tone_pipeline();
    TimeSeries x = tone(kN, kRate, 2.0, 4.0);
    Rng rng(21);
    for (Index i = 0; i < kN; ++i) x.samples(i) += 0.1 * rng.normal();
    const Tfr v = stft(x, pipe.window(), pipe.grid(), Taper::Window);
    const double nu = data_driven_nu(v, pipe.window(), kRate);
    const double peak = v.values.cwiseAbs().maxCoeff();
    std::vector<double> off;
    for (Index l = 0; l < v.rows(); ++l)
        for (Index k = 0; k < v.cols(); ++k)
            if (std::abs(v.freq_axis.freqs_hz(k) - 4.0) > 1.0) off.push_back(std::abs(v.values(l, k)));
    std::nth_element(off.begin(), off.begin() + static_cast<std::ptrdiff_t>(off.size() / 2), off.end());
    const double median = off[off.size() / 2];
    CHECK(nu > median);
    CHECK(nu < peak);
    CHECK(3.0 * median <= peak);

    Tfr zero = v;
    zero.values.setZero();
    CHECK(data_driven_nu(zero, pipe.window(), kRate) == 0.0);
}

TEST_CASE("phase unwrapping holds through small amplitudes") {
    Eigen::VectorXcd z(5);
    z << Complex(1, 0), Complex(0, 1), Complex(0, 0), Complex(-1, 0), Complex(0, -1);
    const Eigen::VectorXd p = unwrap_phase_cycles(z);
    CHECK(p(0) == 0.0);
    CHECK(p(1) == Catch::Approx(0.25));
    CHECK(p(2) == Catch::Approx(0.25));
    CHECK(p(3) == Catch::Approx(0.5));
    CHECK(p(4) == Catch::Approx(0.75));
}
