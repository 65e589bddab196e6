#include "sstuq/random.hpp"
#include "sstuq/simgen.hpp"
#include "sstuq/stft.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace sstuq;

namespace {

// Exact Cov(x_i, x_{i-1}) of the null process by propagating the covariance of
// (e_i, e_{i-1}); coefficients written out independently of the library.
long double null_lag1_cov(Index n, Index i) {
    const long double pi = std::numbers::pi_v<long double>;
    auto phi1 = [&](long double u) { return -0.5L * (0.7L + 0.3L * std::cos(2 * pi * u)); };
    auto phi2 = [&](long double u) { return 0.3L * std::sqrt(0.1L + u / 4); };
    auto g = [&](long double u) { return 1 + 0.5L * std::cos(2 * pi * u); };
    long double s00 = 1, s01 = 0, s11 = 1;  // Var e_j, Cov(e_j, e_{j-1}), Var e_{j-1} at j = 1
    for (Index j = 2; j <= i; ++j) {
        const long double u = static_cast<long double>(j + 1) / n;
        const long double a = phi1(u), b = phi2(u);
        const long double v = a * a * s00 + 2 * a * b * s01 + b * b * s11 + 1;
        const long double c = a * s00 + b * s01;
        s11 = s00;
        s00 = v;
        s01 = c;
    }
    return g(static_cast<long double>(i + 1) / n) * g(static_cast<long double>(i) / n) * s01;
}

}  // namespace

TEST_CASE("null generator: rate, start time and determinism") {
    const TimeSeries a = gen_null(256, 7);
    CHECK(a.size() == 256);
    CHECK(a.rate_hz == 16.0);
    CHECK(a.start_time_s == 1.0 / 16.0);
    CHECK(gen_null(256, 7).samples == a.samples);
    CHECK(gen_null(256, 8).samples != a.samples);
    CHECK_THROWS_AS(gen_null(63, 1), Error);
}

TEST_CASE("null generator lag-1 covariance matches exact propagation") {
    const Index n = 256, i = n / 2;
    const int reps = 4000;
    double sum = 0.0, sum2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        const TimeSeries ts = gen_null(n, static_cast<std::uint64_t>(1000 + r));
        const double p = ts.samples(i) * ts.samples(i - 1);
        sum += p;
        sum2 += p * p;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
    const double exact = static_cast<double>(null_lag1_cov(n, i));
    CHECK(exact < 0.0);
    CHECK(std::abs(mean - exact) <= 3.0 * se);
}

TEST_CASE("true null model reproduces the generator exactly") {
    const Index n = 512;
    const TvarModel m = null_true_model(n);
    const TimeSeries x = gen_null(n, 3);
    Rng rng(3);
    Eigen::VectorXd z(n);
    for (Index i = 0; i < n; ++i) z(i) = rng.normal();
    Eigen::VectorXd y(n);
    for (Index i = 0; i < n; ++i) {
        y(i) = m.sigma_path(i) * z(i);
        if (i >= 1) y(i) += m.phi_path(i, 0) * y(i - 1);
        if (i >= 2) y(i) += m.phi_path(i, 1) * y(i - 2);
    }
    CHECK((y - x.samples).cwiseAbs().maxCoeff() <= 1e-12 * x.samples.cwiseAbs().maxCoeff());
}

TEST_CASE("AHM generator respects its construction") {
    const Index n = 2048;
    const AhmTruth t = gen_ahm(n, 11);
    const double q = std::sqrt(static_cast<double>(n));
    CHECK(t.f.rate_hz == q);
    CHECK(t.am.minCoeff() >= 2.0 - 1e-12);
    CHECK(t.am.maxCoeff() <= 4.0 + 1e-12);
    CHECK((std::abs(t.am.maxCoeff() - 4.0) < 1e-12 || std::abs(t.am.minCoeff() - 2.0) < 1e-12));
    CHECK(t.inst_freq.minCoeff() >= 4.0 - 1.2 - 1e-12);
    CHECK(t.inst_freq.maxCoeff() <= 4.0 + 0.5 * n / (17.0 * q) + 1.2 + 1e-12);
    for (Index i = 1; i < n; ++i) REQUIRE(std::abs((t.phase(i) - t.phase(i - 1)) * q - t.inst_freq(i)) < 1e-9);
    for (Index i = 0; i < n; i += 97)
        CHECK(std::abs(t.f.samples(i) - t.am(i) * std::cos(2.0 * std::numbers::pi * t.phase(i))) < 1e-12);
    CHECK(gen_ahm(n, 11).f.samples == t.f.samples);
    CHECK(gen_ahm(n, 12).f.samples != t.f.samples);
    CHECK_THROWS_AS(gen_ahm(1023, 1), Error);
}

TEST_CASE("AHM signals vary slowly relative to their frequency") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SlowVariation sv = measure_slow_variation(gen_ahm(2048, seed));
        CHECK(sv.min_if >= 2.8);
        CHECK(sv.am_rate < 0.1 * sv.min_if);
        CHECK(sv.if_rate < 0.1 * sv.min_if);
    }
}

TEST_CASE("smoothing preserves constants and averages interior windows") {
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(50, 3.0);
    for (auto k : {SmoothingKernel::Flat, SmoothingKernel::Hann})
        CHECK((smooth(c, 7, k).array() - 3.0).abs().maxCoeff() < 1e-14);
    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(20, 0.0, 19.0);
    const Eigen::VectorXd s = smooth(x, 5, SmoothingKernel::Flat);
    CHECK(std::abs(s(10) - 10.0) < 1e-14);
    CHECK(std::abs(s(0) - 1.0) < 1e-14);
    CHECK_THROWS_AS(smooth(x, 0, SmoothingKernel::Flat), Error);
}

TEST_CASE("lattice probes sit at interior fractions") {
    const auto p = lattice_probes(1000, 5, 12.0, 5);
    REQUIRE(p.size() == 25);
    CHECK(p.front().sample == 166);
    CHECK(p.front().freq_hz == Catch::Approx(2.0));
    CHECK(p.back().sample == 833);
    CHECK(p.back().freq_hz == Catch::Approx(10.0));
}

TEST_CASE("Gaussian white noise passes the normality check") {
    const Index n = 1024;
    const double rate = 32.0;
    const WindowPair win = make_window({}, rate);
    NoiseGenerator white = [&](std::uint64_t s) {
        Rng rng(s);
        TimeSeries ts;
        ts.rate_hz = rate;
        ts.samples.resize(n);
        for (Index i = 0; i < n; ++i) ts.samples(i) = rng.normal();
        return ts;
    };
    const auto rep = gaussianity_check(white, win, lattice_probes(n, 5, rate / 2.0, 5), 200, 1, 0.01);
    CHECK(rep.re_tests.size() == 25);
    CHECK(rep.pass_fraction >= 0.9);
    CHECK_THROWS_AS(gaussianity_check(white, win, lattice_probes(n, 5, rate / 2.0, 5), 199), Error);
}

TEST_CASE("linear functionals of skewed i.i.d. noise are close to Gaussian") {
    const Index n = 1024;
    const double rate = 32.0;
    const WindowPair win = make_window({}, rate);
    NoiseGenerator expo = [&](std::uint64_t s) {
        Rng rng(s);
        std::exponential_distribution<double> e(1.0);
        TimeSeries ts;
        ts.rate_hz = rate;
        ts.samples.resize(n);
        for (Index i = 0; i < n; ++i) ts.samples(i) = e(rng.engine()) - 1.0;
        return ts;
    };
    const auto rep = gaussianity_check(expo, win, lattice_probes(n, 5, rate / 2.0, 5), 200, 1, 0.01);
    CHECK(rep.pass_fraction >= 0.9);
}
