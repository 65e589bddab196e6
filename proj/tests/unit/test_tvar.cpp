#include "sstuq/random.hpp"
#include "sstuq/simgen.hpp"
#include "sstuq/stats.hpp"
#include "sstuq/tvar.hpp"

#include "signals.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace sstuq;
using sstuq::testing::from;

namespace {

std::span<const double> span_of(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Eigen::VectorXd white(Index n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXd x(n);
    for (Index i = 0; i < n; ++i) x(i) = rng.normal();
    return x;
}

}  // namespace

TEST_CASE("shifted Legendre basis is orthonormal on [0, 1]") {
    const Index grid = 20000;
    for (Index a = 0; a < 5; ++a) {
        for (Index b = 0; b < 5; ++b) {
            double acc = 0.0;
            for (Index i = 0; i < grid; ++i) {
                const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
                acc += shifted_legendre(a, u) * shifted_legendre(b, u);
            }
            acc /= static_cast<double>(grid);
            CHECK(std::abs(acc - (a == b ? 1.0 : 0.0)) < 1e-6);
        }
    }
}

TEST_CASE("white noise fits a near-zero AR(1) coefficient") {
    const Index n = 2048;
    int outside = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const TvarModel m = fit_tvar(from(white(n, seed), 1.0), {1, 1, 20});
        if (std::abs(m.coeffs(0, 0)) > 3.0 / std::sqrt(static_cast<double>(n))) ++outside;
    }
    CHECK(outside <= 2);
}

TEST_CASE("stationary AR(1) coefficient is recovered") {
    const Index n = 4096;
    const Eigen::VectorXd eta = white(n, 77);
    Eigen::VectorXd x(n);
    x(0) = eta(0);
    for (Index i = 1; i < n; ++i) x(i) = 0.5 * x(i - 1) + eta(i);
    const TvarModel m = fit_tvar(from(x, 1.0), {1, 1, 20});
    CHECK(std::abs(m.coeffs(0, 0) * shifted_legendre(0, 0.3) - 0.5) <= 0.05);
    CHECK_FALSE(m.regularized);
}

TEST_CASE("fit is unbiased for coefficient functions inside the basis span") {
    // phi_1 linear, phi_2 quadratic in u: representable with m = 4. The 50-fit average sits within
    // about 3 standard errors (endpoint sd ~0.09 per fit) of the truth.
    const Index n = 2048;
    auto p1 = [](double u) { return -0.3 - 0.2 * u; };
    auto p2 = [](double u) { return 0.1 + 0.2 * u * (1.0 - u); };
    Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(n, 2);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const Eigen::VectorXd eta = white(n, 500 + seed);
        Eigen::VectorXd x(n);
        for (Index i = 0; i < n; ++i) {
            const double u = static_cast<double>(i + 1) / static_cast<double>(n);
            x(i) = eta(i);
            if (i >= 2) x(i) += p1(u) * x(i - 1) + p2(u) * x(i - 2);
        }
        avg += fit_tvar(from(x, 1.0), {2, 4, 20}).phi_path / 50.0;
    }
    double worst = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double u = static_cast<double>(i + 1) / static_cast<double>(n);
        worst = std::max({worst, std::abs(avg(i, 0) - p1(u)), std::abs(avg(i, 1) - p2(u))});
    }
    CHECK(worst <= 0.04);
}

TEST_CASE("null process coefficient functions are close away from the ends") {
    const Index n = 2048;
    std::vector<double> sups;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const TvarModel m = fit_tvar(gen_null(n, seed), {2, 4, 20});
        double worst = 0.0;
        for (Index i = n / 10; i < n - n / 10; ++i) {
            const double u = static_cast<double>(i + 1) / static_cast<double>(n);
            worst = std::max({worst, std::abs(m.phi_path(i, 0) - null_phi1(u)), std::abs(m.phi_path(i, 1) - null_phi2(u))});
        }
        sups.push_back(worst);
    }
    const auto good = std::count_if(sups.begin(), sups.end(), [](double e) { return e <= 0.15; });
    CHECK(good >= 18);
}

TEST_CASE("fit needs more than 10 b m samples") {
    try {
        fit_tvar(from(white(80, 1), 1.0), {2, 4, 20});
        FAIL("expected TooFewSamples");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooFewSamples);
    }
    CHECK_NOTHROW(fit_tvar(from(white(81, 1), 1.0), {2, 4, 20}));
}

TEST_CASE("innovations of a zero model are the residual") {
    TvarModel m;
    m.order_b = 2;
    m.basis_order_m = 3;
    m.coeffs = Eigen::MatrixXd::Zero(2, 3);
    m.phi_path = legendre_phi_path(m.coeffs, 100);
    m.sigma_path = Eigen::VectorXd::Ones(100);
    const Eigen::VectorXd r = white(100, 5);
    CHECK(innovations(m, r) == r);
}

TEST_CASE("innovations invert the generating AR(1) recursion") {
    const Index n = 1000;
    const Eigen::VectorXd eta = white(n, 6);
    Eigen::VectorXd x(n);
    x(0) = eta(0);
    for (Index i = 1; i < n; ++i) x(i) = -0.6 * x(i - 1) + eta(i);
    TvarModel m;
    m.order_b = 1;
    m.basis_order_m = 1;
    m.coeffs = Eigen::MatrixXd::Constant(1, 1, -0.6);
    m.phi_path = legendre_phi_path(m.coeffs, n);
    m.sigma_path = Eigen::VectorXd::Ones(n);
    CHECK((innovations(m, x) - eta).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("innovations of a fitted null model are close to white") {
    // Per realization each lag falls inside +-2/sqrt(n) with probability ~0.95.
    const Index n = 2048;
    int inside = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const TimeSeries x = gen_null(n, seed);
        const TvarModel m = fit_tvar(x);
        const Eigen::VectorXd e = innovations(m, x.samples);
        const double c0 = stats::autocovariance(span_of(e), 0);
        for (std::size_t lag = 1; lag <= 5; ++lag) {
            inside += std::abs(stats::autocovariance(span_of(e), lag) / c0) <= 2.0 / std::sqrt(static_cast<double>(n));
            ++total;
        }
    }
    CHECK(static_cast<double>(inside) / total >= 0.9);
}

TEST_CASE("local std floors constant input and tracks unit variance") {
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(200, 3.0);
    const double floor = default_sigma_floor(c);
    CHECK(floor == 1e-12);
    CHECK((local_std(c, 20, floor).array() == floor).all());

    const Eigen::VectorXd w = white(4000, 9);
    const Eigen::VectorXd s = local_std(w, 20, default_sigma_floor(w));
    const Index inside = ((s.array() >= 0.6) && (s.array() <= 1.4)).count();
    CHECK(static_cast<double>(inside) >= 0.99 * 4000.0);
}

TEST_CASE("bootstrap of a zero model with unit sigma is standard normal") {
    const Index n = 2048;
    TvarModel m;
    m.order_b = 2;
    m.basis_order_m = 4;
    m.coeffs = Eigen::MatrixXd::Zero(2, 4);
    m.phi_path = legendre_phi_path(m.coeffs, n);
    m.sigma_path = Eigen::VectorXd::Ones(n);
    int passed = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
        passed += stats::ks_standard_normal(span_of(sample_bootstrap(m, seed))).p_value > 0.01;
    CHECK(passed >= 95);  // each seed passes with probability 0.99
    const Eigen::VectorXd x = sample_bootstrap(m, 12);
    CHECK(sample_bootstrap(m, 12) == x);
    CHECK(sample_bootstrap(m, 13) != x);
}

TEST_CASE("bootstrap from the true null model reproduces the generator") {
    const Index n = 512;
    const TvarModel truth = null_true_model(n);
    for (std::uint64_t seed : {1u, 2u, 99u}) {
        const Eigen::VectorXd a = gen_null(n, seed).samples;
        const Eigen::VectorXd b = sample_bootstrap(truth, seed);
        CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12 * a.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("bootstrap of a fitted null model matches the lag-1 covariance at mid-series") {
    const Index n = 2048;
    const TvarModel m = fit_tvar(gen_null(n, 31));
    auto lag1 = [&](const Eigen::VectorXd& x) {
        double acc = 0.0;
        for (Index i = n / 2 - 100; i < n / 2 + 100; ++i) acc += x(i) * x(i - 1);
        return acc / 200.0;
    };
    double boot = 0.0, truth = 0.0;
    for (std::uint64_t r = 1; r <= 200; ++r) boot += lag1(sample_bootstrap(m, replicate_seed(1000, r)));
    for (std::uint64_t r = 1; r <= 2000; ++r) truth += lag1(gen_null(n, 50000 + r).samples);
    boot /= 200.0;
    truth /= 2000.0;
    CHECK(std::abs(boot - truth) <= 0.1);
}

TEST_CASE("diverging recursion is reported") {
    const Index n = 2000;
    TvarModel m;
    m.order_b = 1;
    m.basis_order_m = 1;
    m.coeffs = Eigen::MatrixXd::Constant(1, 1, 1.5);
    m.phi_path = legendre_phi_path(m.coeffs, n);
    m.sigma_path = Eigen::VectorXd::Ones(n);
    try {
        sample_bootstrap(m, 1);
        FAIL("expected NonFiniteSample");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonFiniteSample);
    }
}

TEST_CASE("order selection prefers an order that covers the true lag") {
    const TimeSeries x = gen_null(2048, 4);
    const OrderChoice c = select_order(x, {1, 2, 3}, {1, 2, 4});
    CHECK(c.order_b >= 2);
}

TEST_CASE("model files round-trip at full precision") {
    const TvarModel fitted = fit_tvar(gen_null(512, 8));
    std::stringstream ss;
    write_model(ss, fitted);
    const TvarModel back = read_model(ss);
    CHECK(back.order_b == fitted.order_b);
    CHECK(back.coeffs == fitted.coeffs);
    CHECK(back.sigma_path == fitted.sigma_path);
    CHECK(back.phi_path == fitted.phi_path);

    const TvarModel truth = null_true_model(256);
    std::stringstream ps;
    write_model(ps, truth);
    const TvarModel pback = read_model(ps);
    CHECK(pback.basis == TvarBasis::Path);
    CHECK(pback.phi_path == truth.phi_path);
    CHECK(sample_bootstrap(pback, 3) == sample_bootstrap(truth, 3));
}
