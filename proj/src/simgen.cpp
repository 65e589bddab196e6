#include "sstuq/simgen.hpp"

#include "sstuq/parallel.hpp"
#include "sstuq/random.hpp"
#include "sstuq/stft.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace sstuq {

double null_phi1(double u) { return -0.5 * (0.7 + 0.3 * std::cos(kTwoPi * u)); }
double null_phi2(double u) { return 0.3 * std::sqrt(0.1 + u / 4.0); }
double null_modulation(double u) { return 1.0 + 0.5 * std::cos(kTwoPi * u); }

TimeSeries gen_null(Index n, std::uint64_t seed) {
    if (n < 64) throw Error(ErrorCode::InvalidArgument, "null generator needs n >= 64");
    Rng rng(seed);
    const double dn = static_cast<double>(n);
    Eigen::VectorXd eps(n);
    TimeSeries ts;
    ts.rate_hz = std::sqrt(dn);
    ts.start_time_s = 1.0 / ts.rate_hz;
    ts.samples.resize(n);
    for (Index i = 0; i < n; ++i) {
        const double u = static_cast<double>(i + 1) / dn;
        double v = rng.normal();
        if (i >= 2) v += null_phi1(u) * eps(i - 1) + null_phi2(u) * eps(i - 2);
        eps(i) = v;
        ts.samples(i) = null_modulation(u) * v;
    }
    return ts;
}

TvarModel null_true_model(Index n) {
    if (n < 64) throw Error(ErrorCode::InvalidArgument, "null model needs n >= 64");
    const double dn = static_cast<double>(n);
    TvarModel model;
    model.order_b = 2;
    model.basis = TvarBasis::Path;
    model.basis_order_m = n;
    model.phi_path.setZero(n, 2);
    model.sigma_path.resize(n);
    for (Index i = 0; i < n; ++i) {
        const double u = static_cast<double>(i + 1) / dn;
        const double g = null_modulation(u);
        model.sigma_path(i) = g;
        if (i >= 2) {
            model.phi_path(i, 0) = null_phi1(u) * g / null_modulation(static_cast<double>(i) / dn);
            model.phi_path(i, 1) = null_phi2(u) * g / null_modulation(static_cast<double>(i - 1) / dn);
        }
    }
    model.coeffs = model.phi_path.transpose();
    model.sigma_floor = model.sigma_path.minCoeff();
    return model;
}

Eigen::VectorXd smooth(const Eigen::VectorXd& x, Index support, SmoothingKernel kernel) {
    if (support < 1) throw Error(ErrorCode::InvalidArgument, "smoothing support must be positive");
    Eigen::VectorXd w(support);
    for (Index k = 0; k < support; ++k) {
        if (kernel == SmoothingKernel::Flat) {
            w(k) = 1.0;
        } else {
            const double s = std::sin(kPi * static_cast<double>(k + 1) / static_cast<double>(support + 1));
            w(k) = s * s;
        }
    }
    const Index n = x.size();
    const Index left = support / 2;
    Eigen::VectorXd out(n);
    for (Index i = 0; i < n; ++i) {
        double acc = 0.0, wsum = 0.0;
        for (Index k = 0; k < support; ++k) {
            const Index j = i - left + k;
            if (j < 0 || j >= n) continue;
            acc += w(k) * x(j);
            wsum += w(k);
        }
        out(i) = acc / wsum;
    }
    return out;
}

AhmTruth gen_ahm(Index n, std::uint64_t seed, const AhmOptions& opt) {
    if (n < 1024) throw Error(ErrorCode::InvalidArgument, "AHM generator needs n >= 1024");
    Rng rng(seed);
    Eigen::VectorXd brown(n), brown2(n);
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) brown(i) = acc += rng.normal();
    acc = 0.0;
    for (Index i = 0; i < n; ++i) brown2(i) = acc += rng.normal();

    const Eigen::VectorXd b = smooth(brown, opt.am_support, opt.kernel);
    const Eigen::VectorXd p = smooth(brown2, opt.if_support, opt.kernel);
    const double bmax = b.cwiseAbs().maxCoeff();
    const double pmax = p.cwiseAbs().maxCoeff();
    const double q = std::sqrt(static_cast<double>(n));

    AhmTruth t;
    t.am = Eigen::VectorXd::Constant(n, 3.0) + b / bmax;
    t.inst_freq.resize(n);
    t.phase.resize(n);
    double cum = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double one_based = static_cast<double>(i + 1);
        t.inst_freq(i) = 4.0 + 0.5 * one_based / (17.0 * q) + 1.2 * p(i) / pmax;
        cum += t.inst_freq(i);
        t.phase(i) = cum / q;
    }
    t.f.rate_hz = q;
    t.f.start_time_s = 1.0 / q;
    t.f.samples = (t.am.array() * (kTwoPi * t.phase.array()).cos()).matrix();
    return t;
}

SlowVariation measure_slow_variation(const AhmTruth& truth) {
    SlowVariation sv;
    const double q = truth.f.rate_hz;
    const Index n = truth.am.size();
    sv.min_if = truth.inst_freq.minCoeff();
    for (Index i = 1; i + 1 < n; ++i) {
        const double da = (truth.am(i + 1) - truth.am(i - 1)) * q / 2.0;
        const double dphi = (truth.inst_freq(i + 1) - truth.inst_freq(i - 1)) * q / 2.0;
        sv.am_rate = std::max(sv.am_rate, std::abs(da) / truth.am(i));
        sv.if_rate = std::max(sv.if_rate, std::abs(dphi) / truth.inst_freq(i));
    }
    return sv;
}

std::vector<Probe> lattice_probes(Index n, Index nt, double f_max_hz, Index nf) {
    std::vector<Probe> probes;
    for (Index a = 1; a <= nt; ++a) {
        for (Index c = 1; c <= nf; ++c) {
            Probe p;
            p.sample = n * a / (nt + 1);
            p.freq_hz = f_max_hz * static_cast<double>(c) / static_cast<double>(nf + 1);
            probes.push_back(p);
        }
    }
    return probes;
}

GaussianityReport gaussianity_check(const NoiseGenerator& noise_gen, const WindowPair& win,
                                    const std::vector<Probe>& probes, Index n_mc, std::uint64_t seed0, double level,
                                    int jobs) {
    if (n_mc < 200) throw Error(ErrorCode::InvalidArgument, "Gaussianity check needs at least 200 realizations");
    if (probes.empty()) throw Error(ErrorCode::InvalidArgument, "no probes given");

    std::vector<double> freqs;
    std::vector<Index> rows;
    for (const Probe& p : probes) {
        freqs.push_back(p.freq_hz);
        rows.push_back(p.sample);
    }
    std::sort(freqs.begin(), freqs.end());
    freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    FreqGrid grid;
    grid.freqs_hz = Eigen::Map<const Eigen::VectorXd>(freqs.data(), static_cast<Index>(freqs.size()));
    grid.c_max_hz = freqs.back();

    std::vector<std::pair<Index, Index>> cell;  // (row slot, freq slot) per probe
    for (const Probe& p : probes) {
        const auto r = std::lower_bound(rows.begin(), rows.end(), p.sample) - rows.begin();
        const auto f = std::lower_bound(freqs.begin(), freqs.end(), p.freq_hz) - freqs.begin();
        cell.emplace_back(static_cast<Index>(r), static_cast<Index>(f));
    }

    const Index np = static_cast<Index>(probes.size());
    Eigen::MatrixXd re(np, n_mc), im(np, n_mc);
    parallel_for(static_cast<long>(n_mc), jobs, [&](long r) {
        const TimeSeries ts = noise_gen(seed0 + static_cast<std::uint64_t>(r));
        const StftPlan local(win, grid, ts.rate_hz);
        const Tfr v = local.apply(ts, Taper::Window, rows);
        for (Index p = 0; p < np; ++p) {
            const Complex z = v.values(cell[static_cast<std::size_t>(p)].first, cell[static_cast<std::size_t>(p)].second);
            re(p, static_cast<Index>(r)) = z.real();
            im(p, static_cast<Index>(r)) = z.imag();
        }
    });

    GaussianityReport rep;
    rep.probes = probes;
    rep.level = level;
    Index passed = 0;
    for (Index p = 0; p < np; ++p) {
        const Eigen::VectorXd a = re.row(p).transpose();
        const Eigen::VectorXd b = im.row(p).transpose();
        rep.re_tests.push_back(stats::dagostino_pearson(std::span<const double>(a.data(), static_cast<std::size_t>(a.size()))));
        rep.im_tests.push_back(stats::dagostino_pearson(std::span<const double>(b.data(), static_cast<std::size_t>(b.size()))));
        passed += rep.re_tests.back().p_value >= level;
        passed += rep.im_tests.back().p_value >= level;
    }
    rep.pass_fraction = static_cast<double>(passed) / static_cast<double>(2 * np);
    return rep;
}

}  // namespace sstuq
