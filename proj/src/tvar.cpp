#include "sstuq/tvar.hpp"

#include "sstuq/random.hpp"
#include "sstuq/stats.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace sstuq {

namespace {

constexpr double kDivergence = 1e100;

double rescaled_time(Index i, Index n) { return static_cast<double>(i + 1) / static_cast<double>(n); }

Eigen::MatrixXd path_for_length(const TvarModel& model, Index n) {
    if (model.phi_path.rows() == n) return model.phi_path;
    if (model.basis == TvarBasis::Legendre) return legendre_phi_path(model.coeffs, n);
    throw Error(ErrorCode::SeriesTooShort, "path model length differs from the series length");
}

std::vector<double> split_numbers(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        std::size_t used = 0;
        out.push_back(std::stod(cell, &used));
    }
    return out;
}

}  // namespace

double shifted_legendre(Index k, double u) {
    const double x = 2.0 * u - 1.0;
    double p0 = 1.0, p1 = x;
    double pk = k == 0 ? p0 : p1;
    for (Index j = 2; j <= k; ++j) {
        pk = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / static_cast<double>(j);
        p0 = p1;
        p1 = pk;
    }
    return std::sqrt(2.0 * static_cast<double>(k) + 1.0) * pk;
}

double TvarModel::phi(Index j, double u) const {
    if (j < 1 || j > order_b) throw Error(ErrorCode::InvalidArgument, "lag index outside 1..b");
    if (basis == TvarBasis::Legendre) {
        double acc = 0.0;
        for (Index k = 0; k < coeffs.cols(); ++k) acc += coeffs(j - 1, k) * shifted_legendre(k, u);
        return acc;
    }
    const Index n = phi_path.rows();
    const Index i = std::clamp<Index>(static_cast<Index>(std::lround(u * static_cast<double>(n))) - 1, 0, n - 1);
    return phi_path(i, j - 1);
}

Eigen::MatrixXd legendre_phi_path(const Eigen::MatrixXd& coeffs, Index n) {
    Eigen::MatrixXd basis(n, coeffs.cols());
    for (Index i = 0; i < n; ++i) {
        const double u = rescaled_time(i, n);
        for (Index k = 0; k < coeffs.cols(); ++k) basis(i, k) = shifted_legendre(k, u);
    }
    return basis * coeffs.transpose();
}

double default_sigma_floor(const Eigen::VectorXd& resid) {
    const double s = stats::sample_std(std::span<const double>(resid.data(), static_cast<std::size_t>(resid.size())));
    return s > 0.0 ? 1e-6 * s : 1e-12;
}

Eigen::VectorXd local_std(const Eigen::VectorXd& innov, Index half_window, double sigma_floor) {
    if (half_window < 1) throw Error(ErrorCode::InvalidArgument, "half_window must be at least 1");
    const Index n = innov.size();
    Eigen::VectorXd out(n);
    for (Index i = 0; i < n; ++i) {
        const Index lo = std::max<Index>(0, i - half_window);
        const Index hi = std::min<Index>(n - 1, i + half_window);
        const double s = stats::sample_std(std::span<const double>(innov.data() + lo, static_cast<std::size_t>(hi - lo + 1)));
        out(i) = std::max(s, sigma_floor);
    }
    return out;
}

namespace {

struct Design {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
};

// Rows i = b..n-1 (0-based); column j*m + k holds psi_k(u_i) x_{i-1-j}.
Design build_design(const Eigen::VectorXd& x, Index b, Index m) {
    const Index n = x.size();
    Design d;
    d.x.resize(n - b, b * m);
    d.y = x.tail(n - b);
    Eigen::VectorXd psi(m);
    for (Index i = b; i < n; ++i) {
        const double u = rescaled_time(i, n);
        for (Index k = 0; k < m; ++k) psi(k) = shifted_legendre(k, u);
        for (Index j = 0; j < b; ++j) {
            for (Index k = 0; k < m; ++k) d.x(i - b, j * m + k) = psi(k) * x(i - 1 - j);
        }
    }
    return d;
}

Eigen::VectorXd solve_ls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, bool& regularized) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() == x.cols()) {
        regularized = false;
        return qr.solve(y);
    }
    regularized = true;
    Eigen::MatrixXd gram = x.transpose() * x;
    const double scale = std::max(gram.trace() / static_cast<double>(gram.rows()), 1e-300);
    gram.diagonal().array() += 1e-8 * scale;
    return gram.ldlt().solve(x.transpose() * y);
}

Eigen::MatrixXd unpack(const Eigen::VectorXd& beta, Index b, Index m) {
    Eigen::MatrixXd a(b, m);
    for (Index j = 0; j < b; ++j)
        for (Index k = 0; k < m; ++k) a(j, k) = beta(j * m + k);
    return a;
}

}  // namespace

TvarModel fit_tvar(const TimeSeries& resid, const TvarFitOptions& opt) {
    validate_series(resid);
    const Index b = opt.order_b, m = opt.basis_order_m;
    if (b < 1 || m < 1) throw Error(ErrorCode::InvalidArgument, "tvAR order and basis size must be at least 1");
    const Index n = resid.size();
    if (n <= 10 * b * m)
        throw Error(ErrorCode::TooFewSamples, fmt::format("need more than 10*b*m = {} samples, got {}", 10 * b * m, n));

    const Design d = build_design(resid.samples, b, m);
    TvarModel model;
    model.order_b = b;
    model.basis_order_m = m;
    model.basis = TvarBasis::Legendre;
    model.coeffs = unpack(solve_ls(d.x, d.y, model.regularized), b, m);
    model.phi_path = legendre_phi_path(model.coeffs, n);
    model.sigma_floor = default_sigma_floor(resid.samples);
    model.sigma_path.setOnes(n);  // placeholder so innovations() sees the right length
    const Eigen::VectorXd e = innovations(model, resid.samples);
    model.sigma_path = local_std(e, opt.half_window, model.sigma_floor);
    return model;
}

Eigen::VectorXd innovations(const TvarModel& model, const Eigen::VectorXd& resid) {
    const Index n = resid.size();
    const Index b = model.order_b;
    if (n < b + 1) throw Error(ErrorCode::SeriesTooShort, "series shorter than model order + 1");
    const Eigen::MatrixXd phi = path_for_length(model, n);
    Eigen::VectorXd e = resid;
    for (Index i = b; i < n; ++i) {
        double pred = 0.0;
        for (Index j = 1; j <= b; ++j) pred += phi(i, j - 1) * resid(i - j);
        e(i) = resid(i) - pred;
    }
    return e;
}

Eigen::VectorXd sample_bootstrap(const TvarModel& model, std::uint64_t seed) {
    const Index n = model.length();
    const Index b = model.order_b;
    if (n == 0 || model.phi_path.rows() != n || model.phi_path.cols() != b)
        throw Error(ErrorCode::InvalidArgument, "tvAR model is not fully specified");
    Rng rng(seed);
    Eigen::VectorXd eps(n);
    for (Index i = 0; i < n; ++i) {
        double v = model.sigma_path(i) * rng.normal();
        if (i >= b) {
            for (Index j = 1; j <= b; ++j) v += model.phi_path(i, j - 1) * eps(i - j);
        }
        if (!std::isfinite(v) || std::abs(v) > kDivergence)
            throw Error(ErrorCode::NonFiniteSample, fmt::format("bootstrap recursion diverged at sample {}", i), i);
        eps(i) = v;
    }
    return eps;
}

OrderChoice select_order(const TimeSeries& resid, const std::vector<Index>& b_candidates,
                         const std::vector<Index>& m_candidates) {
    validate_series(resid);
    constexpr Index kFolds = 5;
    OrderChoice best;
    best.score = std::numeric_limits<double>::infinity();
    for (Index b : b_candidates) {
        for (Index m : m_candidates) {
            if (b < 1 || m < 1 || resid.size() <= 10 * b * m) continue;
            const Design d = build_design(resid.samples, b, m);
            const Index rows = d.x.rows();
            double sse = 0.0;
            for (Index f = 0; f < kFolds; ++f) {
                const Index lo = rows * f / kFolds, hi = rows * (f + 1) / kFolds;
                Eigen::MatrixXd xt(rows - (hi - lo), d.x.cols());
                Eigen::VectorXd yt(rows - (hi - lo));
                xt << d.x.topRows(lo), d.x.bottomRows(rows - hi);
                yt << d.y.head(lo), d.y.tail(rows - hi);
                bool reg = false;
                const Eigen::VectorXd beta = solve_ls(xt, yt, reg);
                sse += (d.y.segment(lo, hi - lo) - d.x.middleRows(lo, hi - lo) * beta).squaredNorm();
            }
            const double score = sse / static_cast<double>(rows);
            if (score < best.score) best = {b, m, score};
        }
    }
    if (best.order_b == 0) throw Error(ErrorCode::TooFewSamples, "no candidate (b, m) fits the series length");
    return best;
}

void write_model(std::ostream& os, const TvarModel& model) {
    const bool path = model.basis == TvarBasis::Path;
    const Index m = path ? model.phi_path.rows() : model.basis_order_m;
    os << model.order_b << ',' << m << ',' << (path ? "path" : "legendre") << '\n';
    for (Index j = 0; j < model.order_b; ++j) {
        for (Index k = 0; k < m; ++k) {
            if (k) os << ',';
            os << fmt::format("{:.17g}", path ? model.phi_path(k, j) : model.coeffs(j, k));
        }
        os << '\n';
    }
    for (Index i = 0; i < model.sigma_path.size(); ++i) {
        if (i) os << ',';
        os << fmt::format("{:.17g}", model.sigma_path(i));
    }
    os << '\n';
}

TvarModel read_model(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw Error(ErrorCode::Io, "empty model file");
    std::stringstream header(line);
    std::string b_s, m_s, basis_s;
    std::getline(header, b_s, ',');
    std::getline(header, m_s, ',');
    std::getline(header, basis_s);
    TvarModel model;
    try {
        model.order_b = std::stol(b_s);
        model.basis_order_m = std::stol(m_s);
    } catch (const std::exception&) {
        throw Error(ErrorCode::Io, "malformed model header: " + line);
    }
    if (basis_s == "legendre") model.basis = TvarBasis::Legendre;
    else if (basis_s == "path") model.basis = TvarBasis::Path;
    else throw Error(ErrorCode::Io, "unknown basis '" + basis_s + "'");
    if (model.order_b < 1 || model.basis_order_m < 1) throw Error(ErrorCode::Io, "model order must be positive");

    Eigen::MatrixXd rows(model.order_b, model.basis_order_m);
    for (Index j = 0; j < model.order_b; ++j) {
        if (!std::getline(is, line)) throw Error(ErrorCode::Io, "model file ends inside the coefficient rows");
        const auto v = split_numbers(line);
        if (static_cast<Index>(v.size()) != model.basis_order_m) throw Error(ErrorCode::Io, "coefficient row has wrong length");
        for (Index k = 0; k < model.basis_order_m; ++k) rows(j, k) = v[static_cast<std::size_t>(k)];
    }
    if (!std::getline(is, line)) throw Error(ErrorCode::Io, "model file has no sigma path");
    const auto sig = split_numbers(line);
    model.sigma_path = Eigen::Map<const Eigen::VectorXd>(sig.data(), static_cast<Index>(sig.size()));
    if ((model.sigma_path.array() <= 0.0).any()) throw Error(ErrorCode::Io, "sigma path must be positive");
    model.sigma_floor = model.sigma_path.minCoeff();
    const Index n = model.sigma_path.size();
    if (model.basis == TvarBasis::Legendre) {
        model.coeffs = rows;
        model.phi_path = legendre_phi_path(rows, n);
    } else {
        if (model.basis_order_m != n) throw Error(ErrorCode::Io, "path model length differs from sigma path");
        model.coeffs = rows;
        model.phi_path = rows.transpose();
    }
    return model;
}

}  // namespace sstuq
