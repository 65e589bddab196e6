#pragma once

#include "sstuq/core.hpp"
#include "sstuq/stft.hpp"

#include <limits>
#include <optional>
#include <span>

namespace sstuq {

/// Sentinel for reassignment entries whose |V| is at or below the threshold nu.
inline constexpr double kSuppressed = -std::numeric_limits<double>::infinity();

/// How the complex reassignment value enters the squeezing kernel.
/// Complex: g_alpha(xi - O) with |.|^2 of the complex difference.
/// RealPart (default): only Re O is used. The complex form drops mass as exp(-(Im O)^2/alpha)
/// wherever the IF varies, biasing reconstructed amplitudes low at practical alpha.
enum class OmegaMode { Complex, RealPart };

/// Reassigned frequency per (time, bin). `omega` holds Re O (or kSuppressed),
/// `omega_imag` holds Im O (zero in RealPart mode and where suppressed).
struct ReassignMap {
    Eigen::MatrixXd omega;
    Eigen::MatrixXd omega_imag;
    double nu = 0.0;

    bool suppressed(Index r, Index k) const { return omega(r, k) == kSuppressed; }
};

struct SstParams {
    double alpha = 0.0;
    double nu = 1e-6;
    FreqGrid out_grid;
    OmegaMode omega_mode = OmegaMode::RealPart;
};

/// O = eta - V_dh / (2 pi i V_h), set to kSuppressed where |V_h| <= nu.
ReassignMap reassign(const Tfr& v_h, const Tfr& v_dh, double nu, OmegaMode mode = OmegaMode::RealPart);

/// S(t_l, xi_j) = (C/d) sum_k V_h(t_l, eta_k) g_alpha(xi_j - O(l, k)),
/// g_alpha(z) = exp(-|z|^2/alpha) / sqrt(pi alpha); C/d from the analysis grid.
Tfr synchrosqueeze(const Tfr& v_h, const ReassignMap& map, const SstParams& p, int jobs = 1);

/// Kernel spanning about eight output bins: alpha = (4 * spacing)^2.
double default_alpha(const FreqGrid& out_grid);

/// alpha = (delta_r / c_alpha)^2 with c_alpha > 1.
double alpha_from_band(double delta_r_hz, double c_alpha);

/// Inverse of alpha_from_band: delta_r = c_alpha * sqrt(alpha).
double band_from_alpha(double alpha, double c_alpha);

/// Reconstruction half-width used when none is given: max(3 bins, c_alpha * sqrt(alpha)),
/// so the band holds the squeezing kernel's mass.
double default_band_halfwidth(const SstParams& p, double c_alpha = 2.0);

/// Window, analysis grid and SST parameters bundled for repeated use (analysis and
/// every bootstrap replicate must share them).
class SstPipeline {
public:
    SstPipeline(const WindowPair& win, const FreqGrid& grid, const SstParams& params, double rate_hz);

    struct Result {
        Tfr v_h;
        Tfr v_dh;
        ReassignMap map;
        Tfr sst;
    };

    /// Full run on the requested rows (all rows if empty). `out_grid` overrides params().out_grid.
    Result run(const TimeSeries& ts, std::span<const Index> rows = {}, int jobs = 1,
               const std::optional<FreqGrid>& out_grid = std::nullopt) const;
    Tfr sst(const TimeSeries& ts, std::span<const Index> rows = {}, int jobs = 1,
            const std::optional<FreqGrid>& out_grid = std::nullopt) const;

    const WindowPair& window() const { return plan_.window(); }
    const FreqGrid& grid() const { return plan_.grid(); }
    const SstParams& params() const { return params_; }
    const StftPlan& plan() const { return plan_; }
    double rate_hz() const { return plan_.rate_hz(); }

private:
    StftPlan plan_;
    SstParams params_;
};

}  // namespace sstuq
