#include "cli.hpp"

#include "sstuq/io.hpp"
#include "sstuq/parallel.hpp"
#include "sstuq/recon.hpp"
#include "sstuq/simgen.hpp"
#include "sstuq/sst.hpp"
#include "sstuq/stft.hpp"
#include "sstuq/tvar.hpp"
#include "sstuq/uq.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>

namespace sstuq::cli {

namespace fs = std::filesystem;

namespace {

/// Input, window, grids, SST, ridge, bootstrap parameters and emit flags for one run.
struct RunConfig {
    // global
    std::uint64_t seed = 1;
    int jobs = 0;
    std::string out_dir = ".";
    std::string config_path;
    // input
    std::string input;
    std::string simulate;  // "", "null", "ahm"
    Index n = 2048;
    double noise_sigma = 1.0;
    std::optional<double> rate_hz;
    // window
    std::string window = "bump";
    double beta = 1.0;
    double gauss_std = 0.25;
    // grids and SST
    std::optional<double> c_max;
    std::optional<Index> d;
    std::optional<double> alpha;
    double nu = 1e-6;
    std::optional<double> nu_quantile;
    std::string omega = "real";
    // ridge / reconstruction
    double lambda = 1.0;
    std::optional<double> delta_r;
    double c_alpha = 2.0;
    Index jump_cap = 2;
    // bootstrap
    bool assume_null = false;
    Index order_b = 2;
    Index basis_m = 4;
    Index half_window = 20;
    Index n_boot = 1000;
    double alpha_level = 0.05;
    Index time_stride = 8;
    Index coarse_freqs = 64;
    // emit
    bool tfr_csv = true;
    bool png = false;
    std::string value_map = "log1p";
    std::string colormap = "heat";
    bool bands = true;
    bool threshold = false;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StageError : std::runtime_error {
    StageError(const std::string& stage, const std::string& what) : std::runtime_error(stage + ": " + what) {}
};

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::Io) throw ConfigError(e.what());
        throw StageError(name, e.what());
    }
}

std::string opt_str(const std::optional<double>& v) { return v ? io::format_double(*v) : "auto"; }

void add_input_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--input", cfg.input, "CSV input (time_s,value or value)");
    sub->add_option("--simulate", cfg.simulate, "Generate the input instead: null | ahm")
        ->check(CLI::IsMember({"null", "ahm"}));
    sub->add_option("--n", cfg.n, "Length of simulated input")->check(CLI::Range(64, 1 << 24));
    sub->add_option("--noise-sigma", cfg.noise_sigma, "Scale of the null noise added to a simulated AHM signal");
    sub->add_option("--rate", cfg.rate_hz, "Sampling rate in Hz (required for single-column CSV)");
}

void add_analysis_options(CLI::App* sub, RunConfig& cfg) {
    add_input_options(sub, cfg);
    sub->add_option("--window", cfg.window, "Window family: bump | gauss")->check(CLI::IsMember({"bump", "gauss"}));
    sub->add_option("--beta", cfg.beta, "Window half-support in seconds");
    sub->add_option("--gauss-std", cfg.gauss_std, "Relative std of the truncated Gaussian window");
    sub->add_option("--c-max", cfg.c_max, "Upper end of the analysis grid in Hz (default rate/2)");
    sub->add_option("--d", cfg.d, "Number of analysis bins (default floor(n/3))");
    sub->add_option("--alpha", cfg.alpha, "Squeezing kernel parameter (default (4*bin)^2)");
    sub->add_option("--nu", cfg.nu, "Reassignment threshold on |V|");
    sub->add_option("--nu-quantile", cfg.nu_quantile, "Use the data-driven nu at this quantile instead of --nu");
    sub->add_option("--omega", cfg.omega, "Reassignment kernel argument: complex | real")
        ->check(CLI::IsMember({"complex", "real"}));
    sub->add_option("--lambda", cfg.lambda, "Ridge jump penalty per Hz^2");
    sub->add_option("--delta-r", cfg.delta_r, "Reconstruction band half-width in Hz");
    sub->add_option("--c-alpha", cfg.c_alpha, "alpha = (delta_r / c_alpha)^2 when --delta-r is set; otherwise delta_r = max(3 bins, c_alpha * sqrt(alpha))");
    sub->add_option("--jump-cap", cfg.jump_cap, "Maximum ridge jump in bins per sample");
    sub->add_flag("--tfr-csv,!--no-tfr-csv", cfg.tfr_csv, "Write STFT/SST long-format CSVs");
    sub->add_flag("--png,!--no-png", cfg.png, "Write magnitude rasters");
    sub->add_option("--value-map", cfg.value_map, "Raster value map: linear | log1p")
        ->check(CLI::IsMember({"linear", "log1p"}));
    sub->add_option("--colormap", cfg.colormap, "Raster colours: gray | heat")->check(CLI::IsMember({"gray", "heat"}));
}

void add_bootstrap_options(CLI::App* sub, RunConfig& cfg) {
    add_analysis_options(sub, cfg);
    sub->add_flag("--assume-null", cfg.assume_null, "Skip reconstruction and bootstrap the raw series");
    sub->add_option("--b", cfg.order_b, "tvAR order")->check(CLI::PositiveNumber);
    sub->add_option("--m", cfg.basis_m, "Legendre basis size")->check(CLI::PositiveNumber);
    sub->add_option("--I", cfg.half_window, "Half window of the moving innovation std")->check(CLI::PositiveNumber);
    sub->add_option("--M", cfg.n_boot, "Bootstrap replicates");
    sub->add_option("--alpha-level", cfg.alpha_level, "Two-sided level of the bands / one-sided level of the threshold");
    sub->add_option("--time-stride", cfg.time_stride, "Coarse grid: every k-th sample")->check(CLI::PositiveNumber);
    sub->add_option("--coarse-freqs", cfg.coarse_freqs, "Coarse grid: number of frequencies")->check(CLI::PositiveNumber);
}

/// key=value lines; '#' starts a comment. Keys are long option names without dashes.
std::vector<std::string> config_args(const std::string& path, const std::vector<std::string>& given) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open '" + path + "'");
    std::set<std::string> present;
    for (const auto& a : given) {
        if (a.rfind("--", 0) == 0) present.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    }
    std::vector<std::string> out;
    std::string line;
    while (std::getline(is, line)) {
        line = line.substr(0, line.find('#'));
        const auto eq = line.find('=');
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos) throw ConfigError("config: expected key=value, got '" + trim(line) + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (present.count(key) || present.count("no-" + key)) continue;
        if (value == "true") {
            out.push_back("--" + key);
        } else if (value == "false") {
            out.push_back("--no-" + key);
        } else {
            out.push_back("--" + key);
            out.push_back(value);
        }
    }
    return out;
}

struct Input {
    TimeSeries series;
    std::optional<AhmTruth> truth;
};

Input load_input(const RunConfig& cfg) {
    Input in;
    if (!cfg.input.empty() && !cfg.simulate.empty()) throw ConfigError("input: give either --input or --simulate, not both");
    if (!cfg.input.empty()) {
        if (!fs::exists(cfg.input)) throw ConfigError("input: file '" + cfg.input + "' does not exist");
        std::ifstream probe(cfg.input);
        std::string header;
        std::getline(probe, header);
        if (header.find(',') == std::string::npos && !cfg.rate_hz)
            throw ConfigError("rate_hz: --rate is required for single-column CSV input");
        try {
            in.series = io::read_series_csv(cfg.input, cfg.rate_hz);
        } catch (const Error& e) {
            throw ConfigError(std::string("input: ") + e.what());
        }
        return in;
    }
    if (cfg.simulate == "null") {
        in.series = stage("simulate", [&] { return gen_null(cfg.n, cfg.seed); });
        return in;
    }
    if (cfg.simulate == "ahm") {
        if (cfg.n < 1024) throw ConfigError("n: the AHM generator needs --n >= 1024");
        in.truth = gen_ahm(cfg.n, cfg.seed);
        in.series = in.truth->f;
        if (cfg.noise_sigma != 0.0) in.series.samples += cfg.noise_sigma * gen_null(cfg.n, cfg.seed + 1).samples;
        return in;
    }
    throw ConfigError("input: one of --input or --simulate is required");
}

struct Analysis {
    WindowPair win;
    std::optional<SstPipeline> pipeline;
    SstPipeline::Result result;
    Ridge ridge;
    ComponentEstimate component;
};

SstPipeline make_pipeline(const RunConfig& cfg, const TimeSeries& ts, WindowPair& win) {
    WindowFamily fam;
    fam.kind = cfg.window == "bump" ? WindowKind::Bump : WindowKind::TruncGauss;
    fam.beta_s = cfg.beta;
    fam.gauss_rel_std = cfg.gauss_std;
    try {
        win = make_window(fam, ts.rate_hz);
    } catch (const Error& e) {
        throw ConfigError(std::string("beta: ") + e.what());
    }
    const double c_max = cfg.c_max.value_or(ts.rate_hz / 2.0);
    const Index d = cfg.d.value_or(std::max<Index>(1, ts.size() / 3));
    FreqGrid grid;
    try {
        grid = uniform_grid(c_max, d);
    } catch (const Error& e) {
        throw ConfigError(std::string("c_max/d: ") + e.what());
    }
    if (c_max > ts.rate_hz / 2.0 * (1.0 + 1e-12)) throw ConfigError("c_max: exceeds rate/2");
    SstParams p;
    p.out_grid = grid;
    p.nu = cfg.nu;
    p.omega_mode = cfg.omega == "complex" ? OmegaMode::Complex : OmegaMode::RealPart;
    if (cfg.alpha) {
        if (!(*cfg.alpha > 0.0)) throw ConfigError("alpha: must be positive");
        p.alpha = *cfg.alpha;
    } else if (cfg.delta_r) {
        if (!(*cfg.delta_r > 0.0) || !(cfg.c_alpha > 1.0)) throw ConfigError("delta_r/c_alpha: need delta_r > 0, c_alpha > 1");
        p.alpha = alpha_from_band(*cfg.delta_r, cfg.c_alpha);
    }
    if (!(p.nu >= 0.0)) throw ConfigError("nu: must be nonnegative");
    if (!(cfg.c_alpha > 1.0)) throw ConfigError("c_alpha: must exceed 1");
    if (cfg.nu_quantile && !(*cfg.nu_quantile > 0.0 && *cfg.nu_quantile < 1.0))
        throw ConfigError("nu_quantile: must lie in (0, 1)");
    return SstPipeline(win, grid, p, ts.rate_hz);
}

Analysis analyze(const RunConfig& cfg, const TimeSeries& ts, int jobs) {
    Analysis a;
    a.pipeline.emplace(make_pipeline(cfg, ts, a.win));
    if (cfg.nu_quantile) {
        const Tfr v = stage("stft", [&] { return a.pipeline->plan().apply(ts, Taper::Window, {}, jobs); });
        const double nu = stage("nu", [&] { return data_driven_nu(v, a.win, ts.rate_hz, *cfg.nu_quantile); });
        SstParams p = a.pipeline->params();
        p.nu = nu;
        a.pipeline.emplace(a.win, a.pipeline->grid(), p, ts.rate_hz);
    }
    a.result = stage("sst", [&] { return a.pipeline->run(ts, {}, jobs); });
    RidgeOptions ro;
    ro.lambda = cfg.lambda;
    ro.delta_r_hz = cfg.delta_r ? *cfg.delta_r : default_band_halfwidth(a.pipeline->params(), cfg.c_alpha);
    ro.jump_cap_bins = cfg.jump_cap;
    if (!(ro.lambda >= 0.0)) throw ConfigError("lambda: must be nonnegative");
    if (ro.jump_cap_bins < 0) throw ConfigError("jump_cap: must be nonnegative");
    a.ridge = stage("ridge", [&] { return extract_ridge(a.result.sst, ro); });
    a.component = stage("reconstruct", [&] { return reconstruct(a.result.sst, a.ridge, a.win, ts.size()); });
    return a;
}

io::ValueMap value_map(const RunConfig& cfg) { return cfg.value_map == "linear" ? io::ValueMap::Linear : io::ValueMap::Log1p; }
io::Colormap colormap(const RunConfig& cfg) { return cfg.colormap == "gray" ? io::Colormap::Gray : io::Colormap::Heat; }

void write_manifest(const RunConfig& cfg, const std::string& command, const fs::path& dir, const TimeSeries& ts,
                    const std::optional<SstPipeline>& pipeline) {
    std::ofstream os(dir / "run_manifest.txt");
    os << "command=" << command << '\n';
    os << "seed=" << cfg.seed << '\n';
    os << "input=" << (cfg.input.empty() ? "-" : cfg.input) << '\n';
    os << "simulate=" << (cfg.simulate.empty() ? "-" : cfg.simulate) << '\n';
    os << "n=" << ts.size() << '\n';
    os << "noise-sigma=" << io::format_double(cfg.noise_sigma) << '\n';
    os << "rate=" << io::format_double(ts.rate_hz) << '\n';
    os << "window=" << cfg.window << '\n';
    os << "beta=" << io::format_double(cfg.beta) << '\n';
    os << "gauss-std=" << io::format_double(cfg.gauss_std) << '\n';
    os << "c-max=" << opt_str(cfg.c_max) << '\n';
    os << "d=" << (cfg.d ? std::to_string(*cfg.d) : "auto") << '\n';
    os << "alpha=" << opt_str(cfg.alpha) << '\n';
    os << "nu=" << io::format_double(cfg.nu) << '\n';
    os << "nu-quantile=" << opt_str(cfg.nu_quantile) << '\n';
    os << "omega=" << cfg.omega << '\n';
    os << "lambda=" << io::format_double(cfg.lambda) << '\n';
    os << "delta-r=" << opt_str(cfg.delta_r) << '\n';
    os << "c-alpha=" << io::format_double(cfg.c_alpha) << '\n';
    os << "jump-cap=" << cfg.jump_cap << '\n';
    os << "assume-null=" << (cfg.assume_null ? "true" : "false") << '\n';
    os << "b=" << cfg.order_b << "\nm=" << cfg.basis_m << "\nI=" << cfg.half_window << "\nM=" << cfg.n_boot << '\n';
    os << "alpha-level=" << io::format_double(cfg.alpha_level) << '\n';
    os << "time-stride=" << cfg.time_stride << "\ncoarse-freqs=" << cfg.coarse_freqs << '\n';
    if (pipeline) {
        os << "# resolved\n";
        os << "resolved.m=" << pipeline->window().m << '\n';
        os << "resolved.h0=" << io::format_double(pipeline->window().h_at_zero) << '\n';
        os << "resolved.c-max=" << io::format_double(pipeline->grid().c_max_hz) << '\n';
        os << "resolved.d=" << pipeline->grid().size() << '\n';
        os << "resolved.alpha=" << io::format_double(pipeline->params().alpha) << '\n';
        os << "resolved.nu=" << io::format_double(pipeline->params().nu) << '\n';
        os << "resolved.delta-r=" << io::format_double(cfg.delta_r.value_or(default_band_halfwidth(pipeline->params(), cfg.c_alpha)))
           << '\n';
    }
}

fs::path prepare_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("out_dir: cannot create '" + cfg.out_dir + "'");
    return dir;
}

int cmd_simulate(const RunConfig& cfg, const std::string& kind) {
    const fs::path dir = prepare_out_dir(cfg);
    const fs::path out = dir / "simulated.csv";
    if (kind == "null") {
        const TimeSeries ts = stage("simulate", [&] { return gen_null(cfg.n, cfg.seed); });
        io::write_series_csv(out, ts);
    } else {
        if (cfg.n < 1024) throw ConfigError("n: the AHM generator needs --n >= 1024");
        const AhmTruth truth = gen_ahm(cfg.n, cfg.seed);
        TimeSeries noisy = truth.f;
        if (cfg.noise_sigma != 0.0) noisy.samples += cfg.noise_sigma * gen_null(cfg.n, cfg.seed + 1).samples;
        io::write_series_csv(out, noisy,
                             {{"clean", truth.f.samples}, {"am", truth.am}, {"if", truth.inst_freq}, {"phase", truth.phase}});
    }
    return kExitOk;
}

void write_analysis(const RunConfig& cfg, const fs::path& dir, const TimeSeries& ts, const Analysis& a) {
    if (cfg.tfr_csv) {
        io::write_tfr_csv(dir / "stft.csv", a.result.v_h);
        io::write_tfr_csv(dir / "sst.csv", a.result.sst);
    }
    io::write_ridge_csv(dir / "ridge.csv", a.result.sst.time_axis, a.ridge);
    io::write_component_csv(dir / "recon.csv", a.component);
    if (cfg.png) {
        io::write_raster_png(dir / "stft.png", a.result.v_h.values.cwiseAbs(), value_map(cfg), colormap(cfg));
        io::write_raster_png(dir / "sst.png", a.result.sst.values.cwiseAbs(), value_map(cfg), colormap(cfg), &a.ridge.bins);
    }
    (void)ts;
}

int cmd_analyze(const RunConfig& cfg, int jobs) {
    const Input in = load_input(cfg);
    const fs::path dir = prepare_out_dir(cfg);
    const Analysis a = analyze(cfg, in.series, jobs);
    write_analysis(cfg, dir, in.series, a);
    write_manifest(cfg, "analyze", dir, in.series, a.pipeline);
    return kExitOk;
}

struct NoiseModelRun {
    Analysis analysis;
    std::optional<Eigen::VectorXd> signal;
    TvarModel model;
    BandSpec spec;
};

NoiseModelRun fit_noise(const RunConfig& cfg, const TimeSeries& ts, int jobs) {
    if (cfg.n_boot < 40) throw ConfigError("M: at least 40 bootstrap replicates are required");
    if (!(cfg.alpha_level > 0.0 && cfg.alpha_level < 1.0)) throw ConfigError("alpha_level: must lie in (0, 1)");
    NoiseModelRun run;
    run.analysis = analyze(cfg, ts, jobs);
    TimeSeries resid = ts;
    if (!cfg.assume_null) {
        run.signal = run.analysis.component.real_part();
        resid.samples -= *run.signal;
    }
    TvarFitOptions fo;
    fo.order_b = cfg.order_b;
    fo.basis_order_m = cfg.basis_m;
    fo.half_window = cfg.half_window;
    run.model = stage("fit_tvar", [&] { return fit_tvar(resid, fo); });
    run.spec = default_band_spec(ts.size(), run.analysis.pipeline->params().out_grid.size(), cfg.time_stride,
                                 cfg.coarse_freqs, cfg.alpha_level, cfg.n_boot);
    if (run.spec.grid_times.size() < 4 || run.spec.grid_freqs.size() < 4)
        throw ConfigError("time_stride/coarse_freqs: the coarse grid needs at least 4 nodes per axis");
    return run;
}

int cmd_bootstrap(const RunConfig& cfg, int jobs) {
    const Input in = load_input(cfg);
    const fs::path dir = prepare_out_dir(cfg);
    NoiseModelRun run = fit_noise(cfg, in.series, jobs);
    const SstPipeline& pipe = *run.analysis.pipeline;
    const Eigen::VectorXd time_axis = in.series.time_axis();
    io::write_model_file(dir / "model.txt", run.model);
    write_analysis(cfg, dir, in.series, run.analysis);
    if (cfg.bands) {
        const Bands b = stage("bootstrap_bands", [&] {
            return bootstrap_bands(run.signal, run.model, run.spec, pipe, cfg.seed, jobs);
        });
        io::write_bands_csv(dir / "bands.csv", time_axis, pipe.params().out_grid, b);
        if (cfg.png) {
            io::write_raster_png(dir / "bands_lower.png", b.lower, value_map(cfg), colormap(cfg));
            io::write_raster_png(dir / "bands_upper.png", b.upper, value_map(cfg), colormap(cfg));
        }
    }
    if (cfg.threshold) {
        const ThresholdSurface t = stage("noise_threshold", [&] { return noise_threshold(run.model, run.spec, pipe, cfg.seed, jobs); });
        io::write_threshold_csv(dir / "threshold.csv", time_axis, pipe.params().out_grid, t.full);
    }
    write_manifest(cfg, "bootstrap", dir, in.series, run.analysis.pipeline);
    return kExitOk;
}

int cmd_threshold(const RunConfig& cfg, int jobs) {
    const Input in = load_input(cfg);
    const fs::path dir = prepare_out_dir(cfg);
    NoiseModelRun run = fit_noise(cfg, in.series, jobs);
    const SstPipeline& pipe = *run.analysis.pipeline;
    const Eigen::VectorXd time_axis = in.series.time_axis();
    io::write_model_file(dir / "model.txt", run.model);
    const ThresholdSurface t = stage("noise_threshold", [&] { return noise_threshold(run.model, run.spec, pipe, cfg.seed, jobs); });
    const Tfr thresholded = stage("apply_threshold", [&] { return apply_threshold(run.analysis.result.sst, t.full); });
    io::write_threshold_csv(dir / "threshold.csv", time_axis, pipe.params().out_grid, t.full);
    if (cfg.tfr_csv) io::write_tfr_csv(dir / "sst_thresholded.csv", thresholded);
    if (cfg.png) {
        io::write_raster_png(dir / "threshold.png", t.full, value_map(cfg), colormap(cfg));
        io::write_raster_png(dir / "sst_thresholded.png", thresholded.values.cwiseAbs(), value_map(cfg), colormap(cfg));
    }
    write_manifest(cfg, "threshold", dir, in.series, run.analysis.pipeline);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args_in) {
    RunConfig cfg;
    std::string sim_kind;
    CLI::App app{"Synchrosqueezing, reconstruction and bootstrap uncertainty bands for time-frequency analysis", "sstuq"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--seed", cfg.seed, "Seed for simulation and bootstrap streams");
    app.add_option("--jobs", cfg.jobs, "Worker threads (0 = all cores); results do not depend on it");
    app.add_option("--out-dir", cfg.out_dir, "Directory for outputs");
    app.add_option("--config", cfg.config_path, "key=value file; command-line flags take precedence");

    CLI::App* sim = app.add_subcommand("simulate", "Write a simulated series with ground truth to CSV");
    sim->add_option("kind", sim_kind, "null | ahm")->required()->check(CLI::IsMember({"null", "ahm"}));
    sim->add_option("--n", cfg.n, "Number of samples")->check(CLI::Range(64, 1 << 24));
    sim->add_option("--noise-sigma", cfg.noise_sigma, "Scale of null noise added to the AHM signal");

    CLI::App* ana = app.add_subcommand("analyze", "STFT, SST, ridge and reconstruction");
    add_analysis_options(ana, cfg);

    CLI::App* boot = app.add_subcommand("bootstrap", "tvAR bootstrap percentile bands of |SST|");
    add_bootstrap_options(boot, cfg);
    boot->add_flag("--bands,!--no-bands", cfg.bands, "Write percentile bands");
    boot->add_flag("--threshold", cfg.threshold, "Also write the noise threshold");

    CLI::App* thr = app.add_subcommand("threshold", "Bootstrap noise threshold and thresholded SST");
    add_bootstrap_options(thr, cfg);

    std::vector<std::string> args = args_in;
    try {
        // --config is read before parsing so its values sit below explicit flags.
        for (std::size_t i = 0; i + 1 < args.size(); ++i) {
            if (args[i] == "--config") {
                const auto extra = config_args(args[i + 1], args);
                args.insert(args.end(), extra.begin(), extra.end());
                break;
            }
            if (args[i].rfind("--config=", 0) == 0) {
                const auto extra = config_args(args[i].substr(9), args);
                args.insert(args.end(), extra.begin(), extra.end());
                break;
            }
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    const int jobs = cfg.jobs <= 0 ? default_jobs() : cfg.jobs;
    try {
        if (*sim) return cmd_simulate(cfg, sim_kind);
        if (*ana) return cmd_analyze(cfg, jobs);
        if (*boot) return cmd_bootstrap(cfg, jobs);
        if (*thr) return cmd_threshold(cfg, jobs);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const StageError& e) {
        std::cerr << "numeric failure in " << e.what() << '\n';
        return kExitNumeric;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitConfig;
}

}  // namespace sstuq::cli
