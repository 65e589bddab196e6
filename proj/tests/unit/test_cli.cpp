#include "cli.hpp"
#include "sstuq/io.hpp"
#include "sstuq/simgen.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;
using sstuq::cli::run;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "sstuq_test_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
    std::vector<std::string> out;
    std::ifstream is(p);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

std::vector<double> row(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) out.push_back(std::stod(c));
    return out;
}

struct CaptureErr {
    std::ostringstream buf;
    std::streambuf* old = std::cerr.rdbuf(buf.rdbuf());
    ~CaptureErr() { std::cerr.rdbuf(old); }
};

}  // namespace

TEST_CASE("simulate null writes n rows") {
    const fs::path d = fresh_dir("sim_null");
    REQUIRE(run({"--seed", "4", "--out-dir", d.string(), "simulate", "null", "--n", "256"}) == 0);
    const auto ls = lines(d / "simulated.csv");
    REQUIRE(ls.size() == 257);
    CHECK(ls.front() == "time_s,value");
    CHECK(row(ls[1])[0] == 1.0 / 16.0);
}

TEST_CASE("simulate ahm carries ground truth columns") {
    const fs::path d = fresh_dir("sim_ahm");
    REQUIRE(run({"--out-dir", d.string(), "simulate", "ahm", "--n", "1024"}) == 0);
    const auto ls = lines(d / "simulated.csv");
    REQUIRE(ls.size() == 1025);
    CHECK(ls.front() == "time_s,value,clean,am,if,phase");
    const auto r = row(ls[500]);
    CHECK(r[3] >= 2.0);
    CHECK(r[3] <= 4.0);
}

TEST_CASE("seeds select the realization") {
    const fs::path a = fresh_dir("seed_a"), b = fresh_dir("seed_b"), c = fresh_dir("seed_c");
    REQUIRE(run({"--seed", "1", "--out-dir", a.string(), "simulate", "null", "--n", "128"}) == 0);
    REQUIRE(run({"--seed", "1", "--out-dir", b.string(), "simulate", "null", "--n", "128"}) == 0);
    REQUIRE(run({"--seed", "2", "--out-dir", c.string(), "simulate", "null", "--n", "128"}) == 0);
    CHECK(slurp(a / "simulated.csv") == slurp(b / "simulated.csv"));
    CHECK(slurp(a / "simulated.csv") != slurp(c / "simulated.csv"));
}

TEST_CASE("analyze writes its outputs deterministically") {
    const fs::path a = fresh_dir("ana_a"), b = fresh_dir("ana_b");
    for (const fs::path& d : {a, b})
        REQUIRE(run({"--out-dir", d.string(), "--jobs", "1", "analyze", "--simulate", "ahm", "--n", "1024"}) == 0);
    for (const char* f : {"stft.csv", "sst.csv", "ridge.csv", "recon.csv", "run_manifest.txt"}) {
        INFO(f);
        REQUIRE(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    CHECK(!fs::exists(a / "sst.png"));
}

TEST_CASE("exported null series re-ingests exactly and analyzes at a given rate") {
    const fs::path d = fresh_dir("rate");
    REQUIRE(run({"--seed", "6", "--out-dir", d.string(), "simulate", "null", "--n", "512"}) == 0);
    const sstuq::TimeSeries truth = sstuq::gen_null(512, 6);
    const sstuq::TimeSeries back = sstuq::io::read_series_csv(d / "simulated.csv", std::nullopt);
    CHECK((back.samples - truth.samples).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(back.rate_hz - truth.rate_hz) <= 1e-9);
    {
        std::ofstream os(d / "values.csv");
        os.precision(17);
        os << "value\n";
        for (double v : truth.samples) os << v << "\n";
    }
    REQUIRE(run({"--out-dir", d.string(), "analyze", "--input", (d / "values.csv").string(), "--rate", "45.25",
                 "--no-tfr-csv"}) == 0);
    const auto ls = lines(d / "recon.csv");
    REQUIRE(ls.size() == 513);
    for (std::size_t i : {std::size_t{1}, std::size_t{100}, std::size_t{512}})
        CHECK(std::abs(row(ls[i])[0] - static_cast<double>(i - 1) / 45.25) <= 1e-12);
    CHECK(slurp(d / "run_manifest.txt").find("45.25") != std::string::npos);
}

TEST_CASE("missing rate is a configuration error naming the field") {
    const fs::path d = fresh_dir("norate");
    {
        std::ofstream os(d / "in.csv");
        os << "value\n1\n2\n3\n";
    }
    CaptureErr err;
    CHECK(run({"--out-dir", d.string(), "analyze", "--input", (d / "in.csv").string()}) == sstuq::cli::kExitConfig);
    CHECK(err.buf.str().find("rate_hz") != std::string::npos);
}

TEST_CASE("bad options and values are configuration errors") {
    CaptureErr err;
    CHECK(run({"frobnicate"}) == sstuq::cli::kExitConfig);
    CHECK(run({"analyze", "--simulate", "ahm", "--window", "boxcar"}) == sstuq::cli::kExitConfig);
    CHECK(run({"analyze", "--simulate", "null", "--n", "1024", "--c-alpha", "0.5"}) == sstuq::cli::kExitConfig);
    CHECK(run({"bootstrap", "--simulate", "null", "--n", "1024", "--M", "10"}) == sstuq::cli::kExitConfig);
}

TEST_CASE("bootstrap under the null writes a model and bands") {
    const fs::path d = fresh_dir("boot");
    REQUIRE(run({"--out-dir", d.string(), "bootstrap", "--simulate", "null", "--n", "1024", "--assume-null", "--M",
                 "40", "--time-stride", "32", "--coarse-freqs", "16", "--no-tfr-csv"}) == 0);
    CHECK(fs::exists(d / "model.txt"));
    const auto ls = lines(d / "bands.csv");
    REQUIRE(ls.size() > 1);
    CHECK(ls.front() == "time_s,freq_hz,lower,upper");
    const auto r = row(ls[ls.size() / 2]);
    CHECK(r[2] <= r[3]);
    CHECK(!fs::exists(d / "threshold.csv"));
}

TEST_CASE("flags override the config file, which overrides defaults") {
    const fs::path d = fresh_dir("config"), ref = fresh_dir("config_ref");
    {
        std::ofstream os(d / "run.cfg");
        os << "# comment\nseed = 9\nn = 300\n";
    }
    REQUIRE(run({"--config", (d / "run.cfg").string(), "--out-dir", d.string(), "simulate", "null", "--n", "200"}) ==
            0);
    REQUIRE(run({"--seed", "9", "--out-dir", ref.string(), "simulate", "null", "--n", "200"}) == 0);
    CHECK(lines(d / "simulated.csv").size() == 201);
    CHECK(slurp(d / "simulated.csv") == slurp(ref / "simulated.csv"));
}

TEST_CASE("numeric failures exit with code 3") {
    const fs::path d = fresh_dir("numeric");
    {
        std::ofstream os(d / "in.csv");
        os.precision(17);
        os << "value\n";
        for (int i = 0; i < 1024; ++i) os << std::pow(1.9, i / 2.0) << "\n";
    }
    CaptureErr err;
    CHECK(run({"--out-dir", d.string(), "bootstrap", "--input", (d / "in.csv").string(), "--rate", "32",
               "--assume-null", "--M", "40"}) == sstuq::cli::kExitNumeric);
    CHECK(err.buf.str().find("numeric failure") != std::string::npos);
}

TEST_CASE("the installed binary reports exit codes") {
    const fs::path d = fresh_dir("binary");
    const std::string bin = SSTUQ_BIN;
    const std::string ok = bin + " --out-dir " + d.string() + " simulate null --n 64 2>/dev/null";
    const std::string bad = bin + " simulate nothing 2>/dev/null";
    CHECK(WEXITSTATUS(std::system(ok.c_str())) == 0);
    CHECK(WEXITSTATUS(std::system(bad.c_str())) == sstuq::cli::kExitConfig);
    CHECK(fs::exists(d / "simulated.csv"));
}
