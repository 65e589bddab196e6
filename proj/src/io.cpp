#include "sstuq/io.hpp"

#include <fmt/format.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace sstuq::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    return out;
}

double parse(const std::string& cell, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::Io, fmt::format("line {}: cannot parse '{}' as a number", line_no, cell));
    }
}

void flush(const std::filesystem::path& path, const fmt::memory_buffer& buf) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!os) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

void append(fmt::memory_buffer& buf, double v) { fmt::format_to(std::back_inserter(buf), "{:.17g}", v); }

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

TimeSeries read_series_csv(const std::filesystem::path& path, std::optional<double> rate_hz) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::string line;
    if (!std::getline(is, line)) throw Error(ErrorCode::Io, path.string() + " is empty");
    const auto header = split(line);
    const bool two_col = header.size() >= 2;
    if (!two_col && !rate_hz) throw Error(ErrorCode::InvalidArgument, "rate_hz is required for single-column input");

    std::vector<double> times, values;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw Error(ErrorCode::Io, fmt::format("line {}: expected {} columns", line_no, header.size()));
        if (two_col) {
            times.push_back(parse(cells[0], line_no));
            values.push_back(parse(cells[1], line_no));
        } else {
            values.push_back(parse(cells[0], line_no));
        }
    }

    TimeSeries ts;
    ts.samples = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Index>(values.size()));
    if (two_col && !times.empty()) {
        ts.start_time_s = times.front();
        if (rate_hz) {
            ts.rate_hz = *rate_hz;
        } else {
            if (times.size() < 2) throw Error(ErrorCode::InvalidArgument, "rate_hz cannot be inferred from one sample");
            ts.rate_hz = static_cast<double>(times.size() - 1) / (times.back() - times.front());
        }
    } else {
        ts.rate_hz = rate_hz.value_or(0.0);
    }
    validate_series(ts);
    return ts;
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& ts,
                      const std::vector<std::pair<std::string, Eigen::VectorXd>>& extra) {
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "time_s,value");
    for (const auto& [name, col] : extra) {
        if (col.size() != ts.size()) throw Error(ErrorCode::DimMismatch, "extra column '" + name + "' has wrong length");
        fmt::format_to(std::back_inserter(buf), ",{}", name);
    }
    buf.push_back('\n');
    for (Index i = 0; i < ts.size(); ++i) {
        append(buf, ts.time(i));
        buf.push_back(',');
        append(buf, ts.samples(i));
        for (const auto& extra_col : extra) {
            buf.push_back(',');
            append(buf, extra_col.second(i));
        }
        buf.push_back('\n');
    }
    flush(path, buf);
}

void write_tfr_csv(const std::filesystem::path& path, const Tfr& tfr) {
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "time_s,freq_hz,re,im\n");
    for (Index r = 0; r < tfr.rows(); ++r) {
        for (Index k = 0; k < tfr.cols(); ++k) {
            append(buf, tfr.time_axis(r));
            buf.push_back(',');
            append(buf, tfr.freq_axis.freqs_hz(k));
            buf.push_back(',');
            append(buf, tfr.values(r, k).real());
            buf.push_back(',');
            append(buf, tfr.values(r, k).imag());
            buf.push_back('\n');
        }
    }
    flush(path, buf);
}

void write_component_csv(const std::filesystem::path& path, const ComponentEstimate& est) {
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "time_s,re,im,amplitude,phase_cycles\n");
    for (Index l = 0; l < est.complex_f.size(); ++l) {
        append(buf, est.time_axis(l));
        for (double v : {est.complex_f(l).real(), est.complex_f(l).imag(), est.amplitude(l), est.phase_cycles(l)}) {
            buf.push_back(',');
            append(buf, v);
        }
        buf.push_back('\n');
    }
    flush(path, buf);
}

void write_ridge_csv(const std::filesystem::path& path, const Eigen::VectorXd& time_axis, const Ridge& ridge) {
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "time_s,if_hz,quality\n");
    for (Index l = 0; l < ridge.if_hz.size(); ++l) {
        append(buf, time_axis(l));
        buf.push_back(',');
        append(buf, ridge.if_hz(l));
        buf.push_back(',');
        append(buf, ridge.quality(l));
        buf.push_back('\n');
    }
    flush(path, buf);
}

void write_bands_csv(const std::filesystem::path& path, const Eigen::VectorXd& time_axis, const FreqGrid& grid,
                     const Bands& bands) {
    if (bands.lower.rows() != time_axis.size() || bands.lower.cols() != grid.size())
        throw Error(ErrorCode::DimMismatch, "bands do not match the axes");
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "time_s,freq_hz,lower,upper\n");
    for (Index r = 0; r < bands.lower.rows(); ++r) {
        for (Index k = 0; k < bands.lower.cols(); ++k) {
            append(buf, time_axis(r));
            buf.push_back(',');
            append(buf, grid.freqs_hz(k));
            buf.push_back(',');
            append(buf, bands.lower(r, k));
            buf.push_back(',');
            append(buf, bands.upper(r, k));
            buf.push_back('\n');
        }
    }
    flush(path, buf);
}

void write_threshold_csv(const std::filesystem::path& path, const Eigen::VectorXd& time_axis, const FreqGrid& grid,
                         const Eigen::MatrixXd& threshold) {
    if (threshold.rows() != time_axis.size() || threshold.cols() != grid.size())
        throw Error(ErrorCode::DimMismatch, "threshold does not match the axes");
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "time_s,freq_hz,threshold\n");
    for (Index r = 0; r < threshold.rows(); ++r) {
        for (Index k = 0; k < threshold.cols(); ++k) {
            append(buf, time_axis(r));
            buf.push_back(',');
            append(buf, grid.freqs_hz(k));
            buf.push_back(',');
            append(buf, threshold(r, k));
            buf.push_back('\n');
        }
    }
    flush(path, buf);
}

void write_model_file(const std::filesystem::path& path, const TvarModel& model) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    write_model(os, model);
}

TvarModel read_model_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return read_model(is);
}

std::array<unsigned char, 3> colour(double v, Colormap cmap) {
    v = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
    auto byte = [](double x) { return static_cast<unsigned char>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0)); };
    if (cmap == Colormap::Gray) return {byte(v), byte(v), byte(v)};
    const double r = 3.0 * v, g = 3.0 * v - 1.0, b = 3.0 * v - 2.0;
    return {byte(r), byte(g), byte(b)};
}

void write_raster_png(const std::filesystem::path& path, const Eigen::MatrixXd& magnitude, ValueMap map, Colormap cmap,
                      const std::vector<Index>* ridge_bins) {
    const Index times = magnitude.rows();
    const Index freqs = magnitude.cols();
    if (times == 0 || freqs == 0) throw Error(ErrorCode::EmptyTfr, "cannot rasterize an empty TFR");
    Eigen::MatrixXd v = magnitude.cwiseAbs();
    if (map == ValueMap::Log1p) v = v.array().log1p().matrix();
    const double vmax = v.maxCoeff();
    if (vmax > 0.0) v /= vmax;

    const auto width = static_cast<png_uint_32>(times);
    const auto height = static_cast<png_uint_32>(freqs);
    std::vector<unsigned char> pixels(static_cast<std::size_t>(width) * height * 3);
    for (Index k = 0; k < freqs; ++k) {
        const std::size_t y = static_cast<std::size_t>(freqs - 1 - k);  // low frequency at the bottom
        for (Index t = 0; t < times; ++t) {
            const auto c = colour(v(t, k), cmap);
            std::copy(c.begin(), c.end(), pixels.begin() + static_cast<std::ptrdiff_t>((y * width + static_cast<std::size_t>(t)) * 3));
        }
    }
    if (ridge_bins) {
        for (Index t = 0; t < std::min<Index>(times, static_cast<Index>(ridge_bins->size())); ++t) {
            const Index k = (*ridge_bins)[static_cast<std::size_t>(t)];
            if (k < 0 || k >= freqs) continue;
            const std::size_t y = static_cast<std::size_t>(freqs - 1 - k);
            unsigned char* px = pixels.data() + (y * width + static_cast<std::size_t>(t)) * 3;
            px[0] = 0;
            px[1] = 255;
            px[2] = 0;
        }
    }

    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
    if (!fp) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::Io, "libpng initialisation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::Io, "libpng failed writing " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (png_uint_32 y = 0; y < height; ++y) png_write_row(png, pixels.data() + static_cast<std::size_t>(y) * width * 3);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace sstuq::io
