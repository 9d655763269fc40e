#ifndef HBLASSO_IO_HPP
#define HBLASSO_IO_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hblasso/diagnostics.hpp"
#include "hblasso/model.hpp"

namespace hblasso {

// 17 significant digits: doubles survive a write/read round trip bit-exactly
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline double parse_cell(const std::string& token, std::size_t row, const std::string& column) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end != begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(value))
        throw std::runtime_error("CSV parse error at row " + std::to_string(row) +
                                 ", column '" + column + "': bad cell '" + token + "'");
    return value;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace detail

// Rectangular numeric CSV with a header row; the named response column
// becomes y, the remaining columns form X in header order.
inline Dataset load_csv(const std::string& path, const std::string& response_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file '" + path + "'");
    auto header = detail::split_csv_line(line);
    for (auto& h : header) {
        while (!h.empty() && (h.back() == '\r' || h.back() == ' ')) h.pop_back();
        while (!h.empty() && h.front() == ' ') h.erase(h.begin());
    }
    int response_index = -1;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == response_column) response_index = static_cast<int>(j);
    if (response_index < 0)
        throw std::runtime_error("response column '" + response_column + "' not found in '" + path + "'");

    std::vector<double> yv;
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error("CSV parse error at row " + std::to_string(lineno) +
                                     ": expected " + std::to_string(header.size()) + " cells, got " +
                                     std::to_string(cells.size()));
        std::vector<double> xr;
        xr.reserve(header.size() - 1);
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const double v = detail::parse_cell(cells[j], lineno, header[j]);
            if (static_cast<int>(j) == response_index)
                yv.push_back(v);
            else
                xr.push_back(v);
        }
        rows.push_back(std::move(xr));
    }
    if (rows.empty()) throw std::runtime_error("no data rows in '" + path + "'");

    Dataset d;
    d.y = Eigen::Map<Eigen::VectorXd>(yv.data(), static_cast<Eigen::Index>(yv.size()));
    d.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    for (std::size_t j = 0; j < header.size(); ++j)
        if (static_cast<int>(j) != response_index) d.column_names.push_back(header[j]);
    d.validate();
    return d;
}

namespace detail {

inline Dataset transform(const Dataset& in, bool scale) {
    const Eigen::Index n = in.n(), p = in.p();
    if (n < 2) throw std::invalid_argument("transform: need n >= 2");
    const Eigen::VectorXd prev_center =
        (in.x_center.size() == p) ? in.x_center : Eigen::VectorXd::Zero(p);
    const Eigen::VectorXd prev_scale =
        (in.x_scale.size() == p) ? in.x_scale : Eigen::VectorXd::Ones(p);
    Dataset out = in;
    out.x_center.resize(p);
    out.x_scale.resize(p);
    const double ymean = in.y.mean();
    double ysd = 1.0;
    if (scale) {
        ysd = std::sqrt((in.y.array() - ymean).square().sum() / (n - 1.0));
        if (!(ysd > 0.0)) throw std::runtime_error("standardize: response has zero variance");
    }
    out.y = (in.y.array() - ymean) / ysd;
    out.y_center = in.y_center + ymean * in.y_scale;
    out.y_scale = in.y_scale * ysd;
    for (Eigen::Index j = 0; j < p; ++j) {
        const double cmean = in.x.col(j).mean();
        double csd = 1.0;
        if (scale) {
            csd = std::sqrt((in.x.col(j).array() - cmean).square().sum() / (n - 1.0));
            if (!(csd > 0.0)) {
                const std::string name = (static_cast<std::size_t>(j) < in.column_names.size())
                                             ? in.column_names[static_cast<std::size_t>(j)]
                                             : ("x" + std::to_string(j + 1));
                throw std::runtime_error("standardize: column '" + name + "' has zero variance");
            }
        }
        out.x.col(j) = (in.x.col(j).array() - cmean) / csd;
        out.x_center[j] = prev_center[j] + cmean * prev_scale[j];
        out.x_scale[j] = prev_scale[j] * csd;
    }
    out.centered = true;
    out.standardized = scale || in.standardized;
    return out;
}

} // namespace detail

// subtract column means (of X) and the mean of y; scales untouched
inline Dataset center(const Dataset& data) { return detail::transform(data, false); }

// mean 0, variance 1 (divisor n-1) for y and every column of X
inline Dataset standardize(const Dataset& data) { return detail::transform(data, true); }

// Map fitted-scale draws (b0, b1..bp columns) to original-scale coefficient
// draws [mu, beta_1 .. beta_p]:
//   beta_orig_j = b_j * y_scale / x_scale_j,
//   mu = y_center + y_scale * b0 - sum_j x_center_j beta_orig_j.
inline Eigen::MatrixXd original_scale_coefficients(const PosteriorSamples& samples,
                                                   const Dataset& data) {
    const Eigen::Index p = data.p();
    const Eigen::Index s = samples.draws.rows();
    const Eigen::Index c0 = samples.column_index("b0");
    Eigen::MatrixXd out(s, p + 1);
    const bool meta = data.x_center.size() == p;
    for (Eigen::Index i = 0; i < s; ++i) {
        double mu = data.y_center + data.y_scale * samples.draws(i, c0);
        for (Eigen::Index j = 0; j < p; ++j) {
            const double bj = samples.draws(i, samples.column_index("b" + std::to_string(j + 1)));
            const double borig = bj * data.y_scale / (meta ? data.x_scale[j] : 1.0);
            out(i, 1 + j) = borig;
            if (meta) mu -= data.x_center[j] * borig;
        }
        out(i, 0) = mu;
    }
    return out;
}

// prediction with original-scale coefficients [mu, beta...] on raw rows
inline double predict_original(const Eigen::VectorXd& coefs, const Eigen::VectorXd& x_raw) {
    return coefs[0] + coefs.tail(coefs.size() - 1).dot(x_raw);
}

inline void write_samples_csv(const std::string& path, const PosteriorSamples& samples) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (std::size_t j = 0; j < samples.names.size(); ++j) {
        if (j) out << ',';
        out << samples.names[j];
    }
    out << '\n';
    for (Eigen::Index i = 0; i < samples.draws.rows(); ++i) {
        for (Eigen::Index j = 0; j < samples.draws.cols(); ++j) {
            if (j) out << ',';
            out << format_g17(samples.draws(i, j));
        }
        out << '\n';
    }
}

inline void write_summary_csv(const std::string& path, const Summary& summary) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "parameter,mean,median,ci_lower,ci_upper,ess\n";
    for (std::size_t j = 0; j < summary.names.size(); ++j) {
        const Eigen::Index i = static_cast<Eigen::Index>(j);
        out << summary.names[j] << ',' << format_g17(summary.mean[i]) << ','
            << format_g17(summary.median[i]) << ',' << format_g17(summary.lower[i]) << ','
            << format_g17(summary.upper[i]) << ',' << format_g17(summary.ess[i]) << '\n';
    }
}

// key=value run manifest; enough to reproduce a run exactly
inline void write_manifest(const std::string& path,
                           const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
}

// FNV-1a over the manifest text, recorded so reruns can be checked cheaply
inline std::string config_hash(const std::vector<std::pair<std::string, std::string>>& entries) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& [k, v] : entries) {
        for (char c : k + "=" + v + "\n") {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace hblasso

#endif
