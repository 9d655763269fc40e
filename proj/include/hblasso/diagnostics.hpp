#ifndef HBLASSO_DIAGNOSTICS_HPP
#define HBLASSO_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hblasso/model.hpp"

namespace hblasso {

// order-statistic quantile with linear interpolation (h = (n-1)p + 1)
inline double quantile_sorted(const std::vector<double>& sorted, double prob) {
    if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
    if (sorted.size() == 1) return sorted[0];
    const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

inline double quantile(Eigen::VectorXd v, double prob) {
    std::vector<double> s(v.data(), v.data() + v.size());
    std::sort(s.begin(), s.end());
    return quantile_sorted(s, prob);
}

// sample autocorrelations rho_0 .. rho_max_lag (rho_0 = 1)
inline Eigen::VectorXd acf(const Eigen::VectorXd& series, int max_lag) {
    const Eigen::Index s = series.size();
    if (s < 50) throw std::invalid_argument("acf: need at least 50 samples");
    max_lag = std::min<int>(max_lag, static_cast<int>(s) - 1);
    const double mean = series.mean();
    const Eigen::VectorXd centered = series.array() - mean;
    const double c0 = centered.squaredNorm() / s;
    Eigen::VectorXd rho(max_lag + 1);
    rho[0] = 1.0;
    for (int k = 1; k <= max_lag; ++k) {
        const double ck = centered.head(s - k).dot(centered.tail(s - k)) / s;
        rho[k] = (c0 > 0.0) ? ck / c0 : 0.0;
    }
    return rho;
}

// ESS = S / (1 + 2 sum rho_k), truncated by Geyer's initial positive
// sequence: paired autocorrelations are summed while the pair sums stay
// positive
inline double ess(const Eigen::VectorXd& series) {
    const Eigen::Index s = series.size();
    if (s < 50) throw std::invalid_argument("ess: need at least 50 samples");
    const double mean = series.mean();
    const Eigen::VectorXd centered = series.array() - mean;
    const double c0 = centered.squaredNorm() / s;
    if (!(c0 > 0.0)) return static_cast<double>(s); // constant series
    auto rho_at = [&](int k) {
        if (k == 0) return 1.0;
        if (k >= s) return 0.0;
        return centered.head(s - k).dot(centered.tail(s - k)) / (s * c0);
    };
    double tau = 0.0;
    for (int m = 0;; ++m) {
        const double pair = rho_at(2 * m) + rho_at(2 * m + 1);
        if (pair <= 0.0 || 2 * m >= s - 1) break;
        tau += 2.0 * pair;
    }
    tau -= 1.0; // rho_0 was counted twice inside the first pair
    tau = std::max(tau, 1e-12);
    return static_cast<double>(s) / tau;
}

struct Summary {
    std::vector<std::string> names;
    Eigen::VectorXd mean;
    Eigen::VectorXd median;
    Eigen::VectorXd lower; // 2.5% quantile
    Eigen::VectorXd upper; // 97.5% quantile
    Eigen::VectorXd ess;
};

inline Summary summarize(const PosteriorSamples& samples) {
    const Eigen::Index s = samples.draws.rows();
    if (s < 10) throw std::invalid_argument("summarize: need at least 10 draws");
    const Eigen::Index k = samples.draws.cols();
    Summary out;
    out.names = samples.names;
    out.mean.resize(k);
    out.median.resize(k);
    out.lower.resize(k);
    out.upper.resize(k);
    out.ess.resize(k);
    std::vector<double> col(static_cast<std::size_t>(s));
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < s; ++i) col[static_cast<std::size_t>(i)] = samples.draws(i, j);
        std::sort(col.begin(), col.end());
        out.mean[j] = samples.draws.col(j).mean();
        out.median[j] = quantile_sorted(col, 0.5);
        out.lower[j] = quantile_sorted(col, 0.025);
        out.upper[j] = quantile_sorted(col, 0.975);
        out.ess[j] = (s >= 50) ? std::min(ess(samples.draws.col(j)), static_cast<double>(s))
                               : static_cast<double>(s);
    }
    return out;
}

struct SimMetrics {
    double rmse = 0.0;
    double al = 0.0; // average credible-interval length
    double cp = 0.0; // coverage probability
};

// RMSE = sqrt((p+1)^{-1} sum_j (est_j - truth_j)^2); AL/CP over the intervals
inline SimMetrics sim_metrics(const Eigen::VectorXd& point_estimates,
                              const Eigen::VectorXd& truth,
                              const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
    const Eigen::Index k = truth.size();
    if (point_estimates.size() != k || lower.size() != k || upper.size() != k)
        throw std::invalid_argument("sim_metrics: dimension mismatch");
    SimMetrics m;
    for (Eigen::Index j = 0; j < k; ++j) {
        const double d = point_estimates[j] - truth[j];
        m.rmse += d * d;
        m.al += upper[j] - lower[j];
        if (truth[j] >= lower[j] && truth[j] <= upper[j]) m.cp += 1.0;
    }
    m.rmse = std::sqrt(m.rmse / static_cast<double>(k));
    m.al /= static_cast<double>(k);
    m.cp /= static_cast<double>(k);
    return m;
}

struct LoocvMetrics {
    double mspe = 0.0;
    double mape = 0.0;
    double mhpe = 0.0;   // Huber prediction error with c = 1.345
    double medspe = 0.0; // median squared error
};

// predictions[i] must be the held-out-i prediction x_i' beta^(-i)
inline LoocvMetrics loocv_metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& predictions) {
    if (y.size() != predictions.size() || y.size() == 0)
        throw std::invalid_argument("loocv_metrics: need one prediction per observation");
    LoocvMetrics m;
    std::vector<double> sq(static_cast<std::size_t>(y.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double r = y[i] - predictions[i];
        sq[static_cast<std::size_t>(i)] = r * r;
        m.mspe += r * r;
        m.mape += std::fabs(r);
        m.mhpe += huber(r, 1.345);
    }
    const double n = static_cast<double>(y.size());
    m.mspe /= n;
    m.mape /= n;
    m.mhpe /= n;
    std::sort(sq.begin(), sq.end());
    m.medspe = quantile_sorted(sq, 0.5);
    return m;
}

} // namespace hblasso

#endif
