#ifndef HBLASSO_MODEL_HPP
#define HBLASSO_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hblasso {

// Regression data plus the centering/scaling applied to it. y and x hold the
// values the samplers actually see; centers/scales let coefficients be mapped
// back to the raw data scale.
struct Dataset {
    Eigen::VectorXd y;
    Eigen::MatrixXd x;
    bool centered = false;
    bool standardized = false;
    double y_center = 0.0;
    double y_scale = 1.0;
    Eigen::VectorXd x_center; // empty when untouched
    Eigen::VectorXd x_scale;
    std::vector<std::string> column_names;

    Eigen::Index n() const { return y.size(); }
    Eigen::Index p() const { return x.cols(); }

    void validate() const {
        if (y.size() < 1 || x.cols() < 1) throw std::invalid_argument("Dataset: need n >= 1 and p >= 1");
        if (x.rows() != y.size()) throw std::invalid_argument("Dataset: X rows must match y length");
        if (!y.allFinite() || !x.allFinite()) throw std::invalid_argument("Dataset: non-finite entries");
    }
};

enum class EtaMode { Learned, Fixed };
enum class LambdaMode { Learned, Fixed };

// Prior and fixed-point settings: (a,b) gamma prior for lambda^2, (c,d)
// gamma prior for eta, M / eps for the eta fixed-point loop.
struct Hyperparams {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double d = 1.0;
    EtaMode eta_mode = EtaMode::Learned;
    double eta_fixed = 1.0;
    LambdaMode lambda_mode = LambdaMode::Learned;
    double lambda_fixed = 1.0;
    int fp_max_iter = 10;
    double fp_tol = 1e-8;

    void validate() const {
        if (!(a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0))
            throw std::domain_error("Hyperparams: a, b, c, d must be > 0");
        if (eta_mode == EtaMode::Fixed && !(eta_fixed > 0.0))
            throw std::domain_error("Hyperparams: fixed eta must be > 0");
        if (lambda_mode == LambdaMode::Fixed && !(lambda_fixed > 0.0))
            throw std::domain_error("Hyperparams: fixed lambda must be > 0");
        if (fp_max_iter < 1 || !(fp_tol > 0.0))
            throw std::domain_error("Hyperparams: bad fixed-point settings");
    }
};

// Current position of one Gibbs chain. All scale components stay strictly
// positive along a valid chain.
struct ChainState {
    Eigen::VectorXd beta;   // p
    Eigen::VectorXd tau2;   // p
    Eigen::VectorXd sigma2; // n
    double rho2 = 1.0;
    double lambda2 = 1.0;
    double eta = 1.0;

    bool scales_positive() const {
        return rho2 > 0.0 && lambda2 > 0.0 && eta > 0.0 &&
               (tau2.array() > 0.0).all() && (sigma2.array() > 0.0).all();
    }
};

// Column-ordered draws after burn-in / thinning.
struct PosteriorSamples {
    Eigen::MatrixXd draws; // S x k
    std::vector<std::string> names;
    int burn_in = 0;
    int thin = 1;

    Eigen::Index size() const { return draws.rows(); }

    Eigen::Index column_index(const std::string& name) const {
        for (std::size_t j = 0; j < names.size(); ++j)
            if (names[j] == name) return static_cast<Eigen::Index>(j);
        throw std::out_of_range("PosteriorSamples: no column named " + name);
    }
    Eigen::VectorXd column(const std::string& name) const {
        return draws.col(column_index(name));
    }
};

// L_{eta,rho2}(x) = sqrt(eta (eta + x^2/rho2)) - eta; quadratic as
// eta -> infinity, absolute as eta -> 0
inline double hyperbolic_loss(double x, double eta, double rho2) {
    if (!(eta > 0.0) || !(rho2 > 0.0))
        throw std::domain_error("hyperbolic_loss: eta and rho2 must be > 0");
    return std::sqrt(eta * (eta + x * x / rho2)) - eta;
}

inline double pseudo_huber(double x, double c) {
    if (!(c > 0.0)) throw std::domain_error("pseudo_huber: c must be > 0");
    return c * std::sqrt(c * c + x * x) - c * c;
}

// quadratic inside |x| <= c, linear outside, continuous at the joint
inline double huber(double x, double c) {
    if (!(c > 0.0)) throw std::domain_error("huber: c must be > 0");
    const double ax = std::fabs(x);
    if (ax <= c) return 0.5 * x * x;
    return c * (ax - 0.5 * c);
}

// Joint log-posterior of (beta, rho2) with sigma^2 integrated out, up to an
// additive constant:
//   -((n+p)/2) log rho2 - (lambda/sqrt(rho2)) ||beta||_1
//   - sum_i sqrt(eta (eta + (y_i - x_i' beta)^2 / rho2)).
// In the coordinates (phi, xi) = (beta/sqrt(rho2), 1/sqrt(rho2)) this is
// concave, which is what the unimodality property test exercises.
inline double log_joint_posterior(const Eigen::VectorXd& beta, double rho2,
                                  const Dataset& data, double eta, double lambda) {
    if (!(rho2 > 0.0)) throw std::domain_error("log_joint_posterior: rho2 must be > 0");
    const double n = static_cast<double>(data.n());
    const double p = static_cast<double>(data.p());
    const double srho = std::sqrt(rho2);
    double value = -0.5 * (n + p) * std::log(rho2) - (lambda / srho) * beta.lpNorm<1>();
    const Eigen::VectorXd resid = data.y - data.x * beta;
    for (Eigen::Index i = 0; i < resid.size(); ++i)
        value -= std::sqrt(eta * (eta + resid[i] * resid[i] / rho2));
    return value;
}

} // namespace hblasso

#endif
