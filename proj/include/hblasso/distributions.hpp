#ifndef HBLASSO_DISTRIBUTIONS_HPP
#define HBLASSO_DISTRIBUTIONS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "hblasso/rng.hpp"

namespace hblasso {

// GIG parameters in the (nu, eta, rho2) form, density
//   f(x) = (2 rho2 K_nu(eta))^{-1} (x/rho2)^{nu-1} exp(-eta((x/rho2)+(rho2/x))/2),
// equivalently (nu, a, b) with a = eta/rho2, b = eta*rho2.
struct GigParams {
    double nu;
    double eta;  // shape (concentration)
    double rho2; // scale

    GigParams(double nu_, double eta_, double rho2_) : nu(nu_), eta(eta_), rho2(rho2_) {
        if (!(eta > 0.0) || !(rho2 > 0.0))
            throw std::domain_error("GigParams: eta and rho2 must be > 0");
    }
    static GigParams from_ab(double nu, double a, double b) {
        if (!(a > 0.0) || !(b > 0.0))
            throw std::domain_error("GigParams: a and b must be > 0");
        return GigParams(nu, std::sqrt(a * b), std::sqrt(b / a));
    }
    double a() const { return eta / rho2; }
    double b() const { return eta * rho2; }
};

inline double sample_gamma(double shape, double rate, RngStream& rng) {
    return rng.gamma(shape, rate);
}

inline double sample_exp(double rate, RngStream& rng) {
    return rng.exponential(rate);
}

// Michael-Schucany-Haas transformation with roots. The smaller root is
// computed as mu * eps / (1 + sqrt(1 + eps))^2 with eps = 4 lambda / (mu v),
// which has no cancellation even when mu/lambda is astronomically large
// (the tau^2 update visits that regime when a coefficient collapses to 0).
inline double sample_inv_gauss(double mu, double lambda, RngStream& rng) {
    if (!(mu > 0.0) || !(lambda > 0.0))
        throw std::domain_error("sample_inv_gauss: mu and lambda must be > 0");
    const double z = rng.normal();
    const double v = std::max(z * z, 1e-300);
    const double eps = 4.0 * lambda / (mu * v);
    const double root = 1.0 + std::sqrt(1.0 + eps);
    const double x = (mu * eps) / (root * root);
    if (rng.uniform() <= mu / (mu + x)) return x;
    return mu * mu / x;
}

namespace detail {

// two-parameter quasi-density g(x) = x^{lam-1} exp(-omega (x + 1/x) / 2)

inline double gig_mode(double lam, double omega) {
    if (lam >= 1.0)
        return (std::sqrt((lam - 1.0) * (lam - 1.0) + omega * omega) + (lam - 1.0)) / omega;
    // 0 <= lam < 1: mode computed through f(1/x) for accuracy
    return omega / (std::sqrt((1.0 - lam) * (1.0 - lam) + omega * omega) + (1.0 - lam));
}

// ratio-of-uniforms without mode shift; fine for moderate omega
inline double gig_rou_noshift(double lam, double omega, RngStream& rng) {
    const double t = 0.5 * (lam - 1.0);
    const double s = 0.25 * omega;
    const double xm = gig_mode(lam, omega);
    const double nc = t * std::log(xm) - s * (xm + 1.0 / xm); // log sqrt(g(xm))
    const double ym = ((lam + 1.0) + std::sqrt((lam + 1.0) * (lam + 1.0) + omega * omega)) / omega;
    const double um = std::exp(0.5 * (lam + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);
    while (true) {
        const double u = um * rng.uniform();
        const double v = rng.uniform();
        const double x = u / v;
        if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
    }
}

// ratio-of-uniforms shifted by the mode; the workhorse for lam or omega large
inline double gig_rou_shift(double lam, double omega, RngStream& rng) {
    const double t = 0.5 * (lam - 1.0);
    const double s = 0.25 * omega;
    const double xm = gig_mode(lam, omega);
    const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);

    // extrema of (x-xm) sqrt(g(x)): roots of x^3 + a x^2 + b x + c
    const double a = -(2.0 * (lam + 1.0) / omega + xm);
    const double b = 2.0 * (lam - 1.0) * xm / omega - 1.0;
    const double c = xm;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double phi = std::acos(std::clamp(-q / (2.0 * std::sqrt(-p * p * p / 27.0)), -1.0, 1.0));
    const double fak = 2.0 * std::sqrt(-p / 3.0);
    const double y1 = fak * std::cos(phi / 3.0) - a / 3.0;
    const double y2 = fak * std::cos(phi / 3.0 + 4.0 * M_PI / 3.0) - a / 3.0;

    const double uplus = (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
    const double uminus = (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);

    while (true) {
        const double u = uminus + rng.uniform() * (uplus - uminus);
        const double v = rng.uniform();
        const double x = u / v + xm;
        if (x > 0.0 && std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
    }
}

// three-part hat (power / constant / exponential) for 0 < lam < 1 and small
// omega, where the ratio-of-uniforms acceptance rate collapses
inline double gig_three_part(double lam, double omega, RngStream& rng) {
    const double xm = gig_mode(lam, omega);
    const double x0 = omega / (1.0 - lam);
    const double k0 = std::exp((lam - 1.0) * std::log(xm) - 0.5 * omega * (xm + 1.0 / xm));
    const double A0 = k0 * x0;

    double k1, k2, A1, A2;
    if (x0 >= 2.0 / omega) {
        k1 = 0.0;
        A1 = 0.0;
        k2 = std::pow(x0, lam - 1.0);
        A2 = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
    } else {
        k1 = std::exp(-omega);
        A1 = (lam == 0.0)
                 ? k1 * std::log(2.0 / (omega * omega))
                 : k1 / lam * (std::pow(2.0 / omega, lam) - std::pow(x0, lam));
        k2 = std::pow(2.0 / omega, lam - 1.0);
        A2 = k2 * 2.0 * std::exp(-1.0) / omega;
    }
    const double Atot = A0 + A1 + A2;

    while (true) {
        double v = Atot * rng.uniform();
        double x, hx;
        if (v <= A0) {
            x = x0 * v / A0;
            hx = k0;
        } else if ((v -= A0) <= A1) {
            if (lam == 0.0) {
                x = omega * std::exp(std::exp(omega) * v);
            } else {
                x = std::pow(std::pow(x0, lam) + lam / k1 * v, 1.0 / lam);
            }
            hx = k1 * std::pow(x, lam - 1.0);
        } else {
            v -= A1;
            const double anchor = std::max(x0, 2.0 / omega);
            x = -2.0 / omega * std::log(std::exp(-omega / 2.0 * anchor) - omega / (2.0 * k2) * v);
            hx = k2 * std::exp(-omega / 2.0 * x);
        }
        const double u = rng.uniform() * hx;
        if (std::log(u) <= (lam - 1.0) * std::log(x) - omega / 2.0 * (x + 1.0 / x)) return x;
    }
}

inline double gig_standard(double lam, double omega, RngStream& rng) {
    if (lam > 2.0 || omega > 3.0) return gig_rou_shift(lam, omega, rng);
    if (lam >= 1.0 - 2.25 * omega * omega || omega > 0.2) return gig_rou_noshift(lam, omega, rng);
    return gig_three_part(lam, omega, rng);
}

} // namespace detail

// one draw from GIG(nu, eta, rho2)
inline double sample_gig(const GigParams& params, RngStream& rng) {
    const double lam = std::fabs(params.nu);
    const double x = detail::gig_standard(lam, params.eta, rng);
    // order symmetry: X ~ GIG(-nu) iff 1/X ~ GIG(nu); rho2 is the scale
    return (params.nu < 0.0) ? params.rho2 / x : params.rho2 * x;
}

inline double sample_gig_ab(double nu, double a, double b, RngStream& rng) {
    return sample_gig(GigParams::from_ab(nu, a, b), rng);
}

// hyperbolic draw via the normal-GIG mixture: sigma2 ~ GIG(1, eta, rho2),
// then x | sigma2 ~ N(0, sigma2); density proportional to
// exp(-sqrt(eta (eta + x^2 / rho2)))
inline double sample_hyperbolic(double eta, double rho2, RngStream& rng) {
    const double s2 = sample_gig(GigParams(1.0, eta, rho2), rng);
    return std::sqrt(s2) * rng.normal();
}

// One draw from N(precision^{-1} h, precision^{-1}) via Cholesky of the
// precision matrix; no explicit inverse is formed.
inline Eigen::VectorXd sample_mvn_from_precision(const Eigen::VectorXd& h,
                                                 const Eigen::MatrixXd& precision,
                                                 RngStream& rng) {
    if (precision.rows() != precision.cols() || precision.rows() != h.size())
        throw std::invalid_argument("sample_mvn_from_precision: dimension mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("sample_mvn_from_precision: precision matrix is not positive definite");
    Eigen::VectorXd mean = llt.solve(h);
    Eigen::VectorXd z(h.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
    // u = L^{-T} z has covariance precision^{-1}
    llt.matrixU().solveInPlace(z);
    return mean + z;
}

} // namespace hblasso

#endif
