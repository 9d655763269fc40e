#ifndef HBLASSO_BESSEL_HPP
#define HBLASSO_BESSEL_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hblasso {

// Exponentially scaled modified Bessel functions of the second kind,
// log(e^x K_nu(x)), plus first/second derivatives of log K_nu. Scaled
// evaluation keeps everything finite for the very large arguments the
// eta update visits on clean data (unscaled K_nu underflows near x ~ 700).
//
// Evaluation: Temme-style series for x <= 2, Steed continued fraction for
// x > 2, then upward recurrence in the order with renormalization.

struct BesselEval {
    double nu;
    double x;
    double log_scaled_value; // log(e^x K_nu(x))
};

namespace detail {

inline constexpr double kBesselEps = 1e-17;

// [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu), stable near mu = 0 where the
// direct difference cancels; odd coefficients of 1/Gamma(1+x).
inline double temme_gam1(double mu) {
    if (std::fabs(mu) < 1e-2) {
        static const double a1 = 0.5772156649015329;
        static const double a3 = -0.04200263503409524;
        static const double a5 = -0.04219773455554433;
        static const double a7 = 0.007218943246663;
        static const double a9 = -0.0002152416741149;
        const double m2 = mu * mu;
        return -(a1 + m2 * (a3 + m2 * (a5 + m2 * (a7 + m2 * a9))));
    }
    return (1.0 / std::tgamma(1.0 - mu) - 1.0 / std::tgamma(1.0 + mu)) / (2.0 * mu);
}

// K_mu(x), K_{mu+1}(x) for |mu| <= 1/2, x <= 2, unscaled (Temme's series)
inline void bessel_k_temme(double mu, double x, double& kmu, double& kmu1) {
    const double x2 = 0.5 * x;
    const double pimu = M_PI * mu;
    const double fact = (std::fabs(pimu) < 1e-15) ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = (std::fabs(e) < 1e-15) ? 1.0 : std::sinh(e) / e;
    const double gampl = 1.0 / std::tgamma(1.0 + mu);
    const double gammi = 1.0 / std::tgamma(1.0 - mu);
    const double gam1 = temme_gam1(mu);
    const double gam2 = 0.5 * (gammi + gampl);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= 500; ++i) {
        ff = (i * ff + p + q) / (i * i - mu * mu);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        const double del1 = c * (p - i * ff);
        sum1 += del1;
        if (std::fabs(del) < std::fabs(sum) * kBesselEps) break;
    }
    kmu = sum;
    kmu1 = sum1 * (2.0 / x);
}

// e^x K_mu(x), e^x K_{mu+1}(x) for |mu| <= 1/2, x > 2 (Steed's CF2)
inline void bessel_k_steed_scaled(double mu, double x, double& kmu, double& kmu1) {
    const double mu2 = mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1, c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 20000; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < kBesselEps) break;
    }
    h = a1 * h;
    kmu = std::sqrt(M_PI / (2.0 * x)) / s;
    kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

} // namespace detail

// log(e^x K_nu(x)); finite over x in [1e-8, 1e8], |nu| <= 50
inline double log_bessel_k_scaled(double nu, double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("log_bessel_k_scaled: x must be positive and finite");
    if (!std::isfinite(nu) || std::fabs(nu) > 50.0)
        throw std::domain_error("log_bessel_k_scaled: require |nu| <= 50");

    nu = std::fabs(nu); // K_{-nu} = K_nu
    const int nsteps = static_cast<int>(nu + 0.5);
    const double mu = nu - nsteps; // |mu| <= 1/2

    double klo, khi;    // K_mu, K_{mu+1} up to the common scale below
    double log_scale;   // log of the factor taken out (includes e^x or not)
    if (x <= 2.0) {
        detail::bessel_k_temme(mu, x, klo, khi);
        log_scale = x; // values are unscaled; target is e^x K
    } else {
        detail::bessel_k_steed_scaled(mu, x, klo, khi);
        log_scale = 0.0;
    }

    // upward recurrence K_{v+1} = K_{v-1} + (2v/x) K_v, renormalizing to
    // avoid overflow at large order / small argument
    double v = mu;
    for (int i = 0; i < nsteps; ++i) {
        v += 1.0;
        const double knext = klo + (2.0 * v / x) * khi;
        klo = khi;
        khi = knext;
        if (khi > 1e280) {
            klo /= khi;
            log_scale += std::log(khi);
            khi = 1.0;
        }
    }
    // after the loop klo = K_{nu}
    return std::log(klo) + log_scale;
}

inline BesselEval eval_bessel_k(double nu, double x) {
    return BesselEval{nu, x, log_bessel_k_scaled(nu, x)};
}

// d/deta log K_nu(eta) = -(K_{nu-1} + K_{nu+1}) / (2 K_nu); tends to -1 as
// eta -> infinity and to -infinity as eta -> 0
inline double dlog_k(double nu, double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::domain_error("dlog_k: eta must be positive and finite");
    const double l0 = log_bessel_k_scaled(nu, eta);
    const double lm = log_bessel_k_scaled(nu - 1.0, eta);
    const double lp = log_bessel_k_scaled(nu + 1.0, eta);
    return -0.5 * (std::exp(lm - l0) + std::exp(lp - l0));
}

namespace detail {

// d2/deta2 log K_nu via the large-argument expansion
// K_nu(x) ~ sqrt(pi/(2x)) e^{-x} (1 + a1/x + a2/x^2 + ...),
// a_k = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (k! 8^k).
// Used where the recurrence form of the second derivative cancels badly.
inline double d2log_k_asymptotic(double nu, double eta) {
    double a[7];
    a[0] = 1.0;
    const double fournu2 = 4.0 * nu * nu;
    double num = 1.0, den = 1.0;
    for (int k = 1; k <= 6; ++k) {
        const double odd = 2.0 * k - 1.0;
        num *= (fournu2 - odd * odd);
        den *= 8.0 * k;
        a[k] = num / den;
    }
    const double xi = 1.0 / eta;
    double g = 0.0, gp = 0.0, gpp = 0.0;
    double xik = xi;
    for (int k = 1; k <= 6; ++k) {
        g += a[k] * xik;
        gp += -k * a[k] * xik * xi;
        gpp += k * (k + 1.0) * a[k] * xik * xi * xi;
        xik *= xi;
    }
    const double onepg = 1.0 + g;
    return 0.5 * xi * xi + (gpp * onepg - gp * gp) / (onepg * onepg);
}

} // namespace detail

// d2/deta2 log K_nu(eta) = K''/K - (K'/K)^2 with
// K'' = (K_{nu-2} + 2 K_nu + K_{nu+2}) / 4; strictly positive for eta > 0
inline double d2log_k(double nu, double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::domain_error("d2log_k: eta must be positive and finite");
    if (eta >= 30.0 * (1.0 + nu * nu)) return detail::d2log_k_asymptotic(nu, eta);
    const double l0 = log_bessel_k_scaled(nu, eta);
    const double lm1 = log_bessel_k_scaled(nu - 1.0, eta);
    const double lp1 = log_bessel_k_scaled(nu + 1.0, eta);
    const double lm2 = log_bessel_k_scaled(nu - 2.0, eta);
    const double lp2 = log_bessel_k_scaled(nu + 2.0, eta);
    const double dlog = -0.5 * (std::exp(lm1 - l0) + std::exp(lp1 - l0));
    const double ratio2 = 0.25 * (std::exp(lm2 - l0) + 2.0 + std::exp(lp2 - l0));
    return ratio2 - dlog * dlog;
}

// First and second derivatives of log K_1 from a single series / continued
// fraction pass: K_0 and K_1 come out of one evaluation and K_2, K_3 follow
// by recurrence. This is the per-sweep workhorse of the eta fixed point, so
// the shared pass matters for chain throughput.
inline void dlog_d2log_k1(double eta, double& d1, double& d2) {
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::domain_error("dlog_d2log_k1: eta must be positive and finite");
    double k0, k1;
    if (eta <= 2.0) {
        detail::bessel_k_temme(0.0, eta, k0, k1);
    } else {
        detail::bessel_k_steed_scaled(0.0, eta, k0, k1);
    }
    // ratios are scale-free; orders stay small so no renormalization needed
    const double r0 = k0 / k1;
    const double r2 = r0 + 2.0 / eta;             // K_2/K_1 = K_0/K_1 + 2/eta
    const double r3 = 1.0 + (4.0 / eta) * r2;     // K_3/K_1 = 1 + (4/eta) K_2/K_1
    d1 = -0.5 * (r0 + r2);
    if (eta >= 60.0) {
        d2 = detail::d2log_k_asymptotic(1.0, eta);
    } else {
        d2 = 0.25 * (3.0 + r3) - d1 * d1; // K_1'' = (3 K_1 + K_3)/4
    }
}

} // namespace hblasso

#endif
