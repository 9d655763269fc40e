#include <catch2/catch.hpp>

#include <cmath>

#include "hblasso/diagnostics.hpp"
#include "hblasso/rng.hpp"

using namespace hblasso;

TEST_CASE("summarize quantile conventions") {
    // constant column: degenerate interval
    PosteriorSamples s;
    s.names = {"c"};
    s.draws = Eigen::MatrixXd::Constant(100, 1, 3.25);
    Summary sum = summarize(s);
    CHECK(sum.median[0] == 3.25);
    CHECK(sum.lower[0] == 3.25);
    CHECK(sum.upper[0] == 3.25);
    CHECK(sum.ess[0] > 0.0);
    CHECK(sum.ess[0] <= 100.0);

    // 1..1000: interpolated order statistics
    PosteriorSamples t;
    t.names = {"x"};
    t.draws.resize(1000, 1);
    for (int i = 0; i < 1000; ++i) t.draws(i, 0) = i + 1;
    Summary st = summarize(t);
    CHECK(st.median[0] == Approx(500.5).margin(1e-12));
    CHECK(st.lower[0] == Approx(25.975).margin(1e-9));
    CHECK(st.upper[0] == Approx(975.025).margin(1e-9));

    // symmetric samples: mean ~ median
    RngStream rng(701);
    PosteriorSamples u;
    u.names = {"z"};
    u.draws.resize(20000, 1);
    for (int i = 0; i < 20000; ++i) u.draws(i, 0) = rng.normal();
    Summary su = summarize(u);
    CHECK(std::fabs(su.mean[0] - su.median[0]) < 0.03);

    PosteriorSamples tiny;
    tiny.names = {"x"};
    tiny.draws.resize(5, 1);
    CHECK_THROWS_AS(summarize(tiny), std::invalid_argument);
}

TEST_CASE("ess on iid and AR(1) series") {
    RngStream rng(702);
    const int s_iid = 10'000;
    Eigen::VectorXd iid(s_iid);
    for (int i = 0; i < s_iid; ++i) iid[i] = rng.normal();
    const double e = ess(iid);
    CHECK(e > 0.8 * s_iid);
    CHECK(e < 1.2 * s_iid);
    CHECK(e < 1.5 * s_iid);

    // AR(1) with phi = 0.9: integrated autocorrelation time (1+phi)/(1-phi)
    const int s_ar = 100'000;
    Eigen::VectorXd ar(s_ar);
    double x = 0.0;
    const double phi = 0.9, innov = std::sqrt(1.0 - phi * phi);
    for (int i = 0; i < s_ar; ++i) {
        x = phi * x + innov * rng.normal();
        ar[i] = x;
    }
    const double expected = s_ar * (1.0 - phi) / (1.0 + phi);
    const double got = ess(ar);
    CHECK(got == Approx(expected).epsilon(0.2));

    Eigen::VectorXd small(10);
    CHECK_THROWS_AS(ess(small), std::invalid_argument);
}

TEST_CASE("acf basics") {
    RngStream rng(703);
    Eigen::VectorXd z(5000);
    for (int i = 0; i < 5000; ++i) z[i] = rng.normal();
    const Eigen::VectorXd rho = acf(z, 20);
    REQUIRE(rho.size() == 21);
    CHECK(rho[0] == 1.0);
    for (int k = 1; k <= 20; ++k) CHECK(std::fabs(rho[k]) < 0.05);
}

TEST_CASE("sim_metrics formulas") {
    Eigen::VectorXd truth = Eigen::VectorXd::Zero(4);
    Eigen::VectorXd est = Eigen::VectorXd::Ones(4);
    SimMetrics m = sim_metrics(est, truth, truth, truth);
    CHECK(m.rmse == Approx(1.0));
    CHECK(m.al == 0.0);
    CHECK(m.cp == 1.0); // degenerate intervals at 0 contain the 0 truth

    SimMetrics exact = sim_metrics(truth, truth, truth, truth);
    CHECK(exact.rmse == 0.0);
    CHECK(exact.al == 0.0);
    CHECK(exact.cp == 1.0);

    Eigen::VectorXd lo(4), hi(4);
    lo << -1, -1, 5, -1;
    hi << 1, 1, 6, 1;
    SimMetrics c = sim_metrics(est, truth, lo, hi);
    CHECK(c.cp == Approx(0.75));
    CHECK(c.al == Approx((2.0 + 2.0 + 1.0 + 2.0) / 4.0));

    Eigen::VectorXd bad(3);
    CHECK_THROWS_AS(sim_metrics(bad, truth, lo, hi), std::invalid_argument);
}

TEST_CASE("loocv_metrics formulas") {
    // perfect predictions
    Eigen::VectorXd y(3), pred(3);
    y << 1.0, 2.0, 3.0;
    pred = y;
    LoocvMetrics perfect = loocv_metrics(y, pred);
    CHECK(perfect.mspe == 0.0);
    CHECK(perfect.mape == 0.0);
    CHECK(perfect.mhpe == 0.0);
    CHECK(perfect.medspe == 0.0);

    // residuals (1, -1, 3) with Huber c = 1.345
    pred << 0.0, 3.0, 0.0;
    LoocvMetrics m = loocv_metrics(y, pred);
    CHECK(m.mspe == Approx(11.0 / 3.0).epsilon(1e-14));
    CHECK(m.mape == Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(m.medspe == Approx(1.0).epsilon(1e-14));
    CHECK(m.mhpe == Approx((0.5 + 0.5 + 1.345 * (3.0 - 0.5 * 1.345)) / 3.0).epsilon(1e-14));

    // right-skewed squared residuals: MedSPE below MSPE
    RngStream rng(704);
    const int n = 500;
    Eigen::VectorXd yy(n), pp(n);
    for (int i = 0; i < n; ++i) {
        yy[i] = 0.0;
        const double contaminated = (rng.uniform() < 0.1) ? 15.0 * rng.normal() : rng.normal();
        pp[i] = contaminated;
    }
    LoocvMetrics skew = loocv_metrics(yy, pp);
    CHECK(skew.medspe < skew.mspe);

    Eigen::VectorXd bad(2);
    CHECK_THROWS_AS(loocv_metrics(y, bad), std::invalid_argument);
}
