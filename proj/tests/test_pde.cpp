#include <catch2/catch_amalgamated.hpp>

#include "nlsist/pde.hpp"
#include "nlsist/rhp.hpp"

using namespace nlsist;
using Catch::Approx;

namespace {

ComplexField gaussian_wave(double amp, double beta, const Grid1D& g) {
    return ComplexField::sample(
        g, [amp, beta](double x) { return amp * std::exp(-beta * x * x); });
}

}  // namespace

TEST_CASE("free dispersion matches the analytic Gaussian") {
    // For i q_t + q_xx = 0 and q(x,0) = A e^{-b x^2},
    //   q(x,t) = A (1 + 4 i b t)^{-1/2} e^{-b x^2 / (1 + 4 i b t)}.
    // The nonlinear terms are switched off through a tiny amplitude: the
    // cubic correction stays below A^3 T.
    const double amp = 1e-5, beta = 0.5, t = 1.3;
    auto g = Grid1D::over(-40.0, 40.0, 1024);
    SplitStepOptions opt;
    opt.dt = 1e-3;
    auto q = split_step_evolve(gaussian_wave(amp, beta, g), t, opt);
    for (double x : {-3.0, 0.0, 1.5}) {
        const complex denom = 1.0 + complex(0.0, 4.0 * beta * t);
        const complex exact = amp / std::sqrt(denom) * std::exp(-beta * x * x / denom);
        REQUIRE(std::abs(interpolate(q, x) - exact) < 1e-10);
    }
}

TEST_CASE("mass is conserved to roundoff") {
    auto g = Grid1D::over(-30.0, 30.0, 1024);
    auto q0 = ComplexField::sample(g, [](double x) {
        return 0.5 / std::cosh(x) * std::exp(complex(0.0, 0.8 * x));
    });
    SplitStepOptions opt;
    opt.dt = 0.01;
    opt.eps = 0.05;
    opt.ell = 4.0;
    opt.profile = PerturbationProfile::gaussian(1.0, 2.0);
    auto q = split_step_evolve(q0, 2.0, opt);
    // conserved up to accumulated FFT roundoff, far below the O(dt^2) scheme
    // error any non-conservative term would introduce
    REQUIRE(mass(q) == Approx(mass(q0)).epsilon(1e-9));
}

TEST_CASE("self convergence is second order in dt") {
    auto g = Grid1D::over(-30.0, 30.0, 1024);
    auto q0 = ComplexField::sample(g, [](double x) { return 0.6 / std::cosh(x); });
    const double t = 0.5;
    auto run = [&](double dt) {
        SplitStepOptions opt;
        opt.dt = dt;
        return split_step_evolve(q0, t, opt);
    };
    auto ref = run(0.0005);
    double e1 = 0.0, e2 = 0.0;
    auto a = run(0.02), b = run(0.01);
    for (std::size_t i = 0; i < g.count; ++i) {
        e1 = std::max(e1, std::abs(a.values[i] - ref.values[i]));
        e2 = std::max(e2, std::abs(b.values[i] - ref.values[i]));
    }
    REQUIRE(e1 / e2 > 3.4);  // ratio 4 expected at second order
    REQUIRE(e1 / e2 < 4.6);
}

TEST_CASE("split step agrees with the inverse-scattering evolution") {
    // Dual route for the unperturbed flow: evolve a moderate-amplitude pulse
    // with the PDE solver, and independently reconstruct it from the
    // linearly evolved reflection data. This pins the time-phase convention.
    auto xg = Grid1D::over(-30.0, 30.0, 2048);
    auto q0 = ComplexField::sample(xg, [](double x) { return 0.3 / std::cosh(x); });
    const double t = 1.0;

    SplitStepOptions opt;
    opt.dt = 0.002;
    auto q_pde = split_step_evolve(q0, t, opt);

    auto rd = scattering_reflection(q0, Grid1D::over(-14.0, 14.0, 1024));
    RhpOptions ropt;
    ropt.tol = 1e-10;
    for (double x : {-2.0, 0.0, 0.7, 2.5}) {
        const complex q_ist = reconstruct_point(rd.r, x, t, ropt);
        REQUIRE(std::abs(q_ist - interpolate(q_pde, x)) < 2e-4);
    }
}

TEST_CASE("step-size cap rejects oversized steps") {
    auto g = Grid1D::over(-30.0, 30.0, 512);
    auto q0 = ComplexField::sample(g, [](double x) { return 2.0 / std::cosh(x); });
    SplitStepOptions opt;
    opt.eps = 1.0;
    opt.ell = 4.0;
    opt.profile = PerturbationProfile::gaussian(1.0, 2.0);
    // max|q| ~ 2 at the nodes nearest x = 0: cap ~ 0.1 / (4 + 16) = 0.005
    REQUIRE(split_step_dt_cap(q0, opt) == Approx(0.005).epsilon(0.02));
    opt.dt = 0.006;
    REQUIRE_THROWS_AS(split_step_evolve(q0, 1.0, opt), std::invalid_argument);
    opt.dt = 0.004;
    REQUIRE_NOTHROW(split_step_evolve(q0, 0.02, opt));
    // the zero field admits any step
    REQUIRE(std::isinf(split_step_dt_cap(ComplexField(g), opt)));
}

TEST_CASE("stateful runs: mass trace and edge monitor") {
    auto g = Grid1D::over(-30.0, 30.0, 1024);
    auto q0 = ComplexField::sample(g, [](double x) { return 0.5 / std::cosh(x); });
    SplitStepOptions opt;
    opt.dt = 0.01;

    SECTION("single step advances the clock and caches the mass") {
        PdeState s0(q0);
        REQUIRE(s0.mass_cache == Approx(mass(q0)));
        auto s1 = pde_step(s0, 0.01, opt);
        REQUIRE(s1.t == Approx(0.01));
        REQUIRE(s1.mass_cache == Approx(s0.mass_cache).epsilon(1e-12));
        REQUIRE_THROWS_AS(pde_step(s0, 0.0, opt), std::invalid_argument);
    }

    SECTION("run over a localized pulse keeps the edges quiet") {
        auto run = pde_run(q0, opt, 1.0);
        REQUIRE(run.state.t == Approx(1.0));
        REQUIRE(run.times.size() == run.mass_trace.size());
        REQUIRE(run.times.front() == 0.0);
        REQUIRE_FALSE(run.wraparound);
        double drift = 0.0;
        for (double m : run.mass_trace)
            drift = std::max(drift, std::abs(m - run.mass_trace.front()));
        REQUIRE(drift < 1e-9);
    }

    SECTION("a fast pulse reaching the boundary trips the monitor") {
        auto mover = ComplexField::sample(Grid1D::over(-10.0, 10.0, 1024), [](double x) {
            return 0.5 / std::cosh(x + 6.0) * std::exp(complex(0.0, 8.0 * x));
        });
        auto run = pde_run(mover, opt, 1.0);
        REQUIRE(run.wraparound);
        REQUIRE(run.edge_mass > 1e-8);
    }

    SECTION("halving dt quarters the error") {
        SplitStepOptions strong = opt;
        strong.eps = 0.5;
        strong.ell = 4.0;
        strong.profile = PerturbationProfile::gaussian(1.0, 2.0);
        auto at = [&](double dt) {
            SplitStepOptions o = strong;
            o.dt = dt;
            return pde_run(q0, o, 0.5).state.q;
        };
        auto ref = at(0.0005);
        auto a = at(0.02), b = at(0.01);
        double e1 = 0.0, e2 = 0.0;
        for (std::size_t i = 0; i < g.count; ++i) {
            e1 = std::max(e1, std::abs(a.values[i] - ref.values[i]));
            e2 = std::max(e2, std::abs(b.values[i] - ref.values[i]));
        }
        const double ratio = e1 / e2;
        REQUIRE(ratio > 2.0);
        REQUIRE(ratio < 6.0);
    }
}
