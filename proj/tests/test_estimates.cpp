#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "nlsist/estimates.hpp"
#include "nlsist/scattering.hpp"

using namespace nlsist;
using Catch::Approx;

namespace {

ReflectionData sech_reflection(double amp) {
    auto xgrid = Grid1D::over(-30.0, 30.0, 2048);
    auto q0 = ComplexField::sample(xgrid, [amp](double x) { return amp / std::cosh(x); });
    auto zgrid = Grid1D::over(-8.0, 8.0, 257);
    return scattering_reflection(q0, zgrid);
}

}  // namespace

TEST_CASE("log-log regression recovers exact power laws") {
    std::vector<double> times{1.0, 2.0, 4.0, 8.0, 16.0};
    std::vector<double> values;
    for (double t : times) values.push_back(3.7 * std::pow(t, -1.25));
    const DecayFit fit = fit_loglog(times, values);
    REQUIRE(fit.exponent == Approx(1.25).margin(1e-12));
    REQUIRE(fit.r2 == Approx(1.0).margin(1e-12));

    REQUIRE_THROWS_AS(fit_loglog({1.0}, {1.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(fit_loglog({1.0, 2.0}, {1.0, -1.0}), std::domain_error);
}

TEST_CASE("finite-difference derivative is fourth order in the interior") {
    auto g = Grid1D::over(-3.0, 3.0, 256);
    auto f = ComplexField::sample(
        g, [](double x) { return std::exp(complex(0.0, 2.0 * x)) * std::cos(x); });
    const ComplexField d = derivative_fd4(f);
    for (std::size_t i = 10; i < g.count - 10; i += 17) {
        const double x = g.node(i);
        const complex exact =
            std::exp(complex(0.0, 2.0 * x)) *
            (complex(0.0, 2.0) * std::cos(x) - std::sin(x));
        REQUIRE(std::abs(d.values[i] - exact) < 5e-6);
    }
}

TEST_CASE("conjugated perturbation matrix matches its closed form") {
    PerturbationSpec spec;
    spec.ell = 4.0;
    auto g = Grid1D::over(-8.0, 8.0, 256);

    SECTION("zero field gives the zero matrix") {
        const Matrix2Field G = ltilde_g(ComplexField(g), ComplexField(g), spec, 1.0);
        for (const auto& m : G.values) REQUIRE(m.sup() == 0.0);
    }

    SECTION("constant profile at t = 0 reduces to the ix terms") {
        // For q = e^{-x^2} real and a = const at t = 0:
        //   beta = a |q|^4 (ix q) + 4 a |q|^2 q Re(conj(q) ix q) + |q|^4 q (ix a)
        //        = 2 i a x e^{-5 x^2}
        // since Re(i x |q|^2) = 0 kills the middle term.
        const double a0 = 0.7;
        spec.profile = PerturbationProfile::constant(a0);
        auto q = ComplexField::sample(g, [](double x) { return std::exp(-x * x); });
        auto qx = ComplexField::sample(g, [](double x) { return -2.0 * x * std::exp(-x * x); });
        const Matrix2Field G = ltilde_g(q, qx, spec, 0.0);
        for (double x : {-2.5, -1.5, -0.75, -0.25, 0.5, 1.0, 1.75, 2.25}) {
            const std::size_t i = g.nearest(x);
            const double xn = g.node(i);
            const complex beta(0.0, 2.0 * a0 * xn * std::exp(-5.0 * xn * xn));
            REQUIRE(std::abs(G.values[i](0, 1) - complex(0.0, -1.0) * beta) < 1e-12);
            REQUIRE(std::abs(G.values[i](1, 0) - complex(0.0, 1.0) * std::conj(beta)) < 1e-12);
        }
    }

    SECTION("doubling the profile doubles the matrix exactly") {
        spec.profile = PerturbationProfile::gaussian(1.0);
        auto q = ComplexField::sample(
            g, [](double x) { return 0.5 * std::exp(-x * x + complex(0.0, 0.3 * x)); });
        const ComplexField qx = spectral_derivative(q);
        const Matrix2Field G1 = ltilde_g(q, qx, spec, 2.0);
        spec.profile = PerturbationProfile::gaussian(2.0);
        const Matrix2Field G2 = ltilde_g(q, qx, spec, 2.0);
        for (std::size_t i = 0; i < g.count; ++i)
            REQUIRE(std::abs(G2.values[i](0, 1) - 2.0 * G1.values[i](0, 1)) < 1e-15);
    }
}

TEST_CASE("conjugated perturbation matrix decays at the appendix rate") {
    // ||LtG||_{L^2} and ||LtG||_{L^1} along the integrable flow decay like
    // t^{-(l-1)/2}; l = 4 targets the exponent 1.5 within the +-0.3 window.
    DecayProbeConfig cfg;
    cfg.r = sech_reflection(0.3);
    cfg.r_pair = cfg.r;
    cfg.spec.ell = 4.0;
    cfg.spec.profile = PerturbationProfile::gaussian(1.0);
    cfg.xgrid = Grid1D::over(-7.0, 7.0, 64);
    cfg.times = {1.0, 2.0, 4.0, 8.0, 16.0};

    const DecayFit l2 = decay_probe(DecayQuantity::LG_l2, cfg);
    REQUIRE(l2.exponent == Approx(1.5).margin(0.3));
    const DecayFit l1 = decay_probe(DecayQuantity::LG_l1, cfg);
    REQUIRE(l1.exponent == Approx(1.5).margin(0.3));
}

TEST_CASE("uniform boundedness probe") {
    SECTION("zero data gives exactly the identity") {
        auto zg = Grid1D::over(-6.0, 6.0, 128);
        const MInfinityProbe probe =
            m_infinity_probe(ReflectionData{ComplexField(zg)}, {1.0, 4.0});
        REQUIRE(probe.max == Approx(1.0).margin(1e-12));
    }

    SECTION("moderate sech data stays bounded with no growth trend") {
        const ReflectionData rd = sech_reflection(0.2);
        const MInfinityProbe probe = m_infinity_probe(rd, {1.0, 4.0, 16.0, 64.0});
        REQUIRE(probe.max >= 1.0);
        REQUIRE(probe.max < 2.0);
        // exponent is the decay rate; growth would make it noticeably negative
        REQUIRE(probe.fit.exponent > -0.05);
    }

    SECTION("strong sech data saturates towards its supremum") {
        // at rho ~ 0.74 the sup creeps up towards its t -> infinity limit
        // slowly enough that the window {1,...,64} still shows a trend; the
        // dyadic increments must decelerate (saturation, not growth)
        const ReflectionData rd = sech_reflection(0.3);
        const MInfinityProbe probe = m_infinity_probe(rd, {1.0, 4.0, 16.0, 64.0});
        REQUIRE(probe.max < 2.0);
        const auto& v = probe.per_time;
        REQUIRE(v.size() == 4);
        REQUIRE(v[3] / v[2] < v[2] / v[1]);
        REQUIRE(v[3] / v[2] - 1.0 < 0.5 * (v[1] / v[0] - 1.0));
    }
}

TEST_CASE("measured resolvent norm sits inside the a-priori window") {
    const ReflectionData rd = sech_reflection(0.3);
    const Grid1D g = rhp_solve_grid(rd.r.grid, 0.5, 0.5);
    const ComplexField rg = resample_reflection(rd.r, g);
    const JumpFactors w = jump_factors(rg, 0.5, 0.5);

    const double measured = resolvent_norm(w);
    const MuSolution s = solve_mu(w);
    const double bound = k2_bound(rd.rho, m_infinity(s));
    REQUIRE(measured >= 1.0);
    REQUIRE(measured <= bound);
}
