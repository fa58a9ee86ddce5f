#include <algorithm>

#include <catch2/catch_amalgamated.hpp>

#include "nlsist/asymptotics.hpp"
#include "nlsist/perturbation.hpp"
#include "nlsist/scattering.hpp"

using namespace nlsist;
using Catch::Approx;

namespace {

/// Analytic reflection datum: no direct-scattering solve needed, valid for
/// the Riemann-Hilbert machinery as long as sup|r| < 1.
ReflectionData gaussian_reflection(double amp, const Grid1D& zgrid) {
    return ReflectionData(
        ComplexField::sample(zgrid, [amp](double z) { return amp * std::exp(-z * z); }));
}

PerturbationSpec default_spec() {
    PerturbationSpec spec;
    spec.epsilon = 1e-3;
    spec.ell = 4.0;
    spec.profile = PerturbationProfile::gaussian(1.0);
    return spec;
}

double field_distance(const ComplexField& a, const ComplexField& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a.values[i] - b.values[i]));
    return d;
}

}  // namespace

TEST_CASE("perturbation spec enforces the standing assumptions") {
    PerturbationSpec spec = default_spec();
    REQUIRE_NOTHROW(spec.validate());
    spec.ell = 3.0;
    REQUIRE_THROWS_AS(spec.validate(), std::domain_error);
    spec.ell = 4.0;
    spec.epsilon = -1.0;
    REQUIRE_THROWS_AS(spec.validate(), std::domain_error);
}

TEST_CASE("g_term matches its closed form") {
    auto g = Grid1D::over(-6.0, 6.0, 128);
    PerturbationSpec spec = default_spec();

    SECTION("zero field gives zero matrix") {
        const Matrix2Field G = g_term(ComplexField(g), spec);
        for (const auto& m : G.values) REQUIRE(m.sup() == 0.0);
    }

    SECTION("entries are -i a |q|^l q off-diagonal and conjugate-opposite") {
        auto q = ComplexField::sample(
            g, [](double x) { return 0.4 * std::exp(-x * x + complex(0.0, 0.7 * x)); });
        const Matrix2Field G = g_term(q, spec);
        for (std::size_t i = 0; i < g.count; ++i) {
            const double x = g.node(i);
            const double amp = spec.profile.a(x) * std::pow(std::abs(q.values[i]), 4.0);
            REQUIRE(G.values[i](0, 0) == complex(0.0));
            REQUIRE(G.values[i](1, 1) == complex(0.0));
            REQUIRE(G.values[i](0, 1) == complex(0.0, -1.0) * amp * q.values[i]);
            REQUIRE(G.values[i](1, 0) == complex(0.0, 1.0) * amp * std::conj(q.values[i]));
        }
    }

    SECTION("homogeneity degree l + 1 for positive data") {
        auto q = ComplexField::sample(g, [](double x) { return 0.3 * std::exp(-x * x); });
        ComplexField q2 = q;
        for (auto& v : q2.values) v *= 2.0;
        const Matrix2Field G1 = g_term(q, spec);
        const Matrix2Field G2 = g_term(q2, spec);
        for (std::size_t i = 40; i < 90; ++i)
            REQUIRE(std::abs(G2.values[i](0, 1)) ==
                    Approx(32.0 * std::abs(G1.values[i](0, 1))).epsilon(1e-12));
    }
}

TEST_CASE("inner grid covers the profile support") {
    const Grid1D g = inner_grid(PerturbationProfile::gaussian(1.0), 64);
    REQUIRE(std::abs(PerturbationProfile::gaussian(1.0).a(g.origin)) < 1e-12);
    REQUIRE(g.origin == Approx(-g.back()));
    REQUIRE(g.count == 64);
}

TEST_CASE("F vanishes identically for zero reflection data") {
    auto zg = Grid1D::over(-6.0, 6.0, 128);
    ReflectionData rd{ComplexField(zg)};
    const Grid1D xg = inner_grid(PerturbationProfile::gaussian(1.0), 32);
    const ComplexField F = f_functional(1.0, rd, default_spec(), xg);
    REQUIRE(F.sup_norm() < 1e-12);
}

TEST_CASE("F is independent of epsilon and linear in the profile") {
    auto zg = Grid1D::over(-6.0, 6.0, 96);
    const ReflectionData rd = gaussian_reflection(0.25, zg);
    const Grid1D xg = inner_grid(PerturbationProfile::gaussian(1.0), 32);

    PerturbationSpec s1 = default_spec();
    PerturbationSpec s2 = s1;
    s2.epsilon = 0.0;
    const ComplexField f1 = f_functional(0.7, rd, s1, xg);
    const ComplexField f2 = f_functional(0.7, rd, s2, xg);
    REQUIRE(field_distance(f1, f2) == 0.0);

    PerturbationSpec s3 = s1;
    s3.profile = PerturbationProfile::gaussian(2.0);
    const ComplexField f3 = f_functional(0.7, rd, s3, xg);
    for (std::size_t i = 0; i < f1.size(); ++i)
        REQUIRE(std::abs(f3.values[i] - 2.0 * f1.values[i]) <= 1e-15);
}

TEST_CASE("zero-strength trajectories are exactly constant") {
    auto zg = Grid1D::over(-6.0, 6.0, 96);
    const ReflectionData rd = gaussian_reflection(0.3, zg);
    PerturbationSpec spec = default_spec();
    spec.epsilon = 0.0;
    const Grid1D xg = inner_grid(spec.profile, 32);
    const TrajectoryRecord rec = evolve_perturbed(rd, spec, 4.0, 4, xg);
    REQUIRE(rec.times.size() == 5);
    for (const auto& snap : rec.snapshots) REQUIRE(field_distance(snap.r, rd.r) == 0.0);

    const RInfinity lim = r_infinity(rec);
    REQUIRE(lim.degenerate);
}

TEST_CASE("RK4 stepping shows fourth-order self convergence") {
    auto zg = Grid1D::over(-6.0, 6.0, 96);
    const ReflectionData rd = gaussian_reflection(0.5, zg);
    PerturbationSpec spec = default_spec();
    spec.epsilon = 2.0;   // exaggerated strength so the step error is visible
    spec.rhp_tol = 1e-11;  // keep inner-solve noise below the step error
    const Grid1D xg = inner_grid(spec.profile, 32);
    const double T = 0.5;

    auto final_state = [&](int steps) {
        return evolve_perturbed(rd, spec, T, steps, xg).snapshots.back().r;
    };
    const ComplexField r1 = final_state(4);
    const ComplexField r2 = final_state(8);
    const ComplexField r4 = final_state(16);

    const double e12 = field_distance(r1, r2);
    const double e24 = field_distance(r2, r4);
    REQUIRE(e12 > 0.0);
    const double ratio = e12 / e24;
    REQUIRE(ratio > 8.0);
    REQUIRE(ratio < 32.0);
}

TEST_CASE("Picard iteration of the integral form agrees with RK4") {
    auto zg = Grid1D::over(-6.0, 6.0, 96);
    const ReflectionData rd = gaussian_reflection(0.4, zg);
    PerturbationSpec spec = default_spec();
    spec.epsilon = 1.0;
    const Grid1D xg = inner_grid(spec.profile, 32);
    const double T = 0.5;

    const ComplexField rk = evolve_perturbed(rd, spec, T, 4, xg).snapshots.back().r;
    const ComplexField pc = picard_evolve(rd, spec, T, 4, xg).snapshots.back().r;
    // both carry the same quadrature-in-time resolution; they must agree to
    // the stepping error, far below the state change itself
    const double change = field_distance(rk, rd.r);
    REQUIRE(change > 1e-7);
    REQUIRE(field_distance(rk, pc) < 0.05 * change);
}

TEST_CASE("monitored bounds abort unstable runs") {
    SECTION("per-step monitors flag a cap crossing with the partial trajectory") {
        auto zg = Grid1D::over(-6.0, 6.0, 96);
        const ReflectionData rd = gaussian_reflection(0.3, zg);
        TrajectoryRecord partial;
        partial.times.push_back(0.0);
        partial.snapshots.push_back(rd);
        REQUIRE_NOTHROW(detail::check_bounds(rd, 0.65, 2.0 * rd.eta, 1.0, partial));
        bool thrown = false;
        try {
            detail::check_bounds(rd, 0.25, 2.0 * rd.eta, 1.0, partial);
        } catch (const InstabilityError& e) {
            thrown = true;
            REQUIRE(e.trajectory.times.size() == 1);
        }
        REQUIRE(thrown);
        REQUIRE_THROWS_AS(detail::check_bounds(rd, 0.65, 0.5 * rd.eta, 1.0, partial),
                          InstabilityError);
    }

    SECTION("an absurd strength aborts the run instead of returning garbage") {
        auto zg = Grid1D::over(-6.0, 6.0, 96);
        const ReflectionData rd = gaussian_reflection(0.6, zg);
        PerturbationSpec spec = default_spec();
        spec.epsilon = 1e8;
        const Grid1D xg = inner_grid(spec.profile, 24);
        bool thrown = false;
        try {
            evolve_perturbed(rd, spec, 4.0, 4, xg);
        } catch (const InstabilityError& e) {
            thrown = true;
            REQUIRE(!e.trajectory.times.empty());
        } catch (const std::domain_error&) {
            thrown = true;  // sup|r| crossed 1 within a step: also a hard abort
        }
        REQUIRE(thrown);
    }
}

TEST_CASE("reflection flow cross-validates against the direct PDE solution") {
    // Evolve q under i q_t + q_xx - 2|q|^2 q - eps a |q|^4 q = 0 directly,
    // and compare its scattering data (with the linear phase removed) to the
    // integrated reflection-coefficient flow at T = 1.
    const double T = 1.0;
    PerturbationSpec spec = default_spec();
    spec.epsilon = 0.05;  // strong enough that the drift dwarfs solver error

    auto xgrid = Grid1D::over(-30.0, 30.0, 2048);
    auto q0 = ComplexField::sample(xgrid, [](double x) { return 0.3 / std::cosh(x); });
    auto zgrid = Grid1D::over(-8.0, 8.0, 257);
    const ReflectionData r0 = scattering_reflection(q0, zgrid);

    SplitStepOptions pde;
    pde.dt = 1e-3;
    pde.eps = spec.epsilon;
    pde.ell = spec.ell;
    pde.profile = spec.profile;
    const ComplexField qT = split_step_evolve(q0, T, pde);
    const ReflectionData rT_pde = scattering_reflection(qT, zgrid);

    const Grid1D inner = inner_grid(spec.profile, 64);
    const TrajectoryRecord rec = evolve_perturbed(r0, spec, T, 4, inner);
    const ComplexField& rT = rec.snapshots.back().r;

    ComplexField diff(zgrid);
    for (std::size_t i = 0; i < zgrid.count; ++i) {
        const double z = zgrid.node(i);
        const complex pde_interaction =
            rT_pde.r.values[i] * std::exp(complex(0.0, z * z * T));
        diff.values[i] = pde_interaction - rT.values[i];
    }
    const double l2 = std::sqrt(trapezoid_abs2(diff));
    REQUIRE(l2 < 1e-3);

    // the perturbation actually did something: without it the interaction
    // picture datum would be constant
    ComplexField drift(zgrid);
    for (std::size_t i = 0; i < zgrid.count; ++i)
        drift.values[i] = rT.values[i] - r0.r.values[i];
    REQUIRE(std::sqrt(trapezoid_abs2(drift)) > 5.0 * l2);
}

TEST_CASE("F decays in time at the predicted envelope") {
    // ||F(t)||_{H^{1,1}} (1+t)^{l/2 - 1/2} stays within a factor 4 of its
    // median along a dyadic sweep (l = 4 gives the exponent 3/2).
    auto zg = Grid1D::over(-5.0, 5.0, 96);
    const ReflectionData rd = gaussian_reflection(0.2, zg);
    PerturbationSpec spec = default_spec();
    const Grid1D xg = inner_grid(spec.profile, 32);

    std::vector<double> scaled;
    for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        const ComplexField F = f_functional(t, rd, spec, xg);
        scaled.push_back(h_norms(F).h11 * std::pow(1.0 + t, 1.5));
    }
    std::vector<double> sorted = scaled;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    for (double s : scaled) {
        REQUIRE(s < 4.0 * median);
        REQUIRE(s > median / 4.0);
    }
}

TEST_CASE("resumed integration matches a single run") {
    auto r0field = ComplexField::sample(Grid1D::over(-8.0, 8.0, 257), [](double z) {
        return 0.4 * std::exp(-0.5 * z * z);
    });
    ReflectionData r0{ComplexField(r0field)};
    PerturbationSpec spec;
    spec.epsilon = 1.0;
    const Grid1D xgrid = inner_grid(spec.profile, 64);

    auto whole = evolve_perturbed(r0, spec, 1.0, 4, xgrid);
    auto first = evolve_perturbed(r0, spec, 0.5, 2, xgrid);
    auto second = evolve_perturbed(first.snapshots.back(), spec, 0.5, 2, xgrid, 0.5);

    REQUIRE(second.times.front() == Approx(0.5));
    REQUIRE(second.times.back() == Approx(1.0));
    double worst = 0.0;
    for (std::size_t i = 0; i < r0field.size(); ++i)
        worst = std::max(worst, std::abs(second.snapshots.back().r.values[i] -
                                         whole.snapshots.back().r.values[i]));
    REQUIRE(worst < 1e-13);
}
