// Command-line front end: scattering, reconstruction, evolution, asymptotics,
// perturbation sweeps, the split-step oracle, bound verification, and the
// headline comparison report.
//
// Exit codes: 0 success, 2 a numeric acceptance check failed, 3 solver failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "nlsist/asymptotics.hpp"
#include "nlsist/estimates.hpp"
#include "nlsist/io.hpp"
#include "nlsist/perturbation.hpp"

namespace fs = std::filesystem;
using nlsist::complex;
using nlsist::ComplexField;
using nlsist::Grid1D;
using json = nlohmann::json;

namespace {

constexpr int kExitAcceptance = 2;
constexpr int kExitSolver = 3;

int g_threads = 1;

/// Run f(i) for i in [0, n) on g_threads workers (order unspecified).
template <typename F>
void parallel_for(std::size_t n, F&& f) {
    const int workers = std::max(1, std::min<int>(g_threads, static_cast<int>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (std::size_t i = next++; i < n; i = next++) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Echo the resolved numeric configuration next to the outputs: for a file
/// target "<dir>/name.ext" this writes "<dir>/name.config.json", for a
/// directory target it writes "<dir>/config.json".
void echo_config(const std::string& out_path, bool is_directory, const json& cfg) {
    fs::path p(out_path);
    fs::path target;
    if (is_directory) {
        fs::create_directories(p);
        target = p / "config.json";
    } else {
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        target = p.parent_path() / (p.stem().string() + ".config.json");
    }
    std::ofstream f(target);
    f << cfg.dump(2) << "\n";
}

ComplexField read_field(const std::string& path) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".bin")
        return nlsist::read_field_bin(path);
    return nlsist::read_field_csv(path);
}

void write_field(const std::string& path, const ComplexField& f) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".bin")
        nlsist::write_field_bin(path, f);
    else
        nlsist::write_field_csv(path, f);
}

/// Parse "gaussian:amp[:width[:center]]", "sech2:...", or "constant:amp".
nlsist::PerturbationProfile parse_profile(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw std::invalid_argument("profile: empty specification");
    auto num = [&parts](std::size_t i, double fallback) {
        return i < parts.size() ? std::stod(parts[i]) : fallback;
    };
    const double amp = num(1, 1.0), width = num(2, 1.0), center = num(3, 0.0);
    if (parts[0] == "gaussian") return nlsist::PerturbationProfile::gaussian(amp, width, center);
    if (parts[0] == "sech2") return nlsist::PerturbationProfile::sech2(amp, width, center);
    if (parts[0] == "constant") return nlsist::PerturbationProfile::constant(amp);
    throw std::invalid_argument("profile: unknown shape '" + parts[0] + "'");
}

struct GridArgs {
    double lo = 0.0, hi = 0.0;
    std::size_t n = 0;
    Grid1D grid() const { return Grid1D::over(lo, hi, n); }
};

void add_grid_args(CLI::App* cmd, GridArgs& g, const std::string& axis, double lo, double hi,
                   std::size_t n) {
    g = GridArgs{lo, hi, n};
    cmd->add_option("--" + axis + "min", g.lo, axis + " grid start")->capture_default_str();
    cmd->add_option("--" + axis + "max", g.hi, axis + " grid end")->capture_default_str();
    cmd->add_option("--n" + axis, g.n, axis + " grid size")->capture_default_str();
}

json grid_json(const GridArgs& g) {
    return json{{"min", g.lo}, {"max", g.hi}, {"count", g.n}};
}

// ---------------------------------------------------------------------------
// scatter
// ---------------------------------------------------------------------------
struct ScatterCmd {
    std::string input, out, ab_out;
    GridArgs z;

    int run() const {
        const ComplexField q = read_field(input);
        const auto entries = nlsist::scattering_map(q, z.grid());
        const auto rd = nlsist::reflection_of(entries);
        double defect = 0.0;
        for (std::size_t i = 0; i < entries.zgrid.count; ++i)
            defect = std::max(defect, std::abs(std::norm(entries.a.values[i]) -
                                               std::norm(entries.b.values[i]) - 1.0));
        echo_config(out, false,
                    json{{"command", "scatter"},
                         {"input", input},
                         {"z", grid_json(z)},
                         {"rho", rd.rho},
                         {"eta", rd.eta},
                         {"unitarity_defect", defect},
                         {"threads", g_threads}});
        write_field(out, rd.r);
        if (!ab_out.empty()) {
            ComplexField ab(entries.zgrid);
            write_field(ab_out + ".a.csv", entries.a);
            write_field(ab_out + ".b.csv", entries.b);
        }
        std::printf("scatter: rho=%.6g eta=%.6g unitarity_defect=%.3e\n", rd.rho, rd.eta,
                    defect);
        return 0;
    }
};

// ---------------------------------------------------------------------------
// reconstruct
// ---------------------------------------------------------------------------
struct ReconstructCmd {
    std::string rpath, out;
    double t = 0.0;
    GridArgs x;
    nlsist::RhpOptions opt;

    int run() const {
        const ComplexField r = read_field(rpath);
        nlsist::ReflectionData rd{ComplexField(r)};  // validates rho < 1
        const Grid1D xgrid = x.grid();
        ComplexField q(xgrid);
        std::vector<int> iterations(xgrid.count, 0);
        std::vector<double> residuals(xgrid.count, 0.0);
        parallel_for(xgrid.count, [&](std::size_t i) {
            const double xi = xgrid.node(i);
            const Grid1D g = nlsist::rhp_solve_grid(r.grid, xi, t, opt.pad, opt.points_per_wave,
                                                    opt.min_nodes, opt.max_nodes);
            const ComplexField rg = nlsist::resample_reflection(r, g, opt.taper_fraction);
            const auto w = nlsist::jump_factors(rg, xi, t);
            const auto row1 = nlsist::solve_mu_row(w, 0, opt.tol);
            q.values[i] = nlsist::reconstruct_from_row(row1, w);
            iterations[i] = row1.iterations;
            residuals[i] = row1.residual;
        });
        echo_config(out, false,
                    json{{"command", "reconstruct"},
                         {"r", rpath},
                         {"t", t},
                         {"x", grid_json(x)},
                         {"rho", rd.rho},
                         {"rhp",
                          {{"pad", opt.pad},
                           {"points_per_wave", opt.points_per_wave},
                           {"tol", opt.tol}}},
                         {"threads", g_threads}});
        write_field(out, q);
        const fs::path sidecar =
            fs::path(out).parent_path() / (fs::path(out).stem().string() + ".residuals.csv");
        std::ofstream side(sidecar);
        side << "index,x,iterations,residual\n";
        for (std::size_t i = 0; i < xgrid.count; ++i) {
            char line[128];
            std::snprintf(line, sizeof line, "%zu,%.17g,%d,%.3e\n", i, xgrid.node(i),
                          iterations[i], residuals[i]);
            side << line;
        }
        return 0;
    }
};

// ---------------------------------------------------------------------------
// evolve: full inverse-scattering evolution of a potential
// ---------------------------------------------------------------------------
struct EvolveCmd {
    std::string input, out, rout;
    double t = 1.0;
    GridArgs z, x;
    nlsist::RhpOptions opt;

    int run() const {
        const ComplexField q0 = read_field(input);
        const auto rd = nlsist::scattering_reflection(q0, z.grid());
        const Grid1D xgrid = x.grid();
        ComplexField qt(xgrid);
        parallel_for(xgrid.count, [&](std::size_t i) {
            qt.values[i] = nlsist::reconstruct_point(rd.r, xgrid.node(i), t, opt);
        });
        echo_config(out, false,
                    json{{"command", "evolve"},
                         {"input", input},
                         {"t", t},
                         {"z", grid_json(z)},
                         {"x", grid_json(x)},
                         {"rho", rd.rho},
                         {"threads", g_threads}});
        write_field(out, qt);
        if (!rout.empty()) write_field(rout, nlsist::evolve_linear(rd.r, t));
        return 0;
    }
};

// ---------------------------------------------------------------------------
// asymptote
// ---------------------------------------------------------------------------
struct AsymptoteCmd {
    std::string rpath, out;
    double t = 100.0;
    GridArgs x;

    int run() const {
        const ComplexField r = read_field(rpath);
        nlsist::ReflectionData rd{ComplexField(r)};
        const Grid1D xgrid = x.grid();
        ComplexField qas(xgrid);
        parallel_for(xgrid.count, [&](std::size_t i) {
            qas.values[i] = nlsist::asymptotic_profile(r, xgrid.node(i), t).q;
        });
        echo_config(out, false,
                    json{{"command", "asymptote"},
                         {"r", rpath},
                         {"t", t},
                         {"x", grid_json(x)},
                         {"rho", rd.rho},
                         {"threads", g_threads}});
        write_field(out, qas);
        return 0;
    }
};

// ---------------------------------------------------------------------------
// perturb
// ---------------------------------------------------------------------------
struct PerturbCmd {
    std::string r0path, outdir, profile_text = "gaussian:1.0";
    double epsilon = 1e-3, ell = 4.0, T = 8.0;
    int steps = 64;
    std::size_t inner_nx = 256;
    bool picard = false;

    int run() const {
        const ComplexField r0field = read_field(r0path);
        nlsist::ReflectionData r0{ComplexField(r0field)};
        nlsist::PerturbationSpec spec;
        spec.epsilon = epsilon;
        spec.ell = ell;
        spec.profile = parse_profile(profile_text);
        const Grid1D xgrid = nlsist::inner_grid(spec.profile, inner_nx);
        echo_config(outdir, true,
                    json{{"command", "perturb"},
                         {"r0", r0path},
                         {"epsilon", epsilon},
                         {"l", ell},
                         {"profile", profile_text},
                         {"T", T},
                         {"steps", steps},
                         {"inner_nx", inner_nx},
                         {"picard", picard},
                         {"rho0", r0.rho},
                         {"eta0", r0.eta},
                         {"threads", g_threads}});
        nlsist::TrajectoryRecord traj;
        bool aborted = false;
        std::string abort_reason;
        try {
            traj = picard ? nlsist::picard_evolve(r0, spec, T, steps, xgrid)
                          : nlsist::evolve_perturbed(r0, spec, T, steps, xgrid);
        } catch (const nlsist::InstabilityError& e) {
            traj = e.trajectory;
            aborted = true;
            abort_reason = e.what();
        }
        write_trajectory(traj);
        if (aborted) {
            std::fprintf(stderr, "perturb: aborted: %s\n", abort_reason.c_str());
            return kExitSolver;
        }
        return 0;
    }

    void write_trajectory(const nlsist::TrajectoryRecord& traj) const {
        std::ofstream norms(fs::path(outdir) / "norms.csv");
        norms << "t,h11,sup,f_h11\n";
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            char line[160];
            const double f = k < traj.f_norm_log.size()
                                 ? traj.f_norm_log[k]
                                 : std::numeric_limits<double>::quiet_NaN();
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", traj.times[k],
                          traj.h11_norms[k], traj.sup_norms[k], f);
            norms << line;
            char name[32];
            std::snprintf(name, sizeof name, "r_%04zu.csv", k);
            nlsist::write_field_csv((fs::path(outdir) / name).string(),
                                    traj.snapshots[k].r);
        }
    }
};

// ---------------------------------------------------------------------------
// pde
// ---------------------------------------------------------------------------
struct PdeCmd {
    std::string q0path, out, mass_trace, profile_text = "gaussian:1.0";
    double epsilon = 1e-3, ell = 4.0, T = 10.0, dt = 0.001;

    int run() const {
        const ComplexField q0 = read_field(q0path);
        nlsist::SplitStepOptions opt;
        opt.dt = dt;
        opt.eps = epsilon;
        opt.ell = ell;
        opt.profile = parse_profile(profile_text);
        echo_config(out, false,
                    json{{"command", "pde"},
                         {"q0", q0path},
                         {"epsilon", epsilon},
                         {"l", ell},
                         {"T", T},
                         {"dt", dt},
                         {"profile", profile_text},
                         {"dt_cap", nlsist::split_step_dt_cap(q0, opt)},
                         {"threads", g_threads}});
        const auto run = nlsist::pde_run(q0, opt, T);
        write_field(out, run.state.q);
        if (!mass_trace.empty()) {
            std::ofstream f(mass_trace);
            f << "t,mass\n";
            for (std::size_t k = 0; k < run.times.size(); ++k) {
                char line[96];
                std::snprintf(line, sizeof line, "%.17g,%.17g\n", run.times[k],
                              run.mass_trace[k]);
                f << line;
            }
        }
        if (run.wraparound)
            std::fprintf(stderr, "pde: warning: edge mass %.3e exceeds 1e-8 (wraparound)\n",
                         run.edge_mass);
        const double drift =
            std::abs(run.mass_trace.back() - run.mass_trace.front());
        std::printf("pde: t=%.6g mass_drift=%.3e edge_mass=%.3e\n", run.state.t, drift,
                    run.edge_mass);
        return 0;
    }
};

// ---------------------------------------------------------------------------
// verify-bounds
// ---------------------------------------------------------------------------
struct VerifyBoundsCmd {
    std::string suite, rpath, out;
    double ell = 4.0;

    struct Row {
        std::string quantity;
        double t = 0.0, value = 0.0, fitted = 0.0, target = 0.0;
        bool pass = false;
    };

    nlsist::ReflectionData load_r() const {
        if (!rpath.empty()) return nlsist::ReflectionData{read_field(rpath)};
        // default probe data: scattering of a moderate sech pulse. The decay
        // suites use a stronger pulse (the fitted exponents reach their
        // asymptotic value sooner); the boundedness suites a weaker one
        // (sup|m+| saturates within the sweep window only below rho ~ 0.6).
        const double amp = (suite == "ltg" || suite == "fdecay") ? 0.3 : 0.2;
        auto q0 = ComplexField::sample(Grid1D::over(-30.0, 30.0, 2048),
                                       [amp](double x) { return amp / std::cosh(x); });
        return nlsist::scattering_reflection(q0, Grid1D::over(-8.0, 8.0, 257));
    }

    int run() const {
        auto rd = load_r();
        std::vector<Row> rows;
        if (suite == "ltg")
            run_ltg(rd, rows);
        else if (suite == "fdecay")
            run_fdecay(rd, rows);
        else if (suite == "minf")
            run_minf(rd, rows);
        else if (suite == "resolvent")
            run_resolvent(rd, rows);
        else
            throw CLI::ValidationError("--suite must be one of ltg, minf, fdecay, resolvent");
        echo_config(out, false,
                    json{{"command", "verify-bounds"},
                         {"suite", suite},
                         {"r", rpath.empty() ? "(builtin sech scattering)" : rpath},
                         {"l", ell},
                         {"rho", rd.rho},
                         {"threads", g_threads}});
        std::ofstream f(out);
        f << "quantity,t,value,fitted_exponent,target_exponent,pass\n";
        bool all_pass = true;
        for (const auto& row : rows) {
            char line[192];
            std::snprintf(line, sizeof line, "%s,%.17g,%.17g,%.17g,%.17g,%d\n",
                          row.quantity.c_str(), row.t, row.value, row.fitted, row.target,
                          row.pass ? 1 : 0);
            f << line;
            all_pass = all_pass && row.pass;
        }
        std::printf("verify-bounds: suite=%s rows=%zu %s\n", suite.c_str(), rows.size(),
                    all_pass ? "pass" : "FAIL");
        return all_pass ? 0 : kExitAcceptance;
    }

    void push_fit(std::vector<Row>& rows, const std::string& name, const nlsist::DecayFit& fit,
                  double target, double tol) const {
        const bool ok = std::abs(fit.exponent - target) <= tol;
        for (std::size_t i = 0; i < fit.times.size(); ++i)
            rows.push_back({name, fit.times[i], fit.values[i], fit.exponent, target, ok});
    }

    void run_ltg(const nlsist::ReflectionData& rd, std::vector<Row>& rows) const {
        nlsist::DecayProbeConfig cfg{rd, rd, {}, Grid1D::over(-7.0, 7.0, 64),
                                     {1.0, 2.0, 4.0, 8.0, 16.0}, {}};
        cfg.spec.ell = ell;
        const double target = 0.5 * (ell - 1.0);
        push_fit(rows, "ltg_l2", nlsist::decay_probe(nlsist::DecayQuantity::LG_l2, cfg), target,
                 0.3);
        push_fit(rows, "ltg_l1", nlsist::decay_probe(nlsist::DecayQuantity::LG_l1, cfg), target,
                 0.3);
    }

    void run_fdecay(const nlsist::ReflectionData& rd, std::vector<Row>& rows) const {
        nlsist::DecayProbeConfig cfg{rd, rd, {}, Grid1D::over(-7.0, 7.0, 64),
                                     {1.0, 2.0, 4.0, 8.0, 16.0}, {}};
        cfg.spec.ell = ell;
        // a nearby second datum for the difference quantity
        ComplexField scaled(rd.r.grid);
        for (std::size_t i = 0; i < scaled.size(); ++i) scaled.values[i] = 0.9 * rd.r.values[i];
        cfg.r_pair = nlsist::ReflectionData{std::move(scaled)};
        const double target = 0.5 * (ell - 1.0);
        push_fit(rows, "f_h11", nlsist::decay_probe(nlsist::DecayQuantity::F_h11, cfg), target,
                 0.5);
        push_fit(rows, "delta_f_h11",
                 nlsist::decay_probe(nlsist::DecayQuantity::DeltaF_h11, cfg), target, 0.5);
    }

    void run_minf(const nlsist::ReflectionData& rd, std::vector<Row>& rows) const {
        const auto probe = nlsist::m_infinity_probe(rd, {1.0, 4.0, 16.0, 64.0});
        // no growth: the log-log slope of sup|m+| must stay at or below 0.05
        const bool ok = probe.fit.exponent >= -0.05;
        for (std::size_t i = 0; i < probe.fit.times.size(); ++i)
            rows.push_back(
                {"m_inf", probe.fit.times[i], probe.per_time[i], probe.fit.exponent, 0.0, ok});
    }

    void run_resolvent(const nlsist::ReflectionData& rd, std::vector<Row>& rows) const {
        const auto probe = nlsist::m_infinity_probe(rd, {1.0, 4.0, 16.0, 64.0});
        const double bound = nlsist::k2_bound(rd.rho, probe.max);
        const std::vector<std::pair<double, double>> cases = {
            {0.0, 1.0}, {0.5, 0.5}, {2.0, 1.0}, {-1.0, 2.0}, {0.0, 4.0}};
        for (const auto& [x, t] : cases) {
            const Grid1D g = nlsist::rhp_solve_grid(rd.r.grid, x, t);
            const ComplexField rg = nlsist::resample_reflection(rd.r, g);
            const auto w = nlsist::jump_factors(rg, x, t);
            const double norm = nlsist::resolvent_norm(w);
            rows.push_back({"resolvent", t, norm, x, bound, norm >= 1.0 && norm <= bound});
        }
    }
};

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------
struct CompareCmd {
    std::string q0path, out;
    std::vector<double> times = {50.0, 100.0, 200.0, 400.0};
    GridArgs z, x;
    bool with_pde = false;
    double pde_dt = 0.001, epsilon = 0.0, ell = 4.0;
    std::string profile_text = "gaussian:1.0";
    nlsist::RhpOptions opt;

    int run() const {
        const ComplexField q0 = read_field(q0path);
        const auto rd = nlsist::scattering_reflection(q0, z.grid());
        const Grid1D xgrid = x.grid();
        echo_config(out, false,
                    json{{"command", "compare"},
                         {"q0", q0path},
                         {"times", times},
                         {"z", grid_json(z)},
                         {"x", grid_json(x)},
                         {"with_pde", with_pde},
                         {"epsilon", epsilon},
                         {"rho", rd.rho},
                         {"threads", g_threads}});

        std::ofstream f(out);
        f << "t,sup_err,scaled_err,pde_sup_err,status\n";
        std::vector<double> scaled;
        bool failed_stage = false;
        for (double t : times) {
            double sup_err = 0.0, pde_err = std::numeric_limits<double>::quiet_NaN();
            std::string status = "ok";
            try {
                ComplexField qt(xgrid), qas(xgrid);
                parallel_for(xgrid.count, [&](std::size_t i) {
                    const double xi = xgrid.node(i);
                    qt.values[i] = nlsist::reconstruct_point(rd.r, xi, t, opt);
                    qas.values[i] = nlsist::asymptotic_profile(rd.r, xi, t).q;
                });
                for (std::size_t i = 0; i < xgrid.count; ++i)
                    sup_err = std::max(sup_err, std::abs(qt.values[i] - qas.values[i]));
                scaled.push_back(std::pow(t, 0.75) * sup_err);
                if (with_pde) {
                    nlsist::SplitStepOptions popt;
                    popt.dt = pde_dt;
                    popt.eps = epsilon;
                    popt.ell = ell;
                    popt.profile = parse_profile(profile_text);
                    const auto run = nlsist::pde_run(q0, popt, t);
                    pde_err = 0.0;
                    for (std::size_t i = 0; i < xgrid.count; ++i)
                        pde_err = std::max(pde_err,
                                           std::abs(nlsist::interpolate(run.state.q,
                                                                        xgrid.node(i)) -
                                                    qt.values[i]));
                }
            } catch (const std::exception& e) {
                status = std::string("failed: ") + e.what();
                failed_stage = true;
            }
            char line[256];
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%s\n", t, sup_err,
                          scaled.empty() ? 0.0 : scaled.back(), pde_err, status.c_str());
            f << line;
        }
        if (failed_stage) return kExitSolver;
        // headline check: scaled errors within a factor 3 of their median
        std::vector<double> sorted = scaled;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        bool ok = true;
        for (double s : scaled) ok = ok && (median == 0.0 || (s <= 3.0 * median && s >= median / 3.0));
        std::printf("compare: median_scaled_err=%.6g %s\n", median, ok ? "pass" : "FAIL");
        return ok ? 0 : kExitAcceptance;
    }
};

void add_rhp_args(CLI::App* cmd, nlsist::RhpOptions& opt) {
    cmd->add_option("--rhp-pad", opt.pad, "contour padding beyond the data support")
        ->capture_default_str();
    cmd->add_option("--rhp-ppw", opt.points_per_wave, "contour points per phase oscillation")
        ->capture_default_str();
    cmd->add_option("--rhp-tol", opt.tol, "linear-solver tolerance")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inverse-scattering toolkit for the defocusing cubic NLS equation with a "
                 "localized higher-order perturbation"};
    app.require_subcommand(1);
    app.add_option("--threads", g_threads, "worker threads for independent sweep cells")
        ->capture_default_str();

    ScatterCmd scatter;
    auto* sc = app.add_subcommand("scatter", "potential -> reflection coefficient");
    sc->add_option("--input", scatter.input, "potential field CSV/BIN")->required();
    add_grid_args(sc, scatter.z, "z", -8.0, 8.0, 1024);
    sc->add_option("--out", scatter.out, "reflection coefficient output")->required();
    sc->add_option("--ab", scatter.ab_out, "optional prefix for a/b entry dumps");

    ReconstructCmd reconstruct;
    auto* rc = app.add_subcommand("reconstruct", "reflection coefficient -> potential at time t");
    rc->add_option("--r", reconstruct.rpath, "reflection coefficient CSV/BIN")->required();
    rc->add_option("--t", reconstruct.t, "evaluation time")->capture_default_str();
    add_grid_args(rc, reconstruct.x, "x", -20.0, 20.0, 512);
    rc->add_option("--out", reconstruct.out, "potential output")->required();
    add_rhp_args(rc, reconstruct.opt);

    EvolveCmd evolve;
    auto* ev = app.add_subcommand("evolve", "evolve a potential through scattering space");
    ev->add_option("--input", evolve.input, "initial potential CSV/BIN")->required();
    ev->add_option("--t", evolve.t, "target time")->capture_default_str();
    add_grid_args(ev, evolve.z, "z", -8.0, 8.0, 1024);
    add_grid_args(ev, evolve.x, "x", -20.0, 20.0, 512);
    ev->add_option("--out", evolve.out, "evolved potential output")->required();
    ev->add_option("--r-out", evolve.rout, "optional evolved reflection coefficient output");
    add_rhp_args(ev, evolve.opt);

    AsymptoteCmd asymptote;
    auto* as = app.add_subcommand("asymptote", "long-time asymptotic profile");
    as->add_option("--r", asymptote.rpath, "reflection coefficient CSV/BIN")->required();
    as->add_option("--t", asymptote.t, "evaluation time")->capture_default_str();
    add_grid_args(as, asymptote.x, "x", -40.0, 40.0, 256);
    as->add_option("--out", asymptote.out, "profile output")->required();

    PerturbCmd perturb;
    auto* pt = app.add_subcommand("perturb", "evolve a reflection coefficient under the "
                                             "perturbed flow");
    pt->add_option("--r0", perturb.r0path, "initial reflection coefficient CSV/BIN")->required();
    pt->add_option("--epsilon", perturb.epsilon, "perturbation strength")->capture_default_str();
    pt->add_option("--l", perturb.ell, "nonlinearity power (> 3)")->capture_default_str();
    pt->add_option("--profile", perturb.profile_text, "coefficient profile shape:amp[:width[:center]]")
        ->capture_default_str();
    pt->add_option("--T", perturb.T, "final time")->capture_default_str();
    pt->add_option("--steps", perturb.steps, "time steps")->capture_default_str();
    pt->add_option("--inner-nx", perturb.inner_nx, "spatial nodes for the coupling integral")
        ->capture_default_str();
    pt->add_flag("--picard", perturb.picard, "fixed-point iteration of the integral form");
    pt->add_option("--out", perturb.outdir, "trajectory output directory")->required();

    PdeCmd pde;
    auto* pd = app.add_subcommand("pde", "split-step finite-time solver");
    pd->add_option("--q0", pde.q0path, "initial potential CSV/BIN")->required();
    pd->add_option("--epsilon", pde.epsilon, "perturbation strength")->capture_default_str();
    pd->add_option("--l", pde.ell, "nonlinearity power")->capture_default_str();
    pd->add_option("--T", pde.T, "final time")->capture_default_str();
    pd->add_option("--dt", pde.dt, "time step")->capture_default_str();
    pd->add_option("--profile", pde.profile_text, "coefficient profile")->capture_default_str();
    pd->add_option("--out", pde.out, "final field output")->required();
    pd->add_option("--mass-trace", pde.mass_trace, "per-step mass CSV");

    VerifyBoundsCmd verify;
    auto* vb = app.add_subcommand("verify-bounds", "empirical decay/bound report");
    vb->add_option("--suite", verify.suite, "one of: ltg, minf, fdecay, resolvent")->required();
    vb->add_option("--r", verify.rpath, "reflection coefficient CSV/BIN (default: builtin)");
    vb->add_option("--l", verify.ell, "nonlinearity power")->capture_default_str();
    vb->add_option("--out", verify.out, "report CSV")->required();

    CompareCmd compare;
    auto* cp = app.add_subcommand("compare", "IST vs asymptotics (vs split-step) sweep report");
    cp->add_option("--q0", compare.q0path, "initial potential CSV/BIN")->required();
    cp->add_option("--times", compare.times, "sweep times")->capture_default_str();
    add_grid_args(cp, compare.z, "z", -8.0, 8.0, 1024);
    add_grid_args(cp, compare.x, "x", -40.0, 40.0, 128);
    cp->add_flag("--with-pde", compare.with_pde, "also run the split-step oracle");
    cp->add_option("--pde-dt", compare.pde_dt, "oracle time step")->capture_default_str();
    cp->add_option("--epsilon", compare.epsilon, "oracle perturbation strength")
        ->capture_default_str();
    cp->add_option("--l", compare.ell, "nonlinearity power")->capture_default_str();
    cp->add_option("--profile", compare.profile_text, "coefficient profile")
        ->capture_default_str();
    cp->add_option("--out", compare.out, "report CSV")->required();
    add_rhp_args(cp, compare.opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sc) return scatter.run();
        if (*rc) return reconstruct.run();
        if (*ev) return evolve.run();
        if (*as) return asymptote.run();
        if (*pt) return perturb.run();
        if (*pd) return pde.run();
        if (*vb) return verify.run();
        if (*cp) return compare.run();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
    return 0;
}
