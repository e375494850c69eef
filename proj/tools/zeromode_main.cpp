// zeromode: batch experiments on zero modes of massless Dirac operators.
//
// Subcommands:
//   verify    pointwise residuals, decay envelope, potential audit
//   limit     limit vectors over an omega grid, radial scan, uniformity
//   budget    three-region error decomposition over an (r, R0) grid
//   residual  fixed-point residuals of the kernel integral operator
//
// Exit codes: 0 pass, 1 numeric tolerance / quadrature budget failure,
// 2 usage or configuration error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "zeromode/asymptotics.hpp"
#include "zeromode/integral_operator.hpp"
#include "zeromode/parallel.hpp"
#include "zeromode/report.hpp"
#include "zeromode/sampling.hpp"
#include "zeromode/zero_modes.hpp"

namespace fs = std::filesystem;
using namespace zeromode;

namespace {

struct Options {
    std::string out_dir = "zeromode-out";
    std::string format = "both";  // json|csv|both
    int threads = 1;
    std::uint64_t seed = 0;

    // [family]
    std::string family = "loss-yau";
    std::vector<double> phi0 = {1.0, 0.0, 0.0, 0.0};  // re0, im0, re1, im1
    std::string block = "upper";
    std::string profile;     // AMN profile id when family = amn
    double rho = 2.0;        // declared decay exponent of Q
    double decay_c = 3.0;    // declared entrywise constant of Q

    // [rule]
    QuadratureRule rule;

    // [probe]
    int omega_points = 64;
    std::vector<double> r_ladder = {10, 20, 40, 80, 160, 320};

    // [verify]
    int verify_points = 100;
    double box_radius = 10.0;
    double fd_step = 1e-3;
    double max_weyl_residual = 1e-5;
    double hermitian_tol = 1e-12;

    // [limit]
    double uniformity_factor = 10.0;

    // [budget]
    std::vector<double> budget_r = {40.0};
    std::vector<double> budget_r0 = {10.0};
    std::vector<double> slope_i_r = {20.0, 40.0, 80.0, 160.0};
    double slope_i_r0 = 5.0;
    std::vector<double> slope_iii_r0 = {2.5, 5.0, 10.0, 20.0};
    double slope_iii_ratio = 8.0;  // r = ratio * R0 along the III scan

    // [residual]
    int residual_samples = 20;
    double residual_ball = 5.0;
    std::vector<double> far_radii = {10.0, 20.0, 40.0};
    double max_fixed_point_residual = 1e-3;
};

struct Family {
    std::string name;
    DiracZeroModePair pair;
    // Weyl structure when the family has one (loss-yau, amn).
    SpinorField2 psi;  // may be null
    VectorField A;     // may be null
    DecayBound A_decay{1.0, 2.0, 1.0};
    LossYauMode mode;  // valid for loss-yau / free
    WeylBlock block = WeylBlock::Upper;
};

C2 parse_phi0(const std::vector<double>& v) {
    if (v.size() != 4)
        throw std::invalid_argument("family.phi0 needs 4 numbers: re0, im0, re1, im1");
    C2 p;
    p[0] = complex(v[0], v[1]);
    p[1] = complex(v[2], v[3]);
    return p;
}

Family build_family(const Options& opt) {
    const WeylBlock block = [&] {
        if (opt.block == "upper") return WeylBlock::Upper;
        if (opt.block == "lower") return WeylBlock::Lower;
        throw std::invalid_argument("family.block must be 'upper' or 'lower'");
    }();
    const DecayBound declared{opt.decay_c, opt.rho};  // throws if rho <= 1

    if (opt.family == "loss-yau") {
        LossYauMode mode(parse_phi0(opt.phi0));
        Family fam{opt.family,
                   embed_weyl_to_dirac([mode](Vec3 x) { return mode.psi(x); },
                                       [mode](Vec3 x) { return mode.vector_potential(x); },
                                       DecayBound{opt.decay_c, opt.rho, opt.decay_c}, nullptr,
                                       block, 1.0),
                   [mode](Vec3 x) { return mode.psi(x); },
                   [mode](Vec3 x) { return mode.vector_potential(x); },
                   DecayBound{3.0, 2.0, 3.0},
                   mode,
                   block};
        return fam;
    }
    if (opt.family == "free" || opt.family == "zero-potential") {
        LossYauMode mode(parse_phi0(opt.phi0));
        Family fam{opt.family, free_pair(mode, block), nullptr, nullptr,
                   DecayBound{0.0, 2.0, 0.0}, mode, block};
        return fam;
    }
    if (opt.family == "amn") {
        auto& reg = amn_profile_registry();
        auto it = reg.find(opt.profile);
        if (it == reg.end())
            throw std::invalid_argument("unknown AMN profile id: '" + opt.profile + "'");
        AmnMode amn = it->second();
        Family fam{opt.family + ":" + opt.profile,
                   embed_weyl_to_dirac([amn](Vec3 x) { return amn.psi(x); },
                                       [amn](Vec3 x) { return amn.A(x); },
                                       DecayBound{opt.decay_c, opt.rho, opt.decay_c}, nullptr,
                                       block, 1.0),
                   [amn](Vec3 x) { return amn.psi(x); },
                   [amn](Vec3 x) { return amn.A(x); },
                   amn.A_decay,
                   LossYauMode{},
                   block};
        return fam;
    }
    throw std::invalid_argument("unknown family '" + opt.family +
                                "' (expected loss-yau, free, or amn)");
}

json family_json(const Options& opt) {
    return json{{"name", opt.family},
                {"phi0", opt.phi0},
                {"block", opt.block},
                {"profile", opt.profile},
                {"decay", json{{"C", opt.decay_c}, {"rho", opt.rho}}}};
}

json rule_json(const QuadratureRule& r) {
    return json{{"tol", r.tol},
                {"r_max", r.r_max},
                {"sphere_points", r.sphere_points},
                {"radial_order", r.radial_order},
                {"initial_panels", r.initial_panels},
                {"adapt_depth", r.adapt_depth},
                {"max_panels", r.max_panels}};
}

void emit(const Options& opt, const std::string& stem, const json& j) {
    if (opt.format == "csv") return;
    fs::create_directories(opt.out_dir);
    write_text_file((fs::path(opt.out_dir) / (stem + ".json")).string(), j.dump(2) + "\n");
}

void emit_csv(const Options& opt, const std::string& stem, const std::string& content) {
    if (opt.format == "json") return;
    fs::create_directories(opt.out_dir);
    write_text_file((fs::path(opt.out_dir) / (stem + ".csv")).string(), content);
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const Options& opt) {
    const Family fam = build_family(opt);
    const auto points = ball_points(opt.verify_points, opt.box_radius, opt.seed);

    double max_weyl = 0.0, max_dirac = 0.0;
    bool step_warning = false;
    if (fam.psi) {
        for (const Vec3& x : points) {
            const auto r = weyl_residual(fam.psi, fam.A, x, opt.fd_step);
            max_weyl = std::max(max_weyl, r.value.norm());
            step_warning = step_warning || r.step_warning;
        }
    }
    for (const Vec3& x : points)
        max_dirac = std::max(max_dirac, dirac_residual(fam.pair.f, fam.pair.Q, x, opt.fd_step).value.norm());

    const PairAudit audit = audit_pair(fam.pair, points, opt.hermitian_tol);
    const double lipschitz = lipschitz_estimate(fam.pair.f, points, 1e-3);

    std::vector<double> env_radii = {0.0, 0.5, 1.0, 2.0, 5.0};
    env_radii.insert(env_radii.end(), opt.r_ladder.begin(), opt.r_ladder.end());
    const auto omegas = fibonacci_sphere(std::min(opt.omega_points, 64)).points;
    const DecayEnvelope env = decay_envelope(fam.pair.f, env_radii, omegas);

    // Quadrature sanity on the limit integral: also catches unreachable tol.
    const LimitEvaluator ev(fam.pair, opt.rule);

    const double fd_scale = std::pow(opt.fd_step, 4.0);
    const bool residual_ok = (fam.psi ? max_weyl : max_dirac) <= opt.max_weyl_residual;
    const bool pass = residual_ok && audit.hermitian_ok && audit.decay_ok &&
                      std::isfinite(lipschitz) && ev.moment().converged;

    json j{{"schema", 1},
           {"command", "verify"},
           {"family", family_json(opt)},
           {"rule", rule_json(opt.rule)},
           {"seed", opt.seed},
           {"points", opt.verify_points},
           {"box_radius", opt.box_radius},
           {"weyl_residual",
            json{{"max", max_weyl}, {"err_est", fd_scale}, {"h", opt.fd_step},
                 {"step_warning", step_warning}, {"applicable", static_cast<bool>(fam.psi)}}},
           {"dirac_residual", json{{"max", max_dirac}, {"err_est", fd_scale}}},
           {"assumption_audit",
            json{{"hermitian_defect", audit.max_hermitian_defect},
                 {"hermitian_tol", opt.hermitian_tol},
                 {"entry_ratio", audit.worst_entry_ratio},
                 {"f_ratio", audit.worst_f_ratio},
                 {"hermitian_ok", audit.hermitian_ok},
                 {"decay_ok", audit.decay_ok}}},
           {"decay_envelope",
            json{{"C_f", env.C_f}, {"err_est", 0.0}, {"at_radius", env.at_radius}}},
           {"lipschitz", json{{"L", lipschitz}, {"delta", 1e-3}}},
           {"limit_integral",
            json{{"norm", ev.moment().value.norm()}, {"err_est", ev.moment().err_est},
                 {"converged", ev.moment().converged}}},
           {"pass", pass}};
    emit(opt, "verify", j);

    if (!ev.moment().converged)
        std::cerr << "verify: quadrature budget exceeded (tol " << opt.rule.tol
                  << " unreachable; err_est " << ev.moment().err_est << ")\n";
    std::cout << (pass ? "PASS" : "FAIL") << " verify: max residual "
              << (fam.psi ? max_weyl : max_dirac) << " (limit " << opt.max_weyl_residual
              << "), C_f " << env.C_f << "\n";
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// limit
// ---------------------------------------------------------------------------

int cmd_limit(const Options& opt) {
    const Family fam = build_family(opt);
    AsymptoticProbe probe = AsymptoticProbe::defaults(opt.omega_points);
    probe.r_ladder = opt.r_ladder;
    probe.rule = opt.rule;
    probe.validate();

    const LimitEvaluator ev(fam.pair, opt.rule);

    double min_mod = std::numeric_limits<double>::infinity(), max_mod = 0.0;
    json limits = json::array();
    for (const Vec3& w : probe.omega_set) {
        const C4 L = ev.limit(w);
        const double m = L.norm();
        min_mod = std::min(min_mod, m);
        max_mod = std::max(max_mod, m);
        limits.push_back(json{{"omega", json_vec3(w)},
                              {"L", json_spinor(L)},
                              {"modulus", m},
                              {"err_est", ev.limit_err()}});
    }
    const double spread = max_mod > 0.0 ? (max_mod - min_mod) / max_mod : 0.0;

    const ScanReport scan = radial_scan(fam.pair.f, ev.limit_map(), probe);
    json uniformity = json::array();
    bool uniform_ok = true;
    for (double r : probe.r_ladder) {
        const UniformityReport u = omega_uniformity(fam.pair.f, ev.limit_map(), r, probe.omega_set);
        uniform_ok = uniform_ok && u.ratio <= opt.uniformity_factor;
        uniformity.push_back(json_uniformity(u));
    }
    const EquivalenceReport eq = zero_limit_equivalence(ev);

    // Embedding consistency against the 2-spinor route, first few omegas.
    json weyl_check;
    bool weyl_ok = true;
    if (fam.psi) {
        const std::size_t n = std::min<std::size_t>(4, probe.omega_set.size());
        double worst = 0.0, budget = 0.0;
        std::vector<IntegralResult<C2>> res(n);
        parallel_for(n, opt.threads, [&](std::size_t i) {
            res[i] = weyl_limit_vector(fam.psi, fam.A, fam.A_decay, fam.pair.f_envelope,
                                       probe.omega_set[i], opt.rule);
        });
        for (std::size_t i = 0; i < n; ++i) {
            const C4 L = ev.limit(probe.omega_set[i]);
            const std::size_t off = fam.block == WeylBlock::Upper ? 0 : 2;
            C2 blockv;
            blockv[0] = L[off];
            blockv[1] = L[off + 1];
            worst = std::max(worst, (res[i].value - blockv).norm());
            budget = std::max(budget, res[i].err_est + ev.limit_err());
        }
        weyl_ok = worst <= budget;
        weyl_check = json{{"max_diff", worst}, {"combined_err", budget}, {"ok", weyl_ok},
                          {"omegas_checked", n}};
    }

    const bool pass = ev.moment().converged && uniform_ok && weyl_ok && eq.consistent;

    json j{{"schema", 1},
           {"command", "limit"},
           {"family", family_json(opt)},
           {"rule", rule_json(opt.rule)},
           {"seed", opt.seed},
           {"integral",
            json{{"value", json_spinor(ev.moment().value)},
                 {"quadrature", json_integral(ev.moment())}}},
           {"limit_modulus", json{{"value", ev.limit_modulus()}, {"err_est", ev.limit_err()}}},
           {"modulus_spread", json{{"value", spread}, {"err_est", 0.0}}},
           {"limits", limits},
           {"fit", json_fit(scan.fit)},
           {"scan_rows", scan.rows.size()},
           {"non_finite", scan.non_finite},
           {"uniformity", uniformity},
           {"uniformity_factor", opt.uniformity_factor},
           {"equivalence", json_equivalence(eq)},
           {"weyl_consistency", weyl_check},
           {"pass", pass}};
    emit(opt, "limit", j);

    std::ostringstream csv;
    write_scan_csv(csv, scan, probe.omega_set);
    emit_csv(opt, "limit_scan", csv.str());

    std::cout << (pass ? "PASS" : "FAIL") << " limit: |L| = " << ev.limit_modulus()
              << " +/- " << ev.limit_err() << ", spread " << spread << ", fit slope "
              << scan.fit.slope << " +/- " << scan.fit.slope_stderr << "\n";
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// budget
// ---------------------------------------------------------------------------

int cmd_budget(const Options& opt) {
    const Family fam = build_family(opt);

    // Precondition sweep first: every requested pair needs r >= 2 R0.
    std::vector<std::pair<double, double>> grid;
    std::string offending;
    for (double r : opt.budget_r)
        for (double R0 : opt.budget_r0) {
            if (!(r >= 2.0 * R0))
                offending += "(r=" + std::to_string(r) + ", R0=" + std::to_string(R0) + ") ";
            grid.emplace_back(r, R0);
        }
    if (!offending.empty()) {
        std::cerr << "budget: pairs violate r >= 2 R0: " << offending << "\n";
        return 2;
    }

    const LimitEvaluator ev(fam.pair, opt.rule);
    const Vec3 omega{0.0, 0.0, 1.0};

    std::vector<ErrorBudget> budgets(grid.size());
    parallel_for(grid.size(), opt.threads, [&](std::size_t i) {
        budgets[i] = error_budget(ev, omega, grid[i].first, grid[i].second);
    });

    // Scaling of |I_r| with r at fixed R0.
    std::vector<double> i_norms(opt.slope_i_r.size());
    parallel_for(opt.slope_i_r.size(), opt.threads, [&](std::size_t i) {
        i_norms[i] = error_budget(ev, omega, opt.slope_i_r[i], opt.slope_i_r0).part1.value.norm();
    });
    const LogLogFit fit_i = fit_loglog(opt.slope_i_r, i_norms);

    // Scaling of |III| with R0 at r = ratio * R0.
    std::vector<double> iii_norms(opt.slope_iii_r0.size());
    parallel_for(opt.slope_iii_r0.size(), opt.threads, [&](std::size_t i) {
        iii_norms[i] = error_budget(ev, omega, opt.slope_iii_ratio * opt.slope_iii_r0[i],
                                    opt.slope_iii_r0[i])
                           .part3.value.norm();
    });
    const LogLogFit fit_iii = fit_loglog(opt.slope_iii_r0, iii_norms);

    bool sum_ok = true, converged = ev.moment().converged;
    json rows = json::array();
    for (const ErrorBudget& b : budgets) {
        sum_ok = sum_ok && b.mismatch <= b.combined_err;
        converged = converged && b.part1.converged && b.part2.converged && b.part3.converged;
        rows.push_back(json_budget(b));
    }
    const bool pass = sum_ok && converged;

    json j{{"schema", 1},
           {"command", "budget"},
           {"family", family_json(opt)},
           {"rule", rule_json(opt.rule)},
           {"seed", opt.seed},
           {"omega", json_vec3(omega)},
           {"grid", rows},
           {"slope_I_vs_r",
            json{{"R0", opt.slope_i_r0}, {"r_values", opt.slope_i_r},
                 {"norms", i_norms}, {"fit", json_fit(fit_i)}}},
           {"slope_III_vs_R0",
            json{{"r_over_R0", opt.slope_iii_ratio}, {"R0_values", opt.slope_iii_r0},
                 {"norms", iii_norms}, {"fit", json_fit(fit_iii)}}},
           {"pass", pass}};
    emit(opt, "budget", j);

    std::ostringstream csv;
    write_budget_csv(csv, budgets);
    emit_csv(opt, "budget", csv.str());

    std::cout << (pass ? "PASS" : "FAIL") << " budget: sum checks "
              << (sum_ok ? "ok" : "FAILED") << ", slope(I) " << fit_i.slope << " +/- "
              << fit_i.slope_stderr << ", slope(III) " << fit_iii.slope << " +/- "
              << fit_iii.slope_stderr << "\n";
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// residual
// ---------------------------------------------------------------------------

int cmd_residual(const Options& opt) {
    const Family fam = build_family(opt);
    std::vector<Vec3> samples = ball_points(opt.residual_samples, opt.residual_ball, opt.seed);
    const Vec3 far_dir = normalized({1.0, 1.0, 1.0});
    for (double r : opt.far_radii) samples.push_back(r * far_dir);

    ResidualReport rep;
    rep.rows.resize(samples.size());
    std::vector<bool> conv(samples.size(), true);
    parallel_for(samples.size(), opt.threads, [&](std::size_t i) {
        const KernelApplication t = apply_T(fam.pair, samples[i], opt.rule);
        rep.rows[i] = {samples[i], (fam.pair.f(samples[i]) - t.value).norm(), t.err_est};
        conv[i] = t.converged;
    });
    for (std::size_t i = 0; i < samples.size(); ++i) {
        rep.max_residual = std::max(rep.max_residual, rep.rows[i].residual);
        rep.max_err_est = std::max(rep.max_err_est, rep.rows[i].err_est);
        rep.converged = rep.converged && conv[i];
    }

    const bool pass = rep.max_residual <= opt.max_fixed_point_residual && rep.converged;

    json j{{"schema", 1},
           {"command", "residual"},
           {"family", family_json(opt)},
           {"rule", rule_json(opt.rule)},
           {"seed", opt.seed},
           {"max_residual", rep.max_residual},
           {"quadrature_tol", opt.rule.tol},
           {"sample_count", samples.size()},
           {"max_err_est", rep.max_err_est},
           {"converged", rep.converged},
           {"threshold", opt.max_fixed_point_residual},
           {"pass", pass}};
    emit(opt, "residual", j);

    std::ostringstream csv;
    write_residual_csv(csv, rep);
    emit_csv(opt, "residual", csv.str());

    std::cout << (pass ? "PASS" : "FAIL") << " residual: max " << rep.max_residual
              << " (threshold " << opt.max_fixed_point_residual << ", quadrature err "
              << rep.max_err_est << ")\n";
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"zero-mode asymptotics laboratory"};
    app.fallthrough();
    app.set_config("--config", "", "experiment configuration file (INI sections)");

    app.add_option("--out", opt.out_dir, "output directory");
    app.add_option("--format", opt.format, "json|csv|both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    app.add_option("--threads", opt.threads, "worker thread cap")->check(CLI::Range(1, 256));
    app.add_option("--seed", opt.seed, "seed for quasi-random sample sets");

    app.add_option("--family.name,--family", opt.family, "loss-yau | free | amn");
    app.add_option("--family.phi0", opt.phi0, "constant spinor: re0, im0, re1, im1")->expected(4);
    app.add_option("--family.block", opt.block, "upper | lower embedding block");
    app.add_option("--family.profile", opt.profile, "AMN profile id");
    app.add_option("--family.rho", opt.rho, "declared decay exponent of Q (must be > 1)");
    app.add_option("--family.decay-c", opt.decay_c, "declared entrywise decay constant");

    app.add_option("--rule.tol,--tol", opt.rule.tol, "quadrature absolute tolerance");
    app.add_option("--rule.rmax,--rmax", opt.rule.r_max, "truncation radius");
    app.add_option("--rule.sphere-points,--sphere-points", opt.rule.sphere_points,
                   "Fibonacci lattice size");
    app.add_option("--rule.radial-order,--radial-order", opt.rule.radial_order,
                   "Gauss-Legendre order per panel");
    app.add_option("--rule.adapt-depth,--adapt-depth", opt.rule.adapt_depth,
                   "max bisection depth");
    app.add_option("--rule.initial-panels", opt.rule.initial_panels, "initial radial panels");
    app.add_option("--rule.max-panels", opt.rule.max_panels, "radial panel budget");

    app.add_option("--probe.omega-points", opt.omega_points, "omega grid size");
    app.add_option("--probe.r-ladder", opt.r_ladder, "scan radii (increasing)");

    app.add_option("--verify.points", opt.verify_points, "sample count");
    app.add_option("--verify.box-radius", opt.box_radius, "sample ball radius");
    app.add_option("--verify.fd-step", opt.fd_step, "finite-difference step");
    app.add_option("--verify.max-residual", opt.max_weyl_residual, "residual threshold");
    app.add_option("--verify.hermitian-tol", opt.hermitian_tol, "Hermitian audit tolerance");

    app.add_option("--limit.uniformity-factor", opt.uniformity_factor,
                   "max/median acceptance factor");

    app.add_option("--budget.r", opt.budget_r, "budget grid radii");
    app.add_option("--budget.r0", opt.budget_r0, "budget grid region radii");
    app.add_option("--budget.slope-r", opt.slope_i_r, "radii for the |I_r| scaling fit");
    app.add_option("--budget.slope-r0", opt.slope_i_r0, "fixed R0 for the |I_r| fit");
    app.add_option("--budget.slope3-r0", opt.slope_iii_r0, "R0 ladder for the |III| fit");
    app.add_option("--budget.slope3-ratio", opt.slope_iii_ratio, "r/R0 along the |III| fit");

    app.add_option("--residual.samples", opt.residual_samples, "ball sample count");
    app.add_option("--residual.ball-radius", opt.residual_ball, "sample ball radius");
    app.add_option("--residual.far-radii", opt.far_radii, "far-field radii");
    app.add_option("--residual.max-residual", opt.max_fixed_point_residual,
                   "fixed-point residual threshold");

    auto* sub_verify = app.add_subcommand("verify", "residuals, envelope, potential audit");
    auto* sub_limit = app.add_subcommand("limit", "limit vectors, scan, uniformity");
    auto* sub_budget = app.add_subcommand("budget", "three-region error decomposition");
    auto* sub_residual = app.add_subcommand("residual", "fixed-point residuals of T");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        opt.rule.validate();
        if (sub_verify->parsed()) return cmd_verify(opt);
        if (sub_limit->parsed()) return cmd_limit(opt);
        if (sub_budget->parsed()) return cmd_budget(opt);
        if (sub_residual->parsed()) return cmd_residual(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
