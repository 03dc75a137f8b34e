// Command-line front end: spectra, functional sweeps, sharpness schedules,
// sum-construction tables, self tests. Deterministic CSV/JSON outputs.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltlab/jacobi.hpp"
#include "ltlab/ltratio.hpp"
#include "ltlab/report.hpp"
#include "ltlab/schrodinger.hpp"
#include "ltlab/specfun.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ltlab;

namespace {

constexpr const char* kVersion = "ltlab 0.1.0";

struct GlobalOpts {
    std::string out = "out";
    int workers = 1;
    unsigned long seed = 12345;
    bool plot = false;
};

std::string join_path(const std::string& dir, const std::string& file) {
    return (fs::path(dir) / file).string();
}

void write_manifest(const GlobalOpts& g, const std::string& command, const json& params,
                    const std::vector<std::string>& outputs, double elapsed) {
    json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["parameters"] = params;
    m["outputs"] = outputs;
    m["elapsed_seconds"] = elapsed;
    std::ofstream os(join_path(g.out, command + "_manifest.json"));
    os << m.dump(2) << "\n";
}

class Timer {
public:
    Timer() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

std::string fnum(double v) { return report::num(v); }

// ---------------------------------------------------------------------------

int run_schrodinger_spectrum(const GlobalOpts& g, int d, double p,
                             const std::vector<double>& hs, double eps, double alpha0,
                             double gamma_gap, long ell_samples, long j_samples) {
    Timer timer;
    fs::create_directories(g.out);
    auto windows = schrodinger::Windows::for_eps(eps, alpha0, gamma_gap);
    std::vector<std::string> outputs;
    for (double h : hs) {
        schrodinger::Config cfg{d, h, p};
        schrodinger::EnumOptions opt;
        opt.ell_samples = ell_samples;
        opt.j_samples = j_samples;
        opt.workers = g.workers;
        auto recs = schrodinger::enumerate_spectrum(cfg, windows, opt);
        std::ostringstream name;
        name << "schrodinger_spectrum_h" << fnum(h) << ".csv";
        std::ofstream os(join_path(g.out, name.str()));
        report::Csv csv(os);
        csv.meta(std::string(kVersion) + " schrodinger-spectrum");
        csv.meta("d=" + std::to_string(d) + " p=" + fnum(p) + " h=" + fnum(h) +
                 " eps=" + fnum(eps) + " gamma=" + fnum(windows.gamma));
        csv.meta("columns: mode indices, converged root m, eigenvalue lambda = i h + m^2");
        csv.header({"ell", "j", "weight", "re_m", "im_m", "re_lambda", "im_lambda",
                    "multiplicity", "residual", "admissible", "bound_ok", "status"});
        for (const auto& r : recs) {
            csv.row({report::num(r.mode.ell), report::num(r.mode.j), fnum(r.weight),
                     fnum(r.m.real()), fnum(r.m.imag()), fnum(r.lambda.real()),
                     fnum(r.lambda.imag()), fnum(r.multiplicity), fnum(r.residual),
                     r.admissible ? "1" : "0",
                     schrodinger::bound_check(r, h) ? "1" : "0",
                     std::to_string(static_cast<int>(r.status))});
        }
        outputs.push_back(name.str());
        if (g.plot) {
            report::SvgSeries acc, rej;
            acc.color = "#1f77b4";
            acc.label = "admissible";
            rej.color = "#d62728";
            rej.label = "rejected";
            for (const auto& r : recs) {
                (r.admissible ? acc : rej)
                    .points.push_back({r.lambda.real(), r.lambda.imag()});
            }
            std::string pname = name.str() + ".svg";
            std::ofstream ps(join_path(g.out, pname));
            report::write_svg_scatter(ps, {acc, rej}, "constructed spectrum, h=" + fnum(h),
                                      "Re lambda", "Im lambda");
            outputs.push_back(pname);
        }
    }
    json params{{"d", d},   {"p", p},     {"h", hs},
                {"eps", eps}, {"alpha0", alpha0}, {"gamma_gap", gamma_gap}};
    write_manifest(g, "schrodinger-spectrum", params, outputs, timer.seconds());
    return 0;
}

int run_jacobi_spectrum(const GlobalOpts& g, const std::vector<double>& ns,
                        const std::string& gspec, double gamma) {
    Timer timer;
    fs::create_directories(g.out);
    std::vector<std::string> outputs;
    for (double nd : ns) {
        long n = static_cast<long>(std::llround(nd));
        jacobi::Config cfg = (gspec == "default")
                                 ? jacobi::Config::defaults(n)
                                 : jacobi::Config::with_g(n, std::stod(gspec.substr(6)), gamma);
        if (gspec != "default") cfg.gamma = gamma;
        auto recs = jacobi::enumerate_spectrum(cfg);
        std::ostringstream name;
        name << "jacobi_spectrum_n" << n << ".csv";
        std::ofstream os(join_path(g.out, name.str()));
        report::Csv csv(os);
        csv.meta(std::string(kVersion) + " jacobi-spectrum");
        csv.meta("n=" + std::to_string(n) + " gamma=" + fnum(cfg.gamma) + " g=" + fnum(cfg.g()));
        csv.meta("columns: slot index, root z, eigenvalue lambda = i n^{-2/3} + z + 1/z");
        csv.header({"j", "re_z", "im_z", "re_lambda", "im_lambda", "residual", "kj_abs",
                    "admissible"});
        for (const auto& r : recs) {
            csv.row({report::num(r.j), fnum(r.z.real()), fnum(r.z.imag()),
                     fnum(r.lambda.real()), fnum(r.lambda.imag()), fnum(r.residual),
                     fnum(r.kj_abs), r.admissible ? "1" : "0"});
        }
        outputs.push_back(name.str());
        if (g.plot) {
            report::SvgSeries s;
            s.label = "constructed eigenvalues";
            for (const auto& r : recs) {
                if (r.admissible) s.points.push_back({r.lambda.real(), r.lambda.imag()});
            }
            std::string pname = name.str() + ".svg";
            std::ofstream ps(join_path(g.out, pname));
            report::write_svg_scatter(ps, {s}, "jacobi spectrum, n=" + std::to_string(n),
                                      "Re lambda", "Im lambda");
            outputs.push_back(pname);
        }
    }
    json params{{"n", ns}, {"g", gspec}, {"gamma", gamma}};
    write_manifest(g, "jacobi-spectrum", params, outputs, timer.seconds());
    return 0;
}

ltratio::DivergenceKind parse_kind(const std::string& s) {
    if (s == "schrodinger_decreasing") return ltratio::DivergenceKind::schrodinger_decreasing;
    if (s == "schrodinger_increasing") return ltratio::DivergenceKind::schrodinger_increasing;
    if (s == "jacobi_decreasing") return ltratio::DivergenceKind::jacobi_decreasing;
    if (s == "jacobi_increasing") return ltratio::DivergenceKind::jacobi_increasing;
    throw DomainError("unknown sweep kind: " + s);
}

int run_ratio_sweep(const GlobalOpts& g, const std::string& kind, const std::string& fspec,
                    const std::vector<double>& sweep, int d, double p, double eps,
                    double alpha0, double jacobi_g, double jacobi_gamma, double jacobi_eps) {
    Timer timer;
    fs::create_directories(g.out);
    ltratio::ExperimentPlan plan;
    plan.kind = parse_kind(kind);
    plan.sweep = sweep;
    plan.f = ltratio::Weight::parse(fspec);
    plan.d = d;
    plan.p = p;
    plan.windows = schrodinger::Windows::for_eps(eps, alpha0);
    plan.enum_opts.workers = g.workers;
    plan.jacobi_g = jacobi_g;
    plan.jacobi_gamma = jacobi_gamma;
    plan.jacobi_eps = jacobi_eps;
    auto result = ltratio::divergence_experiment(plan);

    std::string name = "ratio_sweep_" + kind + ".csv";
    std::ofstream os(join_path(g.out, name));
    report::Csv csv(os);
    csv.meta(std::string(kVersion) + " ratio-sweep kind=" + kind + " f=" + plan.f.describe());
    csv.meta("values are constructed-mode lower bounds on the full functional");
    csv.meta("fit through origin: slope=" + fnum(result.slope));
    csv.header({"parameter", "ratio", "predictor", "ratio_over_predictor", "mode_count",
                "lattice_count"});
    for (const auto& r : result.points) {
        double q = (r.lower_bound_predictor > 0.0) ? r.ratio_value / r.lower_bound_predictor
                                                   : 0.0;
        csv.row({fnum(r.parameter), fnum(r.ratio_value), fnum(r.lower_bound_predictor),
                 fnum(q), fnum(r.mode_count), report::num(r.lattice_count)});
    }
    std::vector<std::string> outputs{name};
    if (g.plot) {
        report::SvgSeries s;
        s.label = "ratio vs parameter";
        for (const auto& r : result.points) s.points.push_back({r.parameter, r.ratio_value});
        std::string pname = name + ".svg";
        std::ofstream ps(join_path(g.out, pname));
        report::write_svg_scatter(ps, {s}, "ratio sweep (" + kind + ")", "parameter", "ratio",
                                  true, true);
        outputs.push_back(pname);
    }
    json params{{"kind", kind}, {"f", fspec},      {"sweep", sweep},
                {"d", d},       {"p", p},          {"eps", eps},
                {"alpha0", alpha0}, {"jacobi_g", jacobi_g}, {"jacobi_gamma", jacobi_gamma}};
    write_manifest(g, "ratio-sweep", params, outputs, timer.seconds());
    return 0;
}

int run_sharpness(const GlobalOpts& g, const std::string& kind, const std::vector<double>& sweep,
                  double p, int d, bool critical) {
    Timer timer;
    fs::create_directories(g.out);
    auto k = (kind == "cone") ? ltratio::SharpnessKind::cone : ltratio::SharpnessKind::diamond;
    schrodinger::EnumOptions opts;
    opts.workers = g.workers;
    auto res = ltratio::sharpness_experiment(k, sweep, p, d, critical, opts);
    std::string name = "sharpness_" + kind + (critical ? "_critical" : "") + ".csv";
    std::ofstream os(join_path(g.out, name));
    report::Csv csv(os);
    csv.meta(std::string(kVersion) + " sharpness kind=" + kind +
             (critical ? " (critical test function)" : " (log-slack test function)"));
    csv.meta("strictly_increasing=" + std::string(res.strictly_increasing ? "1" : "0") +
             " max_over_min=" + fnum(res.max_over_min));
    csv.header({"parameter", "schedule", "raw_sum", "phi", "quantity"});
    for (const auto& q : res.points) {
        csv.row({fnum(q.parameter), fnum(q.schedule), fnum(q.raw_sum), fnum(q.phi_value),
                 fnum(q.quantity)});
    }
    json params{{"kind", kind}, {"sweep", sweep}, {"p", p}, {"d", d}, {"critical", critical}};
    write_manifest(g, "sharpness", params, {name}, timer.seconds());
    return 0;
}

int run_sum_plan(const GlobalOpts& g, const std::string& fspec, double eps, double p, int d,
                 double n0, double terms) {
    Timer timer;
    fs::create_directories(g.out);
    auto f = ltratio::Weight::parse(fspec);
    auto plan = ltratio::sum_construction_plan(f, eps, p, d, n0, terms);
    std::string name = "sum_plan.csv";
    std::ofstream os(join_path(g.out, name));
    report::Csv csv(os);
    csv.meta(std::string(kVersion) + " sum-plan f=" + f.describe() + " eps=" + fnum(eps));
    csv.meta("S_A_total=" + fnum(plan.s_a_total) + " S_B_total=" + fnum(plan.s_b_total));
    csv.meta("S_B_tail_fraction=" + fnum(plan.s_b_tail_fraction) +
             " sqrt_F_at_end=" + fnum(plan.sqrt_F_at_end));
    csv.header({"n", "c_n", "k_log_n", "S_A", "S_B"});
    for (const auto& r : plan.rows) {
        csv.row({fnum(r.n), fnum(r.c_n), fnum(r.k_log_n), fnum(r.s_a), fnum(r.s_b)});
    }
    json params{{"f", fspec}, {"eps", eps}, {"p", p}, {"d", d}, {"n0", n0}, {"terms", terms}};
    write_manifest(g, "sum-plan", params, {name}, timer.seconds());
    return 0;
}

// ---------------------------------------------------------------------------
// selftest: compact invariant suites; exit 0 iff all pass, 4 on mismatch.

int run_selftest(const GlobalOpts& g) {
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
        if (!ok) ++failures;
    };

    // special functions: Wronskian in the scale-robust form over random samples
    std::mt19937_64 rng(g.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int bad = 0;
    for (int i = 0; i < 300; ++i) {
        double nu = 20.0 * unif(rng);
        double az = std::exp(std::log(0.5) + (std::log(1e4) - std::log(0.5)) * unif(rng));
        double arg = (2.0 * unif(rng) - 1.0) * pi / 3.0;
        cplx z = std::polar(az, arg);
        try {
            auto q = specfun::bessel_quad(nu, z);
            auto p1v = q.j, p2v = q.jp;
            SpecialValue t1{q.j.value * q.yp.value, q.j.log_scale + q.yp.log_scale, 0.0};
            SpecialValue t2{-q.jp.value * q.y.value, q.jp.log_scale + q.y.log_scale, 0.0};
            SpecialValue w = specfun::scaled_add(t1, t2);
            cplx target = 2.0 / (pi * z);
            double rel = std::abs(w.value * std::exp(w.log_scale) - target) / std::abs(target);
            // the black-box difference drowns for Im z beyond double's exponent
            bool checkable = std::abs(z.imag()) < 12.0;
            if (checkable && rel > 1e-9) ++bad;
            (void)p1v;
            (void)p2v;
        } catch (const RegimeUnsupported&) {
        }
    }
    check(bad == 0, "Wronskian sample (selftest subset)");

    // half-integer closed forms
    {
        cplx z{7.3, 0.4};
        auto j = specfun::bessel_j({0.5}, z).full();
        cplx ref = std::sqrt(2.0 / (pi * z)) * std::sin(z);
        check(std::abs(j - ref) / std::abs(ref) < 1e-10, "J_{1/2} closed form");
    }

    // jacobi: polynomial power paths agree; newton root matches the oracle
    {
        cplx z = std::polar(0.995, 0.6);
        cplx r1 = jacobi::char_poly_residual(z, 500);
        cplx r2 = jacobi::char_poly_residual_pow(z, 500);
        check(std::abs(r1 - r2) <= 1e-12 * (1.0 + std::abs(r1)), "polynomial power paths");

        auto cfg = jacobi::Config::with_g(300, 1.0);
        auto recs = jacobi::enumerate_spectrum(cfg);
        auto oracle = jacobi::companion_oracle(300);
        bool all = !recs.empty();
        for (const auto& r : recs) {
            if (!r.admissible) continue;
            double best = 1e300;
            for (cplx o : oracle) best = std::min(best, std::abs(o - r.z));
            if (best > 1e-8) all = false;
        }
        if (!all) {
            std::cout << "oracle mismatch in jacobi selftest\n";
            return 4;
        }
        check(all, "jacobi newton vs companion oracle (n=300)");
    }

    // free tridiagonal spectrum
    {
        long M = 301;
        std::vector<cplx> d(M, cplx{0.0, 0.0});
        auto ev = jacobi::tridiag_eigenvalues(d);
        std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
        double worst = 0.0;
        for (long k = 0; k < M; ++k) {
            double exact = 2.0 * std::cos((M - k) * pi / (M + 1.0));
            worst = std::max(worst, std::abs(ev[k] - exact));
        }
        check(worst < 1e-10, "free-operator tridiagonal eigenvalues");
    }

    // schrodinger pipeline smoke test
    {
        schrodinger::Config cfg{2, 1e5, 2.0};
        auto w = schrodinger::Windows::defaults();
        schrodinger::EnumOptions opt;
        opt.ell_samples = 5;
        opt.j_samples = 5;
        auto recs = schrodinger::enumerate_spectrum(cfg, w, opt);
        bool ok = !recs.empty();
        for (const auto& r : recs) {
            ok = ok && r.admissible && r.residual <= 1e-9 && schrodinger::bound_check(r, cfg.h);
        }
        check(ok, "schrodinger mode pipeline (h=1e5 sample)");
    }

    std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
    return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " - eigenvalue constructions and weighted spectral sums"};
    app.set_config("--config", "", "read options from a config file");
    GlobalOpts g;
    app.add_option("--out", g.out, "output directory");
    app.add_option("--workers", g.workers, "worker threads for mode solves");
    app.add_option("--seed", g.seed, "seed for randomized self tests");
    app.add_flag("--plot", g.plot, "also write static SVG plots");

    // schrodinger-spectrum
    auto* sc = app.add_subcommand("schrodinger-spectrum", "construct step-potential eigenvalues");
    int d = 2;
    double p = 2.0, eps = 0.02, alpha0 = 0.005, gamma_gap = 0.0802;
    std::vector<double> hs{1e5};
    long ell_samples = 56, j_samples = 56;
    sc->add_option("--d", d, "dimension (>= 2)");
    sc->add_option("--p", p, "power-sum exponent");
    sc->add_option("--h", hs, "coupling values")->delimiter(',');
    sc->add_option("--eps", eps, "divergence exponent (beta = eps/2)");
    sc->add_option("--alpha0", alpha0, "alpha(h) cap");
    sc->add_option("--gamma-gap", gamma_gap, "gamma - beta");
    sc->add_option("--ell-samples", ell_samples, "degree-l sampling budget");
    sc->add_option("--j-samples", j_samples, "index-j sampling budget");

    // jacobi-spectrum
    auto* jc = app.add_subcommand("jacobi-spectrum", "construct discrete-operator eigenvalues");
    std::vector<double> ns{1000};
    std::string gspec = "const:2";
    double jgamma = 0.8;
    jc->add_option("--n", ns, "potential lengths")->delimiter(',');
    jc->add_option("--g", gspec, "slot-window slow function: const:<v> or default");
    jc->add_option("--gamma", jgamma, "localization exponent in (2/3, 1)");

    // ratio-sweep
    auto* rs = app.add_subcommand("ratio-sweep", "weighted eigenvalue-sum divergence sweep");
    std::string kind = "schrodinger_decreasing", fspec = "const:1";
    std::vector<double> sweep{1e4, 1e5, 1e6};
    int rd = 2;
    double rp = 2.0, reps = 0.4, ralpha0 = 0.005;
    double rjg = 2.0, rjgamma = 0.8, rjeps = 0.5;
    rs->add_option("--kind", kind,
                   "schrodinger_decreasing|schrodinger_increasing|jacobi_decreasing|jacobi_"
                   "increasing");
    rs->add_option("--f", fspec, "weight: const:<c>, exp_decay:<k>, exp_growth:<x>");
    rs->add_option("--h", sweep, "sweep values (h or n)")->delimiter(',');
    rs->add_option("--n", sweep, "sweep values (alias of --h)")->delimiter(',');
    rs->add_option("--d", rd, "dimension");
    rs->add_option("--p", rp, "exponent");
    rs->add_option("--eps", reps, "divergence exponent");
    rs->add_option("--alpha0", ralpha0, "alpha(h) cap");
    rs->add_option("--jacobi-g", rjg, "slot-window constant g");
    rs->add_option("--jacobi-gamma", rjgamma, "localization exponent");
    rs->add_option("--jacobi-eps", rjeps, "non-decreasing schedule exponent in (0, 2/3)");

    // sharpness
    auto* sh = app.add_subcommand("sharpness", "cone / diamond sharpness schedules");
    std::string skind = "cone";
    std::vector<double> ssweep{1e4, 1e5, 1e6, 1e7};
    double sp = 2.0;
    int sd = 2;
    bool critical = false;
    sh->add_option("--kind", skind, "cone|diamond");
    sh->add_option("--h", ssweep, "sweep values")->delimiter(',');
    sh->add_option("--n", ssweep, "sweep values (alias)")->delimiter(',');
    sh->add_option("--p", sp, "exponent");
    sh->add_option("--d", sd, "dimension (cone)");
    sh->add_flag("--critical-phi", critical, "use the critical test function");

    // sum-plan
    auto* su = app.add_subcommand("sum-plan", "disjoint-support sum construction table");
    std::string sfspec = "const:1";
    double seps = 0.4, sump = 2.0, sn0 = 2.0, sterms = 1e30;
    int sumd = 2;
    su->add_option("--f", sfspec, "non-increasing weight");
    su->add_option("--eps", seps, "exponent in (0,1)");
    su->add_option("--p", sump, "exponent (needs p > d/2)");
    su->add_option("--d", sumd, "dimension");
    su->add_option("--n0", sn0, "first index (>= 2)");
    su->add_option("--terms", sterms, "number of terms");

    auto* st = app.add_subcommand("selftest", "run the invariant suites");
    (void)st;

    app.require_subcommand(1);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sc->parsed()) {
            return run_schrodinger_spectrum(g, d, p, hs, eps, alpha0, gamma_gap, ell_samples,
                                            j_samples);
        }
        if (jc->parsed()) return run_jacobi_spectrum(g, ns, gspec, jgamma);
        if (rs->parsed()) {
            return run_ratio_sweep(g, kind, fspec, sweep, rd, rp, reps, ralpha0, rjg, rjgamma,
                                   rjeps);
        }
        if (sh->parsed()) return run_sharpness(g, skind, ssweep, sp, sd, critical);
        if (su->parsed()) return run_sum_plan(g, sfspec, seps, sump, sumd, sn0, sterms);
        if (st->parsed()) return run_selftest(g);
    } catch (const WindowInvalid& e) {
        std::cerr << "{\"error\":\"" << e.kind() << "\",\"message\":\"" << e.what() << "\"}\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "{\"error\":\"" << e.kind() << "\",\"message\":\"" << e.what() << "\"}\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "{\"error\":\"" << e.kind() << "\",\"message\":\"" << e.what() << "\"}\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"unexpected\",\"message\":\"" << e.what() << "\"}\n";
        return 3;
    }
    return 2;
}
