#include "ltlab/ltratio.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ltlab::ltratio {

namespace {

// distance to the essential spectrum [0, inf) resp. [-2, 2]
double dist_halfline(cplx z) {
    if (z.real() >= 0.0) return std::abs(z.imag());
    return std::abs(z);
}

double dist_segment(cplx z) {
    if (z.real() < -2.0) return std::abs(z - cplx{-2.0, 0.0});
    if (z.real() > 2.0) return std::abs(z - cplx{2.0, 0.0});
    return std::abs(z.imag());
}

}  // namespace

// ---------------------------------------------------------------------------
// weights

Weight Weight::constant(double c) {
    Weight w;
    w.kind = Kind::constant;
    w.level = c;
    return w;
}

Weight Weight::exp_decay(double kappa) {
    if (!(kappa > 0.0)) throw DomainError("decay rate must be positive");
    Weight w;
    w.kind = Kind::exp_decay;
    w.rate = kappa;
    return w;
}

Weight Weight::exp_growth(double xi) {
    if (!(xi > 0.0)) throw DomainError("growth rate must be positive");
    Weight w;
    w.kind = Kind::exp_growth;
    w.rate = xi;
    return w;
}

Weight Weight::tabulated(std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2) throw DomainError("tabulated weight needs >= 2 points");
    for (size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].second <= 0.0) throw DomainError("weight must be positive");
        if (i && pts[i].first <= pts[i - 1].first) throw DomainError("abscissae must ascend");
    }
    if (pts.front().first != 0.0) throw DomainError("tabulated weight must start at t = 0");
    Weight w;
    w.kind = Kind::tabulated;
    w.points = std::move(pts);
    return w;
}

Weight Weight::parse(const std::string& spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    double v = (colon == std::string::npos) ? 1.0 : std::stod(spec.substr(colon + 1));
    if (name == "const" || name == "constant") return constant(v);
    if (name == "exp_decay") return exp_decay(v);
    if (name == "exp_growth") return exp_growth(v);
    throw DomainError("unknown weight spec: " + spec);
}

std::string Weight::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::constant: os << "const:" << level; break;
        case Kind::exp_decay: os << "exp_decay:" << rate; break;
        case Kind::exp_growth: os << "exp_growth:" << rate; break;
        case Kind::tabulated: os << "tabulated[" << points.size() << "]"; break;
    }
    return os.str();
}

double Weight::f(double t) const {
    switch (kind) {
        case Kind::constant: return level;
        case Kind::exp_decay: return std::exp(-rate * t);
        case Kind::exp_growth: return std::exp(rate * t);
        case Kind::tabulated: {
            if (t <= points.front().first) return points.front().second;
            if (t >= points.back().first) return points.back().second;
            auto it = std::upper_bound(points.begin(), points.end(), t,
                                       [](double x, const auto& p) { return x < p.first; });
            auto lo = *(it - 1);
            auto hi = *it;
            double s = (t - lo.first) / (hi.first - lo.first);
            return lo.second + s * (hi.second - lo.second);
        }
    }
    return 0.0;
}

double Weight::f_prime(double t) const {
    switch (kind) {
        case Kind::constant: return 0.0;
        case Kind::exp_decay: return -rate * f(t);
        case Kind::exp_growth: return rate * f(t);
        case Kind::tabulated: {
            double h = 1e-6 * std::max(1.0, std::abs(t));
            return (f(t + h) - f(t - h)) / (2.0 * h);
        }
    }
    return 0.0;
}

double Weight::F(double x) const {
    if (x < 0.0) throw DomainError("F defined for x >= 0");
    switch (kind) {
        case Kind::constant: return level * x;
        case Kind::exp_decay: return (1.0 - std::exp(-rate * x)) / rate;
        case Kind::exp_growth: return (std::exp(rate * x) - 1.0) / rate;
        case Kind::tabulated: {
            // piecewise linear: trapezoids are exact
            double acc = 0.0, prev_t = 0.0, prev_f = points.front().second;
            for (const auto& [t, v] : points) {
                if (t >= x) {
                    double fv = f(x);
                    acc += 0.5 * (prev_f + fv) * (x - prev_t);
                    return acc;
                }
                acc += 0.5 * (prev_f + v) * (t - prev_t);
                prev_t = t;
                prev_f = v;
            }
            acc += prev_f * (x - prev_t);  // constant extension
            return acc;
        }
    }
    return 0.0;
}

bool Weight::non_increasing() const {
    switch (kind) {
        case Kind::constant: return true;
        case Kind::exp_decay: return true;
        case Kind::exp_growth: return false;
        case Kind::tabulated: {
            for (size_t i = 1; i < points.size(); ++i) {
                if (points[i].second > points[i - 1].second + 1e-15) return false;
            }
            return true;
        }
    }
    return false;
}

bool Weight::non_decreasing() const {
    switch (kind) {
        case Kind::constant: return true;
        case Kind::exp_decay: return false;
        case Kind::exp_growth: return true;
        case Kind::tabulated: {
            for (size_t i = 1; i < points.size(); ++i) {
                if (points[i].second < points[i - 1].second - 1e-15) return false;
            }
            return true;
        }
    }
    return false;
}

bool Weight::integrable() const {
    switch (kind) {
        case Kind::constant: return false;
        case Kind::exp_decay: return true;
        case Kind::exp_growth: return false;
        case Kind::tabulated: return false;  // constant extension beyond the table
    }
    return false;
}

double weight_F(const Weight& w, double x) { return w.F(x); }

// ---------------------------------------------------------------------------
// functionals

double unit_ball_volume(int d) {
    return std::pow(pi, 0.5 * d) / std::tgamma(1.0 + 0.5 * d);
}

RatioReport schrodinger_ratio(const std::vector<schrodinger::EigenvalueRecord>& recs,
                              const schrodinger::Config& cfg, const Weight& f) {
    RatioReport rep;
    rep.parameter = cfg.h;
    rep.notes = "constructed-mode lower bound";
    double norm = unit_ball_volume(cfg.d) * std::pow(cfg.h, cfg.p);
    double acc = 0.0, count = 0.0;
    for (const auto& r : recs) {
        if (!r.admissible) continue;
        double dist = dist_halfline(r.lambda);
        double mod = std::abs(r.lambda);
        if (!(dist > 0.0)) continue;
        double summand = r.multiplicity * std::pow(dist, cfg.p) / std::pow(mod, 0.5 * cfg.d) *
                         f.f(std::log(mod / dist));
        acc += r.weight * summand;
        count += r.weight;
    }
    rep.ratio_value = acc / norm;
    rep.mode_count = count;
    return rep;
}

RatioReport jacobi_lt_functional(const std::vector<jacobi::RootRecord>& recs,
                                 const jacobi::Config& cfg, const Weight& f) {
    RatioReport rep;
    rep.parameter = static_cast<double>(cfg.n);
    rep.notes = "constructed-mode lower bound";
    double norm = std::pow(static_cast<double>(cfg.n), 1.0 - 2.0 * cfg.p / 3.0);
    double acc = 0.0, count = 0.0;
    for (const auto& r : recs) {
        if (!r.admissible) continue;
        double dist = dist_segment(r.lambda);
        if (!(dist > 0.0)) continue;
        double dist_end = std::min(std::abs(r.lambda - 2.0), std::abs(r.lambda + 2.0));
        double modsq = std::abs(r.lambda * r.lambda - 4.0);
        acc += std::pow(dist, cfg.p) / std::sqrt(modsq) * f.f(std::log(dist_end / dist));
        count += 1.0;
    }
    rep.ratio_value = acc / norm;
    rep.mode_count = count;
    return rep;
}

double cone_sum(const std::vector<schrodinger::EigenvalueRecord>& recs, double tau,
                const schrodinger::Config& cfg) {
    if (!(tau > 0.0)) throw DomainError("tau must be positive");
    double norm = unit_ball_volume(cfg.d) * std::pow(cfg.h, cfg.p);
    double acc = 0.0;
    for (const auto& r : recs) {
        if (!r.admissible) continue;
        if (r.lambda.imag() < tau * r.lambda.real()) continue;
        acc += r.weight * r.multiplicity * std::pow(std::abs(r.lambda), cfg.p - 0.5 * cfg.d);
    }
    return acc / norm;
}

double diamond_sum(const std::vector<cplx>& lambdas, double omega, double p, long n) {
    if (!(omega > 0.0 && omega < 0.5 * pi)) throw DomainError("omega must lie in (0, pi/2)");
    double t = std::tan(omega);
    double acc = 0.0;
    for (cplx lam : lambdas) {
        double aim = std::abs(lam.imag());
        if (2.0 - lam.real() < t * aim) acc += std::pow(std::abs(lam - 2.0), p - 0.5);
        if (2.0 + lam.real() < t * aim) acc += std::pow(std::abs(lam + 2.0), p - 0.5);
    }
    return acc / std::pow(static_cast<double>(n), 1.0 - 2.0 * p / 3.0);
}

// ---------------------------------------------------------------------------
// experiments

DivergenceResult divergence_experiment(const ExperimentPlan& plan) {
    if (plan.sweep.empty()) throw DomainError("empty sweep");
    for (size_t i = 1; i < plan.sweep.size(); ++i) {
        if (plan.sweep[i] <= plan.sweep[i - 1]) throw DomainError("sweep must ascend");
    }
    DivergenceResult out;
    bool schro = plan.kind == DivergenceKind::schrodinger_decreasing ||
                 plan.kind == DivergenceKind::schrodinger_increasing;
    for (double par : plan.sweep) {
        RatioReport rep;
        if (schro) {
            schrodinger::Config cfg{plan.d, par, plan.p};
            auto recs = schrodinger::enumerate_spectrum(cfg, plan.windows, plan.enum_opts);
            rep = schrodinger_ratio(recs, cfg, plan.f);
            rep.lattice_count = schrodinger::index_sets(par, plan.windows).lattice_count();
            double eps = plan.windows.eps;
            if (plan.kind == DivergenceKind::schrodinger_decreasing) {
                rep.lower_bound_predictor = plan.f.F(eps * std::log(par));
            } else {
                rep.lower_bound_predictor =
                    plan.f.F(eps * std::log(par)) - plan.f.F(0.5 * eps * std::log(par));
            }
        } else {
            long n = static_cast<long>(std::llround(par));
            jacobi::Config cfg = jacobi::Config::with_g(n, plan.jacobi_g, plan.jacobi_gamma,
                                                        plan.p);
            auto recs = jacobi::enumerate_spectrum(cfg);
            rep = jacobi_lt_functional(recs, cfg, plan.f);
            auto w = jacobi::mode_window(n, plan.jacobi_gamma, plan.jacobi_g);
            rep.lattice_count = w.empty() ? 0ULL
                                          : static_cast<unsigned long long>(w.j_hi - w.j_lo + 1);
            double g = cfg.g();
            if (plan.kind == DivergenceKind::jacobi_decreasing) {
                rep.lower_bound_predictor =
                    plan.f.F(std::log(std::pow(par, 2.0 / 3.0))) -
                    3.0 * plan.f.f(0.0) * std::log(g);
            } else {
                double hi = std::log(pi * pi * std::pow(par, plan.jacobi_eps));
                double lo = std::log(pi * pi * g * g);
                rep.lower_bound_predictor = plan.f.F(hi) - (lo > 0.0 ? plan.f.F(lo) : 0.0);
            }
        }
        out.points.push_back(rep);
    }
    double sxy = 0.0, sxx = 0.0;
    for (const auto& r : out.points) {
        sxy += r.ratio_value * r.lower_bound_predictor;
        sxx += r.lower_bound_predictor * r.lower_bound_predictor;
    }
    out.slope = (sxx > 0.0) ? sxy / sxx : 0.0;
    return out;
}

namespace {

// primed index windows of the cone schedule: l in [h^{a+1/2}, (g/2) h^{b+1/2}],
// j in [l/g, h^{b+1/2}]
std::vector<schrodinger::EigenvalueRecord> cone_modes(double h, const schrodinger::Windows& w,
                                                      int d, double p,
                                                      const schrodinger::EnumOptions& opt) {
    w.validate(h);
    double a = w.alpha_of_h(h);
    double g = w.g_of_h(h);
    long ell_lo = static_cast<long>(std::ceil(std::pow(h, a + 0.5)));
    long ell_hi = static_cast<long>(std::floor(0.5 * g * std::pow(h, w.beta + 0.5)));
    long j_hi = static_cast<long>(std::floor(std::pow(h, w.beta + 0.5)));
    schrodinger::Config cfg{d, h, p};
    std::vector<schrodinger::EigenvalueRecord> recs;
    if (ell_lo > ell_hi) return recs;
    long lcap = opt.ell_samples, jcap = opt.j_samples;
    long ln = ell_hi - ell_lo + 1;
    long lblocks = std::min(ln, std::max<long>(1, lcap));
    long lq = ln / lblocks, lr = ln % lblocks;
    long pos = ell_lo;
    for (long b = 0; b < lblocks; ++b) {
        long lsize = lq + (b < lr ? 1 : 0);
        long ell = pos + lsize / 2;
        pos += lsize;
        long jlo = static_cast<long>(std::ceil(static_cast<double>(ell) / g));
        if (jlo > j_hi) continue;
        long jn = j_hi - jlo + 1;
        long jblocks = std::min(jn, std::max<long>(1, jcap));
        long jq = jn / jblocks, jr = jn % jblocks;
        long jpos = jlo;
        for (long bb = 0; bb < jblocks; ++bb) {
            long jsize = jq + (bb < jr ? 1 : 0);
            long j = jpos + jsize / 2;
            jpos += jsize;
            auto rec = schrodinger::solve_mode(cfg, ell, j);
            rec.weight = static_cast<double>(lsize) * static_cast<double>(jsize);
            recs.push_back(rec);
        }
    }
    return recs;
}

}  // namespace

SharpnessResult sharpness_experiment(SharpnessKind kind, const std::vector<double>& sweep,
                                     double p, int d, bool critical_phi,
                                     const schrodinger::EnumOptions& opts) {
    SharpnessResult out;
    for (double par : sweep) {
        SharpnessPoint pt;
        pt.parameter = par;
        if (kind == SharpnessKind::cone) {
            auto w = schrodinger::Windows::cone();
            double beta = w.beta;
            double tau = std::pow(par, -2.0 * beta) / (32.0 * pi * pi);
            pt.schedule = tau;
            schrodinger::Config cfg{d, par, p};
            auto recs = cone_modes(par, w, d, p, opts);
            pt.raw_sum = cone_sum(recs, tau, cfg);
            pt.phi_value = critical_phi ? std::pow(tau, -p)
                                        : std::pow(tau, -p) / std::log(1.0 / tau);
        } else {
            long n = static_cast<long>(std::llround(par));
            double omega = std::atan(4.0 * (2.0 - std::sqrt(2.0)) * std::pow(par, 2.0 / 3.0));
            pt.schedule = omega;
            auto cfg = jacobi::Config::with_g(n, 2.0, 0.8, p);
            auto recs = jacobi::enumerate_spectrum(cfg);
            std::vector<cplx> lams;
            for (const auto& r : recs) {
                if (r.admissible) lams.push_back(r.lambda);
            }
            pt.raw_sum = diamond_sum(lams, omega, p, n);
            double t = std::tan(omega);
            pt.phi_value = critical_phi ? std::pow(t, p) : std::pow(t, p) / std::log(t);
        }
        pt.quantity = pt.raw_sum / pt.phi_value;
        out.points.push_back(pt);
    }
    out.strictly_increasing = out.points.size() > 1;
    double mn = out.points.empty() ? 0.0 : out.points.front().quantity;
    double mx = mn;
    for (size_t i = 1; i < out.points.size(); ++i) {
        if (out.points[i].quantity <= out.points[i - 1].quantity) {
            out.strictly_increasing = false;
        }
    }
    for (const auto& q : out.points) {
        mn = std::min(mn, q.quantity);
        mx = std::max(mx, q.quantity);
    }
    out.max_over_min = (mn > 0.0) ? mx / mn : 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// infinite-sum potential bookkeeping

SumPlan sum_construction_plan(const Weight& f, double eps, double p, int d, double n0,
                              double n_terms) {
    if (2.0 * p - d <= 0.0) throw HypothesisViolated("needs p > d/2");
    if (!f.non_increasing()) throw HypothesisViolated("weight must be non-increasing");
    if (f.integrable()) throw HypothesisViolated("weight must have a divergent integral");
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps in (0,1)");
    if (!(n0 >= 2.0)) throw DomainError("n0 must be >= 2 (k is defined for log n > 0)");

    const double mu = unit_ball_volume(d);
    auto kfun = [&](double x) {
        double Fe = f.F(eps * x);
        return 0.5 * eps * std::pow(Fe, -1.5) * f.f(eps * x);
    };
    auto ga = [&](double t) {  // F(eps ln t) k(ln t) / t
        double x = std::log(t);
        return f.F(eps * x) * kfun(x) / t;
    };
    auto gb = [&](double t) { return kfun(std::log(t)) / t; };
    // closed-form antiderivatives over t (chain through x = ln t)
    auto int_ga = [&](double t1, double t2) {
        return std::sqrt(f.F(eps * std::log(t2))) - std::sqrt(f.F(eps * std::log(t1)));
    };
    auto int_gb = [&](double t1, double t2) {
        return 1.0 / std::sqrt(f.F(eps * std::log(t1))) -
               1.0 / std::sqrt(f.F(eps * std::log(t2)));
    };
    auto ga_prime = [&](double t) {
        double x = std::log(t);
        double Fe = f.F(eps * x), fe = f.f(eps * x), fpe = f.f_prime(eps * x);
        double phi = 0.5 * eps * std::pow(Fe, -0.5) * fe;  // F k
        double phip = 0.5 * eps * eps *
                      (-0.5 * std::pow(Fe, -1.5) * fe * fe + std::pow(Fe, -0.5) * fpe);
        return (phip - phi) / (t * t);
    };
    auto gb_prime = [&](double t) {
        double x = std::log(t);
        double Fe = f.F(eps * x), fe = f.f(eps * x), fpe = f.f_prime(eps * x);
        double phi = 0.5 * eps * std::pow(Fe, -1.5) * fe;
        double phip = 0.5 * eps * eps *
                      (-1.5 * std::pow(Fe, -2.5) * fe * fe + std::pow(Fe, -1.5) * fpe);
        return (phip - phi) / (t * t);
    };
    // Euler-Maclaurin for the integer sum over (a, b]; endpoints are exact-head
    // boundaries so the derivative terms are negligible there.
    auto em_tail = [&](auto&& g, auto&& gp, auto&& gint, double a, double b) {
        if (b <= a) return 0.0;
        return gint(a, b) + 0.5 * (g(b) + g(a)) + (gp(b) - gp(a)) / 12.0 - g(a);
        // sum_{n=a+1..b} g(n) with integer a; -g(a) converts the closed form
    };

    SumPlan plan;
    double nmax = n0 + n_terms;
    plan.sqrt_F_at_end = std::sqrt(f.F(eps * std::log(nmax)));

    const double head_cap = 2e6;
    double head_end = std::min(nmax, head_cap);
    double sa = 0.0, sb = 0.0;
    double half_point = n0 + 0.5 * n_terms;
    double sb_at_half = 0.0;
    bool half_in_head = half_point <= head_end;

    std::vector<SumPlanRow> rows;
    double next_row_at = n0;
    double row_step = 1.0;
    double prev_k = kfun(std::log(n0)) + 1.0;
    for (double t = n0; t <= head_end; t += 1.0) {
        double kx = kfun(std::log(t));
        sa += ga(t);
        sb += gb(t);
        if (kx > prev_k * (1.0 + 1e-12)) plan.k_non_increasing = false;
        prev_k = kx;
        if (t >= next_row_at || t == head_end) {
            double cn = std::pow(kx / (t * mu * std::pow(t, p)), 1.0 / (2.0 * p - d));
            rows.push_back({t, cn, kx, sa, sb});
            row_step = std::max(1.0, next_row_at * 0.5);
            next_row_at += row_step;
        }
        if (half_in_head && t <= half_point) sb_at_half = sb;
    }

    if (nmax > head_end) {
        // geometric row chain across the analytic tail
        double t = head_end;
        double sa_t = sa, sb_t = sb;
        while (t < nmax) {
            double tn = std::min(nmax, t * 4.0);
            sa_t += em_tail(ga, ga_prime, int_ga, t, tn);
            sb_t += em_tail(gb, gb_prime, int_gb, t, tn);
            double kx = kfun(std::log(tn));
            double cn = std::pow(kx / (tn * mu * std::pow(tn, p)), 1.0 / (2.0 * p - d));
            rows.push_back({tn, cn, kx, sa_t, sb_t});
            if (!half_in_head && t < half_point && tn >= half_point) {
                sb_at_half = sb + em_tail(gb, gb_prime, int_gb, head_end, half_point);
            }
            t = tn;
        }
        sa = sa_t;
        sb = sb_t;
        if (!half_in_head && half_point > nmax) sb_at_half = sb;
    }

    plan.s_a_total = sa;
    plan.s_b_total = sb;
    plan.s_b_tail_fraction = (sb > 0.0) ? (sb - sb_at_half) / sb : 0.0;

    // thin the head rows so the table stays printable
    if (rows.size() > 400) {
        std::vector<SumPlanRow> thin;
        size_t stride = rows.size() / 200;
        for (size_t i = 0; i < rows.size(); i += stride) thin.push_back(rows[i]);
        thin.push_back(rows.back());
        rows = std::move(thin);
    }
    plan.rows = std::move(rows);
    return plan;
}

}  // namespace ltlab::ltratio
