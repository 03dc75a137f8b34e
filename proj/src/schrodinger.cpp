#include "ltlab/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ltlab/specfun.hpp"

namespace ltlab::schrodinger {

namespace {

const cplx kI{0.0, 1.0};

constexpr double kStage2Tol = 1e-10;
constexpr double kStage3Tol = 1e-9;
constexpr int kMaxNewton = 50;

long ceil_of(double v) { return static_cast<long>(std::ceil(v - 1e-9 * std::abs(v))); }
long floor_of(double v) { return static_cast<long>(std::floor(v + 1e-9 * std::abs(v))); }

}  // namespace

void Config::validate() const {
    if (d < 2) throw DomainError("dimension must be >= 2");
    if (!(h > 0.0)) throw DomainError("coupling h must be positive");
    bool ok = (d == 2) ? (p > 1.0) : (p >= 0.5 * d);
    if (!ok) throw DomainError("exponent p violates the dimension condition");
    if (h < 1e3 || h > 1e8) {
        throw RegimeUnsupported("coupling outside the supported double-precision range [1e3, 1e8]");
    }
}

Windows Windows::defaults() { return for_eps(0.02); }

Windows Windows::for_eps(double eps, double alpha0, double gamma_gap) {
    Windows w;
    w.eps = eps;
    w.beta = eps / 2.0;
    w.gamma = w.beta + gamma_gap;
    double a0 = std::min(alpha0, w.beta / 2.0);
    w.alpha_of_h = [a0](double h) {
        double ll = std::log(std::log(h + 15.154262241479262));
        return std::min(a0, 1.0 / ll);
    };
    double be = w.beta, ga = w.gamma;
    w.g_of_h = [be, ga](double h) { return std::min(1.0, 2.0 * std::pow(h, be - ga)); };
    w.w_of_h = [](double) { return 1.0; };
    return w;
}

Windows Windows::cone(double gamma, double beta) {
    Windows w;
    w.beta = beta;
    w.gamma = gamma;
    w.eps = 2.0 * beta;
    if (!(0.75 * gamma < beta && beta < gamma && gamma < 0.5)) {
        throw WindowInvalid("cone schedule needs 3 gamma/4 < beta < gamma < 1/2");
    }
    w.alpha_of_h = [gamma](double) { return std::min(0.01, 0.49 * gamma / 2.0); };
    double be = beta, ga = gamma;
    // slow decay keeps the cone quantity growing; still obeys the floor
    w.g_of_h = [be, ga](double h) {
        double floor2 = 2.0 * std::pow(h, be - ga);
        double slow = 2.2 / std::sqrt(std::log(h));
        return std::min(1.0, std::max(floor2, slow));
    };
    w.w_of_h = [](double) { return 1.0; };
    return w;
}

void Windows::validate(double h) const {
    double a = alpha_of_h(h);
    if (!(0.0 < a && a < beta && beta < gamma && gamma < 0.5)) {
        throw WindowInvalid("need 0 < alpha(h) < beta < gamma < 1/2");
    }
    double g = g_of_h(h);
    if (!(g > 0.0 && g <= 1.0)) throw WindowInvalid("g(h) must lie in (0, 1]");
    if (g < 2.0 * std::pow(h, beta - gamma) * (1.0 - 1e-12)) {
        throw WindowInvalid("g(h) violates the floor 2 h^{beta-gamma}");
    }
    if (w_of_h && w_of_h(h) < 1.0) throw WindowInvalid("w(h) must be >= 1");
}

double nu_of(long ell, int d) {
    if (ell < 0 || d < 1) throw DomainError("nu_of needs ell >= 0, d >= 1");
    return static_cast<double>(ell) + 0.5 * d - 1.0;
}

namespace {

double binom(long n, long k) {
    if (n < 0 || k < 0 || n < k) return 0.0;
    double r = 1.0;
    for (long i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}

}  // namespace

double multiplicity(long ell, int d) {
    if (ell < 0 || d < 2) throw DomainError("multiplicity needs ell >= 0, d >= 2");
    return binom(d + ell - 1, d - 1) - binom(d + ell - 3, d - 1);
}

long IndexSets::j_lo(long ell) const { return ceil_of(static_cast<double>(ell) / g); }
long IndexSets::lt_hi(long j) const { return floor_of(static_cast<double>(j) * g); }

unsigned long long IndexSets::lattice_count() const {
    if (ell_empty()) return 0;
    unsigned long long total = 0;
    for (long l = ell_lo; l <= ell_hi; ++l) {
        long lo = j_lo(l);
        if (lo <= j_hi) total += static_cast<unsigned long long>(j_hi - lo + 1);
    }
    return total;
}

IndexSets index_sets(double h, const Windows& w) {
    w.validate(h);
    IndexSets s;
    double a = w.alpha_of_h(h);
    s.g = w.g_of_h(h);
    s.ell_lo = ceil_of(std::pow(h, a + 0.5));
    s.ell_hi = floor_of(std::pow(h, w.beta + 0.5));
    if (s.ell_lo < 1) s.ell_lo = 1;
    s.j_hi = floor_of(std::pow(h, w.gamma + 0.5));
    s.jt_lo = ceil_of(8.0 * std::pow(h, a + 0.5) / s.g);
    s.jt_hi = floor_of(std::pow(h, w.beta + 0.5) / s.g);
    s.lt_lo = ceil_of(std::pow(h, a + 0.5));
    return s;
}

cplx initial_guess(double nu, long j, double h) {
    if (j < 1 || !(h > 0.0)) throw DomainError("initial_guess needs j >= 1, h > 0");
    double re = 2.0 * pi * j + nu * pi / 2.0 + pi / 2.0;
    double im = std::log(std::sqrt(h) / (4.0 * pi * j));
    return {re, im};
}

StageResult aux_zero_with(const PhaseModel& phase, double nu, long j, double h, cplx guess) {
    const cplx rhs = pi / 4.0 + 2.0 * pi * static_cast<double>(j) +
                     kI * std::log(std::sqrt(h) / (4.0 * pi * j));
    StageResult out;
    cplx z = guess;
    auto fval = [&](cplx zz) {
        auto [th, thp] = phase(zz);
        return std::make_pair(th - rhs, thp);
    };
    auto [f, fp] = fval(z);
    double af = std::abs(f);
    // polish well below the acceptance tolerance; quadratic steps are cheap
    const double floor_target = 64.0 * 2.2e-16 * (1.0 + std::abs(guess));
    for (int it = 0; it < kMaxNewton && af > floor_target; ++it) {
        out.iterations = it + 1;
        cplx step = -f / fp;
        cplx znew = z + step;
        cplx fnew = f;
        cplx fpnew = fp;
        double afnew = af;
        for (int half = 0; half < 10; ++half) {
            auto [fn, fpn] = fval(znew);
            afnew = std::abs(fn);
            fnew = fn;
            fpnew = fpn;
            if (afnew < af) break;
            step *= 0.5;
            znew = z + step;
        }
        if (afnew >= af) break;  // stalled at the attainable floor
        z = znew;
        f = fnew;
        fp = fpnew;
        af = afnew;
        if (std::abs(z - guess) >= nu) {
            throw EscapedBall("phase-equation iterate left the radius-nu ball");
        }
    }
    out.m = z;
    out.residual = af;
    out.converged = af <= kStage2Tol;
    out.within_half_ball = std::abs(z - guess) < 0.5 * nu;
    if (!out.converged) throw NoConvergence("phase-equation Newton hit the iteration cap");
    return out;
}

StageResult aux_zero(double nu, long j, double h, cplx guess) {
    PhaseModel phase = [nu](cplx z) {
        auto ex = specfun::phase_theta_explicit(nu, z);
        if (!ex) {
            auto pv = specfun::phase_theta(specfun::BesselOrder{nu}, z);
            return std::make_pair(pv.theta, pv.theta_prime);
        }
        return std::make_pair(ex->theta, ex->theta_prime);
    };
    return aux_zero_with(phase, nu, j, h, guess);
}

cplx char_residual(cplx m, double nu, double h, double* est_err) {
    if (std::abs(m) == 0.0) throw DomainError("m = 0");
    cplx k = std::sqrt(kI * h + m * m);
    double e1 = 0.0, e2 = 0.0;
    cplx jr = specfun::ratio_dj_j(nu, m, &e1);
    cplx hr = specfun::ratio_h1_dh1(nu, k, &e2);
    if (est_err) *est_err = e1 + e2;
    return k / m - jr * hr;
}

namespace {

// derivative of the characteristic residual with respect to m (all pieces
// satisfy the Bessel ODE, so the log-derivatives close on themselves)
cplx char_residual_prime(cplx m, double nu, double h) {
    cplx k = std::sqrt(kI * h + m * m);
    cplx jr = specfun::ratio_dj_j(nu, m);
    cplx hr = specfun::ratio_h1_dh1(nu, k);
    cplx djr = -(1.0 - nu * nu / (m * m)) - jr / m - jr * jr;
    cplx dhr = 1.0 + hr / k + (1.0 - nu * nu / (k * k)) * hr * hr;
    cplx dkdm = m / k;
    return -kI * h / (k * m * m) - djr * hr - jr * dhr * dkdm;
}

}  // namespace

EigenvalueRecord solve_mode(const Config& cfg, long ell, long j) {
    EigenvalueRecord rec;
    rec.mode = ModeIndex{ell, j, nu_of(ell, cfg.d)};
    double nu = rec.mode.nu;
    double h = cfg.h;
    rec.multiplicity = multiplicity(ell, cfg.d);
    rec.m0 = initial_guess(nu, j, h);
    try {
        StageResult s2 = aux_zero(nu, j, h, rec.m0);
        rec.m1 = s2.m;
        rec.stage2_half_ball = s2.within_half_ball;

        cplx m = rec.m1;
        cplx f = char_residual(m, nu, h);
        double af = std::abs(f);
        bool converged = false;
        for (int it = 0; it < kMaxNewton && af > 1e-14; ++it) {
            cplx fp = char_residual_prime(m, nu, h);
            cplx step = -f / fp;
            cplx mnew = m + step;
            double afnew = af;
            cplx fnew = f;
            for (int half = 0; half < 10; ++half) {
                fnew = char_residual(mnew, nu, h);
                afnew = std::abs(fnew);
                if (afnew < af) break;
                step *= 0.5;
                mnew = m + step;
            }
            if (afnew >= af) break;  // attainable floor
            m = mnew;
            f = fnew;
            af = afnew;
            if (std::abs(m - rec.m1) >= 2.0) break;  // left B_2(m1)
        }
        converged = af <= kStage3Tol;
        rec.m = m;
        rec.residual = af;
        rec.k = std::sqrt(kI * h + m * m);
        rec.lambda = kI * h + m * m;
        if (!converged || std::abs(m - rec.m1) >= 2.0) {
            rec.status = converged ? ModeStatus::escaped_ball : ModeStatus::no_convergence;
            rec.message = converged ? "root left B_2(m1)" : "characteristic Newton stalled";
            return rec;
        }
        bool adm = (m.real() > 0.0) && (rec.lambda.imag() > 0.0);
        rec.admissible = adm;
        rec.status = adm ? ModeStatus::accepted : ModeStatus::inadmissible;
        if (!adm) rec.message = "Im(i h + m^2) <= 0 or Re m <= 0";
    } catch (const Error& e) {
        rec.status = ModeStatus::failed;
        rec.message = e.what();
        if (dynamic_cast<const EscapedBall*>(&e)) rec.status = ModeStatus::escaped_ball;
        if (dynamic_cast<const NoConvergence*>(&e)) rec.status = ModeStatus::no_convergence;
    }
    return rec;
}

bool bound_check(const EigenvalueRecord& rec, double h) {
    double im = rec.lambda.imag();
    double mod = std::abs(rec.lambda);
    double lo = pi * static_cast<double>(rec.mode.j);
    double hi = 4.0 * pi * static_cast<double>(rec.mode.j);
    return (0.5 * h <= im) && (im <= h) && (lo * lo <= mod) && (mod <= hi * hi);
}

PhaseDiagnostics diagnostics_xi_err(cplx m, double nu, long j, double h) {
    PhaseDiagnostics d;
    cplx k = std::sqrt(kI * h + m * m);
    auto parts = specfun::phase_parts(nu, m);
    cplx q = specfun::ratio_dj_j(nu, m) * specfun::ratio_h1_dh1(nu, k);
    cplx t2 = parts.tan_theta * parts.tan_theta;
    d.xi = (t2 + q * q) / (1.0 + t2);
    d.err = -1.0 + (m / (4.0 * pi * j)) * parts.exp_over_cos * std::sqrt(1.0 - d.xi);

    auto ex = specfun::phase_theta_explicit(nu, m);
    cplx theta = ex ? ex->theta : specfun::phase_theta(specfun::BesselOrder{nu}, m).theta;
    d.tow_residual = kI * (theta - pi / 4.0 - 2.0 * pi * static_cast<double>(j)) -
                     std::log(4.0 * pi * j / std::sqrt(h)) - std::log(1.0 + d.err);
    return d;
}

namespace {

// contiguous blocks covering [lo, hi]: representative = midpoint, weight = size
std::vector<std::pair<long, double>> block_sample(long lo, long hi, long cap) {
    std::vector<std::pair<long, double>> out;
    if (lo > hi) return out;
    long n = hi - lo + 1;
    long blocks = std::min<long>(n, std::max<long>(1, cap));
    long q = n / blocks, r = n % blocks;
    long pos = lo;
    for (long b = 0; b < blocks; ++b) {
        long size = q + (b < r ? 1 : 0);
        out.emplace_back(pos + size / 2, static_cast<double>(size));
        pos += size;
    }
    return out;
}

}  // namespace

std::vector<EigenvalueRecord> enumerate_spectrum(const Config& cfg, const Windows& w,
                                                 const EnumOptions& opt) {
    cfg.validate();
    IndexSets s = index_sets(cfg.h, w);
    std::vector<std::pair<ModeIndex, double>> plan;  // (mode, weight)
    if (!s.ell_empty()) {
        auto ells = block_sample(s.ell_lo, s.ell_hi, opt.ell_samples);
        for (auto [ell, wl] : ells) {
            long jlo = s.j_lo(ell);
            for (auto [j, wj] : block_sample(jlo, s.j_hi, opt.j_samples)) {
                plan.push_back({ModeIndex{ell, j, nu_of(ell, cfg.d)}, wl * wj});
            }
        }
    }
    std::vector<EigenvalueRecord> recs(plan.size());
    int workers = std::max(1, opt.workers);
    auto run = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            recs[i] = solve_mode(cfg, plan[i].first.ell, plan[i].first.j);
            recs[i].weight = plan[i].second;
        }
    };
    if (workers == 1 || plan.size() < 32) {
        run(0, plan.size());
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (plan.size() + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            size_t b = t * chunk, e = std::min(plan.size(), b + chunk);
            if (b >= e) break;
            pool.emplace_back(run, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return recs;
}

}  // namespace ltlab::schrodinger
