#include "ltlab/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace ltlab::specfun {

namespace {

constexpr double kTol = 1e-11;      // default evaluation target
constexpr double kHardCap = 1e-6;   // beyond this, refuse the regime
constexpr double kEps = 2.220446049250313e-16;
constexpr double kEulerGamma = 0.5772156649015328606;

const cplx kI{0.0, 1.0};

// ---------------------------------------------------------------------------
// scaled arithmetic helpers

SpecialValue make_scaled(cplx value, double ls, double err) {
    // normalize so |value| is O(1); keeps later collapses safe
    double av = std::abs(value);
    if (av > 0.0 && std::isfinite(av)) {
        double shift = std::log(av);
        value /= av;
        ls += shift;
    }
    return SpecialValue{value, ls, err};
}

}  // namespace

SpecialValue scaled_add(const SpecialValue& a, const SpecialValue& b) {
    if (std::abs(a.value) == 0.0) return b;
    if (std::abs(b.value) == 0.0) return a;
    double ls = std::max(a.log_scale, b.log_scale);
    cplx va = a.value * std::exp(a.log_scale - ls);
    cplx vb = b.value * std::exp(b.log_scale - ls);
    cplx s = va + vb;
    double big = std::abs(va) + std::abs(vb);
    double cancel = (std::abs(s) > 0.0) ? big / std::abs(s) : 1.0 / kEps;
    double err = (a.est_err + b.est_err + kEps) * cancel;
    return make_scaled(s, ls, err);
}

SpecialValue BesselQuad::h1() const {
    if (has_direct_h1) return h1_direct;
    SpecialValue iy = y;
    iy.value *= kI;
    return scaled_add(j, iy);
}

SpecialValue BesselQuad::h1p() const {
    if (has_direct_h1) return h1p_direct;
    SpecialValue iyp = yp;
    iyp.value *= kI;
    return scaled_add(jp, iyp);
}

SpecialValue BesselQuad::h2() const {
    if (has_direct_h1) return h2_direct;
    SpecialValue iy = y;
    iy.value *= -kI;
    return scaled_add(j, iy);
}

SpecialValue BesselQuad::h2p() const {
    if (has_direct_h1) return h2p_direct;
    SpecialValue iyp = yp;
    iyp.value *= -kI;
    return scaled_add(jp, iyp);
}

namespace {

// ---------------------------------------------------------------------------
// u_k polynomials of the large-order expansion, generated once from
//   u_{k+1}(t) = t^2 (1 - t^2) u_k'(t)/2 + (1/8) \int_0^t (1 - 5 s^2) u_k(s) ds
// Stored dense by power of t.

constexpr int kDebyeOrder = 21;

const std::vector<std::vector<double>>& u_polys() {
    static const std::vector<std::vector<double>> table = [] {
        std::vector<std::vector<double>> us;
        us.push_back({1.0});
        for (int k = 0; k + 1 < kDebyeOrder; ++k) {
            const auto& u = us.back();
            std::vector<double> next(u.size() + 3, 0.0);
            for (size_t p = 1; p < u.size(); ++p) {
                if (u[p] == 0.0) continue;
                double d = u[p] * static_cast<double>(p);
                next[p + 1] += 0.5 * d;   // t^2/2 * u'
                next[p + 3] -= 0.5 * d;   // -t^4/2 * u'
            }
            for (size_t p = 0; p < u.size(); ++p) {
                if (u[p] == 0.0) continue;
                next[p + 1] += u[p] / (8.0 * (p + 1));          // 1/8 int u
                next[p + 3] -= 5.0 * u[p] / (8.0 * (p + 3));    // -5/8 int s^2 u
            }
            us.push_back(std::move(next));
        }
        return us;
    }();
    return table;
}

cplx poly_eval(const std::vector<double>& c, cplx x) {
    cplx acc{0.0, 0.0};
    for (size_t p = c.size(); p-- > 0;) acc = acc * x + c[p];
    return acc;
}

cplx poly_eval_derivative(const std::vector<double>& c, cplx x) {
    cplx acc{0.0, 0.0};
    for (size_t p = c.size(); p-- > 1;) acc = acc * x + c[p] * static_cast<double>(p);
    return acc;
}

// ---------------------------------------------------------------------------
// A scaled representation of the pair (H1, H2) plus logarithmic derivatives.
// actual H1 = hp * exp(lsp), H2 = hm * exp(lsm).

struct HankelPair {
    cplx hp, hm;
    double lsp = 0.0, lsm = 0.0;
    cplx dlp, dlm;       // H1'/H1, H2'/H2
    cplx base;           // branch-exact phase base (xi or omega)
    cplx base_prime;
    cplx sig_ratio;      // Sigma+/Sigma-
    cplx sig_dlog_diff;  // Sigma+'/Sigma+ - Sigma-'/Sigma-
    double err = 1.0;
    bool ok = false;
};

// Large-order (uniform in z/nu) expansion; needs nu >= ~25 and |z/nu|
// bounded away from 1. Self-reports attainable accuracy through err.
HankelPair debye_pair(double nu, cplx z) {
    HankelPair out;
    cplx w = z / nu;
    cplx S = std::sqrt(w * w - 1.0);
    cplx t = 1.0 / S;
    cplx xi = nu * (S - std::atan(S)) - pi / 4.0;
    cplx pref = std::sqrt(2.0 / (pi * nu * S));

    const auto& us = u_polys();
    cplx sp{1.0, 0.0}, sm{1.0, 0.0};
    cplx dsp{0.0, 0.0}, dsm{0.0, 0.0};
    cplx tp = kI * t, tm = -kI * t;
    double nupow = 1.0;
    double minterm = 1.0;
    double sign = 1.0;
    cplx dt_dz = -z / (nu * nu * S * S * S);
    for (int k = 1; k < kDebyeOrder; ++k) {
        nupow *= nu;
        sign = -sign;
        cplx up = poly_eval(us[k], tp), um = poly_eval(us[k], tm);
        cplx termp = sign * up / nupow, termm = sign * um / nupow;
        double mag = std::max(std::abs(termp), std::abs(termm));
        if (mag >= minterm && k > 2) break;  // asymptotic tail started growing
        sp += termp;
        sm += termm;
        dsp += sign * poly_eval_derivative(us[k], tp) * kI * dt_dz / nupow;
        dsm += sign * poly_eval_derivative(us[k], tm) * (-kI) * dt_dz / nupow;
        minterm = std::min(minterm, mag);
        // conjugation-symmetric stopping rule
        if (mag < 0.3 * kTol * std::max(std::abs(sp), std::abs(sm))) break;
    }
    if (std::abs(sp) == 0.0 || std::abs(sm) == 0.0) return out;
    out.err = minterm / std::abs(sp) + 8.0 * kEps;

    cplx phase = std::exp(kI * xi.real());
    out.hp = pref * phase * sp;
    out.hm = pref * std::conj(phase) * sm;  // exp(-i Re xi)
    out.lsp = -xi.imag();
    out.lsm = xi.imag();

    cplx dlnpref = -z / (2.0 * (z * z - nu * nu));
    cplx xiprime = nu * S / z;
    out.dlp = dlnpref + kI * xiprime + dsp / sp;
    out.dlm = dlnpref - kI * xiprime + dsm / sm;
    out.base = xi;
    out.base_prime = xiprime;
    out.sig_ratio = sp / sm;
    out.sig_dlog_diff = dsp / sp - dsm / sm;
    out.ok = true;
    return out;
}

// Large-argument expansion in 1/z (small order); terms are
// a_k = prod (4nu^2 - (2m-1)^2) / (8^k k!).
HankelPair ap_pair(double nu, cplx z) {
    HankelPair out;
    cplx om = z - nu * pi / 2.0 - pi / 4.0;
    double mu = 4.0 * nu * nu;

    cplx sp{1.0, 0.0}, sm{1.0, 0.0}, dsp{0.0, 0.0}, dsm{0.0, 0.0};
    double ak = 1.0;
    cplx zk{1.0, 0.0};
    cplx ip{1.0, 0.0};
    double minterm = 1.0;
    for (int k = 1; k < 40; ++k) {
        double f = (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k);
        ak *= f;
        zk *= z;
        ip *= kI;
        cplx termp = ip * ak / zk;
        double mag = std::abs(termp);
        if (mag >= minterm && k > 2) break;
        cplx termm = std::conj(ip) * ak / zk;  // (-i)^k, ak real
        sp += termp;
        sm += termm;
        dsp += termp * (-static_cast<double>(k)) / z;
        dsm += termm * (-static_cast<double>(k)) / z;
        minterm = std::min(minterm, mag);
        if (mag < 0.3 * kTol * std::max(std::abs(sp), std::abs(sm))) break;
        if (ak == 0.0) { minterm = 0.0; break; }  // half-integer order terminates
    }
    if (std::abs(sp) == 0.0 || std::abs(sm) == 0.0) return out;
    out.err = minterm / std::abs(sp) + 8.0 * kEps;

    cplx pref = std::sqrt(2.0 / (pi * z));
    double rephase = z.real() - (nu / 2.0 + 0.25) * pi;
    cplx phase = std::exp(kI * rephase);
    out.hp = pref * phase * sp;
    out.hm = pref * std::conj(phase) * sm;
    out.lsp = -z.imag();
    out.lsm = z.imag();
    out.dlp = -0.5 / z + kI + dsp / sp;
    out.dlm = -0.5 / z - kI + dsm / sm;
    out.base = om;
    out.base_prime = cplx{1.0, 0.0};
    out.sig_ratio = sp / sm;
    out.sig_dlog_diff = dsp / sp - dsm / sm;
    out.ok = true;
    return out;
}

BesselQuad quad_from_pair(const HankelPair& p) {
    double ls = std::max(p.lsp, p.lsm);
    cplx vp = p.hp * std::exp(p.lsp - ls);
    cplx vm = p.hm * std::exp(p.lsm - ls);
    auto combine = [&](cplx a, cplx b) {
        cplx s = a + b;
        double big = std::abs(a) + std::abs(b);
        double cancel = (std::abs(s) > 0.0) ? big / std::abs(s) : 1.0 / kEps;
        return make_scaled(s, ls, p.err * cancel + kEps * cancel);
    };
    BesselQuad q;
    q.j = combine(0.5 * vp, 0.5 * vm);
    q.jp = combine(0.5 * vp * p.dlp, 0.5 * vm * p.dlm);
    q.y = combine(-0.5 * kI * vp, 0.5 * kI * vm);
    q.yp = combine(-0.5 * kI * vp * p.dlp, 0.5 * kI * vm * p.dlm);
    q.h1_direct = make_scaled(p.hp, p.lsp, p.err + kEps);
    q.h1p_direct = make_scaled(p.hp * p.dlp, p.lsp, p.err + 2 * kEps);
    q.h2_direct = make_scaled(p.hm, p.lsm, p.err + kEps);
    q.h2p_direct = make_scaled(p.hm * p.dlm, p.lsm, p.err + 2 * kEps);
    q.has_direct_h1 = true;
    return q;
}

// ---------------------------------------------------------------------------
// power series (|z| <= ~15, any order): J_nu with either sign of nu.
// 1/Gamma evaluated through the reflection formula for the negative range.

double inv_gamma(double x) {
    if (x > 0.5) return std::exp(-std::lgamma(x));
    return std::exp(std::lgamma(1.0 - x)) * std::sin(pi * x) / pi;
}

SpecialValue series_j(double nu, cplx z) {
    cplx q = 0.25 * z * z;
    cplx term{1.0, 0.0};
    cplx sum{0.0, 0.0};
    double peak = 0.0, last = 0.0;
    int used = 0;
    for (int k = 0; k < 400; ++k) {
        cplx contrib = term * inv_gamma(nu + 1.0 + k);
        sum += contrib;
        last = std::abs(contrib);
        peak = std::max(peak, last);
        used = k + 1;
        if (k > 2 && last < 1e-18 * (std::abs(sum) + peak) * 1e-2) break;
        term *= -q / static_cast<double>(k + 1);
    }
    // prefactor (z/2)^nu in scaled form
    cplx lzh = std::log(0.5 * z);  // principal
    double ls = nu * lzh.real();
    cplx val = std::exp(kI * (nu * lzh.imag())) * sum;
    // accumulation noise compounds against the peak term
    double err = kEps * (2.0 + 0.25 * used) * (peak + std::abs(sum)) /
                     std::max(std::abs(sum), 1e-300) +
                 kEps;
    return make_scaled(val, ls, err);
}

// Y_0 and Y_1 by their logarithmic series; basis for the integer-order ladder.
void series_y01(cplx z, const SpecialValue& j0, const SpecialValue& j1, SpecialValue& y0,
                SpecialValue& y1) {
    cplx q = 0.25 * z * z;
    cplx lg = std::log(0.5 * z) + kEulerGamma;

    cplx s0{0.0, 0.0};
    double hk = 0.0;
    cplx qk{1.0, 0.0};
    double kfac = 1.0;
    double peak0 = 0.0;
    for (int k = 1; k < 400; ++k) {
        hk += 1.0 / k;
        qk *= q;
        kfac *= k;
        double sgn = (k % 2 == 1) ? 1.0 : -1.0;
        cplx contrib = sgn * hk * qk / (kfac * kfac);
        s0 += contrib;
        peak0 = std::max(peak0, std::abs(contrib));
        if (std::abs(contrib) < 1e-20 * (std::abs(s0) + 1.0)) break;
    }
    cplx v0 = (2.0 / pi) * (lg * j0.full() + s0);
    y0 = make_scaled(v0, 0.0,
                     kEps * (peak0 + std::abs(lg) * std::abs(j0.full()) + std::abs(v0)) /
                             std::max(std::abs(v0), 1e-300) +
                         j0.est_err);

    cplx s1{0.0, 0.0};
    double ha = 0.0, hb = 1.0;  // H_k, H_{k+1}
    qk = cplx{1.0, 0.0};
    double ka = 1.0, kb = 1.0;  // k!, (k+1)!
    double peak1 = 0.0;
    for (int k = 0; k < 400; ++k) {
        double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        cplx contrib = sgn * (ha + hb) * qk / (ka * kb);
        s1 += contrib;
        peak1 = std::max(peak1, std::abs(contrib));
        if (k > 2 && std::abs(contrib) < 1e-20 * (std::abs(s1) + 1.0)) break;
        qk *= q;
        ka *= (k + 1.0);
        kb *= (k + 2.0);
        ha += 1.0 / (k + 1.0);
        hb += 1.0 / (k + 2.0);
    }
    cplx v1 = (2.0 / pi) * lg * j1.full() - 2.0 / (pi * z) - (0.5 * z / pi) * s1;
    y1 = make_scaled(v1, 0.0,
                     kEps * (peak1 * std::abs(0.5 * z / pi) + std::abs(v1) + 1.0) /
                             std::max(std::abs(v1), 1e-300) +
                         j1.est_err);
}

BesselQuad quad_series(double nu, cplx z) {
    BesselQuad q;
    SpecialValue jn = series_j(nu, z);
    SpecialValue jn1 = series_j(nu + 1.0, z);
    q.j = jn;
    // J'_nu = (nu/z) J_nu - J_{nu+1}
    SpecialValue t1 = jn;
    t1.value *= nu / z;
    SpecialValue t2 = jn1;
    t2.value = -t2.value;
    q.jp = scaled_add(t1, t2);

    long nearest = std::lround(nu);
    bool is_integer = std::abs(nu - static_cast<double>(nearest)) < 1e-12;
    if (is_integer) {
        SpecialValue j0 = (nearest == 0) ? jn : series_j(0.0, z);
        SpecialValue j1 = (nearest == 1) ? jn : series_j(1.0, z);
        SpecialValue y0, y1;
        series_y01(z, j0, j1, y0, y1);
        // ladder up to nu and nu+1 with rescaling
        SpecialValue ya = y0, yb = y1;
        for (long n = 1; n <= nearest; ++n) {
            SpecialValue t = yb;
            t.value *= 2.0 * static_cast<double>(n) / z;
            SpecialValue ma = ya;
            ma.value = -ma.value;
            SpecialValue yn = scaled_add(t, ma);
            yn.est_err = ya.est_err + yb.est_err + kEps * 4;
            ya = yb;
            yb = yn;
        }
        q.y = ya;
        SpecialValue u1 = ya;
        u1.value *= nu / z;
        SpecialValue u2 = yb;
        u2.value = -u2.value;
        q.yp = scaled_add(u1, u2);
    } else {
        if (std::abs(nu - static_cast<double>(nearest)) < 1e-6) {
            throw RegimeUnsupported(
                "Y_nu with non-integer nu within 1e-6 of an integer at small |z| loses all "
                "precision in the reflection formula");
        }
        double s = std::sin(nu * pi), c = std::cos(nu * pi);
        SpecialValue jm = series_j(-nu, z);
        SpecialValue jm1 = series_j(-nu - 1.0, z);
        // Y_nu = (J_nu cos(nu pi) - J_{-nu}) / sin(nu pi)
        SpecialValue a = jn;
        a.value *= c;
        SpecialValue b = jm;
        b.value = -b.value;
        q.y = scaled_add(a, b);
        q.y.value /= s;
        q.y.est_err += kEps / std::abs(s);
        // Y_{nu+1} = (J_{nu+1} cos(nu pi) + J_{-nu-1}) / sin(nu pi)
        SpecialValue a2 = jn1;
        a2.value *= c;
        SpecialValue y_next = scaled_add(a2, jm1);
        y_next.value /= s;
        y_next.est_err += kEps / std::abs(s);
        SpecialValue u1 = q.y;
        u1.value *= nu / z;
        SpecialValue u2 = y_next;
        u2.value = -u2.value;
        q.yp = scaled_add(u1, u2);
    }
    return q;
}

// ---------------------------------------------------------------------------
// CF1 (Lentz): J'_nu/J_nu. Converges for any z != 0; iteration count grows
// with |z| so callers keep |z| moderate on this path.

cplx cf1_ratio(double nu, cplx z, bool* ok) {
    const double tiny = 1e-290;
    cplx f = nu / z;
    if (std::abs(f) < tiny) f = tiny;
    cplx C = f, D{0.0, 0.0};
    *ok = false;
    long imax = 20000 + static_cast<long>(8.0 * std::abs(z));
    for (long k = 1; k <= imax; ++k) {
        cplx b = 2.0 * (nu + k) / z;
        cplx a{-1.0, 0.0};
        D = b + a * D;
        if (std::abs(D) < tiny) D = tiny;
        C = b + a / C;
        if (std::abs(C) < tiny) C = tiny;
        D = 1.0 / D;
        cplx delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 4.0 * kEps) {
            *ok = true;
            break;
        }
    }
    // CF computes J_{nu}/J_{nu-1}-style tail; recover J'/J = nu/z - J_{nu+1}/J_nu
    return f;
}

// order-recurrence chain: amplitude-phase base at mu = frac(nu) (and mu+1 via
// the derivative), Y ladder upward, J by backward ratio recursion seeded by CF1.
BesselQuad quad_chain(double nu, cplx z) {
    double mu = nu - std::floor(nu);
    long K = static_cast<long>(std::floor(nu));
    HankelPair base = ap_pair(mu, z);
    if (!base.ok || base.err > kHardCap) {
        throw RegimeUnsupported("no convergent representation at the chain base order");
    }
    BesselQuad bq = quad_from_pair(base);
    if (K == 0) return bq;

    // Y ladder: need Y_mu ... Y_{nu+1}
    SpecialValue ya = bq.y;
    // Y_{mu+1} = (mu/z) Y_mu - Y'_mu
    SpecialValue t = bq.y;
    t.value *= mu / z;
    SpecialValue t2 = bq.yp;
    t2.value = -t2.value;
    SpecialValue yb = scaled_add(t, t2);
    for (long n = 1; n <= K; ++n) {
        double ord = mu + static_cast<double>(n);
        SpecialValue u = yb;
        u.value *= 2.0 * ord / z;
        SpecialValue ma = ya;
        ma.value = -ma.value;
        SpecialValue yn = scaled_add(u, ma);
        yn.est_err = std::max(ya.est_err, yb.est_err) + kEps * 2;
        ya = yb;
        yb = yn;
    }
    BesselQuad out;
    out.y = ya;  // Y_nu
    SpecialValue u1 = ya;
    u1.value *= nu / z;
    SpecialValue u2 = yb;
    u2.value = -u2.value;
    out.yp = scaled_add(u1, u2);

    // J by ratios downward from CF1 at order nu
    bool ok = false;
    cplx f = cf1_ratio(nu, z, &ok);
    if (!ok) throw NoConvergence("continued fraction for J'/J did not converge");
    std::vector<cplx> r(static_cast<size_t>(K) + 1);
    r[K] = 1.0 / (f + nu / z);  // J_nu / J_{nu-1}
    for (long n = K - 1; n >= 1; --n) {
        double ord = mu + static_cast<double>(n);
        r[n] = 1.0 / (2.0 * ord / z - r[n + 1]);
    }
    SpecialValue jn = bq.j;  // J_mu
    for (long n = 1; n <= K; ++n) {
        jn.value *= r[n];
        double av = std::abs(jn.value);
        if (av < 1e-200 || av > 1e200) {
            jn.log_scale += std::log(av);
            jn.value /= av;
        }
    }
    jn.est_err = bq.j.est_err + kEps * static_cast<double>(K) + 1e-14;
    out.j = jn;
    SpecialValue jp = jn;
    jp.value *= f;
    out.jp = jp;
    return out;
}

bool debye_applicable(double nu, cplx z) { return nu >= 25.0 && std::abs(z) >= 1.32 * nu; }

HankelPair best_pair(double nu, cplx z) {
    HankelPair p;
    if (debye_applicable(nu, z)) {
        p = debye_pair(nu, z);
        if (p.ok && p.err <= 2e-11) return p;
    }
    if (std::abs(z) > 15.0) {
        HankelPair q = ap_pair(nu, z);
        if (q.ok && (!p.ok || q.err < p.err)) return q;
    }
    return p;
}

}  // namespace

BesselQuad bessel_quad(double nu, cplx z) {
    if (!finite(z) || !std::isfinite(nu)) throw DomainError("non-finite argument");
    if (nu < 0.0) throw DomainError("order must be >= 0");
    if (std::abs(z) == 0.0) throw DomainError("z = 0 is singular for Y/H");
    double az = std::abs(z);
    if (az <= 15.0) return quad_series(nu, z);
    if (z.real() <= 0.0) {
        throw RegimeUnsupported("large |z| with Re z <= 0 is outside the supported branch region");
    }

    HankelPair p = best_pair(nu, z);
    if (p.ok && p.err <= 2e-11) return quad_from_pair(p);
    BesselQuad chain = quad_chain(nu, z);
    if (p.ok && p.err < chain.j.est_err) return quad_from_pair(p);
    return chain;
}

namespace {

void check_value(const SpecialValue& v, const char* what) {
    if (!finite(v.value) || !std::isfinite(v.log_scale)) {
        throw RegimeUnsupported(std::string(what) + ": evaluation produced non-finite value");
    }
    if (v.est_err > kHardCap) {
        throw RegimeUnsupported(std::string(what) + ": no method met tolerance (est_err " +
                                std::to_string(v.est_err) + ")");
    }
}

}  // namespace

SpecialValue bessel_j(BesselOrder nu, cplx z) {
    if (nu.nu < 0.0 || !std::isfinite(nu.nu)) throw DomainError("order must be finite and >= 0");
    if (std::abs(z) == 0.0) {
        bool is_int = std::abs(nu.nu - std::round(nu.nu)) < 1e-12;
        if (!is_int) throw DomainError("J_nu(0) with non-integer nu is branch-singular");
        return SpecialValue{cplx{nu.nu == 0.0 ? 1.0 : 0.0, 0.0}, 0.0, 0.0};
    }
    SpecialValue v = (std::abs(z) <= 15.0) ? series_j(nu.nu, z) : bessel_quad(nu.nu, z).j;
    check_value(v, "bessel_j");
    return v;
}

SpecialValue bessel_y(BesselOrder nu, cplx z) {
    SpecialValue v = bessel_quad(nu.nu, z).y;
    check_value(v, "bessel_y");
    return v;
}

SpecialValue hankel1(BesselOrder nu, cplx z) {
    SpecialValue v = bessel_quad(nu.nu, z).h1();
    check_value(v, "hankel1");
    return v;
}

SpecialValue d_bessel_j(BesselOrder nu, cplx z) {
    SpecialValue v = bessel_quad(nu.nu, z).jp;
    check_value(v, "d_bessel_j");
    return v;
}

SpecialValue d_bessel_y(BesselOrder nu, cplx z) {
    SpecialValue v = bessel_quad(nu.nu, z).yp;
    check_value(v, "d_bessel_y");
    return v;
}

SpecialValue d_hankel1(BesselOrder nu, cplx z) {
    SpecialValue v = bessel_quad(nu.nu, z).h1p();
    check_value(v, "d_hankel1");
    return v;
}

cplx ratio_dj_j(double nu, cplx z, double* est_err) {
    HankelPair p = best_pair(nu, z);
    if (p.ok && p.err <= 2e-11) {
        double ls = std::max(p.lsp, p.lsm);
        cplx vp = p.hp * std::exp(p.lsp - ls);
        cplx vm = p.hm * std::exp(p.lsm - ls);
        cplx denom = vp + vm;
        if (std::abs(denom) < 1e-280 * (std::abs(vp) + std::abs(vm))) {
            throw PoleProximity("J_nu underflows relative to H1/H2 at this argument");
        }
        if (est_err) *est_err = p.err * (std::abs(vp) + std::abs(vm)) / std::abs(denom);
        return (vp * p.dlp + vm * p.dlm) / denom;
    }
    BesselQuad q = bessel_quad(nu, z);
    if (est_err) *est_err = q.j.est_err + q.jp.est_err;
    cplx jv = q.j.value * std::exp(q.j.log_scale - q.jp.log_scale);
    if (std::abs(jv) == 0.0) throw PoleProximity("J_nu vanished at this argument");
    return q.jp.value / jv;
}

cplx ratio_h1_dh1(double nu, cplx z, double* est_err) {
    HankelPair p = best_pair(nu, z);
    if (p.ok && p.err <= 2e-11) {
        if (est_err) *est_err = p.err;
        if (std::abs(p.dlp) == 0.0) throw PoleProximity("H1' vanished at this argument");
        return 1.0 / p.dlp;
    }
    BesselQuad q = bessel_quad(nu, z);
    SpecialValue h = q.h1(), hp = q.h1p();
    if (est_err) *est_err = h.est_err + hp.est_err;
    cplx hv = hp.value * std::exp(hp.log_scale - h.log_scale);
    if (std::abs(hv) == 0.0) throw PoleProximity("H1' underflowed at this argument");
    return h.value / hv;
}

// ---------------------------------------------------------------------------
// phase function

std::optional<PhaseValue> phase_theta_explicit(double nu, cplx z, double tol) {
    if (std::abs(z) <= 15.0 || z.real() <= 0.0) return std::nullopt;
    HankelPair p = best_pair(nu, z);
    if (!p.ok || p.err > tol) return std::nullopt;
    PhaseValue out;
    out.theta = p.base - 0.5 * kI * std::log(p.sig_ratio);
    out.theta_prime = p.base_prime - 0.5 * kI * p.sig_dlog_diff;
    out.est_err = p.err;
    return out;
}

PhaseParts phase_parts(double nu, cplx z) {
    HankelPair p = best_pair(nu, z);
    PhaseParts out;
    if (p.ok && p.err <= 2e-11) {
        // rho = H1/H2; tan(theta) = -i (rho-1)/(rho+1); e^{i th}/cos = 2 rho/(rho+1)
        cplx rho = (p.hp / p.hm) * std::exp(p.lsp - p.lsm);
        out.tan_theta = -kI * (rho - 1.0) / (rho + 1.0);
        out.exp_over_cos = 2.0 * rho / (rho + 1.0);
        out.est_err = p.err * (1.0 + std::abs(rho)) / std::max(std::abs(rho + 1.0), 1e-30);
        return out;
    }
    BesselQuad q = bessel_quad(nu, z);
    cplx jv = q.j.value * std::exp(q.j.log_scale - q.y.log_scale);
    if (std::abs(jv) == 0.0) throw PoleProximity("J_nu vanished; phase parts singular");
    out.tan_theta = q.y.value / jv;
    out.exp_over_cos = 1.0 + kI * out.tan_theta;
    out.est_err = q.j.est_err + q.y.est_err;
    return out;
}

namespace {

// principal value of theta modulo pi from a quad: -(i/2) Log((J+iY)/(J-iY))
cplx theta_principal(double nu, cplx z, double* err) {
    BesselQuad q = bessel_quad(nu, z);
    SpecialValue h1 = q.h1();
    SpecialValue iy = q.y;
    iy.value *= -kI;
    SpecialValue h2 = scaled_add(q.j, iy);
    cplx lg = std::log(h1.value / h2.value) + (h1.log_scale - h2.log_scale);
    if (err) *err = h1.est_err + h2.est_err;
    return -0.5 * kI * lg;
}

}  // namespace

PhaseValue phase_theta(BesselOrder order, cplx z, const PhaseOptions& opt) {
    double nu = order.nu;
    if (nu < 0.0) throw DomainError("order must be >= 0");
    if (std::abs(z) == 0.0) throw DomainError("phase undefined at z = 0");

    bool inside = (opt.region_a * nu < z.real()) && (std::abs(z) < 2.0 * z.real());
    if (opt.strict_region && !inside) {
        throw OutsideRegion("argument violates the phase analyticity region test");
    }

    if (auto ex = phase_theta_explicit(nu, z)) {
        ex->inside_region = inside;
        return *ex;
    }

    // path tracking from a real anchor where the explicit form is valid
    double anchor = std::max({10.0 * nu, 2.0 * nu * nu + 60.0, 50.0});
    auto ex0 = phase_theta_explicit(nu, cplx{anchor, 0.0});
    if (!ex0) throw RegimeUnsupported("no valid anchor for phase continuation");

    cplx prev = ex0->theta;
    cplx start{anchor, 0.0};
    int segments = std::max(8, static_cast<int>(std::ceil(std::abs(z - start) / 0.5)));
    for (int attempt = 0; attempt < 4; ++attempt) {
        bool ok = true;
        cplx th_prev = ex0->theta;
        double err_acc = ex0->est_err;
        for (int i = 1; i <= segments; ++i) {
            cplx zi = start + (z - start) * (static_cast<double>(i) / segments);
            double perr = 0.0;
            cplx thp = theta_principal(nu, zi, &perr);
            double k = std::round(((th_prev - thp) / pi).real());
            cplx th = thp + k * pi;
            if (std::abs((th - th_prev).real()) > pi / 2.0) {
                ok = false;
                break;
            }
            th_prev = th;
            err_acc = std::max(err_acc, perr);
        }
        if (ok) {
            PhaseValue out;
            out.theta = th_prev;
            out.est_err = err_acc;
            out.inside_region = inside;
            // derivative by central difference, step scaled to |z|
            double hstep = 1e-6 * std::max(1.0, std::abs(z));
            double e1 = 0.0, e2 = 0.0;
            cplx ta = theta_principal(nu, z + hstep, &e1);
            cplx tb = theta_principal(nu, z - hstep, &e2);
            cplx d = (ta - tb) / (2.0 * hstep);
            // principal branches cancel in the difference unless a cut sits between
            if (std::abs(d) > 10.0) d = cplx{1.0, 0.0};
            out.theta_prime = d;
            return out;
        }
        segments *= 4;
    }
    throw BranchAmbiguity("phase jump exceeded pi/2 after maximal path subdivision");
    (void)prev;
}

}  // namespace ltlab::specfun
