#ifndef LTLAB_TESTS_ORACLES_HPP
#define LTLAB_TESTS_ORACLES_HPP

// Extended-precision oracles for the test harness only. Everything here is
// written independently of the library paths it checks: plain series with a
// 50-digit float type, a large-order expansion with exact-rational
// coefficients and doubled truncation order, and derivative ratios assembled
// from order-ladder identities rather than logarithmic derivatives.

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <vector>

namespace oracles {

using bf = boost::multiprecision::cpp_bin_float_50;
using rat = boost::multiprecision::cpp_rational;

struct bfc {
    bf re{0}, im{0};
};

inline bfc operator+(const bfc& a, const bfc& b) { return {a.re + b.re, a.im + b.im}; }
inline bfc operator-(const bfc& a, const bfc& b) { return {a.re - b.re, a.im - b.im}; }
inline bfc operator-(const bfc& a) { return {-a.re, -a.im}; }
inline bfc operator*(const bfc& a, const bfc& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline bfc operator*(const bf& s, const bfc& a) { return {s * a.re, s * a.im}; }
inline bfc operator/(const bfc& a, const bfc& b) {
    bf d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline bfc operator/(const bfc& a, const bf& s) { return {a.re / s, a.im / s}; }
inline bf babs(const bfc& a) { return sqrt(a.re * a.re + a.im * a.im); }
inline bfc bexp(const bfc& z) {
    bf e = exp(z.re);
    return {e * cos(z.im), e * sin(z.im)};
}
inline bfc blog(const bfc& z) { return {log(babs(z)), atan2(z.im, z.re)}; }
inline bfc bsqrt(const bfc& z) {
    bf r = babs(z);
    bf half = atan2(z.im, z.re) / 2;
    bf s = sqrt(r);
    return {s * cos(half), s * sin(half)};
}
inline bfc batan(const bfc& z) {
    const bfc i{bf(0), bf(1)};
    bfc one{bf(1), bf(0)};
    return bfc{bf(0), bf("0.5")} * (blog(one - i * z) - blog(one + i * z));
}
inline bfc from_cplx(std::complex<double> z) { return {bf(z.real()), bf(z.imag())}; }
inline std::complex<double> to_cplx(const bfc& z) {
    return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

// ---------------------------------------------------------------------------
// power series for J (any real order, |z| small enough for 50 digits)

inline bf inv_gamma_bf(const bf& x) {
    if (x > bf("0.5")) return exp(-lgamma(x));
    const bf bpi = boost::math::constants::pi<bf>();
    return exp(lgamma(1 - x)) * sin(bpi * x) / bpi;
}

inline bfc series_j(const bf& nu, const bfc& z, int terms = 220) {
    bfc q = bfc{bf("0.25"), bf(0)} * z * z;
    bfc term{bf(1), bf(0)};
    bfc sum{bf(0), bf(0)};
    for (int k = 0; k < terms; ++k) {
        sum = sum + inv_gamma_bf(nu + 1 + k) * term;
        term = bfc{bf(-1) / bf(k + 1), bf(0)} * term * q;
    }
    bfc half{bf("0.5"), bf(0)};
    return bexp(bfc{nu, bf(0)} * blog(half * z)) * sum;
}

// Y_0 by its logarithmic series (integer-order oracle, small |z|)
inline bfc series_y0(const bfc& z, int terms = 220) {
    const bf bpi = boost::math::constants::pi<bf>();
    const bf egamma = boost::math::constants::euler<bf>();
    bfc q = bfc{bf("0.25"), bf(0)} * z * z;
    bfc s{bf(0), bf(0)};
    bf hk{0};
    bfc qk{bf(1), bf(0)};
    bf kfac{1};
    for (int k = 1; k < terms; ++k) {
        hk += bf(1) / k;
        qk = qk * q;
        kfac *= k;
        bf sgn = (k % 2 == 1) ? bf(1) : bf(-1);
        s = s + bfc{sgn * hk / (kfac * kfac), bf(0)} * qk;
    }
    bfc j0 = series_j(bf(0), z, terms);
    bfc lg = blog(bfc{bf("0.5"), bf(0)} * z) + bfc{egamma, bf(0)};
    return bfc{bf(2) / bpi, bf(0)} * (lg * j0 + s);
}

// ---------------------------------------------------------------------------
// large-order expansion with exact-rational polynomial coefficients

inline const std::vector<std::vector<rat>>& u_polys_rat(int order = 42) {
    static const std::vector<std::vector<rat>> table = [order] {
        std::vector<std::vector<rat>> us;
        us.push_back({rat(1)});
        for (int k = 0; k + 1 < order; ++k) {
            const auto& u = us.back();
            std::vector<rat> next(u.size() + 3, rat(0));
            for (size_t pw = 1; pw < u.size(); ++pw) {
                rat d = u[pw] * static_cast<int>(pw);
                next[pw + 1] += d / 2;
                next[pw + 3] -= d / 2;
            }
            for (size_t pw = 0; pw < u.size(); ++pw) {
                next[pw + 1] += u[pw] / (8 * static_cast<int>(pw + 1));
                next[pw + 3] -= 5 * u[pw] / (8 * static_cast<int>(pw + 3));
            }
            us.push_back(std::move(next));
        }
        return us;
    }();
    return table;
}

inline bfc poly_eval(const std::vector<rat>& c, const bfc& x) {
    bfc acc{bf(0), bf(0)};
    for (size_t pw = c.size(); pw-- > 0;) {
        acc = acc * x + bfc{bf(numerator(c[pw])) / bf(denominator(c[pw])), bf(0)};
    }
    return acc;
}

// H1 (sign=+1) or H2 (sign=-1) at real order nu > 0, |z/nu| away from 1
inline bfc debye_hankel(const bf& nu, const bfc& z, int sign, int order = 40) {
    const bf bpi = boost::math::constants::pi<bf>();
    bfc w = z / bfc{nu, bf(0)};
    bfc S = bsqrt(w * w - bfc{bf(1), bf(0)});
    bfc xi = bfc{nu, bf(0)} * (S - batan(S)) - bfc{bpi / 4, bf(0)};
    bfc it = bfc{bf(0), bf(sign)} / S;
    bfc sum{bf(0), bf(0)};
    bf nupow{1};
    const auto& us = u_polys_rat();
    bf prev_mag{1e30};
    for (int k = 0; k < order; ++k) {
        bf sgn = (k % 2 == 0) ? bf(1) : bf(-1);
        bfc term = bfc{sgn / nupow, bf(0)} * poly_eval(us[k], it);
        bf mag = babs(term);
        if (k > 3 && mag > prev_mag) break;
        sum = sum + term;
        prev_mag = mag;
        nupow *= nu;
    }
    bfc pref = bsqrt(bfc{bf(2), bf(0)} / (bfc{bpi * nu, bf(0)} * S));
    return pref * bexp(bfc{bf(0), bf(sign)} * xi) * sum;
}

inline bfc debye_j(const bf& nu, const bfc& z) {
    return bfc{bf("0.5"), bf(0)} * (debye_hankel(nu, z, +1) + debye_hankel(nu, z, -1));
}

// amplitude-phase expansion at doubled truncation order (H1, small order)
inline bfc ap_h1(const bf& nu, const bfc& z, int order = 28) {
    const bf bpi = boost::math::constants::pi<bf>();
    bf mu = 4 * nu * nu;
    bfc sum{bf(1), bf(0)};
    bf ak{1};
    bfc zk{bf(1), bf(0)};
    bfc ipow{bf(1), bf(0)};
    const bfc i{bf(0), bf(1)};
    bf prev{1e30};
    for (int k = 1; k < order; ++k) {
        ak *= (mu - (2 * k - 1) * (2 * k - 1)) / (8 * k);
        zk = zk * z;
        ipow = ipow * i;
        bfc term = ipow * bfc{ak, bf(0)} / zk;
        bf mag = babs(term);
        if (k > 3 && mag > prev) break;
        sum = sum + term;
        prev = mag;
    }
    bfc om = z - bfc{(nu / 2 + bf("0.25")) * bpi, bf(0)};
    bfc pref = bsqrt(bfc{bf(2), bf(0)} / (bfc{bpi, bf(0)} * z));
    return pref * bexp(i * om) * sum;
}

// ---------------------------------------------------------------------------
// characteristic residual re-evaluation: derivative ratios assembled from the
// order ladder C'_nu = (nu/z) C_nu - C_{nu+1}, values from the expansion above

inline std::complex<double> char_residual(std::complex<double> m, double nu, double h) {
    bfc mm = from_cplx(m);
    bfc k = bsqrt(bfc{bf(0), bf(h)} + mm * mm);
    bf bnu(nu);
    bfc jn = debye_j(bnu, mm);
    bfc jn1 = debye_j(bnu + 1, mm);
    bfc jr = (bfc{bnu, bf(0)} / mm) - jn1 / jn;  // J'/J
    bfc hn = debye_hankel(bnu, k, +1);
    bfc hn1 = debye_hankel(bnu + 1, k, +1);
    bfc hr = (bfc{bnu, bf(0)} / k) - hn1 / hn;  // H'/H
    bfc res = k / mm - jr / hr;
    return to_cplx(res);
}

}  // namespace oracles

#endif
