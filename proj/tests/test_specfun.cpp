#include <doctest.h>

#include <cmath>
#include <random>

#include "ltlab/specfun.hpp"
#include "oracles.hpp"

using namespace ltlab;
using specfun::BesselOrder;

namespace {

cplx full(const SpecialValue& v) { return v.value * std::exp(v.log_scale); }

double rel(cplx got, cplx ref) { return std::abs(got - ref) / std::abs(ref); }

// reference values pinned with a 40-digit independent evaluation
const cplx kJ5_100_3i{-0.73958409792462551826, 0.30523242156164478221};
const cplx kY0_1{0.088256964215676957983, 0.0};
const cplx kJ0_1_1i{0.9376084768060292766, -0.49652994760912213217};
const cplx kScaledH13_1e4{0.0056408388862320697447, 0.0056429545963002326788};  // e^{-iz} H1_3(z)
const cplx kJ7p_300_2i{0.11437766010928665087, -0.12539369939053937388};
const cplx kJ40_60_15i{-5535.276212762358696832, 286.0790962804801787237};
const cplx kY40_60_15i{-286.0790958949627663756, -5535.276211687130138434};
const cplx kJ1000_20000_10i{58.810901607007629611, 17.647438623126493932};

}  // namespace

TEST_CASE("half-integer closed forms (trivial identities)") {
    cplx z{2.0, 0.0};
    cplx pref = std::sqrt(2.0 / (pi * z));
    CHECK(rel(full(specfun::bessel_j({0.5}, z)), pref * std::sin(z)) < 1e-12);
    CHECK(rel(full(specfun::bessel_y({0.5}, z)), -pref * std::cos(z)) < 1e-12);

    // H1_{1/2}(i) = -i sqrt(2/(pi i)) e^{-1}
    cplx zi{0.0, 1.0};
    cplx ref = -cplx{0, 1} * std::sqrt(2.0 / (pi * zi)) * std::exp(cplx{0, 1} * zi);
    CHECK(rel(full(specfun::hankel1({0.5}, zi)), ref) < 1e-12);
}

TEST_CASE("half-integer cross-check: general path vs closed trig forms") {
    auto closed_j = [](double nu, cplx z) -> cplx {
        cplx pref = std::sqrt(2.0 / (pi * z));
        if (nu == 0.5) return pref * std::sin(z);
        if (nu == 1.5) return pref * (std::sin(z) / z - std::cos(z));
        return pref * ((3.0 / (z * z) - 1.0) * std::sin(z) - 3.0 * std::cos(z) / z);
    };
    auto closed_y = [](double nu, cplx z) -> cplx {
        cplx pref = std::sqrt(2.0 / (pi * z));
        if (nu == 0.5) return -pref * std::cos(z);
        if (nu == 1.5) return -pref * (std::cos(z) / z + std::sin(z));
        return -pref * ((3.0 / (z * z) - 1.0) * std::cos(z) + 3.0 * std::sin(z) / z);
    };
    for (double nu : {0.5, 1.5, 2.5}) {
        for (cplx z : {cplx{3.3, 0.0}, cplx{17.0, 2.0}, cplx{81.4, -3.0}, cplx{44.0, 7.7}}) {
            CHECK(rel(full(specfun::bessel_j({nu}, z)), closed_j(nu, z)) < 1e-10);
            CHECK(rel(full(specfun::bessel_y({nu}, z)), closed_y(nu, z)) < 1e-10);
        }
    }
}

TEST_CASE("series examples against the extended-precision oracle") {
    // J_0(0) = 1, J_nu(0) = 0 for integer nu > 0
    CHECK(full(specfun::bessel_j({0.0}, {0.0, 0.0})) == cplx{1.0, 0.0});
    CHECK(full(specfun::bessel_j({3.0}, {0.0, 0.0})) == cplx{0.0, 0.0});
    CHECK_THROWS_AS(specfun::bessel_j({0.5}, {0.0, 0.0}), DomainError);

    CHECK(rel(full(specfun::bessel_j({5}, {100, 3})), kJ5_100_3i) < 1e-10);
    {
        // same value straight from the runtime oracle
        auto ora = oracles::to_cplx(oracles::debye_j(oracles::bf(5), oracles::from_cplx({100, 3})));
        CHECK(rel(full(specfun::bessel_j({5}, {100, 3})), ora) < 1e-10);
    }
    CHECK(rel(full(specfun::bessel_y({0}, {1, 0})), kY0_1) < 1e-10);
    {
        auto ora = oracles::to_cplx(oracles::series_y0(oracles::from_cplx({1, 0})));
        CHECK(rel(full(specfun::bessel_y({0}, {1, 0})), ora) < 1e-10);
    }
    CHECK(rel(full(specfun::bessel_j({0}, {1, 1})), kJ0_1_1i) < 1e-12);
    {
        auto ora = oracles::to_cplx(oracles::series_j(oracles::bf(0), oracles::from_cplx({1, 1})));
        CHECK(rel(full(specfun::bessel_j({0}, {1, 1})), ora) < 1e-12);
    }
}

TEST_CASE("scaled Hankel at large argument vs asymptotic-series oracle") {
    cplx z{10000.0, 5.0};
    auto h = specfun::hankel1({3}, z);
    // defining identity H1 = J + iY
    auto j = specfun::bessel_j({3}, z);
    auto y = specfun::bessel_y({3}, z);
    cplx h_from_jy = full(j) + cplx{0, 1} * full(y);
    CHECK(rel(full(h), h_from_jy) < 1e-10);

    // frozen reference stores e^{-iz} H; compare scale-robustly
    cplx got_scaled = h.value * std::exp(h.log_scale + z.imag()) * std::exp(-cplx{0, z.real()});
    CHECK(rel(got_scaled, kScaledH13_1e4) < 1e-9);

    // runtime oracle at doubled truncation order
    auto ora = oracles::to_cplx(oracles::ap_h1(oracles::bf(3), oracles::from_cplx(z)));
    cplx got_full = full(h);
    CHECK(rel(got_full, ora) < 1e-9);
}

TEST_CASE("derivatives: identities, closed form, finite differences") {
    // d/dz J_0 = -J_1 at z = 1+1i, two evaluation paths
    cplx z{1.0, 1.0};
    CHECK(rel(full(specfun::d_bessel_j({0}, z)), -full(specfun::bessel_j({1}, z))) < 1e-11);

    // nu = 1/2 closed form derivative
    cplx z2{2.0, 0.0};
    cplx pref = std::sqrt(2.0 / (pi * z2));
    cplx dref = pref * std::cos(z2) - 0.5 * pref / z2 * std::sin(z2);
    CHECK(rel(full(specfun::d_bessel_j({0.5}, z2)), dref) < 1e-11);

    // frozen reference (recurrence form) and the finite-difference oracle
    cplx z3{300.0, 2.0};
    CHECK(rel(full(specfun::d_bessel_j({7}, z3)), kJ7p_300_2i) < 1e-10);
    double step = 1e-5;
    cplx fd = (full(specfun::bessel_j({7}, z3 + step)) - full(specfun::bessel_j({7}, z3 - step))) /
              (2.0 * step);
    CHECK(rel(full(specfun::d_bessel_j({7}, z3)), fd) < 1e-6);

    // recurrence route C' = (C_{nu-1} - C_{nu+1})/2 agrees with the direct value
    for (double nu : {4.0, 11.5}) {
        cplx zz{37.0, 4.0};
        cplx via_rec =
            0.5 * (full(specfun::bessel_j({nu - 1.0}, zz)) - full(specfun::bessel_j({nu + 1.0}, zz)));
        CHECK(rel(full(specfun::d_bessel_j({nu}, zz)), via_rec) < 1e-10);
    }
}

TEST_CASE("middle-regime values (order-chain path)") {
    CHECK(rel(full(specfun::bessel_j({40}, {60, 15})), kJ40_60_15i) < 1e-10);
    CHECK(rel(full(specfun::bessel_y({40}, {60, 15})), kY40_60_15i) < 1e-10);
    CHECK(rel(full(specfun::bessel_j({1000}, {20000, 10})), kJ1000_20000_10i) < 1e-10);
}

TEST_CASE("Wronskian property over random samples") {
    // J Y' - J' Y = 2/(pi z). For |Im z| < 5 the literal difference is checked
    // (beyond that it drowns in roundoff ~ eps e^{2 Im z}); for larger |Im z|
    // the equivalent Hankel-pair form J H' - J' H = +-2i/(pi z) is used with
    // the recessive H taken straight from the pair representation. Draws for
    // which the recessive component is below double noise on every route are
    // redrawn (their internal consistency is covered by the recurrence suite).
    std::mt19937_64 rng(20260811);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int checked = 0, failed = 0, redrawn = 0;
    const int target_samples = 1000;
    for (int i = 0; i < 6000 && checked < target_samples; ++i) {
        double nu;
        double pick = unif(rng);
        if (pick < 0.25) {
            nu = std::floor(20.0 * unif(rng));
        } else if (pick < 0.5) {
            nu = std::floor(19.0 * unif(rng)) + 0.5;
        } else {
            nu = 20.0 * unif(rng);
        }
        double az = std::exp(std::log(0.5) + (std::log(1e4) - std::log(0.5)) * unif(rng));
        double ar = (2.0 * unif(rng) - 1.0) * pi / 3.0;
        cplx z = std::polar(az, ar);
        try {
            auto q = specfun::bessel_quad(nu, z);
            cplx target = 2.0 / (pi * z);
            if (std::abs(z.imag()) < 5.0) {
                SpecialValue t1{q.j.value * q.yp.value, q.j.log_scale + q.yp.log_scale, 0.0};
                SpecialValue t2{-q.jp.value * q.y.value, q.jp.log_scale + q.y.log_scale, 0.0};
                SpecialValue w = specfun::scaled_add(t1, t2);
                double r =
                    std::abs(w.value * std::exp(w.log_scale) - target) / std::abs(target);
                ++checked;
                if (r > 1e-10) ++failed;
            } else if (q.has_direct_h1) {
                bool upper = z.imag() > 0.0;
                SpecialValue h = upper ? q.h1() : q.h2();
                SpecialValue hp = upper ? q.h1p() : q.h2p();
                cplx wv = q.j.value * hp.value * std::exp(q.j.log_scale + hp.log_scale) -
                          q.jp.value * h.value * std::exp(q.jp.log_scale + h.log_scale);
                cplx tgt = (upper ? cplx{0, 1} : cplx{0, -1}) * target;
                ++checked;
                if (std::abs(wv - tgt) / std::abs(tgt) > 1e-10) ++failed;
            } else {
                ++redrawn;
            }
        } catch (const RegimeUnsupported&) {
            ++redrawn;  // near-integer reflection corner; excluded by contract
        }
    }
    CHECK(checked == target_samples);
    CHECK(failed == 0);
    CHECK(redrawn < checked);  // the verifiable domain dominates
}

TEST_CASE("three-term recurrence residual over random samples") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int failed = 0, checked = 0;
    for (int i = 0; i < 1000; ++i) {
        double nu = 0.5 + 19.0 * unif(rng);
        double az = std::exp(std::log(0.5) + (std::log(1e4) - std::log(0.5)) * unif(rng));
        double ar = (2.0 * unif(rng) - 1.0) * pi / 3.0;
        cplx z = std::polar(az, ar);
        try {
            auto a = specfun::bessel_quad(nu - 0.5, z);
            auto b = specfun::bessel_quad(nu + 0.5, z);
            auto c = specfun::bessel_quad(nu + 1.5, z);
            double ls = std::max({a.j.log_scale, b.j.log_scale, c.j.log_scale});
            auto collapse = [&](const SpecialValue& v) {
                return v.value * std::exp(v.log_scale - ls);
            };
            cplx jm = collapse(a.j), jp = collapse(c.j);
            cplx mid = (2.0 * (nu + 0.5) / z) * collapse(b.j);
            // residual relative to the largest participating term
            double scale = std::max({std::abs(jm), std::abs(jp), std::abs(mid)});
            if (scale > 0.0 && std::abs(jm + jp - mid) / scale > 1e-9) ++failed;
            // same identity for Y
            double lsy = std::max({a.y.log_scale, b.y.log_scale, c.y.log_scale});
            cplx ym = a.y.value * std::exp(a.y.log_scale - lsy);
            cplx yp = c.y.value * std::exp(c.y.log_scale - lsy);
            cplx midy = (2.0 * (nu + 0.5) / z) * b.y.value * std::exp(b.y.log_scale - lsy);
            double sy = std::max({std::abs(ym), std::abs(yp), std::abs(midy)});
            if (sy > 0.0 && std::abs(ym + yp - midy) / sy > 1e-9) ++failed;
            ++checked;
        } catch (const RegimeUnsupported&) {
        }
    }
    CHECK(checked > 900);
    CHECK(failed == 0);
}

TEST_CASE("conjugation symmetry") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double nu = 20.0 * unif(rng);
        double az = std::exp(std::log(0.5) + (std::log(5e3) - std::log(0.5)) * unif(rng));
        double ar = (2.0 * unif(rng) - 1.0) * pi / 3.0;
        cplx z = std::polar(az, ar);
        auto a = specfun::bessel_j({nu}, z);
        auto b = specfun::bessel_j({nu}, std::conj(z));
        // compare in scaled form; full() can overflow for large |Im z|
        cplx bv = b.value * std::exp(b.log_scale - a.log_scale);
        CHECK(std::abs(bv - std::conj(a.value)) <= 1e-12 * std::abs(a.value));
    }
}

TEST_CASE("regime agreement in crossover bands") {
    // series vs asymptotic route across |z| ~ 15
    for (double nu : {0.0, 2.0, 7.5}) {
        for (double az : {14.2, 14.9, 15.1, 15.8}) {
            cplx z = std::polar(az, 0.3);
            auto v = specfun::bessel_j({nu}, z);
            auto ora = oracles::series_j(oracles::bf(nu), oracles::from_cplx(z));
            double err = rel(full(v), oracles::to_cplx(ora));
            CHECK(err < 10.0 * std::max(v.est_err, 1e-13));
        }
    }
    // large-order expansion vs order chain: compare against the oracle only
    // where the oracle's own asymptotic floor is far below the tolerances
    // (at nu ~ 25 near w = 1.45 the floor is ~1e-7 for any truncation)
    for (double nu : {60.0, 90.0}) {
        for (double ratio : {1.45, 1.8, 2.5}) {
            cplx z = std::polar(nu * ratio, 0.1);
            auto v = specfun::bessel_j({nu}, z);
            auto jora = oracles::debye_j(oracles::bf(nu), oracles::from_cplx(z));
            CHECK(rel(full(v), oracles::to_cplx(jora)) < 10.0 * std::max(v.est_err, 1e-12));
        }
    }
    // at the expansion edge the dispatcher must re-route and stay accurate
    for (double nu : {26.0, 31.0}) {
        cplx z = std::polar(nu * 1.45, 0.1);
        auto v = specfun::bessel_j({nu}, z);
        CHECK(v.est_err < 1e-10);
    }
}

TEST_CASE("phase function: closed form, tracking, frozen references") {
    // theta_{1/2}(x) = x - pi/2 exactly
    for (double x : {52.0, 73.2, 400.0}) {
        auto ph = specfun::phase_theta({0.5}, {x, 0.0});
        CHECK(std::abs(ph.theta - cplx{x - pi / 2.0, 0.0}) < 1e-10 * x);
    }
    // frozen continued-branch references
    auto p1 = specfun::phase_theta({4}, {60, 0});
    CHECK(std::abs(p1.theta - cplx{53.06269611797966167, 0.0}) < 1e-9);
    auto p2 = specfun::phase_theta({10}, {35, 0});
    CHECK(std::abs(p2.theta - cplx{19.94090038105436995, 0.0}) < 1e-9);
    auto p3 = specfun::phase_theta({4}, {100, 5});
    CHECK(std::abs(p3.theta - cplx{93.00997644591613406, 4.99607136803728731}) < 1e-9);
}

TEST_CASE("phase continuity along a segment") {
    // path z(t) = 60 + t (40 + 5i) in 100 steps: theta' ~ 1, so each step moves
    // theta by ~|dz| ~ 0.403; a branch slip would show up as a ~pi jump
    cplx prev;
    double max_jump = 0.0;
    double step_len = std::abs(cplx{40.0, 5.0}) / 100.0;
    for (int i = 0; i <= 100; ++i) {
        double t = i / 100.0;
        cplx z = cplx{60.0, 0.0} + t * cplx{40.0, 5.0};
        auto ph = specfun::phase_theta({4}, z);
        if (i > 0) max_jump = std::max(max_jump, std::abs(ph.theta - prev));
        prev = ph.theta;
    }
    CHECK(max_jump < 0.45);
    CHECK(max_jump > 0.9 * step_len);  // smooth drift, not noise
    // the finer the walk, the smaller the jump; 300 steps stay below 0.2
    max_jump = 0.0;
    for (int i = 0; i <= 300; ++i) {
        double t = i / 300.0;
        cplx z = cplx{60.0, 0.0} + t * cplx{40.0, 5.0};
        auto ph = specfun::phase_theta({4}, z);
        if (i > 0) max_jump = std::max(max_jump, std::abs(ph.theta - prev));
        prev = ph.theta;
    }
    CHECK(max_jump < 0.2);
}

TEST_CASE("phase at the solver guess has negative imaginary part") {
    // h = 1e6, l = ceil(h^{0.51}), j mid-window: Im theta < 0
    double h = 1e6;
    double nu = std::ceil(std::pow(h, 0.51));  // d = 2
    long j = static_cast<long>(std::ceil(1.3 * nu));
    cplx m0 = cplx{2.0 * pi * j + nu * pi / 2.0 + pi / 2.0,
                   std::log(std::sqrt(h) / (4.0 * pi * j))};
    auto ph = specfun::phase_theta({nu}, m0);
    CHECK(ph.theta.imag() < 0.0);
}

TEST_CASE("phase region test and derivative") {
    specfun::PhaseOptions opt;
    opt.strict_region = true;
    CHECK_THROWS_AS(specfun::phase_theta({10}, {25, 0}, opt), OutsideRegion);
    auto ph = specfun::phase_theta({10}, {25, 0});  // soft: flagged, not thrown
    CHECK_FALSE(ph.inside_region);

    // theta' = leading sqrt(1 - nu^2/z^2) plus small expansion corrections;
    // pin it against a central difference of theta itself
    cplx z0{300, 3};
    auto p = specfun::phase_theta({6}, z0);
    cplx expected = std::sqrt(1.0 - 36.0 / (z0 * z0));
    CHECK(std::abs(p.theta_prime - expected) < 1e-4);
    double hstep = 1e-5;
    cplx fd = (specfun::phase_theta({6}, z0 + hstep).theta -
               specfun::phase_theta({6}, z0 - hstep).theta) /
              (2.0 * hstep);
    CHECK(std::abs(p.theta_prime - fd) < 1e-8);
}

TEST_CASE("scale-free ratios match quad assembly") {
    for (auto [nu, z] : {std::pair<double, cplx>{800.0, {9000.0, -4.0}},
                         {37.0, {90.0, 8.0}},
                         {3.0, {4000.0, 2.0}}}) {
        auto q = specfun::bessel_quad(nu, z);
        cplx jr = specfun::ratio_dj_j(nu, z);
        cplx jr_quad = q.jp.value * std::exp(q.jp.log_scale - q.j.log_scale) / q.j.value;
        CHECK(std::abs(jr - jr_quad) < 1e-8 * (1.0 + std::abs(jr)));
        cplx hr = specfun::ratio_h1_dh1(nu, z);
        auto h1 = q.h1(), h1p = q.h1p();
        cplx hr_quad = h1.value * std::exp(h1.log_scale - h1p.log_scale) / h1p.value;
        CHECK(std::abs(hr - hr_quad) < 1e-8 * (1.0 + std::abs(hr)));
    }
}

TEST_CASE("est_err honesty against the oracle") {
    // points chosen inside the oracle's own deep-validity regions
    for (auto [nu, z] : {std::pair<double, cplx>{12.0, {7.0, 0.0}},
                         {2.5, {11.0, 3.0}},
                         {5.0, {100.0, 3.0}},
                         {60.0, {200.0, 6.0}},
                         {200.0, {700.0, -9.0}}}) {
        auto v = specfun::bessel_j({nu}, z);
        cplx ora = std::abs(z) <= 15.0
                       ? oracles::to_cplx(oracles::series_j(oracles::bf(nu), oracles::from_cplx(z)))
                       : oracles::to_cplx(oracles::debye_j(oracles::bf(nu), oracles::from_cplx(z)));
        CHECK(rel(full(v), ora) <= 50.0 * std::max(v.est_err, 1e-15));
    }
    // at the expansion boundary, est_err must own up to the larger error
    auto edge = specfun::bessel_j({25}, {34.0, 0.0});
    CHECK(rel(full(edge), {-0.14693060980481800, 0.0}) <= 50.0 * std::max(edge.est_err, 1e-15));
}

TEST_CASE("error taxonomy") {
    CHECK_THROWS_AS(specfun::bessel_y({1.0 + 1e-9}, {3.0, 0.0}), RegimeUnsupported);
    CHECK_THROWS_AS(specfun::bessel_y({2}, {0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(specfun::bessel_j({-1.0}, {1.0, 0.0}), DomainError);
}
