// Exponent arithmetic: admissible ranges, interpolation exponents with their
// identities, and the bootstrap schedule.

#include <cmath>
#include <random>
#include <stdexcept>

#include "cns/exponents.hpp"
#include "test_support.hpp"

using namespace cns;
using cns::test::pass;

namespace {

void test_m_range() {
    // threshold p = 25/12: the upper bound lands exactly on m = 1
    {
        const MRange r = admissible_m_range(1.0, 25.0 / 12.0);
        REQUIRE_CLOSE(r.upper - 1.0, 0.0, 1e-12, "upper bound hits 1 at p = 25/12");
    }
    {
        const MRange r = admissible_m_range(1.0, 3.0);
        // 5/8 + 1/2, cross-checked against the gap formula: 14/3 - 9/8 = 85/24
        REQUIRE_CLOSE(r.lower, 9.0 / 8.0, 1e-14, "lower at (1,3)");
        REQUIRE_CLOSE(r.upper, 14.0 / 3.0, 1e-14, "upper at (1,3)");
        REQUIRE_CLOSE(r.upper - r.lower, 85.0 / 24.0, 1e-14, "gap at (1,3)");
        REQUIRE(r.nonempty, "range (1,3) nonempty");
    }
    {
        const MRange r = admissible_m_range(2.0, 2.0);
        REQUIRE_CLOSE(r.lower, 1.0, 1e-14, "lower at (2,2)");
        REQUIRE_CLOSE(r.upper, 4.0 / 3.0, 1e-14, "upper at (2,2)");
        REQUIRE(r.nonempty, "range (2,2) nonempty");
    }
    bool threw = false;
    try {
        admissible_m_range(1.0, 1.2);
    } catch (const std::domain_error&) {
        threw = true;
    }
    REQUIRE(threw, "p <= 4/3 must throw");

    // gap identity and positivity on 2000 random samples (the identity itself
    // is asserted inside admissible_m_range; a violation would throw)
    std::mt19937_64 eng(7);
    std::uniform_real_distribution<double> m0d(1.0, 3.0), pd(25.0 / 12.0 + 1e-9, 4.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double m0 = m0d(eng), p = pd(eng);
        const MRange r = admissible_m_range(m0, p);
        REQUIRE(r.upper - r.lower > 0.0, "gap must be positive for p > 25/12");
    }
    pass("admissible m range and the gap identity (2000 samples)");
}

void test_lemma51() {
    const double p_boot = 32.0 / 15.0 + 0.01;
    {
        // reaching m = 2 from m0 = 1 in one hop is exactly what (5.1) forbids
        // near p = 32/15 (upper bound 1.24); that is why the bootstrap iterates
        bool threw = false;
        try {
            lemma51_exponents(1.0, 2.0, p_boot);
        } catch (const std::domain_error& e) {
            threw = true;
            const std::string what = e.what();
            REQUIRE(what.find("1.24") != std::string::npos,
                    "range violation reports the bounds");
        }
        REQUIRE(threw, "m = 2 at m0 = 1 must be a range violation near p = 32/15");
    }
    {
        const ExponentTable t = lemma51_exponents(1.0, 1.2, p_boot);
        REQUIRE(t.range_ok && t.theta_in_unit_interval && t.young_ok,
                "all flags pass at (1, 1.2, 32/15+0.01)");
        // independent residual of the interpolation identity
        const double lhs = t.m_star / (t.beta * t.alpha);
        const double rhs = t.theta51 * (1.0 / t.p - 1.0 / 3.0) +
                           (1.0 - t.theta51) * t.m_star / t.m0;
        REQUIRE_CLOSE(lhs, rhs, 1e-12, "theta solves the interpolation identity");
    }
    {
        // the bootstrap's final rung: m0 = m_{delta1 - 1} admits m = 2 exactly
        const double q = 0.01 + 0.8, add = 3.0 * (0.01 + 2.0 / 15.0);
        const double m0_last = (2.0 - add) / q;
        const MRange r = admissible_m_range(m0_last, p_boot);
        REQUIRE_CLOSE(r.upper, 2.0, 1e-12, "upper bound lands on 2 at the last rung");
        const ExponentTable t = lemma51_exponents(m0_last, std::min(2.0, r.upper), p_boot);
        REQUIRE(t.range_ok && t.theta_in_unit_interval && t.young_ok,
                "all flags pass at the final bootstrap rung");
    }
    {
        // at the upper end of the range the Young condition holds with equality
        const MRange r = admissible_m_range(1.0, 2.5);
        const ExponentTable t = lemma51_exponents(1.0, r.upper, 2.5);
        const double slack = t.beta * t.theta51 * t.alpha / t.m_star - t.p;
        REQUIRE(slack <= 1e-12, "Young slack <= 0 at the upper bound");
        REQUIRE_CLOSE(slack, 0.0, 1e-10, "Young slack is zero at the upper bound");
    }
    {
        const ExponentTable t = lemma51_exponents(2.0, 1.2, 2.0);
        REQUIRE_CLOSE(t.p_prime, 2.0, 1e-15, "p = 2 is self-conjugate");
    }
    {
        bool threw = false;
        try {
            lemma51_exponents(1.0, 10.0, 2.5);
        } catch (const std::domain_error&) {
            threw = true;
        }
        REQUIRE(threw, "m outside the admissible range must throw");
    }

    // conjugacy and the sign of theta - 1 via the closed factorization
    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> m0d(1.0, 3.0), pd(25.0 / 12.0 + 1e-6, 4.0),
        unit(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double m0 = m0d(eng), p = pd(eng);
        const MRange r = admissible_m_range(m0, p);
        const double lo = std::max(r.lower, 1.0);
        if (r.upper <= lo) continue;
        const double m = lo + (r.upper - lo) * std::max(unit(eng), 1e-6);
        const ExponentTable t = lemma51_exponents(m0, m, p);
        REQUIRE_CLOSE(1.0 / t.alpha + 1.0 / t.alpha_prime, 1.0, 1e-12, "alpha conjugacy");
        REQUIRE_CLOSE(1.0 / t.p + 1.0 / t.p_prime, 1.0, 1e-12, "p conjugacy");
        REQUIRE_CLOSE(t.m_star * t.p, t.m - 2.0 + t.p, 1e-12, "m_star identity");
        REQUIRE(t.theta_in_unit_interval, "theta in (0,1) on the admissible range");
        const double factorized =
            -m0 * p * (5.0 * (p - 2.0) + (4.0 * p - 7.0) * m) /
            (4.0 * (m * (p - 1.0) - p + 2.0) * (3.0 * m + (m0 + 3.0) * p - 3.0 * (m0 + 2.0)));
        REQUIRE((t.theta51 - 1.0 < 0.0) == (factorized < 0.0),
                "both factorizations of theta-1 agree in sign");
    }
    pass("lemma 5.1 exponent table (500 samples)");
}

void test_lemma32() {
    REQUIRE_CLOSE(lemma32_theta(2.0), 0.25, 1e-15, "theta(2) = 1/4");
    // identity residual at p = 2: 5/12 = (1/4)(1/6) + (3/4)(1/2)
    const double lhs = 5.0 / 12.0;
    const double rhs = 0.25 * (0.5 - 1.0 / 3.0) + 0.75 * 0.5;
    REQUIRE_CLOSE(lhs, rhs, 1e-15, "interpolation identity at p = 2");
    // Young-step condition at p = 2: 2p theta/(p-1) = 1 < 2
    REQUIRE(2.0 * 2.0 * lemma32_theta(2.0) / 1.0 < 2.0, "2p theta/(p-1) < p at p = 2");

    // theta < 1 requires p > 11/7; the slow regime p >= 2 is well inside
    for (double p = 2.0; p < 5.0; p += 0.037) {
        const double th = lemma32_theta(p);
        REQUIRE(th > 0.0 && th < 1.0, "theta in (0,1)");
    }
    bool threw = false;
    try {
        lemma32_theta(1.4);
    } catch (const std::domain_error&) {
        threw = true;
    }
    REQUIRE(threw, "p <= 3/2 must throw");
    threw = false;
    try {
        lemma32_theta(1.55);  // defined but theta >= 1: the (0,1) assertion fires
    } catch (const std::logic_error&) {
        threw = true;
    }
    REQUIRE(threw, "theta >= 1 below p = 11/7 must be flagged");
    pass("lemma 3.2 interpolation exponent");
}

void test_lemma53() {
    REQUIRE_CLOSE(lemma53_theta(1.0, 2.5), 0.0, 0.0, "r = 1 forces theta = 0");
    REQUIRE_CLOSE(lemma53_theta(6.0, 2.2), 33.0 / 34.8, 1e-12, "theta(6, 2.2)");
    // r = 3p/(3-p) is outside the half-open range
    bool threw = false;
    try {
        lemma53_theta(15.0, 2.5);
    } catch (const std::domain_error&) {
        threw = true;
    }
    REQUIRE(threw, "r = 3p/(3-p) must be rejected");
    // p >= 3 admits any r >= 1
    const double th = lemma53_theta(50.0, 3.5);
    REQUIRE(th > 0.0 && th < 1.0, "large r fine for p >= 3");
    pass("lemma 5.3 integrability exponent");
}

void test_bootstrap() {
    const BootstrapSchedule s = bootstrap_schedule(0.01);
    const double expected_delta1 = std::log(24.0 / 5.0) / std::log(100.0 / 81.0);
    REQUIRE_CLOSE(s.delta1, expected_delta1, 1e-12, "delta1(1/100) = log(24/5)/log(100/81)");
    REQUIRE(std::fabs(s.delta1 - 7.44) < 0.01, "delta1 is approximately 7.44");
    REQUIRE_CLOSE(s.m_values[0], 1.0, 0.0, "m_0 = 1");
    REQUIRE_CLOSE(s.m_values[1], 1.24, 1e-14, "m_1 = 1.24");

    // recursion vs closed form for k <= 20 (manual recursion, frozen formula)
    const double q = 0.01 + 0.8, c = (15.0 * 0.01 + 2.0) / (5.0 * 0.01 - 1.0);
    double mk = 1.0;
    for (int k = 0; k <= 20; ++k) {
        const double closed = std::pow(q, k) * (1.0 + c) - c;
        REQUIRE_CLOSE(mk, closed, 1e-12 * (1.0 + std::fabs(closed)),
                      "recursion matches the closed form to k = 20");
        mk = mk * q + 3.0 * (0.01 + 2.0 / 15.0);
    }

    // limit of the schedule
    const double limit = -(15.0 * 0.01 + 2.0) / (5.0 * 0.01 - 1.0);
    REQUIRE_CLOSE(limit, 2.2631578947368421, 1e-12, "limit at delta = 1/100");
    double m20 = 1.0;
    for (int k = 0; k < 200; ++k) m20 = m20 * q + 3.0 * (0.01 + 2.0 / 15.0);
    REQUIRE_CLOSE(m20, limit, 1e-10, "m_k converges to the limit");

    // monotonicity and the crossing bracket
    for (std::size_t k = 1; k < s.m_values.size(); ++k)
        REQUIRE(s.m_values[k] > s.m_values[k - 1], "m_k strictly increasing");
    const int lo = int(std::floor(s.delta1)), hi = int(std::ceil(s.delta1));
    REQUIRE(lo != hi, "delta1 is not an integer at delta = 1/100");
    REQUIRE(s.m_values[std::size_t(hi)] >= 2.0, "m_ceil(delta1) >= 2");
    REQUIRE(s.m_values[std::size_t(lo)] < 2.0, "m_floor(delta1) < 2");
    REQUIRE(s.first_k_reaching_2 == hi, "first k with m_k >= 2 is ceil(delta1)");

    // m_0 = 1 for every delta; domain guard
    for (double d : {0.001, 0.02, 0.05, 0.09})
        REQUIRE_CLOSE(bootstrap_schedule(d).m_values[0], 1.0, 0.0, "m_0 = 1");
    bool threw = false;
    try {
        bootstrap_schedule(0.2);
    } catch (const std::domain_error&) {
        threw = true;
    }
    REQUIRE(threw, "delta outside (0, 1/10) must throw");
    pass("bootstrap schedule");
}

}  // namespace

int main() {
    test_m_range();
    test_lemma51();
    test_lemma32();
    test_lemma53();
    test_bootstrap();
    std::printf("test_exponents: all passed\n");
    return 0;
}
