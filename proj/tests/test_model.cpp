// Sensitivity-pair validation, the F_eps regularizer contracts and Psi.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cns/model.hpp"
#include "test_support.hpp"

using namespace cns;
using cns::test::pass;

namespace {

void test_structural_validation() {
    // the linear pair satisfies everything for any s_max
    for (double smax : {0.5, 1.0, 4.0, 100.0}) {
        const auto rep = validate_structural_conditions(linear_pair(), smax, 101);
        REQUIRE(rep.pass, "linear pair must pass the structural conditions");
    }

    // f(s) = s^2 violates concavity of f/chi = s^2
    {
        const auto rep = validate_structural_conditions(pair_by_name("quadratic-f"), 1.0, 101);
        REQUIRE(!rep.pass, "f=s^2 must fail");
        bool concavity_failed = false;
        for (const auto& c : rep.checks)
            if (c.condition == "(f/chi)''<=0" && !c.pass) concavity_failed = true;
        REQUIRE(concavity_failed, "the failure must be the concavity condition");
    }

    // chi = 1+s, f = s: g = s/(1+s) has g' > 0, g'' < 0; (chi f)' = 1 + 2s >= 0
    {
        const auto rep = validate_structural_conditions(pair_by_name("affine-chi"), 1.0, 101);
        REQUIRE(rep.pass, "chi=1+s, f=s must pass");
    }

    // non-finite values are rejected
    {
        bool threw = false;
        try {
            validate_structural_conditions(
                affine_pair(std::numeric_limits<double>::infinity(), 0.0, 1.0, 0.0), 1.0, 11);
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        REQUIRE(threw, "non-finite chi must throw invalid_argument");
    }
    pass("structural condition validation");
}

void test_f_eps() {
    REQUIRE_CLOSE(f_eps(0.0, 0.5), 0.0, 0.0, "F_eps(0) = 0 exactly");
    REQUIRE_CLOSE(f_eps(2.0, 0.5), 2.0 * std::log(2.0), 1e-15, "F_eps(2,0.5) = 2 ln 2");
    REQUIRE_CLOSE(f_eps_prime(0.0, 0.3), 1.0, 0.0, "F_eps'(0) = 1");
    REQUIRE_CLOSE(f_eps_prime(10.0, 0.1), 0.5, 1e-15, "F_eps'(10,0.1) = 1/2");

    bool threw = false;
    try {
        f_eps(-1.0, 0.5);
    } catch (const std::domain_error&) {
        threw = true;
    }
    REQUIRE(threw, "negative s must throw domain_error");

    // bounds and monotonicity over a log-spaced sample grid
    std::vector<double> svals{0.0};
    for (double s = 1e-6; s <= 1e6; s *= 3.0) svals.push_back(s);
    const std::vector<double> epsvals{0.9, 0.5, 0.1, 1e-3};
    for (double s : svals) {
        double prev_f = -1.0, prev_fp = -1.0;
        for (std::size_t e = 0; e < epsvals.size(); ++e) {
            const double eps = epsvals[e];
            const double F = f_eps(s, eps), Fp = f_eps_prime(s, eps);
            REQUIRE(F >= 0.0 && F <= s + 1e-15 * s, "0 <= F_eps(s) <= s");
            REQUIRE(Fp >= 0.0 && Fp <= 1.0, "0 <= F_eps' <= 1");
            REQUIRE(s * Fp <= 1.0 / eps + 1e-12 / eps, "s F_eps'(s) <= 1/eps");
            // eps decreases along epsvals -> F and F' must not decrease
            if (e > 0) {
                REQUIRE(F >= prev_f - 1e-15 * (1.0 + F), "F_eps nondecreasing as eps drops");
                REQUIRE(Fp >= prev_fp - 1e-15, "F_eps' nondecreasing as eps drops");
            }
            prev_f = F;
            prev_fp = Fp;
        }
        // convergence F_eps(s, eps) -> s as eps -> 0: 0 <= s - F <= eps s^2 / 2
        if (s > 0.0) {
            const double eps0 = 1e-12;
            const double tiny = f_eps(s, eps0);
            REQUIRE(tiny <= s && s - tiny <= 0.5 * eps0 * s * s + 1e-12,
                    "F_eps -> s as eps -> 0");
        }
    }
    pass("F_eps bounds, monotonicity and limits");
}

void test_psi() {
    const auto lin = linear_pair();
    REQUIRE_CLOSE(psi(1.0, lin), 0.0, 0.0, "Psi(1) = 0");
    REQUIRE_CLOSE(psi(4.0, lin), 2.0, 1e-12, "Psi(4) = 2");
    REQUIRE_CLOSE(psi(0.25, lin), -1.0, 1e-12, "Psi(1/4) = -1");

    // quadrature path against the linear closed form (identical pair, table kind)
    const auto lin_table = affine_pair(1.0, 0.0, 1.0, 0.0, "linear-as-table");
    for (double s = 1e-6; s <= 10.0; s *= 2.7) {
        const double exact = 2.0 * (std::sqrt(s) - 1.0);
        const double quad = psi(s, lin_table);
        REQUIRE_CLOSE(quad, exact, 1e-10 * (1.0 + std::fabs(exact)),
                      "quadrature Psi matches 2(sqrt(s)-1)");
    }

    // quadrature path against an independent closed form:
    // chi = 1+s, f = s  =>  Psi(s) = [sqrt(x(1+x)) + asinh(sqrt(x))]_1^s
    const auto aff = pair_by_name("affine-chi");
    auto closed = [](double x) {
        return std::sqrt(x * (1.0 + x)) + std::asinh(std::sqrt(x));
    };
    for (double s : {0.1, 0.5, 2.0, 7.5}) {
        const double exact = closed(s) - closed(1.0);
        REQUIRE_CLOSE(psi(s, aff), exact, 1e-9 * (1.0 + std::fabs(exact)),
                      "quadrature Psi matches the affine closed form");
    }

    // g <= 0 on the integration path is rejected
    bool threw = false;
    try {
        psi(2.0, affine_pair(1.0, 0.0, -1.0, 0.0, "negative-f"));
    } catch (const std::domain_error&) {
        threw = true;
    }
    REQUIRE(threw, "g <= 0 must throw");
    pass("Psi closed forms and quadrature");
}

void test_params() {
    ModelParams p;
    p.p = 2.2;
    REQUIRE(p.theorem_regime(), "p = 2.2 > 32/15 is the theorem regime");
    p.p = 1.5;
    REQUIRE(p.fast_diffusion() && !p.theorem_regime(), "p = 1.5 is fast diffusion");
    p.p = 2.0;
    REQUIRE(!p.theorem_regime(), "p = 2 is not > 32/15");

    bool threw = false;
    try {
        ModelParams bad;
        bad.epsilon = 1.5;
        bad.validate();
    } catch (const std::invalid_argument&) {
        threw = true;
    }
    REQUIRE(threw, "epsilon outside (0,1) must be rejected");
    pass("model parameter flags and validation");
}

}  // namespace

int main() {
    test_structural_validation();
    test_f_eps();
    test_psi();
    test_params();
    std::printf("test_model: all passed\n");
    return 0;
}
