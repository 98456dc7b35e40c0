#ifndef CNS_EXPONENTS_HPP
#define CNS_EXPONENTS_HPP

/// Exponent bookkeeping behind the integrability bootstrap: admissible m
/// ranges, Gagliardo-Nirenberg interpolation exponents with their validity
/// predicates, and the m_k schedule that raises the L^m integrability of the
/// cell density up to m = 2.

#include <vector>

namespace cns {

struct ExponentTable {
    double p = 0.0;
    double p_prime = 0.0;      // p/(p-1)
    double m0 = 1.0;
    double m = 0.0;
    double m_star = 0.0;       // (m-2)/p + 1
    double beta = 0.0;         // m + 1/(p-1) - 1
    double alpha = 0.0;        // 4(p-1)/(3p-4)
    double alpha_prime = 0.0;  // 4(p-1)/p
    double theta51 = 0.0;

    bool range_ok = false;              // m inside the admissible range
    bool theta_in_unit_interval = false;
    bool young_ok = false;              // beta*theta*alpha/m_star - p <= 0
};

struct MRange {
    double lower = 0.0;  // exclusive
    double upper = 0.0;  // inclusive
    bool nonempty = false;
};

/// Admissible range m0(3p-4)/(4(p-1)) + (p-2)/(p-1) < m <= m0(p-4/3) + 3(p-2).
/// Also verifies the closed-form gap identity
///   upper - lower = (3p-4)(m0(4p-7)+12(p-2)) / (12(p-1))
/// to 1e-12 (throws std::logic_error if it ever fails).
/// Requires p > 4/3.
MRange admissible_m_range(double m0, double p);

/// Fills the full table for (m0, m, p); requires m in the admissible range.
/// theta51 is cross-checked by its interpolation identity
///   m_star/(beta*alpha) = theta*(1/p - 1/3) + (1-theta)*m_star/m0.
ExponentTable lemma51_exponents(double m0, double m, double p);

/// theta = (p-1)/(4(2p-3)) for p > 3/2; asserts the interpolation identity
///   5(p-1)/(6p) = theta(1/p - 1/3) + (1-theta)(p-1)/p.
double lemma32_theta(double p);

/// theta = 3p(r-1)/((4p-3)r) for r >= 1 (p >= 3) or r in [1, 3p/(3-p))
/// (p in (32/15, 3)); satisfies 1/r = theta(1/p - 1/3) + (1-theta).
double lemma53_theta(double r, double p);

struct BootstrapSchedule {
    double delta = 0.0;
    double p = 0.0;                 // 32/15 + delta
    std::vector<double> m_values;   // m_0 .. m_ceil(delta1)
    double delta1 = 0.0;            // real solution of m_x = 2
    int first_k_reaching_2 = -1;    // smallest integer k with m_k >= 2
};

/// m_0 = 1, m_{k+1} = m_k (delta + 4/5) + 3(delta + 2/15); the closed form
///   m_k = (delta+4/5)^k (1 + (15 delta+2)/(5 delta-1)) - (15 delta+2)/(5 delta-1)
/// crosses 2 at delta1 = log(25 delta/(20 delta+1)) / log(delta + 4/5).
/// Requires delta in (0, 1/10).
BootstrapSchedule bootstrap_schedule(double delta);

}  // namespace cns

#endif
