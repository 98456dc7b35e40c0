#include "cns/exponents.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cns {

MRange admissible_m_range(double m0, double p) {
    if (!(p > 4.0 / 3.0))
        throw std::domain_error("admissible_m_range: requires p > 4/3");
    MRange r;
    r.lower = m0 * (3.0 * p - 4.0) / (4.0 * (p - 1.0)) + (p - 2.0) / (p - 1.0);
    r.upper = m0 * (p - 4.0 / 3.0) + 3.0 * (p - 2.0);
    r.nonempty = r.upper > r.lower;

    const double gap = (3.0 * p - 4.0) * (m0 * (4.0 * p - 7.0) + 12.0 * (p - 2.0)) /
                       (12.0 * (p - 1.0));
    const double scale = 1.0 + std::fabs(r.upper) + std::fabs(r.lower);
    if (std::fabs((r.upper - r.lower) - gap) > 1e-12 * scale)
        throw std::logic_error("admissible_m_range: gap identity violated");
    return r;
}

ExponentTable lemma51_exponents(double m0, double m, double p) {
    const MRange range = admissible_m_range(m0, p);
    if (!(m > range.lower && m <= range.upper))
        throw std::domain_error("lemma51_exponents: range violation, need m in (" +
                                std::to_string(range.lower) + ", " +
                                std::to_string(range.upper) + "]");

    ExponentTable t;
    t.p = p;
    t.p_prime = p / (p - 1.0);
    t.m0 = m0;
    t.m = m;
    t.m_star = (m - 2.0) / p + 1.0;
    t.beta = m + 1.0 / (p - 1.0) - 1.0;
    t.alpha = 4.0 * (p - 1.0) / (3.0 * p - 4.0);
    t.alpha_prime = 4.0 * (p - 1.0) / p;
    t.range_ok = true;

    const double num = 3.0 * (m + p - 2.0) *
                       (4.0 * m * (p - 1.0) + m0 * (4.0 - 3.0 * p) - 4.0 * p + 8.0);
    const double den = 4.0 * (m * (p - 1.0) - p + 2.0) *
                       (3.0 * m + (m0 + 3.0) * p - 3.0 * (m0 + 2.0));
    t.theta51 = num / den;
    t.theta_in_unit_interval = t.theta51 > 0.0 && t.theta51 < 1.0;

    // Interpolation identity the exponent must solve.
    const double lhs = t.m_star / (t.beta * t.alpha);
    const double rhs = t.theta51 * (1.0 / p - 1.0 / 3.0) +
                       (1.0 - t.theta51) * t.m_star / m0;
    if (std::fabs(lhs - rhs) > 1e-12 * (1.0 + std::fabs(lhs)))
        throw std::logic_error("lemma51_exponents: interpolation identity violated");

    const double young = t.beta * t.theta51 * t.alpha / t.m_star - p;
    t.young_ok = young <= 1e-12 * (1.0 + std::fabs(p));
    return t;
}

double lemma32_theta(double p) {
    if (!(p > 1.5)) throw std::domain_error("lemma32_theta: requires p > 3/2");
    const double theta = (p - 1.0) / (4.0 * (2.0 * p - 3.0));
    if (!(theta > 0.0 && theta < 1.0))
        throw std::logic_error("lemma32_theta: theta outside (0,1)");

    const double lhs = 5.0 * (p - 1.0) / (6.0 * p);
    const double rhs = theta * (1.0 / p - 1.0 / 3.0) + (1.0 - theta) * (p - 1.0) / p;
    if (std::fabs(lhs - rhs) > 1e-12)
        throw std::logic_error("lemma32_theta: interpolation identity violated");

    if (p > 1.75 && !(2.0 * p * theta / (p - 1.0) < p))
        throw std::logic_error("lemma32_theta: Young-step condition violated");
    return theta;
}

double lemma53_theta(double r, double p) {
    if (!(p > 32.0 / 15.0))
        throw std::domain_error("lemma53_theta: requires p > 32/15");
    const bool valid = (p >= 3.0) ? (r >= 1.0)
                                  : (r >= 1.0 && r < 3.0 * p / (3.0 - p));
    if (!valid) throw std::domain_error("lemma53_theta: integrability range violation");

    const double theta = 3.0 * p * (r - 1.0) / ((4.0 * p - 3.0) * r);
    const double lhs = 1.0 / r;
    const double rhs = theta * (1.0 / p - 1.0 / 3.0) + (1.0 - theta);
    if (std::fabs(lhs - rhs) > 1e-12)
        throw std::logic_error("lemma53_theta: interpolation identity violated");
    if (!(theta >= 0.0 && theta < 1.0))
        throw std::logic_error("lemma53_theta: theta outside [0,1)");
    return theta;
}

BootstrapSchedule bootstrap_schedule(double delta) {
    if (!(delta > 0.0 && delta < 0.1))
        throw std::domain_error("bootstrap_schedule: requires delta in (0, 1/10)");

    BootstrapSchedule s;
    s.delta = delta;
    s.p = 32.0 / 15.0 + delta;
    s.delta1 = std::log(25.0 * delta / (20.0 * delta + 1.0)) /
               std::log(delta + 0.8);

    const double q = delta + 0.8;                       // contraction factor
    const double c = (15.0 * delta + 2.0) / (5.0 * delta - 1.0);
    const int kmax = int(std::ceil(s.delta1));

    double mk = 1.0;
    for (int k = 0; k <= kmax; ++k) {
        s.m_values.push_back(mk);
        const double closed = std::pow(q, double(k)) * (1.0 + c) - c;
        if (std::fabs(mk - closed) > 1e-12 * (1.0 + std::fabs(closed)))
            throw std::logic_error("bootstrap_schedule: recursion vs closed form mismatch");
        if (s.first_k_reaching_2 < 0 && mk >= 2.0) s.first_k_reaching_2 = k;
        mk = mk * q + 3.0 * (delta + 2.0 / 15.0);
    }
    if (s.first_k_reaching_2 < 0 && mk >= 2.0) {
        // the crossing lands exactly on kmax+1 when delta1 is an integer
        s.m_values.push_back(mk);
        s.first_k_reaching_2 = kmax + 1;
    }
    return s;
}

}  // namespace cns
