#include "cns/model.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace cns {

double SensitivityPair::chi(double s) const {
    if (kind == Kind::linear) return 1.0;
    return chi0 + chi1 * s;
}

double SensitivityPair::f(double s) const {
    if (kind == Kind::linear) return s;
    return f1 * s + f2 * s * s;
}

double SensitivityPair::f_prime(double s) const {
    if (kind == Kind::linear) return 1.0;
    return f1 + 2.0 * f2 * s;
}

double SensitivityPair::g(double s) const { return f(s) / chi(s); }

SensitivityPair linear_pair() { return SensitivityPair{}; }

SensitivityPair affine_pair(double chi0, double chi1, double f1, double f2,
                            const std::string& name) {
    SensitivityPair p;
    p.kind = SensitivityPair::Kind::affine_table;
    p.name = name;
    p.chi0 = chi0;
    p.chi1 = chi1;
    p.f1 = f1;
    p.f2 = f2;
    return p;
}

SensitivityPair pair_by_name(const std::string& name) {
    if (name == "linear") return linear_pair();
    if (name == "affine-chi") return affine_pair(1.0, 1.0, 1.0, 0.0, name);
    if (name == "quadratic-f") return affine_pair(1.0, 0.0, 0.0, 1.0, name);
    throw std::invalid_argument("unknown sensitivity pair: " + name);
}

namespace {

void check_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string("invalid sensitivity pair: non-finite ") + what);
}

void record(ValidationReport& rep, const std::string& cond, bool pass,
            double worst_value, double worst_s) {
    rep.checks.push_back({cond, pass, worst_value, worst_s});
    rep.pass = rep.pass && pass;
}

}  // namespace

ValidationReport validate_structural_conditions(const SensitivityPair& pair,
                                                double s_max, int samples) {
    if (!(s_max > 0.0)) throw std::invalid_argument("s_max must be positive");
    if (samples < 3) throw std::invalid_argument("samples must be >= 3");

    const double tol = 1e-10;
    ValidationReport rep;
    rep.pass = true;

    // f(0) = 0 checked exactly at the endpoint.
    {
        const double f0 = pair.f(0.0);
        check_finite(f0, "f(0)");
        record(rep, "f(0)=0", std::fabs(f0) <= tol, f0, 0.0);
    }

    // Pointwise chi > 0, f >= 0 on [0, s_max].
    {
        double worst_chi = std::numeric_limits<double>::infinity(), at_chi = 0.0;
        double worst_f = std::numeric_limits<double>::infinity(), at_f = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double s = s_max * double(i) / double(samples - 1);
            const double c = pair.chi(s), fv = pair.f(s);
            check_finite(c, "chi");
            check_finite(fv, "f");
            if (c < worst_chi) { worst_chi = c; at_chi = s; }
            if (fv < worst_f) { worst_f = fv; at_f = s; }
        }
        record(rep, "chi>0", worst_chi > tol, worst_chi, at_chi);
        record(rep, "f>=0", worst_f >= -tol, worst_f, at_f);
    }

    // Centered finite differences for (f/chi)', (f/chi)'' and (chi*f)' at
    // interior samples; step tied to the sample spacing.
    const double h = s_max / double(8 * (samples - 1));
    auto gfun = [&](double s) { return pair.f(s) / pair.chi(s); };
    auto cf = [&](double s) { return pair.chi(s) * pair.f(s); };

    double worst_g1 = std::numeric_limits<double>::infinity(), at_g1 = 0.0;
    double worst_g2 = -std::numeric_limits<double>::infinity(), at_g2 = 0.0;
    double worst_cf1 = std::numeric_limits<double>::infinity(), at_cf1 = 0.0;
    for (int i = 0; i < samples; ++i) {
        double s = s_max * double(i) / double(samples - 1);
        s = std::fmin(std::fmax(s, h), s_max - h);  // keep the stencil inside [0, s_max]
        const double gp = (gfun(s + h) - gfun(s - h)) / (2.0 * h);
        const double gpp = (gfun(s + h) - 2.0 * gfun(s) + gfun(s - h)) / (h * h);
        const double cfp = (cf(s + h) - cf(s - h)) / (2.0 * h);
        check_finite(gp, "(f/chi)'");
        check_finite(gpp, "(f/chi)''");
        check_finite(cfp, "(chi*f)'");
        if (gp < worst_g1) { worst_g1 = gp; at_g1 = s; }
        if (gpp > worst_g2) { worst_g2 = gpp; at_g2 = s; }
        if (cfp < worst_cf1) { worst_cf1 = cfp; at_cf1 = s; }
    }
    record(rep, "(f/chi)'>0", worst_g1 > tol, worst_g1, at_g1);
    record(rep, "(f/chi)''<=0", worst_g2 <= tol, worst_g2, at_g2);
    record(rep, "(chi*f)'>=0", worst_cf1 >= -tol, worst_cf1, at_cf1);

    return rep;
}

double f_eps(double s, double eps) {
    if (s < 0.0) throw std::domain_error("f_eps: s must be >= 0");
    if (!(eps > 0.0)) throw std::domain_error("f_eps: eps must be > 0");
    return std::log1p(eps * s) / eps;
}

double f_eps_prime(double s, double eps) {
    if (s < 0.0) throw std::domain_error("f_eps_prime: s must be >= 0");
    if (!(eps > 0.0)) throw std::domain_error("f_eps_prime: eps must be > 0");
    return 1.0 / (1.0 + eps * s);
}

namespace {

// Adaptive Simpson on [a,b] with absolute tolerance budget.
double simpson_rule(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& fn, double a, double m,
             double b, double fa, double fm, double fb, double whole,
             double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = fn(lm), frm = fn(rm);
    const double left = simpson_rule(a, m, fa, flm, fm);
    const double right = simpson_rule(m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt(fn, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(fn, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& fn, double a,
                        double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = fn(a), fm = fn(m), fb = fn(b);
    const double whole = simpson_rule(a, b, fa, fm, fb);
    return adapt(fn, a, m, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double psi(double s, const SensitivityPair& pair) {
    if (s < 0.0) throw std::domain_error("psi: s must be >= 0");
    if (pair.kind == SensitivityPair::Kind::linear)
        return 2.0 * (std::sqrt(s) - 1.0);

    // Substitute sigma = tau^2 so the integrand 2 tau / sqrt(g(tau^2)) stays
    // bounded at sigma = 0 when g(0) = 0 with g'(0) > 0.
    auto integrand = [&](double tau) {
        const double sigma = tau * tau;
        const double gv = pair.g(sigma);
        if (!(gv > 0.0) && tau > 0.0)
            throw std::domain_error("psi: structural condition violated (g <= 0)");
        return gv > 0.0 ? 2.0 * tau / std::sqrt(gv) : 0.0;
    };
    const double b = std::sqrt(s);
    const double scale = std::fabs(b - 1.0) + 1.0;
    return adaptive_simpson(integrand, 1.0, b, 1e-10 * scale);
}

void ModelParams::validate() const {
    if (!(p > 1.0)) throw std::invalid_argument("p must be > 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0,1)");
    if (!(s0 >= 0.0)) throw std::invalid_argument("s0 must be >= 0");
}

}  // namespace cns
