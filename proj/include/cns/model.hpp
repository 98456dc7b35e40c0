#ifndef CNS_MODEL_HPP
#define CNS_MODEL_HPP

/// Model parameters for the regularized chemotaxis-Navier-Stokes system:
/// the sensitivity pair (chi, f), the saturating regularizer F_eps, and
/// the energy weight Psi built from g = f/chi.

#include <array>
#include <string>
#include <vector>

namespace cns {

/// Chemotactic sensitivity chi(s) and oxygen consumption rate f(s), s >= 0.
/// Pairs come from a closed registry so that Psi and the structural-condition
/// validator stay exact and testable.
struct SensitivityPair {
    enum class Kind { linear, affine_table };

    Kind kind = Kind::linear;
    std::string name = "linear";

    // affine_table coefficients: chi(s) = chi0 + chi1*s, f(s) = f1*s + f2*s^2.
    double chi0 = 1.0, chi1 = 0.0;
    double f1 = 1.0, f2 = 0.0;

    double chi(double s) const;
    double f(double s) const;
    double f_prime(double s) const;
    /// g = f/chi, the weight under Psi.
    double g(double s) const;
};

/// linear pair: chi == 1, f(s) = s.
SensitivityPair linear_pair();
/// chi(s) = chi0 + chi1*s, f(s) = f1*s + f2*s^2.
SensitivityPair affine_pair(double chi0, double chi1, double f1, double f2,
                            const std::string& name = "affine");
/// Look up a registered pair by name ("linear", "affine-chi", "quadratic-f").
SensitivityPair pair_by_name(const std::string& name);

struct ConditionCheck {
    std::string condition;
    bool pass = false;
    double worst_value = 0.0;  // most offending sampled value
    double worst_s = 0.0;      // where it occurred
};

struct ValidationReport {
    bool pass = false;
    std::vector<ConditionCheck> checks;
};

/// Numerically checks chi>0, f>=0, f(0)=0, (f/chi)'>0, (f/chi)''<=0 and
/// (chi*f)'>=0 on [0, s_max] with centered finite differences.
/// Tolerance 1e-10. Throws std::invalid_argument on non-finite values.
ValidationReport validate_structural_conditions(const SensitivityPair& pair,
                                                double s_max, int samples);

/// F_eps(s) = (1/eps) ln(1 + eps s); satisfies 0 <= F_eps(s) <= s.
double f_eps(double s, double eps);

/// F_eps'(s) = 1/(1 + eps s) in [0,1]; s F_eps'(s) <= 1/eps.
double f_eps_prime(double s, double eps);

/// Psi(s) = integral_1^s dsigma / sqrt(g(sigma)).  Exact 2(sqrt(s)-1) for the
/// linear pair; adaptive quadrature (relative tolerance 1e-10) otherwise.
/// Throws std::domain_error if g <= 0 at an interior quadrature node.
double psi(double s, const SensitivityPair& pair);

struct ModelParams {
    double p = 2.2;          // diffusion exponent, slow regime p >= 2
    double kappa = 1.0;      // convection strength
    double epsilon = 0.05;   // regularization, in (0,1)
    SensitivityPair sensitivity = linear_pair();
    std::array<double, 3> phi_gradient{0.0, 0.0, 0.0};  // constant grad(Phi)
    double s0 = 1.0;         // max of the initial oxygen field

    bool theorem_regime() const { return p > 32.0 / 15.0 && p >= 2.0; }
    bool fast_diffusion() const { return p > 1.0 && p < 2.0; }

    /// Throws std::invalid_argument on p <= 1, epsilon outside (0,1), s0 < 0.
    void validate() const;
};

}  // namespace cns

#endif
