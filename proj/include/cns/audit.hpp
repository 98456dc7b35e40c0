#ifndef CNS_AUDIT_HPP
#define CNS_AUDIT_HPP

/// Measures every functional the a-priori estimates bound: the entropy-type
/// energy, its dissipation integrals, cumulative time integrals with their
/// growth ratios, and the weak-formulation residuals.

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cns/model.hpp"
#include "cns/transport.hpp"

namespace cns {

struct EnergyReport {
    double t = 0.0;
    double mass_n = 0.0;
    double min_n = 0.0;
    double max_n = 0.0;  // internal (not a CSV column); scales the min_n tolerance
    double max_c = 0.0;
    double e_nlogn = 0.0;       // integral n ln n, 0 ln 0 := 0
    double e_psi = 0.0;         // 1/2 integral |grad Psi(c)|^2
    double e_kin = 0.0;         // integral |u|^2
    double d_plap = 0.0;        // integral (|grad n|^2+eps)^((p-2)/2) |grad n|^2 / n
    double d_plap_power = 0.0;  // integral |grad n^((p-1)/p)|^p (chain-rule form)
    double d_hess = 0.0;        // integral |D^2 c|^2 / c
    double d_quart = 0.0;       // integral |grad c|^4 / c^3
    double d_gradu = 0.0;       // integral |grad u|^2 (summation-by-parts form)
    double norm_u_103 = 0.0;    // integral |u|^(10/3)
    double norm_n_r = 0.0;      // integral n^r
    double gradc4 = 0.0;        // integral |grad c|^4
    double dt = 0.0;
    long floored_cells = 0;     // divisions that hit the 1e-14 floor
    long negative_n_cells = 0;  // n<0 contributions to e_nlogn (flagged, not skipped)
};

/// All integrals by midpoint rule over cells; gradients from interior face
/// differences averaged to cells (one-sided at walls); Hessian by centered
/// second differences through the ghost layers. Throws std::runtime_error
/// ("diagnostic overflow ...") if a term comes out non-finite.
EnergyReport energy_report(const State& s, const ModelParams& params,
                           double r_exponent = 6.0);

/// Cumulative trapezoidal time integrals of the tracked dissipation
/// quantities, with the growth ratios r_Q(T) = cumulative(T)/(T+1).
class CumulativeLedger {
public:
    static constexpr int n_quantities = 7;
    static const std::array<const char*, n_quantities>& names();

    void update(const EnergyReport& rep);

    double cumulative(int q) const { return cum_[q]; }
    double ratio(int q) const;  // r_Q at the latest report
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& ratio_history(int q) const { return ratios_[q]; }
    bool empty() const { return times_.empty(); }

    void save(std::ostream& os) const;
    void load(std::istream& is);

private:
    std::array<double, n_quantities> cum_{};
    std::array<double, n_quantities> prev_{};
    double prev_t_ = 0.0;
    bool have_prev_ = false;
    std::vector<double> times_;
    std::array<std::vector<double>, n_quantities> ratios_;
};

struct Verdict {
    bool pass = false;
    long violation_index = -1;
    std::string detail;
};

/// Lemma 3.1 monotonicity with the flow disabled: e_nlogn + e_psi must be
/// nonincreasing up to slack 1e-10 (1 + |value|).  Requires >= 2 reports.
Verdict check_lemma31_decay(const std::vector<EnergyReport>& history);

/// Mass conservation, oxygen maximum principle and the monitored n >= 0.
Verdict check_mass_and_max(const std::vector<EnergyReport>& history, double s0);

struct GrowthVerdict {
    std::string quantity;
    bool pass = false;
    double c_hat = 0.0;       // empirical constant sup r_Q
    double window_sup = 0.0;
    double window_median = 0.0;
};

/// No super-linear growth: over the trailing window (fraction of the time
/// span) sup r_Q <= 1.1 * median r_Q.
std::vector<GrowthVerdict> check_linear_growth(const CumulativeLedger& ledger,
                                               double window);

// --- weak formulation residuals -------------------------------------------

struct Snapshot {
    Snapshot(const Grid& g) : n(g), c(g), u(g) {}
    double t = 0.0;
    ScalarField n, c;
    VectorField u;
};

using Point = std::array<double, 3>;

/// Smooth space-time test data with analytic derivatives. phi tests the two
/// scalar equations; psi (divergence-free, zero near walls) tests momentum.
struct TestFunction {
    double support_end = 0.0;  // phi, psi vanish for t >= support_end
    std::function<double(const Point&, double)> phi;
    std::function<double(const Point&, double)> phi_t;
    std::function<Point(const Point&, double)> phi_grad;
    std::function<Point(const Point&, double)> psi;
    std::function<Point(const Point&, double)> psi_t;
    // dpsi[i][j] = d psi_j / d x_i
    std::function<std::array<Point, 3>(const Point&, double)> psi_grad;
};

/// phi = cos^2(pi t / (2 T)) prod_a sin^2(pi x_a / L_a); psi the curl of a
/// sin^3 stream potential (divergence-free with vanishing wall derivatives).
TestFunction default_test_function(const Grid& g, double support_end);

/// Assembles the three weak-form identities of the regularized system against
/// the test data (midpoint in space, trapezoid over the snapshot times) with
/// the time derivative moved onto the test function. Returns |residual| per
/// equation (n, c, u); expected O(dx + dt) under refinement.
/// Throws std::invalid_argument when the support condition fails.
std::array<double, 3> weak_residual(const std::vector<Snapshot>& snaps,
                                    const ModelParams& params,
                                    const TestFunction& tf);

// --- diagnostics stream -----------------------------------------------------

/// Fixed column order:
/// t,mass_n,min_n,max_c,e_nlogn,e_psi,e_kin,d_plap,d_plap_power,d_hess,
/// d_quart,d_gradu,norm_u_103,norm_n_r,cum_d_plap_power,cum_d_hess,
/// cum_d_quart,cum_d_gradu,cum_norm_u_103,cum_norm_n_r,cum_gradc4,dt,
/// floored_cells
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const EnergyReport& rep, const CumulativeLedger& led);

}  // namespace cns

#endif
