#include "cns/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "cns/errors.hpp"
#include "cns/operators.hpp"

namespace cns {

namespace {

constexpr double kFloor = 1e-14;

using I3 = std::array<int, 3>;

inline I3 shift(I3 p, int a, int d) {
    p[a] += d;
    return p;
}

inline double at(const ScalarField& s, const I3& p) { return s(p[0], p[1], p[2]); }

template <class F>
void cells_of(const Grid& g, F&& fn) {
    const int n2 = g.dim == 3 ? g.cells[2] : 1;
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) fn(I3{i, j, k});
}

// Cell gradient from interior face differences; one-sided at wall cells so
// fields that ignore the boundary condition are still measured faithfully.
inline void interior_cell_grad(const ScalarField& s, const Grid& g, const I3& p,
                               double* grad) {
    for (int a = 0; a < g.dim; ++a) {
        const double inv = 1.0 / g.dx[a];
        const bool has_lo = p[a] > 0;
        const bool has_hi = p[a] < g.cells[a] - 1;
        const double gl = has_lo ? (at(s, p) - at(s, shift(p, a, -1))) * inv : 0.0;
        const double gh = has_hi ? (at(s, shift(p, a, 1)) - at(s, p)) * inv : 0.0;
        grad[a] = has_lo && has_hi ? 0.5 * (gl + gh) : (has_lo ? gl : gh);
    }
}

inline double floored(double v, long& count) {
    if (v < kFloor) {
        ++count;
        return kFloor;
    }
    return v;
}

void require_finite(double v, const char* term) {
    if (!std::isfinite(v))
        throw std::runtime_error(std::string("diagnostic overflow in ") + term);
}

}  // namespace

EnergyReport energy_report(const State& s, const ModelParams& params, double r_exponent) {
    const Grid& g = s.n.grid();
    const double vol = g.cell_volume();
    const double p = params.p;
    const double eps = params.epsilon;
    EnergyReport rep;
    rep.t = s.t;
    rep.mass_n = integrate(s.n);
    rep.min_n = min_interior(s.n);
    rep.max_n = max_interior(s.n);
    rep.max_c = max_interior(s.c);

    // Psi(c) as a pointwise cell field; linear pair has the closed form.
    ScalarField psi_c(g);
    const bool linear = params.sensitivity.kind == SensitivityPair::Kind::linear;
    cells_of(g, [&](const I3& q) {
        const double cv = std::max(at(s.c, q), 0.0);
        psi_c(q[0], q[1], q[2]) =
            linear ? 2.0 * (std::sqrt(cv) - 1.0) : psi(cv, params.sensitivity);
    });

    const double chain = std::pow((p - 1.0) / p, p);
    double e_nlogn = 0.0, e_psi = 0.0, d_plap = 0.0, d_plap_power = 0.0;
    double d_quart = 0.0, gradc4 = 0.0, d_hess = 0.0, norm_n_r = 0.0;
    cells_of(g, [&](const I3& q) {
        const double nv = at(s.n, q);
        const double cv = at(s.c, q);

        if (nv > 0.0)
            e_nlogn += nv * std::log(nv);
        else if (nv < 0.0) {
            e_nlogn += nv * std::log(-nv);
            rep.negative_n_cells += 1;
        }

        double gpsi[3], gn[3], gc[3];
        interior_cell_grad(psi_c, g, q, gpsi);
        interior_cell_grad(s.n, g, q, gn);
        interior_cell_grad(s.c, g, q, gc);
        double psi2 = 0.0, n2 = 0.0, c2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            psi2 += gpsi[a] * gpsi[a];
            n2 += gn[a] * gn[a];
            c2 += gc[a] * gc[a];
        }
        e_psi += 0.5 * psi2;

        const double nfl = floored(nv, rep.floored_cells);
        d_plap += std::pow(n2 + eps, 0.5 * (p - 2.0)) * n2 / nfl;
        d_plap_power += chain * std::pow(n2, 0.5 * p) / nfl;

        const double cfl = floored(cv, rep.floored_cells);
        const double c4 = c2 * c2;
        gradc4 += c4;
        d_quart += c4 / (cfl * cfl * cfl);

        // Hessian through the ghost layers, mixed terms counted twice.
        double h2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double haa = (at(s.c, shift(q, a, 1)) - 2.0 * cv + at(s.c, shift(q, a, -1))) /
                               (g.dx[a] * g.dx[a]);
            h2 += haa * haa;
            for (int b = a + 1; b < g.dim; ++b) {
                const double hab =
                    (at(s.c, shift(shift(q, a, 1), b, 1)) - at(s.c, shift(shift(q, a, 1), b, -1)) -
                     at(s.c, shift(shift(q, a, -1), b, 1)) +
                     at(s.c, shift(shift(q, a, -1), b, -1))) /
                    (4.0 * g.dx[a] * g.dx[b]);
                h2 += 2.0 * hab * hab;
            }
        }
        d_hess += h2 / cfl;

        norm_n_r += std::pow(std::fabs(nv), r_exponent);
    });

    rep.e_nlogn = e_nlogn * vol;
    rep.e_psi = e_psi * vol;
    rep.d_plap = d_plap * vol;
    rep.d_plap_power = d_plap_power * vol;
    rep.d_quart = d_quart * vol;
    rep.gradc4 = gradc4 * vol;
    rep.d_hess = d_hess * vol;
    rep.norm_n_r = norm_n_r * vol;
    rep.e_kin = dot(s.u, s.u);

    // |grad u|^2 in the summation-by-parts form matching the discrete
    // Dirichlet energy (wall pairs of tangential differences weigh 1/2).
    double gradu = 0.0;
    for (int cmp = 0; cmp < g.dim; ++cmp) {
        for (int axis = 0; axis < g.dim; ++axis) {
            const double inv = 1.0 / g.dx[axis];
            I3 n{g.cells[0], g.cells[1], g.dim == 3 ? g.cells[2] : 1};
            I3 lo{0, 0, 0};
            n[cmp] += 1;
            if (axis == cmp) {
                // pairs between consecutive faces 0..n_f-1 (walls included, value 0)
                n[axis] -= 1;
            } else {
                // face range restricted to interior faces; pair index runs over
                // ghost..interior transitions
                lo[cmp] = 1;
                n[cmp] -= 1;
                lo[axis] = -1;
            }
            for (int k = lo[2]; k < n[2]; ++k)
                for (int j = lo[1]; j < n[1]; ++j)
                    for (int i = lo[0]; i < n[0]; ++i) {
                        const I3 q{i, j, k};
                        const I3 hi = shift(q, axis, 1);
                        const double d =
                            (s.u.comp(cmp, hi[0], hi[1], hi[2]) - s.u.comp(cmp, q[0], q[1], q[2])) *
                            inv;
                        double w = 1.0;
                        if (axis != cmp && (q[axis] == -1 || hi[axis] == g.cells[axis]))
                            w = 0.5;
                        gradu += w * d * d;
                    }
        }
    }
    rep.d_gradu = gradu * vol;

    // |u|^(10/3) with components interpolated to cell centers
    double u103 = 0.0;
    cells_of(g, [&](const I3& q) {
        double mag2 = 0.0;
        for (int c = 0; c < g.dim; ++c) {
            const I3 hi = shift(q, c, 1);
            const double uc =
                0.5 * (s.u.comp(c, q[0], q[1], q[2]) + s.u.comp(c, hi[0], hi[1], hi[2]));
            mag2 += uc * uc;
        }
        u103 += std::pow(mag2, 5.0 / 3.0);
    });
    rep.norm_u_103 = u103 * vol;

    require_finite(rep.e_nlogn, "e_nlogn");
    require_finite(rep.e_psi, "e_psi");
    require_finite(rep.e_kin, "e_kin");
    require_finite(rep.d_plap, "d_plap");
    require_finite(rep.d_plap_power, "d_plap_power");
    require_finite(rep.d_hess, "d_hess");
    require_finite(rep.d_quart, "d_quart");
    require_finite(rep.d_gradu, "d_gradu");
    require_finite(rep.norm_u_103, "norm_u_103");
    require_finite(rep.norm_n_r, "norm_n_r");
    require_finite(rep.gradc4, "gradc4");
    return rep;
}

const std::array<const char*, CumulativeLedger::n_quantities>& CumulativeLedger::names() {
    static const std::array<const char*, n_quantities> n = {
        "d_plap_power", "d_hess", "d_quart", "d_gradu", "norm_u_103", "norm_n_r", "gradc4"};
    return n;
}

namespace {
std::array<double, CumulativeLedger::n_quantities> pick(const EnergyReport& r) {
    return {r.d_plap_power, r.d_hess, r.d_quart, r.d_gradu,
            r.norm_u_103,   r.norm_n_r, r.gradc4};
}
}  // namespace

void CumulativeLedger::update(const EnergyReport& rep) {
    const auto vals = pick(rep);
    if (have_prev_) {
        const double h = rep.t - prev_t_;
        for (int q = 0; q < n_quantities; ++q)
            cum_[q] += 0.5 * h * (prev_[q] + vals[q]);
    }
    prev_ = vals;
    prev_t_ = rep.t;
    have_prev_ = true;
    times_.push_back(rep.t);
    for (int q = 0; q < n_quantities; ++q)
        ratios_[q].push_back(cum_[q] / (rep.t + 1.0));
}

double CumulativeLedger::ratio(int q) const {
    return ratios_[q].empty() ? 0.0 : ratios_[q].back();
}

void CumulativeLedger::save(std::ostream& os) const {
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        os << buf;
    };
    os << "ledger " << times_.size() << " " << (have_prev_ ? 1 : 0) << "\n";
    put(prev_t_);
    for (int q = 0; q < n_quantities; ++q) put(cum_[q]);
    for (int q = 0; q < n_quantities; ++q) put(prev_[q]);
    for (std::size_t i = 0; i < times_.size(); ++i) {
        put(times_[i]);
        for (int q = 0; q < n_quantities; ++q) put(ratios_[q][i]);
    }
}

void CumulativeLedger::load(std::istream& is) {
    std::string tag;
    std::size_t count = 0;
    int have = 0;
    is >> tag >> count >> have;
    if (tag != "ledger") throw std::runtime_error("checkpoint: bad ledger section");
    have_prev_ = have != 0;
    is >> prev_t_;
    for (int q = 0; q < n_quantities; ++q) is >> cum_[q];
    for (int q = 0; q < n_quantities; ++q) is >> prev_[q];
    times_.assign(count, 0.0);
    for (int q = 0; q < n_quantities; ++q) ratios_[q].assign(count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        is >> times_[i];
        for (int q = 0; q < n_quantities; ++q) is >> ratios_[q][i];
    }
}

Verdict check_lemma31_decay(const std::vector<EnergyReport>& history) {
    if (history.size() < 2)
        throw std::invalid_argument("check_lemma31_decay: need at least 2 reports");
    Verdict v;
    v.pass = true;
    for (std::size_t i = 1; i < history.size(); ++i) {
        const double prev = history[i - 1].e_nlogn + history[i - 1].e_psi;
        const double cur = history[i].e_nlogn + history[i].e_psi;
        if (cur > prev + 1e-10 * (1.0 + std::fabs(prev))) {
            v.pass = false;
            v.violation_index = long(i);
            v.detail = "energy increased at report " + std::to_string(i);
            return v;
        }
    }
    return v;
}

Verdict check_mass_and_max(const std::vector<EnergyReport>& history, double s0) {
    Verdict v;
    v.pass = true;
    if (history.empty()) return v;
    const double mass0 = history.front().mass_n;
    double max_n_seen = 0.0;
    for (const auto& r : history) max_n_seen = std::max(max_n_seen, r.max_n);
    for (std::size_t i = 0; i < history.size(); ++i) {
        const auto& r = history[i];
        if (std::fabs(r.mass_n - mass0) > 1e-12 * std::fabs(mass0)) {
            v.pass = false;
            v.violation_index = long(i);
            v.detail = "mass drift at report " + std::to_string(i);
            return v;
        }
        if (r.max_c > s0 * (1.0 + 1e-12)) {
            v.pass = false;
            v.violation_index = long(i);
            v.detail = "max principle violated at report " + std::to_string(i);
            return v;
        }
        if (r.min_n < -1e-8 * std::max(max_n_seen, 1e-300)) {
            v.pass = false;
            v.violation_index = long(i);
            v.detail = "negative density beyond tolerance at report " + std::to_string(i);
            return v;
        }
    }
    return v;
}

std::vector<GrowthVerdict> check_linear_growth(const CumulativeLedger& ledger,
                                               double window) {
    std::vector<GrowthVerdict> out;
    const auto& ts = ledger.times();
    if (ts.size() < 3) throw std::invalid_argument("check_linear_growth: ledger too short");
    const double t0 = ts.front(), t1 = ts.back();
    const double start = t1 - window * (t1 - t0);

    for (int q = 0; q < CumulativeLedger::n_quantities; ++q) {
        const auto& rq = ledger.ratio_history(q);
        GrowthVerdict gv;
        gv.quantity = CumulativeLedger::names()[q];
        std::vector<double> win;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            gv.c_hat = std::max(gv.c_hat, rq[i]);
            if (ts[i] >= start) win.push_back(rq[i]);
        }
        std::sort(win.begin(), win.end());
        const double median = win[win.size() / 2];
        const double sup = win.back();
        gv.window_sup = sup;
        gv.window_median = median;
        gv.pass = sup <= 1.1 * median + 1e-14 * (1.0 + sup);
        out.push_back(gv);
    }
    return out;
}

// --- weak residuals ---------------------------------------------------------

TestFunction default_test_function(const Grid& g, double support_end) {
    TestFunction tf;
    tf.support_end = support_end;
    const int dim = g.dim;
    std::array<double, 3> L = g.extents;
    const double Ts = support_end;

    auto eta = [Ts](double t) {
        if (t >= Ts) return 0.0;
        const double c = std::cos(M_PI * t / (2.0 * Ts));
        return c * c;
    };
    auto eta_t = [Ts](double t) {
        if (t >= Ts) return 0.0;
        return -(M_PI / (2.0 * Ts)) * std::sin(M_PI * t / Ts);
    };

    auto S = [L, dim](const Point& x) {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) {
            const double s = std::sin(M_PI * x[a] / L[a]);
            v *= s * s;
        }
        return v;
    };

    tf.phi = [=](const Point& x, double t) { return eta(t) * S(x); };
    tf.phi_t = [=](const Point& x, double t) { return eta_t(t) * S(x); };
    tf.phi_grad = [=](const Point& x, double t) {
        Point gout{0.0, 0.0, 0.0};
        const double e = eta(t);
        for (int a = 0; a < dim; ++a) {
            double v = (M_PI / L[a]) * std::sin(2.0 * M_PI * x[a] / L[a]);
            for (int b = 0; b < dim; ++b) {
                if (b == a) continue;
                const double s = std::sin(M_PI * x[b] / L[b]);
                v *= s * s;
            }
            gout[a] = e * v;
        }
        return gout;
    };

    // stream potential zeta = eta(t) prod_a sin^3(pi x_a / L_a);
    // psi = (d zeta/dy, -d zeta/dx, 0) is divergence-free.
    auto u3 = [L](int a, double x) {
        const double s = std::sin(M_PI * x / L[a]);
        return s * s * s;
    };
    auto du3 = [L](int a, double x) {
        const double w = M_PI / L[a];
        const double sv = std::sin(M_PI * x / L[a]);
        const double cv = std::cos(M_PI * x / L[a]);
        return 3.0 * w * sv * sv * cv;
    };
    auto ddu3 = [L](int a, double x) {
        const double w = M_PI / L[a];
        const double sv = std::sin(M_PI * x / L[a]);
        const double cv = std::cos(M_PI * x / L[a]);
        return 3.0 * w * w * sv * (2.0 * cv * cv - sv * sv);
    };
    // factor(x, deriv_axis, order): product over axes of u3 with the requested
    // derivative order (0, 1 or 2) on one axis
    auto zeta_part = [=](const Point& x, int d1, int d2) {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) {
            int order = (a == d1 ? 1 : 0) + (a == d2 ? 1 : 0);
            if (d1 == d2 && a == d1) order = 2;
            if (order == 0)
                v *= u3(a, x[a]);
            else if (order == 1)
                v *= du3(a, x[a]);
            else
                v *= ddu3(a, x[a]);
        }
        return v;
    };

    tf.psi = [=](const Point& x, double t) {
        const double e = eta(t);
        return Point{e * zeta_part(x, 1, -1), -e * zeta_part(x, 0, -1), 0.0};
    };
    tf.psi_t = [=](const Point& x, double t) {
        const double e = eta_t(t);
        return Point{e * zeta_part(x, 1, -1), -e * zeta_part(x, 0, -1), 0.0};
    };
    tf.psi_grad = [=](const Point& x, double t) {
        const double e = eta(t);
        std::array<Point, 3> J{};
        for (int i = 0; i < dim; ++i) {
            J[i][0] = e * zeta_part(x, 1, i);    // d psi_0 / d x_i
            J[i][1] = -e * zeta_part(x, 0, i);   // d psi_1 / d x_i
            J[i][2] = 0.0;
        }
        return J;
    };
    return tf;
}

std::array<double, 3> weak_residual(const std::vector<Snapshot>& snaps,
                                    const ModelParams& params, const TestFunction& tf) {
    if (snaps.size() < 2)
        throw std::invalid_argument("weak_residual: need at least 2 snapshots");
    const Grid& g = snaps.front().n.grid();
    if (tf.support_end > snaps.back().t + 1e-12)
        throw std::invalid_argument(
            "weak_residual: test function support extends past the last snapshot");
    {
        // spot-check spatial support
        Point w{0.0, 0.5 * g.extents[1], g.dim == 3 ? 0.5 * g.extents[2] : 0.0};
        if (std::fabs(tf.phi(w, 0.0)) > 1e-12)
            throw std::invalid_argument("weak_residual: test function nonzero on the wall");
    }

    const double vol = g.cell_volume();
    const double p = params.p;
    const double eps = params.epsilon;

    FlowSolver flow(g, params);
    VectorField yu(g);

    double R1 = 0.0, R2 = 0.0, R3 = 0.0;
    const std::size_t M = snaps.size();

    for (std::size_t m = 0; m < M; ++m) {
        const Snapshot& sn = snaps[m];
        const double t = sn.t;
        // trapezoid weight over the snapshot times
        double w;
        if (m == 0)
            w = 0.5 * (snaps[1].t - snaps[0].t);
        else if (m + 1 == M)
            w = 0.5 * (snaps[M - 1].t - snaps[M - 2].t);
        else
            w = 0.5 * (snaps[m + 1].t - snaps[m - 1].t);

        const bool needs_yosida = params.kappa != 0.0 && tf.support_end > t;
        if (needs_yosida) flow.yosida(sn.u, eps, yu);

        double a1 = 0.0, a2 = 0.0, a3 = 0.0;
        cells_of(g, [&](const I3& q) {
            Point x{g.center(0, q[0]), g.center(1, q[1]),
                    g.dim == 3 ? g.center(2, q[2]) : 0.0};
            const double phit = tf.phi_t(x, t);
            const double phiv = tf.phi(x, t);
            const Point gphi = tf.phi_grad(x, t);

            const double nv = at(sn.n, q);
            const double cv = at(sn.c, q);

            double uc[3] = {0.0, 0.0, 0.0};
            for (int c = 0; c < g.dim; ++c) {
                const I3 hi = shift(q, c, 1);
                uc[c] = 0.5 * (sn.u.comp(c, q[0], q[1], q[2]) +
                               sn.u.comp(c, hi[0], hi[1], hi[2]));
            }

            // ghost-consistent cell gradients (fields satisfy the BCs)
            double gn[3] = {0, 0, 0}, gc[3] = {0, 0, 0};
            for (int a = 0; a < g.dim; ++a) {
                const double inv = 1.0 / g.dx[a];
                gn[a] = 0.5 * ((at(sn.n, shift(q, a, 1)) - nv) + (nv - at(sn.n, shift(q, a, -1)))) * inv;
                gc[a] = 0.5 * ((at(sn.c, shift(q, a, 1)) - cv) + (cv - at(sn.c, shift(q, a, -1)))) * inv;
            }
            double gn2 = 0.0;
            for (int a = 0; a < g.dim; ++a) gn2 += gn[a] * gn[a];
            const double dcoef = std::pow(gn2 + eps, 0.5 * (p - 2.0));
            const double mob = nv / (1.0 + eps * nv);
            const double chi = params.sensitivity.chi(cv);

            double nugphi = 0.0, dflux = 0.0, chflux = 0.0, cugphi = 0.0, gcgphi = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                nugphi += nv * uc[a] * gphi[a];
                dflux += dcoef * gn[a] * gphi[a];
                chflux += mob * chi * gc[a] * gphi[a];
                cugphi += cv * uc[a] * gphi[a];
                gcgphi += gc[a] * gphi[a];
            }
            const double feps = std::log1p(eps * nv) / eps;

            a1 += -nv * phit - nugphi + dflux - chflux;
            a2 += -cv * phit - cugphi + gcgphi + feps * params.sensitivity.f(cv) * phiv;

            // momentum
            const Point psiv = tf.psi(x, t);
            const Point psit = tf.psi_t(x, t);
            const auto jpsi = tf.psi_grad(x, t);

            double upsit = 0.0, visc = 0.0, conv = 0.0, force = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                upsit += uc[a] * psit[a];
                force += nv * params.phi_gradient[a] * psiv[a];
            }
            // grad u : grad psi at the cell
            for (int jcomp = 0; jcomp < g.dim; ++jcomp) {
                for (int a = 0; a < g.dim; ++a) {
                    double duv;
                    if (a == jcomp) {
                        const I3 hi = shift(q, jcomp, 1);
                        duv = (sn.u.comp(jcomp, hi[0], hi[1], hi[2]) -
                               sn.u.comp(jcomp, q[0], q[1], q[2])) /
                              g.dx[a];
                    } else {
                        const I3 hi = shift(q, jcomp, 1);
                        const I3 qp = shift(q, a, 1), qm = shift(q, a, -1);
                        const I3 hp = shift(hi, a, 1), hm = shift(hi, a, -1);
                        duv = 0.25 *
                              ((sn.u.comp(jcomp, qp[0], qp[1], qp[2]) -
                                sn.u.comp(jcomp, qm[0], qm[1], qm[2])) +
                               (sn.u.comp(jcomp, hp[0], hp[1], hp[2]) -
                                sn.u.comp(jcomp, hm[0], hm[1], hm[2]))) /
                              g.dx[a];
                    }
                    visc += duv * jpsi[a][jcomp];
                }
            }
            if (needs_yosida) {
                for (int a = 0; a < g.dim; ++a) {
                    const I3 hi = shift(q, a, 1);
                    const double ya =
                        0.5 * (yu.comp(a, q[0], q[1], q[2]) + yu.comp(a, hi[0], hi[1], hi[2]));
                    for (int b = 0; b < g.dim; ++b) conv += ya * uc[b] * jpsi[a][b];
                }
            }
            a3 += -upsit - params.kappa * conv + visc - force;
        });
        R1 += w * a1 * vol;
        R2 += w * a2 * vol;
        R3 += w * a3 * vol;
    }

    // initial-data terms
    {
        const Snapshot& s0 = snaps.front();
        double b1 = 0.0, b2 = 0.0, b3 = 0.0;
        cells_of(g, [&](const I3& q) {
            Point x{g.center(0, q[0]), g.center(1, q[1]),
                    g.dim == 3 ? g.center(2, q[2]) : 0.0};
            b1 += at(s0.n, q) * tf.phi(x, s0.t);
            b2 += at(s0.c, q) * tf.phi(x, s0.t);
            const Point psiv = tf.psi(x, s0.t);
            for (int a = 0; a < g.dim; ++a) {
                const I3 hi = shift(q, a, 1);
                const double ua =
                    0.5 * (s0.u.comp(a, q[0], q[1], q[2]) + s0.u.comp(a, hi[0], hi[1], hi[2]));
                b3 += ua * psiv[a];
            }
        });
        R1 -= b1 * vol;
        R2 -= b2 * vol;
        R3 -= b3 * vol;
    }

    return {std::fabs(R1), std::fabs(R2), std::fabs(R3)};
}

// --- CSV --------------------------------------------------------------------

void write_csv_header(std::ostream& os) {
    os << "t,mass_n,min_n,max_c,e_nlogn,e_psi,e_kin,d_plap,d_plap_power,d_hess,"
          "d_quart,d_gradu,norm_u_103,norm_n_r,cum_d_plap_power,cum_d_hess,"
          "cum_d_quart,cum_d_gradu,cum_norm_u_103,cum_norm_n_r,cum_gradc4,dt,"
          "floored_cells\n";
}

void write_csv_row(std::ostream& os, const EnergyReport& r, const CumulativeLedger& led) {
    char buf[1024];
    std::snprintf(
        buf, sizeof buf,
        "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
        "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%ld\n",
        r.t, r.mass_n, r.min_n, r.max_c, r.e_nlogn, r.e_psi, r.e_kin, r.d_plap,
        r.d_plap_power, r.d_hess, r.d_quart, r.d_gradu, r.norm_u_103, r.norm_n_r,
        led.cumulative(0), led.cumulative(1), led.cumulative(2), led.cumulative(3),
        led.cumulative(4), led.cumulative(5), led.cumulative(6), r.dt, r.floored_cells);
    os << buf;
}

}  // namespace cns
