#include "cns/operators.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace cns {

namespace {

using I3 = std::array<int, 3>;

inline I3 shift(I3 p, int a, int d) {
    p[a] += d;
    return p;
}

inline double at(const ScalarField& s, const I3& p) { return s(p[0], p[1], p[2]); }

// Loop over all faces of component a: own axis 0..cells[a], transverse interior.
template <class F>
void faces(const Grid& g, int a, F&& fn) {
    I3 n{g.cells[0], g.cells[1], g.dim == 3 ? g.cells[2] : 1};
    n[a] += 1;
    for (int k = 0; k < n[2]; ++k)
        for (int j = 0; j < n[1]; ++j)
            for (int i = 0; i < n[0]; ++i) fn(I3{i, j, k});
}

template <class F>
void cells_of(const Grid& g, F&& fn) {
    const int n2 = g.dim == 3 ? g.cells[2] : 1;
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) fn(I3{i, j, k});
}

// Squared gradient magnitude at a face of axis a: normal difference plus the
// four-point average of each tangential difference.
inline double grad_sq_at_face(const ScalarField& s, const Grid& g, int a, const I3& p) {
    const I3 lo = shift(p, a, -1);
    const double gn = (at(s, p) - at(s, lo)) / g.dx[a];
    double sq = gn * gn;
    for (int b = 0; b < g.dim; ++b) {
        if (b == a) continue;
        const double gt = (at(s, shift(p, b, 1)) - at(s, shift(p, b, -1)) +
                           at(s, shift(lo, b, 1)) - at(s, shift(lo, b, -1))) /
                          (4.0 * g.dx[b]);
        sq += gt * gt;
    }
    return sq;
}

}  // namespace

void face_gradient(const ScalarField& s, VectorField& out) {
    const Grid& g = s.grid();
    for (int a = 0; a < g.dim; ++a) {
        const double inv = 1.0 / g.dx[a];
        faces(g, a, [&](const I3& p) {
            out.comp(a, p[0], p[1], p[2]) = (at(s, p) - at(s, shift(p, a, -1))) * inv;
        });
    }
}

VectorField face_gradient(const ScalarField& s) {
    VectorField out(s.grid());
    face_gradient(s, out);
    return out;
}

void cell_divergence(const VectorField& v, ScalarField& out) {
    const Grid& g = v.grid();
    cells_of(g, [&](const I3& p) {
        double d = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const I3 hi = shift(p, a, 1);
            d += (v.comp(a, hi[0], hi[1], hi[2]) - v.comp(a, p[0], p[1], p[2])) / g.dx[a];
        }
        out(p[0], p[1], p[2]) = d;
    });
}

ScalarField cell_divergence(const VectorField& v) {
    ScalarField out(v.grid());
    cell_divergence(v, out);
    return out;
}

void laplacian(const ScalarField& s, ScalarField& out) {
    const Grid& g = s.grid();
    cells_of(g, [&](const I3& p) {
        double acc = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double hi = at(s, shift(p, a, 1)) - at(s, p);
            const double lo = at(s, p) - at(s, shift(p, a, -1));
            acc += (hi - lo) / (g.dx[a] * g.dx[a]);
        }
        out(p[0], p[1], p[2]) = acc;
    });
}

ScalarField laplacian(const ScalarField& s) {
    ScalarField out(s.grid());
    laplacian(s, out);
    return out;
}

namespace {

// Pointer kernel shared by the flux assembly and the dt controller: visits
// every face of axis a and hands the squared gradient plus the normal
// difference to the sink.
template <class Sink>
void plap_face_sweep(const ScalarField& n, const Grid& g, int a, Sink&& sink) {
    const double* nd = n.data();
    const std::ptrdiff_t oa = n.stride(a);
    const double inv_a = 1.0 / g.dx[a];
    I3 cnt{g.cells[0], g.cells[1], g.dim == 3 ? g.cells[2] : 1};
    cnt[a] += 1;
    std::ptrdiff_t ob[2] = {0, 0};
    double inv4[2] = {0.0, 0.0};
    int nb = 0;
    for (int b = 0; b < g.dim; ++b) {
        if (b == a) continue;
        ob[nb] = n.stride(b);
        inv4[nb] = 0.25 / g.dx[b];
        ++nb;
    }
    for (int k = 0; k < cnt[2]; ++k)
        for (int j = 0; j < cnt[1]; ++j) {
            std::size_t idx = n.index(0, j, k);
            for (int i = 0; i < cnt[0]; ++i, ++idx) {
                const double* hi = nd + idx;
                const double* lo = hi - oa;
                const double gn = (*hi - *lo) * inv_a;
                double sq = gn * gn;
                for (int b = 0; b < nb; ++b) {
                    const double gt =
                        (hi[ob[b]] - hi[-ob[b]] + lo[ob[b]] - lo[-ob[b]]) * inv4[b];
                    sq += gt * gt;
                }
                sink(a, i, j, k, sq, gn);
            }
        }
}

}  // namespace

void plaplacian_div(const ScalarField& n, double p, double eps, ScalarField& out) {
    if (p < 2.0) throw std::domain_error("fast-diffusion unsupported");
    const Grid& g = n.grid();
    VectorField flux(g);
    const double expo = 0.5 * (p - 2.0);
    for (int a = 0; a < g.dim; ++a) {
        double* fd = flux.data(a);
        plap_face_sweep(n, g, a, [&](int c, int i, int j, int k, double sq, double gn) {
            fd[flux.index(c, i, j, k)] = std::pow(sq + eps, expo) * gn;
        });
    }
    cell_divergence(flux, out);
}

ScalarField plaplacian_div(const ScalarField& n, double p, double eps) {
    ScalarField out(n.grid());
    plaplacian_div(n, p, eps, out);
    return out;
}

void chemotaxis_div(const ScalarField& n, const ScalarField& c,
                    const ModelParams& params, ScalarField& out) {
    const Grid& g = n.grid();
    VectorField flux(g);
    const double eps = params.epsilon;
    for (int a = 0; a < g.dim; ++a) {
        const double inv = 1.0 / g.dx[a];
        faces(g, a, [&](const I3& q) {
            const I3 lo = shift(q, a, -1);
            const double gc = (at(c, q) - at(c, lo)) * inv;
            const double cf = 0.5 * (at(c, q) + at(c, lo));
            const double drift = params.sensitivity.chi(cf) * gc;
            const double nd = drift > 0.0 ? at(n, lo) : at(n, q);
            const double mob = nd / (1.0 + eps * nd);  // n F_eps'(n), donor cell
            flux.comp(a, q[0], q[1], q[2]) = mob * drift;
        });
    }
    cell_divergence(flux, out);
}

ScalarField chemotaxis_div(const ScalarField& n, const ScalarField& c,
                           const ModelParams& params) {
    ScalarField out(n.grid());
    chemotaxis_div(n, c, params, out);
    return out;
}

void advect_scalar(const ScalarField& s, const VectorField& u, ScalarField& out) {
    const Grid& g = s.grid();
    VectorField flux(g);
    for (int a = 0; a < g.dim; ++a) {
        faces(g, a, [&](const I3& q) {
            const double uf = u.comp(a, q[0], q[1], q[2]);
            const double sd = uf > 0.0 ? at(s, shift(q, a, -1)) : at(s, q);
            flux.comp(a, q[0], q[1], q[2]) = uf * sd;
        });
    }
    cell_divergence(flux, out);
    for (double& v : out.raw()) v = -v;
}

ScalarField advect_scalar(const ScalarField& s, const VectorField& u) {
    ScalarField out(s.grid());
    advect_scalar(s, u, out);
    return out;
}

void advect_velocity(const VectorField& u, const VectorField& w, VectorField& out) {
    const Grid& g = u.grid();
    out.fill(0.0);
    for (int cmp = 0; cmp < g.dim; ++cmp) {
        faces(g, cmp, [&](const I3& q) {
            if (q[cmp] == 0 || q[cmp] == g.cells[cmp]) return;  // wall faces pinned
            double acc = 0.0;
            for (int b = 0; b < g.dim; ++b) {
                double wb;
                if (b == cmp) {
                    wb = w.comp(b, q[0], q[1], q[2]);
                } else {
                    // average the four surrounding b-faces
                    const I3 lo = shift(q, cmp, -1);
                    const I3 hib = shift(q, b, 1), lob_hi = shift(lo, b, 1);
                    wb = 0.25 * (w.comp(b, q[0], q[1], q[2]) +
                                 w.comp(b, hib[0], hib[1], hib[2]) +
                                 w.comp(b, lo[0], lo[1], lo[2]) +
                                 w.comp(b, lob_hi[0], lob_hi[1], lob_hi[2]));
                }
                const double inv = 1.0 / g.dx[b];
                double dudb;
                if (wb > 0.0) {
                    const I3 m = shift(q, b, -1);
                    dudb = (u.comp(cmp, q[0], q[1], q[2]) - u.comp(cmp, m[0], m[1], m[2])) * inv;
                } else {
                    const I3 pl = shift(q, b, 1);
                    dudb = (u.comp(cmp, pl[0], pl[1], pl[2]) - u.comp(cmp, q[0], q[1], q[2])) * inv;
                }
                acc += wb * dudb;
            }
            out.comp(cmp, q[0], q[1], q[2]) = -acc;
        });
    }
}

VectorField advect_velocity(const VectorField& u, const VectorField& w) {
    VectorField out(u.grid());
    advect_velocity(u, w, out);
    return out;
}

void laplacian_velocity(const VectorField& u, VectorField& out) {
    const Grid& g = u.grid();
    out.fill(0.0);
    for (int cmp = 0; cmp < g.dim; ++cmp) {
        faces(g, cmp, [&](const I3& q) {
            if (q[cmp] == 0 || q[cmp] == g.cells[cmp]) return;
            double acc = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                const I3 hi = shift(q, a, 1), lo = shift(q, a, -1);
                acc += (u.comp(cmp, hi[0], hi[1], hi[2]) - 2.0 * u.comp(cmp, q[0], q[1], q[2]) +
                        u.comp(cmp, lo[0], lo[1], lo[2])) /
                       (g.dx[a] * g.dx[a]);
            }
            out.comp(cmp, q[0], q[1], q[2]) = acc;
        });
    }
}

VectorField laplacian_velocity(const VectorField& u) {
    VectorField out(u.grid());
    laplacian_velocity(u, out);
    return out;
}

void buoyancy_force(const ScalarField& n, const std::array<double, 3>& grad_phi,
                    VectorField& out) {
    const Grid& g = n.grid();
    for (int a = 0; a < g.dim; ++a) {
        faces(g, a, [&](const I3& q) {
            const double nf = 0.5 * (at(n, q) + at(n, shift(q, a, -1)));
            out.comp(a, q[0], q[1], q[2]) = nf * grad_phi[a];
        });
    }
}

VectorField buoyancy_force(const ScalarField& n, const std::array<double, 3>& grad_phi) {
    VectorField out(n.grid());
    buoyancy_force(n, grad_phi, out);
    return out;
}

double face_integral(const VectorField& v, int component) {
    const Grid& g = v.grid();
    const double vol = g.cell_volume();
    double sum = 0.0;
    faces(g, component, [&](const I3& q) {
        const bool wall = q[component] == 0 || q[component] == g.cells[component];
        sum += (wall ? 0.5 : 1.0) * v.comp(component, q[0], q[1], q[2]);
    });
    return sum * vol;
}

double max_plap_diffusivity(const ScalarField& n, double p, double eps) {
    const Grid& g = n.grid();
    // the diffusivity is monotone in |grad n|^2 for p >= 2
    double gmax = 0.0;
    for (int a = 0; a < g.dim; ++a)
        plap_face_sweep(n, g, a, [&](int, int, int, int, double sq, double) {
            gmax = std::max(gmax, sq);
        });
    return std::pow(gmax + eps, 0.5 * (p - 2.0));
}

double max_chemotaxis_proxy(const ScalarField& n, const ScalarField& c,
                            const ModelParams& params) {
    const Grid& g = n.grid();
    double m = 0.0;
    for (int a = 0; a < g.dim; ++a) {
        const double inv = 1.0 / g.dx[a];
        faces(g, a, [&](const I3& q) {
            const I3 lo = shift(q, a, -1);
            const double gc = (at(c, q) - at(c, lo)) * inv;
            const double cf = 0.5 * (at(c, q) + at(c, lo));
            const double drift = params.sensitivity.chi(cf) * gc;
            const double nd = drift > 0.0 ? at(n, lo) : at(n, q);
            const double mob = nd / (1.0 + params.epsilon * nd);
            m = std::max(m, std::fabs(mob * params.sensitivity.chi(cf) * gc) * g.dx[a]);
        });
    }
    return m;
}

}  // namespace cns
