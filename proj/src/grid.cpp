#include "cns/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cns {

Grid::Grid(int dim_, std::array<int, 3> cells_, std::array<double, 3> extents_)
    : dim(dim_), cells(cells_), extents(extents_) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("grid dim must be 2 or 3");
    if (dim == 2) {
        cells[2] = 1;
        extents[2] = 1.0;
    }
    for (int a = 0; a < dim; ++a) {
        if (cells[a] < 4) throw std::invalid_argument("grid needs >= 4 cells per axis");
        if (!(extents[a] > 0.0)) throw std::invalid_argument("grid extents must be positive");
        dx[a] = extents[a] / double(cells[a]);
    }
    dx[2] = dim == 3 ? dx[2] : 1.0;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= dx[a];
    return v;
}

double Grid::min_dx() const {
    double m = dx[0];
    for (int a = 1; a < dim; ++a) m = std::min(m, dx[a]);
    return m;
}

long Grid::interior_cells() const {
    long n = 1;
    for (int a = 0; a < dim; ++a) n *= cells[a];
    return n;
}

bool Grid::operator==(const Grid& o) const {
    return dim == o.dim && cells == o.cells && extents == o.extents;
}

ScalarField::ScalarField(const Grid& g) : grid_(&g) {
    const std::size_t n0 = std::size_t(g.cells[0]) + 2;
    const std::size_t n1 = std::size_t(g.cells[1]) + 2;
    const std::size_t n2 = g.dim == 3 ? std::size_t(g.cells[2]) + 2 : 1;
    st1_ = n0;
    st2_ = g.dim == 3 ? n0 * n1 : 0;
    base_ = 1 + st1_ + (g.dim == 3 ? st2_ : 0);
    data_.assign(n0 * n1 * n2, 0.0);
}

void ScalarField::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

VectorField::VectorField(const Grid& g) : grid_(&g) {
    for (int c = 0; c < g.dim; ++c) {
        std::size_t n[3];
        for (int a = 0; a < 3; ++a) {
            if (a >= g.dim)
                n[a] = 1;
            else
                n[a] = std::size_t(g.cells[a]) + (a == c ? 3 : 2);
        }
        lay_[c].st1 = n[0];
        lay_[c].st2 = g.dim == 3 ? n[0] * n[1] : 0;
        lay_[c].base = 1 + lay_[c].st1 + (g.dim == 3 ? lay_[c].st2 : 0);
        data_[c].assign(n[0] * n[1] * n[2], 0.0);
    }
}

void VectorField::fill(double v) {
    for (int c = 0; c < grid_->dim; ++c)
        std::fill(data_[c].begin(), data_[c].end(), v);
}

namespace {

// Extended loop bounds: [lo[a], hi[a]) covering ghosts of axes already filled.
struct Range {
    int lo[3], hi[3];
};

}  // namespace

void fill_ghosts(ScalarField& s, BC bc) {
    const Grid& g = s.grid();
    const double sign = bc == BC::neumann_zero ? 1.0 : -1.0;
    const int n2 = g.dim == 3 ? g.cells[2] : 1;

    // axis 0
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j) {
            s(-1, j, k) = sign * s(0, j, k);
            s(g.cells[0], j, k) = sign * s(g.cells[0] - 1, j, k);
        }
    // axis 1 (covers axis-0 ghosts so corners are consistent)
    for (int k = 0; k < n2; ++k)
        for (int i = -1; i <= g.cells[0]; ++i) {
            s(i, -1, k) = sign * s(i, 0, k);
            s(i, g.cells[1], k) = sign * s(i, g.cells[1] - 1, k);
        }
    if (g.dim == 3) {
        for (int j = -1; j <= g.cells[1]; ++j)
            for (int i = -1; i <= g.cells[0]; ++i) {
                s(i, j, -1) = sign * s(i, j, 0);
                s(i, j, g.cells[2]) = sign * s(i, j, g.cells[2] - 1);
            }
    }
}

void fill_ghosts(VectorField& v, BC bc) {
    const Grid& g = v.grid();
    const bool noslip = bc == BC::dirichlet_zero;
    for (int c = 0; c < g.dim; ++c) {
        int lo[3] = {0, 0, 0};
        int hi[3] = {g.cells[0], g.cells[1], g.dim == 3 ? g.cells[2] : 1};
        hi[c] += 1;  // face index runs 0..cells[c] along the component's axis

        for (int a = 0; a < g.dim; ++a) {
            const int last = hi[a] - 1;
            const int b1 = a == 0 ? 1 : 0, b2 = a == 2 ? 1 : 2;  // transverse axes
            for (int t2 = lo[b2]; t2 < hi[b2]; ++t2)
                for (int t1 = lo[b1]; t1 < hi[b1]; ++t1) {
                    int p[3] = {0, 0, 0};
                    p[b1] = t1;
                    p[b2] = t2;
                    auto at = [&](int ia) -> double& {
                        p[a] = ia;
                        return v.comp(c, p[0], p[1], p[2]);
                    };
                    if (a == c) {
                        // faces 0 and last lie on the wall
                        if (noslip) {
                            at(0) = 0.0;
                            at(last) = 0.0;
                            at(-1) = -at(1);
                            at(last + 1) = -at(last - 1);
                        } else {
                            at(-1) = at(1);
                            at(last + 1) = at(last - 1);
                        }
                    } else {
                        const double sgn = noslip ? -1.0 : 1.0;
                        at(-1) = sgn * at(0);
                        at(hi[a]) = sgn * at(last);
                    }
                }
            lo[a] -= 1;
            hi[a] += 1;
        }
    }
}

double integrate(const ScalarField& s) {
    const Grid& g = s.grid();
    const int n2 = g.dim == 3 ? g.cells[2] : 1;
    double sum = 0.0;
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) sum += s(i, j, k);
    return sum * g.cell_volume();
}

double min_interior(const ScalarField& s) {
    const Grid& g = s.grid();
    const int n2 = g.dim == 3 ? g.cells[2] : 1;
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) m = std::min(m, s(i, j, k));
    return m;
}

double max_interior(const ScalarField& s) {
    const Grid& g = s.grid();
    const int n2 = g.dim == 3 ? g.cells[2] : 1;
    double m = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) m = std::max(m, s(i, j, k));
    return m;
}

double l2_norm(const ScalarField& s) {
    const Grid& g = s.grid();
    const int n2 = g.dim == 3 ? g.cells[2] : 1;
    double sum = 0.0;
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) sum += s(i, j, k) * s(i, j, k);
    return std::sqrt(sum * g.cell_volume());
}

namespace {

template <class F>
void for_each_face(const Grid& g, int c, F&& fn) {
    const int n0 = g.cells[0] + (c == 0 ? 1 : 0);
    const int n1 = g.cells[1] + (c == 1 ? 1 : 0);
    const int n2 = g.dim == 3 ? g.cells[2] + (c == 2 ? 1 : 0) : 1;
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < n1; ++j)
            for (int i = 0; i < n0; ++i) fn(i, j, k);
}

}  // namespace

double l2_norm(const VectorField& v) { return std::sqrt(dot(v, v)); }

double dot(const VectorField& a, const VectorField& b) {
    const Grid& g = a.grid();
    double sum = 0.0;
    for (int c = 0; c < g.dim; ++c)
        for_each_face(g, c, [&](int i, int j, int k) {
            sum += a.comp(c, i, j, k) * b.comp(c, i, j, k);
        });
    return sum * g.cell_volume();
}

double max_abs(const VectorField& v) {
    const Grid& g = v.grid();
    double m = 0.0;
    for (int c = 0; c < g.dim; ++c)
        for_each_face(g, c, [&](int i, int j, int k) {
            m = std::max(m, std::fabs(v.comp(c, i, j, k)));
        });
    return m;
}

bool all_finite(const ScalarField& s) {
    for (double v : s.raw())
        if (!std::isfinite(v)) return false;
    return true;
}

bool all_finite(const VectorField& v) {
    for (int c = 0; c < v.grid().dim; ++c)
        for (double x : v.raw(c))
            if (!std::isfinite(x)) return false;
    return true;
}

void copy_into(const ScalarField& src, ScalarField& dst) { dst.raw() = src.raw(); }

void copy_into(const VectorField& src, VectorField& dst) {
    for (int c = 0; c < src.grid().dim; ++c) dst.raw(c) = src.raw(c);
}

void axpy(double a, const VectorField& x, VectorField& y) {
    for (int c = 0; c < x.grid().dim; ++c) {
        const auto& xs = x.raw(c);
        auto& ys = y.raw(c);
        for (std::size_t i = 0; i < xs.size(); ++i) ys[i] += a * xs[i];
    }
}

void axpy(double a, const ScalarField& x, ScalarField& y) {
    const auto& xs = x.raw();
    auto& ys = y.raw();
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] += a * xs[i];
}

void scale(VectorField& v, double a) {
    for (int c = 0; c < v.grid().dim; ++c)
        for (double& x : v.raw(c)) x *= a;
}

}  // namespace cns
