#include "cns/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <vector>

#include "cns/errors.hpp"
#include "cns/operators.hpp"

namespace cns {

namespace {

double interior_mean(const ScalarField& s) {
    return integrate(s) / (s.grid().interior_cells() * s.grid().cell_volume());
}

// 1D eigenvalues of -Laplacian for the cell-centered Neumann stencil (DCT-II
// modes cos(pi k (i+1/2)/n), k = 0..n-1).
std::vector<double> neumann_eigs(int n, double dx) {
    std::vector<double> lam(n);
    for (int k = 0; k < n; ++k)
        lam[k] = (2.0 - 2.0 * std::cos(M_PI * double(k) / double(n))) / (dx * dx);
    return lam;
}

}  // namespace

struct PoissonSolver::Impl {
    std::vector<double> buf;
    fftw_plan fwd = nullptr, bwd = nullptr;
    std::vector<double> lam[3];  // eigenvalues of -Laplacian per axis
    double norm = 1.0;
    int n[3] = {1, 1, 1};

    ~Impl() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

PoissonSolver::PoissonSolver(const Grid& g, Config cfg) : grid_(g), cfg_(cfg) {
    impl_ = std::make_unique<Impl>();
    for (int a = 0; a < g.dim; ++a) {
        impl_->n[a] = g.cells[a];
        impl_->lam[a] = neumann_eigs(g.cells[a], g.dx[a]);
        impl_->norm *= 2.0 * double(g.cells[a]);
    }
    long total = 1;
    for (int a = 0; a < g.dim; ++a) total *= impl_->n[a];
    impl_->buf.assign(std::size_t(total), 0.0);

    // fftw wants the slowest-varying dimension first
    int dims[3];
    fftw_r2r_kind kf[3], kb[3];
    for (int a = 0; a < g.dim; ++a) {
        dims[a] = impl_->n[g.dim - 1 - a];
        kf[a] = FFTW_REDFT10;
        kb[a] = FFTW_REDFT01;
    }
    impl_->fwd = fftw_plan_r2r(g.dim, dims, impl_->buf.data(), impl_->buf.data(), kf,
                               FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_r2r(g.dim, dims, impl_->buf.data(), impl_->buf.data(), kb,
                               FFTW_ESTIMATE);
}

PoissonSolver::~PoissonSolver() = default;

void PoissonSolver::solve(const ScalarField& rhs, ScalarField& q) {
    const Grid& g = grid_;
    const double rhs_norm = l2_norm(rhs);

    if (cfg_.backend == Backend::cg) {
        solve_cg(rhs, q, rhs_norm);
    } else {
        Impl& im = *impl_;
        const int n0 = im.n[0], n1 = im.n[1], n2 = im.n[2];
        for (int k = 0; k < n2; ++k)
            for (int j = 0; j < n1; ++j)
                for (int i = 0; i < n0; ++i)
                    im.buf[std::size_t(i) + std::size_t(n0) * (j + std::size_t(n1) * k)] =
                        rhs(i, j, k);
        fftw_execute(im.fwd);
        for (int k = 0; k < n2; ++k)
            for (int j = 0; j < n1; ++j)
                for (int i = 0; i < n0; ++i) {
                    const std::size_t id =
                        std::size_t(i) + std::size_t(n0) * (j + std::size_t(n1) * k);
                    double lam = -im.lam[0][i] - im.lam[1][j];
                    if (g.dim == 3) lam -= im.lam[2][k];
                    im.buf[id] = (i == 0 && j == 0 && k == 0) ? 0.0 : im.buf[id] / lam;
                }
        fftw_execute(im.bwd);
        const double s = 1.0 / im.norm;
        for (int k = 0; k < n2; ++k)
            for (int j = 0; j < n1; ++j)
                for (int i = 0; i < n0; ++i)
                    q(i, j, k) =
                        im.buf[std::size_t(i) + std::size_t(n0) * (j + std::size_t(n1) * k)] * s;
    }

    // exact zero mean, then refresh ghosts for downstream gradients
    const double mean = interior_mean(q);
    const int n2 = g.dim == 3 ? g.cells[2] : 1;
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) q(i, j, k) -= mean;
    fill_ghosts(q, BC::neumann_zero);

    // residual contract
    ScalarField lap(g);
    laplacian(q, lap);
    const double rhs_mean = interior_mean(rhs);
    double rr = 0.0;
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const double d = lap(i, j, k) - (rhs(i, j, k) - rhs_mean);
                rr += d * d;
            }
    const double res = std::sqrt(rr * g.cell_volume());
    last_residual_ = rhs_norm > 0.0 ? res / rhs_norm : res;
    if (res > cfg_.tolerance * rhs_norm && rhs_norm > 0.0)
        throw SolverError("poisson: residual contract violated", last_residual_, 0);
}

void PoissonSolver::solve_cg(const ScalarField& rhs, ScalarField& q, double rhs_norm) {
    const Grid& g = grid_;
    const int n2 = g.dim == 3 ? g.cells[2] : 1;
    const double rhs_mean = interior_mean(rhs);

    // A = -Laplacian (SPD on the zero-mean subspace), b = -(rhs - mean)
    ScalarField x(g), r(g), p(g), ap(g);
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) r(i, j, k) = -(rhs(i, j, k) - rhs_mean);
    copy_into(r, p);

    auto dot_cells = [&](const ScalarField& a, const ScalarField& b) {
        double s = 0.0;
        for (int k = 0; k < n2; ++k)
            for (int j = 0; j < g.cells[1]; ++j)
                for (int i = 0; i < g.cells[0]; ++i) s += a(i, j, k) * b(i, j, k);
        return s;
    };

    const double b2 = dot_cells(r, r);
    const double target2 = cfg_.tolerance * cfg_.tolerance * b2;
    double rr = b2;
    int it = 0;
    while (rr > target2 && b2 > 0.0) {
        if (++it > cfg_.max_iterations)
            throw SolverError("poisson cg: max iterations", std::sqrt(rr / b2), it);
        fill_ghosts(p, BC::neumann_zero);
        laplacian(p, ap);
        for (double& v : ap.raw()) v = -v;
        const double alpha = rr / dot_cells(p, ap);
        axpy(alpha, p, x);
        axpy(-alpha, ap, r);
        const double rr_new = dot_cells(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (int k = 0; k < n2; ++k)
            for (int j = 0; j < g.cells[1]; ++j)
                for (int i = 0; i < g.cells[0]; ++i)
                    p(i, j, k) = r(i, j, k) + beta * p(i, j, k);
    }
    copy_into(x, q);
    (void)rhs_norm;
}

// ---------------------------------------------------------------------------

namespace {

// v = curl psi with psi zero on the boundary nodes
void curl_from_nodes(const Grid& g, const std::vector<double>& psi_nodes, VectorField& v) {
    const int m0 = g.cells[0] - 1;
    auto psi = [&](int i, int j) -> double {
        if (i <= 0 || i >= g.cells[0] || j <= 0 || j >= g.cells[1]) return 0.0;
        return psi_nodes[std::size_t(i - 1) + std::size_t(m0) * (j - 1)];
    };
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i <= g.cells[0]; ++i)
            v.comp(0, i, j) = (psi(i, j + 1) - psi(i, j)) / g.dx[1];
    for (int j = 0; j <= g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i)
            v.comp(1, i, j) = -(psi(i + 1, j) - psi(i, j)) / g.dx[0];
    fill_ghosts(v, BC::dirichlet_zero);
}

// node curl (adjoint of curl_from_nodes up to the uniform volume weight)
void curl_to_nodes(const Grid& g, const VectorField& v, std::vector<double>& out) {
    const int m0 = g.cells[0] - 1, m1 = g.cells[1] - 1;
    for (int j = 1; j <= m1; ++j)
        for (int i = 1; i <= m0; ++i)
            out[std::size_t(i - 1) + std::size_t(m0) * (j - 1)] =
                (v.comp(1, i, j) - v.comp(1, i - 1, j)) / g.dx[0] -
                (v.comp(0, i, j) - v.comp(0, i, j - 1)) / g.dx[1];
}

}  // namespace

struct StreamPreconditioner2D::Impl {
    int m0 = 0, m1 = 0;
    long n = 0;
    long bw = 0;               // lower bandwidth of the Galerkin stencil
    std::vector<double> band;  // Cholesky factor, row-major band storage
    std::vector<double> bandT; // transposed copy so both sweeps read contiguous
    std::vector<double> rhs;
    VectorField w, kw;

    double& L(long i, long d) { return band[std::size_t(i) * (bw + 1) + d]; }
    // bandT[j][d] = L(j + d, d): column j of L stored contiguously
    double& Lt(long j, long d) { return bandT[std::size_t(j) * (bw + 1) + d]; }
};

StreamPreconditioner2D::StreamPreconditioner2D(const Grid& g, double eps)
    : grid_(g), eps_(eps) {
    if (g.dim != 2) throw std::invalid_argument("StreamPreconditioner2D requires 2D");
    impl_ = std::make_unique<Impl>();
    Impl& im = *impl_;
    im.m0 = g.cells[0] - 1;
    im.m1 = g.cells[1] - 1;
    im.n = long(im.m0) * im.m1;
    im.bw = 2L * im.m0 + 2;  // width-2 stencil in both axes
    im.rhs.assign(std::size_t(im.n), 0.0);
    im.w = VectorField(g);
    im.kw = VectorField(g);
    im.band.assign(std::size_t(im.n) * (im.bw + 1), 0.0);

    // Galerkin operator psi -> curl_n((I + eps (-Laplacian_D)) curl psi)
    std::vector<double> x(std::size_t(im.n)), ax(std::size_t(im.n));
    auto apply_op = [&](const std::vector<double>& in, std::vector<double>& out) {
        curl_from_nodes(g, in, im.w);
        laplacian_velocity(im.w, im.kw);
        for (int c = 0; c < 2; ++c) {
            auto& ws = im.w.raw(c);
            const auto& ks = im.kw.raw(c);
            for (std::size_t i = 0; i < ws.size(); ++i) ws[i] -= eps_ * ks[i];
        }
        curl_to_nodes(g, im.w, out);
    };

    // assemble the band by probing with combs of impulses; responses have
    // width 2, so impulses spaced 5 apart never overlap
    const int stride = 5;
    for (int a = 0; a < stride; ++a)
        for (int b = 0; b < stride; ++b) {
            std::fill(x.begin(), x.end(), 0.0);
            for (int j = b; j < im.m1; j += stride)
                for (int i = a; i < im.m0; i += stride)
                    x[std::size_t(i) + std::size_t(im.m0) * j] = 1.0;
            apply_op(x, ax);
            for (int j = b; j < im.m1; j += stride)
                for (int i = a; i < im.m0; i += stride) {
                    const long col = i + long(im.m0) * j;
                    for (int dj = -2; dj <= 2; ++dj)
                        for (int di = -2; di <= 2; ++di) {
                            const int ri = i + di, rj = j + dj;
                            if (ri < 0 || ri >= im.m0 || rj < 0 || rj >= im.m1) continue;
                            const long row = ri + long(im.m0) * rj;
                            if (row < col || row - col > im.bw) continue;
                            im.L(row, row - col) = ax[std::size_t(row)];
                        }
                }
        }

    // in-place banded Cholesky: A = L L^T with L(i, i-j) for j <= i
    for (long j = 0; j < im.n; ++j) {
        double d = im.L(j, 0);
        const long kmin = std::max(0L, j - im.bw);
        for (long k = kmin; k < j; ++k) {
            const double v = im.L(j, j - k);
            d -= v * v;
        }
        if (!(d > 0.0))
            throw SolverError("stream preconditioner: factorization breakdown", d, 0);
        const double dj = std::sqrt(d);
        im.L(j, 0) = dj;
        const long imax = std::min(im.n - 1, j + im.bw);
        for (long i = j + 1; i <= imax; ++i) {
            double s = im.L(i, i - j);
            const long lo = std::max({0L, i - im.bw, j - im.bw});
            for (long k = lo; k < j; ++k) s -= im.L(i, i - k) * im.L(j, j - k);
            im.L(i, i - j) = s / dj;
        }
    }

    im.bandT.assign(im.band.size(), 0.0);
    for (long j = 0; j < im.n; ++j)
        for (long d = 0; d <= im.bw && j + d < im.n; ++d) im.Lt(j, d) = im.L(j + d, d);
}

StreamPreconditioner2D::~StreamPreconditioner2D() = default;

void StreamPreconditioner2D::apply(const VectorField& r, VectorField& z) {
    Impl& im = *impl_;
    curl_to_nodes(grid_, r, im.rhs);
    double* y = im.rhs.data();
    const long bw = im.bw;
    // forward substitution L y = rhs (band rows are contiguous)
    for (long i = 0; i < im.n; ++i) {
        const long lo = std::max(0L, i - bw);
        const double* row = &im.band[std::size_t(i) * (bw + 1)];
        double s = y[i];
        for (long k = lo; k < i; ++k) s -= row[i - k] * y[k];
        y[i] = s / row[0];
    }
    // back substitution L^T psi = y (transposed band rows are contiguous)
    for (long i = im.n - 1; i >= 0; --i) {
        const long hi = std::min(im.n - 1, i + bw);
        const double* col = &im.bandT[std::size_t(i) * (bw + 1)];
        double s = y[i];
        for (long k = i + 1; k <= hi; ++k) s -= col[k - i] * y[k];
        y[i] = s / col[0];
    }
    curl_from_nodes(grid_, im.rhs, z);
}

// ---------------------------------------------------------------------------

struct FaceHelmholtz::Impl {
    struct Comp {
        std::vector<double> buf;
        fftw_plan fwd = nullptr, bwd = nullptr;
        std::vector<double> lam[3];
        int n[3] = {1, 1, 1};  // transform sizes per axis
        double norm = 1.0;

        ~Comp() {
            if (fwd) fftw_destroy_plan(fwd);
            if (bwd) fftw_destroy_plan(bwd);
        }
    };
    Comp comp[3];
};

FaceHelmholtz::FaceHelmholtz(const Grid& g, double eps) : grid_(g), eps_(eps) {
    impl_ = std::make_unique<Impl>();
    for (int c = 0; c < g.dim; ++c) {
        auto& C = impl_->comp[c];
        for (int a = 0; a < g.dim; ++a) {
            const int cells = g.cells[a];
            if (a == c) {
                // interior faces 1..cells-1; DST-I modes sin(pi m i / cells)
                C.n[a] = cells - 1;
                C.lam[a].resize(C.n[a]);
                for (int m = 1; m < cells; ++m)
                    C.lam[a][m - 1] =
                        (2.0 - 2.0 * std::cos(M_PI * double(m) / double(cells))) /
                        (g.dx[a] * g.dx[a]);
                C.norm *= 2.0 * double(cells);
            } else {
                // cell-centered with odd wall reflection; DST-II modes
                C.n[a] = cells;
                C.lam[a].resize(cells);
                for (int k = 0; k < cells; ++k)
                    C.lam[a][k] =
                        (2.0 - 2.0 * std::cos(M_PI * double(k + 1) / double(cells))) /
                        (g.dx[a] * g.dx[a]);
                C.norm *= 2.0 * double(cells);
            }
        }
        long total = 1;
        for (int a = 0; a < g.dim; ++a) total *= C.n[a];
        C.buf.assign(std::size_t(total), 0.0);

        int dims[3];
        fftw_r2r_kind kf[3], kb[3];
        for (int a = 0; a < g.dim; ++a) {
            const int axis = g.dim - 1 - a;
            dims[a] = C.n[axis];
            kf[a] = axis == c ? FFTW_RODFT00 : FFTW_RODFT10;
            kb[a] = axis == c ? FFTW_RODFT00 : FFTW_RODFT01;
        }
        C.fwd = fftw_plan_r2r(g.dim, dims, C.buf.data(), C.buf.data(), kf, FFTW_ESTIMATE);
        C.bwd = fftw_plan_r2r(g.dim, dims, C.buf.data(), C.buf.data(), kb, FFTW_ESTIMATE);
    }
}

FaceHelmholtz::~FaceHelmholtz() = default;

void FaceHelmholtz::apply_inverse(VectorField& v) {
    const Grid& g = grid_;
    for (int c = 0; c < g.dim; ++c) {
        auto& C = impl_->comp[c];
        const int n0 = C.n[0], n1 = C.n[1], n2 = C.n[2];
        const int o0 = c == 0 ? 1 : 0, o1 = c == 1 ? 1 : 0, o2 = c == 2 ? 1 : 0;
        for (int k = 0; k < n2; ++k)
            for (int j = 0; j < n1; ++j)
                for (int i = 0; i < n0; ++i)
                    C.buf[std::size_t(i) + std::size_t(n0) * (j + std::size_t(n1) * k)] =
                        v.comp(c, i + o0, j + o1, k + o2);
        fftw_execute(C.fwd);
        for (int k = 0; k < n2; ++k)
            for (int j = 0; j < n1; ++j)
                for (int i = 0; i < n0; ++i) {
                    double lam = C.lam[0][i] + C.lam[1][j];
                    if (g.dim == 3) lam += C.lam[2][k];
                    C.buf[std::size_t(i) + std::size_t(n0) * (j + std::size_t(n1) * k)] /=
                        C.norm * (1.0 + eps_ * lam);
                }
        fftw_execute(C.bwd);
        for (int k = 0; k < n2; ++k)
            for (int j = 0; j < n1; ++j)
                for (int i = 0; i < n0; ++i)
                    v.comp(c, i + o0, j + o1, k + o2) =
                        C.buf[std::size_t(i) + std::size_t(n0) * (j + std::size_t(n1) * k)];
    }
    // wall faces stay exactly zero
    fill_ghosts(v, BC::dirichlet_zero);
}

}  // namespace cns
