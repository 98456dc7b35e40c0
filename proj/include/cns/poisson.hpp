#ifndef CNS_POISSON_HPP
#define CNS_POISSON_HPP

/// Cell-centered Neumann Poisson solve for the Helmholtz projection, plus the
/// face-staggered Dirichlet Helmholtz solve used to precondition the Stokes
/// resolvent.  Two backends share one contract (residual <= tolerance * ||rhs||,
/// zero-mean solution): a DCT diagonalization of the exact stencil matrix and
/// a matrix-free conjugate gradient reference.

#include <memory>

#include "cns/grid.hpp"

namespace cns {

class PoissonSolver {
public:
    enum class Backend { dct, cg };
    struct Config {
        double tolerance = 1e-10;   // relative residual
        int max_iterations = 20000; // cg backend only
        Backend backend = Backend::dct;
    };

    explicit PoissonSolver(const Grid& g) : PoissonSolver(g, Config()) {}
    PoissonSolver(const Grid& g, Config cfg);
    ~PoissonSolver();
    PoissonSolver(const PoissonSolver&) = delete;
    PoissonSolver& operator=(const PoissonSolver&) = delete;

    /// Solves div(grad q) = rhs - mean(rhs) with homogeneous Neumann BC and
    /// returns the zero-mean q (ghosts already filled).  Throws SolverError on
    /// non-convergence.
    void solve(const ScalarField& rhs, ScalarField& q);

    const Config& config() const { return cfg_; }
    /// Relative residual of the last solve.
    double last_residual() const { return last_residual_; }

private:
    struct Impl;
    void solve_cg(const ScalarField& rhs, ScalarField& q, double rhs_norm);
    const Grid& grid_;
    Config cfg_;
    std::unique_ptr<Impl> impl_;
    double last_residual_ = 0.0;
};

/// Exact applier of C (C^T (I + eps (-Laplacian_D)) C)^{-1} C^T on a 2D MAC
/// grid, where C maps a zero-boundary node stream function to its face curl.
/// The image of C is exactly the discretely divergence-free no-normal-flow
/// space, so this is the resolvent restricted to that subspace; it serves as
/// the (essentially exact) preconditioner of the Yosida CG iteration. The
/// width-2 banded Galerkin matrix is assembled by probing with impulse combs
/// and factored by banded Cholesky at construction.
class StreamPreconditioner2D {
public:
    StreamPreconditioner2D(const Grid& g, double eps);
    ~StreamPreconditioner2D();
    StreamPreconditioner2D(const StreamPreconditioner2D&) = delete;
    StreamPreconditioner2D& operator=(const StreamPreconditioner2D&) = delete;

    double eps() const { return eps_; }
    /// z = C M^{-1} C^T r (symmetric positive semidefinite, exact on the
    /// divergence-free subspace).
    void apply(const VectorField& r, VectorField& z);

private:
    struct Impl;
    const Grid& grid_;
    double eps_;
    std::unique_ptr<Impl> impl_;
};

/// Direct solve of (I + eps * (-Laplacian_Dirichlet)) per velocity component
/// via sine-transform diagonalization; used as the Yosida preconditioner.
class FaceHelmholtz {
public:
    FaceHelmholtz(const Grid& g, double eps);
    ~FaceHelmholtz();
    FaceHelmholtz(const FaceHelmholtz&) = delete;
    FaceHelmholtz& operator=(const FaceHelmholtz&) = delete;

    double eps() const { return eps_; }
    /// v <- (I + eps A)^{-1} v on interior faces; wall faces forced to zero.
    void apply_inverse(VectorField& v);

private:
    struct Impl;
    const Grid& grid_;
    double eps_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace cns

#endif
