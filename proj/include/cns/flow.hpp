#ifndef CNS_FLOW_HPP
#define CNS_FLOW_HPP

/// Incompressible Navier-Stokes step: Helmholtz projection, Yosida-regularized
/// convection velocity and the explicit viscous/buoyant update followed by a
/// pressure projection (Chorin splitting).

#include <memory>

#include "cns/grid.hpp"
#include "cns/model.hpp"
#include "cns/poisson.hpp"

namespace cns {

class FlowSolver {
public:
    struct Config {
        PoissonSolver::Config poisson{};
        double yosida_tolerance = 1e-10;  // relative to ||u||_2
        int yosida_max_iterations = 2000;
        // 2D grids use the exact stream-function resolvent unless forced onto
        // the preconditioned CG path (3D always uses CG).
        bool force_pcg_yosida = false;
    };

    FlowSolver(const Grid& g, const ModelParams& params)
        : FlowSolver(g, params, Config()) {}
    FlowSolver(const Grid& g, const ModelParams& params, Config cfg);

    /// Helmholtz projection: q solves div(grad q) = div(u), u <- u - grad q.
    /// q is returned zero-mean; ghosts of u are refreshed (no-slip).
    void project(VectorField& u, ScalarField& q);

    /// Yosida resolvent v = (I + eps A)^{-1} u with A = projection of the
    /// Dirichlet vector Laplacian, solved by preconditioned CG on the
    /// discretely divergence-free subspace. ||v + eps A v - u|| <= tol ||u||.
    void yosida(const VectorField& u, double eps, VectorField& v);

    /// Explicit tendency (convection with the Yosida-smoothed velocity,
    /// viscosity, buoyancy n grad Phi), then projection. n must carry
    /// neumann_zero ghosts, u no-slip ghosts.
    void ns_step(VectorField& u, const ScalarField& n, double dt, ScalarField& pressure);

    PoissonSolver& poisson() { return poisson_; }
    int last_yosida_iterations() const { return last_yosida_iterations_; }

    /// Warm-start state for the resolvent solve (checkpointed by the driver so
    /// restarts reproduce the uninterrupted trajectory).
    const VectorField& yosida_guess() const { return prev_v_; }
    void set_yosida_guess(const VectorField& v, double eps);
    void clear_yosida_guess() { have_prev_ = false; }
    bool has_yosida_guess() const { return have_prev_; }

private:
    void apply_resolvent_op(const VectorField& v, double eps, VectorField& out);

    const Grid& grid_;
    const ModelParams& params_;
    Config cfg_;
    PoissonSolver poisson_;
    std::unique_ptr<FaceHelmholtz> helm_;
    double helm_eps_ = -1.0;
    std::unique_ptr<StreamPreconditioner2D> stream_;
    double stream_eps_ = -1.0;

    // scratch
    ScalarField div_, q_;
    VectorField lap_, r_, z_, p_, kp_, w_, tend_, frc_;
    VectorField prev_v_;
    double prev_eps_ = -1.0;
    bool have_prev_ = false;
    int last_yosida_iterations_ = 0;
};

}  // namespace cns

#endif
