#include "cns/flow.hpp"

#include <cassert>
#include <cmath>

#include "cns/errors.hpp"
#include "cns/operators.hpp"

namespace cns {

FlowSolver::FlowSolver(const Grid& g, const ModelParams& params, Config cfg)
    : grid_(g),
      params_(params),
      cfg_(cfg),
      poisson_(g, cfg.poisson),
      div_(g),
      q_(g),
      lap_(g),
      r_(g),
      z_(g),
      p_(g),
      kp_(g),
      w_(g),
      tend_(g),
      frc_(g),
      prev_v_(g) {}

void FlowSolver::project(VectorField& u, ScalarField& q) {
    cell_divergence(u, div_);
    poisson_.solve(div_, q);
    VectorField& grad = lap_;  // reuse scratch
    face_gradient(q, grad);
    axpy(-1.0, grad, u);
    fill_ghosts(u, BC::dirichlet_zero);
}

void FlowSolver::apply_resolvent_op(const VectorField& v, double eps, VectorField& out) {
    // out = v + eps * P(-Laplacian v)
    copy_into(v, kp_);
    fill_ghosts(kp_, BC::dirichlet_zero);
    laplacian_velocity(kp_, out);
    scale(out, -1.0);
    project(out, q_);
    scale(out, eps);
    axpy(1.0, v, out);
}

void FlowSolver::set_yosida_guess(const VectorField& v, double eps) {
    copy_into(v, prev_v_);
    prev_eps_ = eps;
    have_prev_ = true;
}

void FlowSolver::yosida(const VectorField& u, double eps, VectorField& v) {
    const double unorm = l2_norm(u);
    if (unorm == 0.0) {
        v.fill(0.0);
        last_yosida_iterations_ = 0;
        return;
    }

    VectorField b(grid_);
    copy_into(u, b);

    // enforce the solenoidal precondition only when the input actually has a
    // divergence above the tolerance floor (a gradient part would otherwise
    // put an invisible floor under the CG residual)
    cell_divergence(b, div_);
    const double divnorm = l2_norm(div_);
    if (divnorm > 1e-3 * cfg_.yosida_tolerance * unorm / grid_.min_dx())
        project(b, q_);

    const double bnorm = l2_norm(b);
    if (bnorm == 0.0) {
        v.fill(0.0);
        last_yosida_iterations_ = 0;
        return;
    }
    const double target = cfg_.yosida_tolerance * bnorm;

    // preconditioner: exact stream-space resolvent in 2D, projected
    // component Helmholtz otherwise
    const bool use_stream = grid_.dim == 2 && !cfg_.force_pcg_yosida;
    if (use_stream) {
        if (!stream_ || stream_eps_ != eps) {
            stream_ = std::make_unique<StreamPreconditioner2D>(grid_, eps);
            stream_eps_ = eps;
        }
    }
    if (!use_stream && (!helm_ || helm_eps_ != eps)) {
        helm_ = std::make_unique<FaceHelmholtz>(grid_, eps);
        helm_eps_ = eps;
    }

    VectorField kv(grid_);
    if (!use_stream && have_prev_ && prev_eps_ == eps) {
        // warm start pays off for the iterative Helmholtz-preconditioned path
        copy_into(prev_v_, v);
        apply_resolvent_op(v, eps, kv);
        copy_into(b, r_);
        axpy(-1.0, kv, r_);
    } else {
        v.fill(0.0);
        copy_into(b, r_);
    }

    auto precondition = [&](const VectorField& rin, VectorField& zout) {
        if (use_stream) {
            stream_->apply(rin, zout);
        } else {
            copy_into(rin, zout);
            helm_->apply_inverse(zout);
            project(zout, q_);
        }
    };

    double rnorm = l2_norm(r_);
    int it = 0;
    if (rnorm > target) {
        precondition(r_, z_);
        copy_into(z_, p_);
        double rz = dot(r_, z_);
        while (true) {
            if (++it > cfg_.yosida_max_iterations)
                throw SolverError("yosida: max iterations", rnorm / bnorm, it);
            apply_resolvent_op(p_, eps, kv);
            const double alpha = rz / dot(p_, kv);
            axpy(alpha, p_, v);
            axpy(-alpha, kv, r_);
            rnorm = l2_norm(r_);
            if (rnorm <= target) break;
            precondition(r_, z_);
            const double rz_new = dot(r_, z_);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (int c = 0; c < grid_.dim; ++c) {
                auto& ps = p_.raw(c);
                const auto& zs = z_.raw(c);
                for (std::size_t i = 0; i < ps.size(); ++i)
                    ps[i] = zs[i] + beta * ps[i];
            }
        }
    }
    last_yosida_iterations_ = it;
    fill_ghosts(v, BC::dirichlet_zero);
    set_yosida_guess(v, eps);

    assert(l2_norm(v) <= bnorm * (1.0 + 1e-12) && "yosida contraction violated");
}

void FlowSolver::ns_step(VectorField& u, const ScalarField& n, double dt,
                         ScalarField& pressure) {
    laplacian_velocity(u, tend_);

    if (params_.kappa != 0.0) {
        yosida(u, params_.epsilon, w_);
        VectorField adv(grid_);
        advect_velocity(u, w_, adv);
        axpy(params_.kappa, adv, tend_);
    }

    buoyancy_force(n, params_.phi_gradient, frc_);
    axpy(1.0, frc_, tend_);

    axpy(dt, tend_, u);
    fill_ghosts(u, BC::dirichlet_zero);
    project(u, pressure);
}

}  // namespace cns
