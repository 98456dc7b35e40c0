#ifndef CNS_OPERATORS_HPP
#define CNS_OPERATORS_HPP

/// Second-order staggered-grid operators: gradient/divergence pair, scalar
/// Laplacian, the regularized p-Laplacian flux divergence, the chemotactic
/// flux divergence, upwind advection and the face Laplacian for velocity.
/// Callers are responsible for ghost fills; every divergence-form tendency
/// telescopes to the boundary fluxes and sums to zero under no-flux walls.

#include "cns/grid.hpp"
#include "cns/model.hpp"

namespace cns {

/// grad at face (i+1/2) = (s_{i+1} - s_i)/dx, including wall faces (which
/// vanish after a neumann_zero fill).
void face_gradient(const ScalarField& s, VectorField& out);
VectorField face_gradient(const ScalarField& s);

/// div at cell = sum over axes of face differences / dx.
void cell_divergence(const VectorField& v, ScalarField& out);
ScalarField cell_divergence(const VectorField& v);

/// Scalar Laplacian (5/7-point); equals cell_divergence(face_gradient(s)).
void laplacian(const ScalarField& s, ScalarField& out);
ScalarField laplacian(const ScalarField& s);

/// div((|grad n|^2 + eps)^((p-2)/2) grad n). Face diffusivity uses the normal
/// gradient plus averaged tangential components. Requires p >= 2; throws
/// std::domain_error("fast-diffusion unsupported") otherwise.
void plaplacian_div(const ScalarField& n, double p, double eps, ScalarField& out);
ScalarField plaplacian_div(const ScalarField& n, double p, double eps);

/// div(n F_eps'(n) chi(c) grad c) with the mobility n F_eps'(n) taken from the
/// upwind cell along the drift chi(c) grad c.
void chemotaxis_div(const ScalarField& n, const ScalarField& c,
                    const ModelParams& params, ScalarField& out);
ScalarField chemotaxis_div(const ScalarField& n, const ScalarField& c,
                           const ModelParams& params);

/// Conservative upwind advection tendency -div(u s).
void advect_scalar(const ScalarField& s, const VectorField& u, ScalarField& out);
ScalarField advect_scalar(const ScalarField& s, const VectorField& u);

/// Convective upwind advection tendency -(w . grad) u, evaluated on interior
/// faces (wall faces stay zero).
void advect_velocity(const VectorField& u, const VectorField& w, VectorField& out);
VectorField advect_velocity(const VectorField& u, const VectorField& w);

/// Component-wise face Laplacian with no-slip ghosts (wall faces stay zero in
/// the output).
void laplacian_velocity(const VectorField& u, VectorField& out);
VectorField laplacian_velocity(const VectorField& u);

/// Buoyancy force n grad(Phi) with n arithmetically averaged to faces; wall
/// faces get the adjacent cell value (Neumann mirror).
void buoyancy_force(const ScalarField& n, const std::array<double, 3>& grad_phi,
                    VectorField& out);
VectorField buoyancy_force(const ScalarField& n, const std::array<double, 3>& grad_phi);

/// Integral of a face field with trapezoid weights in the normal direction
/// (wall faces count half a cell volume). Used by force-balance diagnostics.
double face_integral(const VectorField& v, int component);

/// Largest face value of the regularized p-Laplacian diffusivity.
double max_plap_diffusivity(const ScalarField& n, double p, double eps);

/// Largest face value of the chemotactic diffusivity proxy
/// n F_eps'(n) chi(c) |grad c| dx.
double max_chemotaxis_proxy(const ScalarField& n, const ScalarField& c,
                            const ModelParams& params);

}  // namespace cns

#endif
