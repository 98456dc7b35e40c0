#ifndef CNS_TRANSPORT_HPP
#define CNS_TRANSPORT_HPP

/// Explicit Euler time stepping for the regularized system: cell density n
/// (p-Laplacian diffusion + chemotaxis + advection), oxygen c (diffusion +
/// consumption + advection) and the fluid velocity via FlowSolver.

#include "cns/flow.hpp"
#include "cns/grid.hpp"
#include "cns/model.hpp"

namespace cns {

struct State {
    explicit State(const Grid& g) : n(g), c(g), u(g), pressure(g) {}

    double t = 0.0;
    long step_index = 0;
    ScalarField n;
    ScalarField c;
    VectorField u;
    ScalarField pressure;

    /// Refill every ghost layer (n, c Neumann; u no-slip).
    void refresh_ghosts();
};

/// dn/dt = plaplacian_div - chemotaxis_div + advect; cell sums telescope to 0.
void n_tendency(const State& s, const ModelParams& params, ScalarField& out);
ScalarField n_tendency(const State& s, const ModelParams& params);

/// dc/dt = laplacian - F_eps(n) f(c) + advect.
void c_tendency(const State& s, const ModelParams& params, ScalarField& out);
ScalarField c_tendency(const State& s, const ModelParams& params);

struct StepInfo {
    double dt = 0.0;
    double max_div_u = 0.0;  // divergence defect after projection
};

class TransportSolver {
public:
    TransportSolver(const Grid& g, const ModelParams& params, bool disable_flow = false,
                    FlowSolver::Config flow_cfg = FlowSolver::Config());

    /// One explicit Euler step; throws BlowupError("blow-up detected", step)
    /// on NaN/Inf.
    StepInfo step(State& s, double dt);

    FlowSolver& flow() { return flow_; }
    const FlowSolver& flow() const { return flow_; }
    const ModelParams& params() const { return params_; }
    bool flow_disabled() const { return disable_flow_; }

private:
    const Grid& grid_;
    const ModelParams& params_;
    bool disable_flow_;
    FlowSolver flow_;
    ScalarField ndot_, cdot_;
};

}  // namespace cns

#endif
