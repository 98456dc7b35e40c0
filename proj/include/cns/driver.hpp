#ifndef CNS_DRIVER_HPP
#define CNS_DRIVER_HPP

/// Run orchestration: scenario setup, the stability-bounded dt controller,
/// report/snapshot/checkpoint scheduling and the exit report.

#include <map>
#include <string>
#include <vector>

#include "cns/audit.hpp"
#include "cns/model.hpp"
#include "cns/transport.hpp"

namespace cns {

struct BlobSpec {
    double amplitude = 1.0;
    double width = 0.25;
    std::array<double, 3> center{0.5, 0.65, 0.5};
};

struct RunConfig {
    int dim = 2;
    std::array<int, 3> cells{64, 64, 16};
    std::array<double, 3> extents{1.0, 1.0, 1.0};

    double p = 2.2;
    double kappa = 1.0;
    double epsilon = 0.05;
    std::string pair_name = "linear";
    std::array<double, 3> phi_gradient{0.0, -0.1, 0.0};

    enum class ScalarIC { constant, gaussian };
    ScalarIC n0_kind = ScalarIC::gaussian;
    double n0_value = 1.0;  // constant value
    BlobSpec n0_blob;
    ScalarIC c0_kind = ScalarIC::constant;
    double c0_value = 1.0;
    BlobSpec c0_blob;

    enum class VelocityIC { zero, vortex };
    VelocityIC u0_kind = VelocityIC::zero;
    double u0_amplitude = 0.0;

    double t_end = 1.0;
    double cfl_safety = 0.8;
    double report_interval = 0.01;
    double snapshot_interval = 0.0;  // 0 disables field snapshots
    double checkpoint_at = -1.0;     // <0 disables the mid-run checkpoint
    std::string output_dir = "out";
    bool disable_flow = false;
    double norm_r = 6.0;
    bool write_vtk = false;

    std::string restart_from;  // checkpoint path (set by the CLI)
};

/// Parses the key=value config format (see README for the key list).
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Builds the grid; throws ConfigError on invalid geometry.
Grid make_grid(const RunConfig& cfg);

/// Model parameters with s0 derived from the initial oxygen field.
ModelParams make_params(const RunConfig& cfg);

/// Initial state (u0 projected so it starts discretely divergence-free).
State initial_state(const RunConfig& cfg, const Grid& g, FlowSolver& flow);

/// cfl_safety times the most restrictive of: p-Laplacian diffusion, unit
/// diffusion (c and viscosity), advection, chemotaxis, and consumption
/// positivity. Throws SolverError("stiffness abort") below 1e-14.
double stable_dt(const State& s, const ModelParams& params, double cfl_safety);

struct RunResult {
    int exit_code = 0;
    std::string message;
    double runtime_seconds = 0.0;
    long steps = 0;
    double max_div_u = 0.0;
    std::vector<EnergyReport> history;
    CumulativeLedger ledger;
    std::map<std::string, bool> verdicts;
    std::vector<GrowthVerdict> growth;
    std::string csv_path;
    std::string checkpoint_path;
};

/// Executes the configured run: stepping, auditor reports, diagnostics CSV,
/// snapshots, checkpoints. Exit codes: 0 pass, 2 invariant violation,
/// 3 numerical blow-up / solver failure, 4 config error.
RunResult run(const RunConfig& cfg);

// --- field and checkpoint I/O ----------------------------------------------

/// Flat binary snapshot: plain-text header (magic, field, dim, shape, extents,
/// time, count) followed by little-endian 64-bit reals.
void write_field(const std::string& path, const std::string& name,
                 const ScalarField& f, double time);
void write_field(const std::string& path, const std::string& name,
                 const VectorField& v, int component, double time);

/// Legacy VTK structured-points export (cell data as points).
void write_vtk_scalar(const std::string& path, const std::string& name,
                      const ScalarField& f);

void save_checkpoint(const std::string& path, const State& s, const CumulativeLedger& led,
                     const TransportSolver& solver, double next_report,
                     double next_snapshot);
void load_checkpoint(const std::string& path, State& s, CumulativeLedger& led,
                     TransportSolver& solver, double& next_report, double& next_snapshot);

}  // namespace cns

#endif
