#include "cns/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cns/errors.hpp"
#include "cns/operators.hpp"

namespace cns {

namespace {

std::vector<double> parse_numbers(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    double v;
    while (is >> v) out.push_back(v);
    return out;
}

void parse_blob(const std::string& value, BlobSpec& blob, int dim) {
    // gaussian <amplitude> <width> <cx> <cy> [<cz>]
    auto nums = parse_numbers(value);
    if (nums.size() < std::size_t(2 + dim))
        throw ConfigError("gaussian needs amplitude, width and a center point");
    blob.amplitude = nums[0];
    blob.width = nums[1];
    for (int a = 0; a < dim; ++a) blob.center[a] = nums[2 + a];
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::map<std::string, std::string> kv;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    auto has = [&](const char* k) { return kv.count(k) > 0; };
    auto num = [&](const char* k, double dflt) {
        return has(k) ? std::stod(kv[k]) : dflt;
    };

    cfg.dim = int(num("dim", 2));
    if (has("cells")) {
        auto v = parse_numbers(kv["cells"]);
        for (std::size_t a = 0; a < v.size() && a < 3; ++a) cfg.cells[a] = int(v[a]);
        if (v.size() == 1) cfg.cells[1] = cfg.cells[2] = int(v[0]);
    }
    if (has("extents")) {
        auto v = parse_numbers(kv["extents"]);
        for (std::size_t a = 0; a < v.size() && a < 3; ++a) cfg.extents[a] = v[a];
        if (v.size() == 1) cfg.extents[1] = cfg.extents[2] = v[0];
    }
    cfg.p = num("p", cfg.p);
    cfg.kappa = num("kappa", cfg.kappa);
    cfg.epsilon = num("epsilon", cfg.epsilon);
    if (has("pair")) cfg.pair_name = kv["pair"];
    if (has("phi_gradient")) {
        auto v = parse_numbers(kv["phi_gradient"]);
        cfg.phi_gradient = {0.0, 0.0, 0.0};
        for (std::size_t a = 0; a < v.size() && a < 3; ++a) cfg.phi_gradient[a] = v[a];
    }

    auto parse_scalar_ic = [&](const char* key, RunConfig::ScalarIC& kind, double& value,
                               BlobSpec& blob) {
        if (!has(key)) return;
        std::istringstream is(kv[key]);
        std::string word;
        is >> word;
        if (word == "constant") {
            kind = RunConfig::ScalarIC::constant;
            is >> value;
        } else if (word == "gaussian") {
            kind = RunConfig::ScalarIC::gaussian;
            std::string rest;
            std::getline(is, rest);
            parse_blob(rest, blob, cfg.dim);
        } else {
            throw ConfigError(std::string(key) + ": unknown initial condition " + word);
        }
    };
    parse_scalar_ic("n0", cfg.n0_kind, cfg.n0_value, cfg.n0_blob);
    parse_scalar_ic("c0", cfg.c0_kind, cfg.c0_value, cfg.c0_blob);

    if (has("u0")) {
        std::istringstream is(kv["u0"]);
        std::string word;
        is >> word;
        if (word == "zero") {
            cfg.u0_kind = RunConfig::VelocityIC::zero;
        } else if (word == "vortex") {
            cfg.u0_kind = RunConfig::VelocityIC::vortex;
            is >> cfg.u0_amplitude;
        } else {
            throw ConfigError("u0: unknown initial condition " + word);
        }
    }

    cfg.t_end = num("t_end", cfg.t_end);
    cfg.cfl_safety = num("cfl_safety", cfg.cfl_safety);
    cfg.report_interval = num("report_interval", cfg.report_interval);
    cfg.snapshot_interval = num("snapshot_interval", cfg.snapshot_interval);
    cfg.checkpoint_at = num("checkpoint_at", cfg.checkpoint_at);
    if (has("output_dir")) cfg.output_dir = kv["output_dir"];
    cfg.disable_flow = num("disable_flow", cfg.disable_flow ? 1 : 0) != 0.0;
    cfg.norm_r = num("norm_r", cfg.norm_r);
    cfg.write_vtk = num("write_vtk", cfg.write_vtk ? 1 : 0) != 0.0;
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

Grid make_grid(const RunConfig& cfg) {
    try {
        return Grid(cfg.dim, cfg.cells, cfg.extents);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

namespace {

void fill_scalar_ic(ScalarField& f, const Grid& g, RunConfig::ScalarIC kind,
                    double value, const BlobSpec& blob) {
    const int n2 = g.dim == 3 ? g.cells[2] : 1;
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                if (kind == RunConfig::ScalarIC::constant) {
                    f(i, j, k) = value;
                } else {
                    double r2 = 0.0;
                    const double xs[3] = {g.center(0, i), g.center(1, j),
                                          g.dim == 3 ? g.center(2, k) : 0.0};
                    for (int a = 0; a < g.dim; ++a) {
                        const double d = xs[a] - blob.center[a];
                        r2 += d * d;
                    }
                    f(i, j, k) = blob.amplitude *
                                 std::exp(-r2 / (2.0 * blob.width * blob.width));
                }
            }
}

}  // namespace

ModelParams make_params(const RunConfig& cfg) {
    ModelParams p;
    p.p = cfg.p;
    p.kappa = cfg.kappa;
    p.epsilon = cfg.epsilon;
    p.sensitivity = pair_by_name(cfg.pair_name);
    p.phi_gradient = cfg.phi_gradient;
    // s0 = max of the initial oxygen field
    if (cfg.c0_kind == RunConfig::ScalarIC::constant)
        p.s0 = cfg.c0_value;
    else
        p.s0 = cfg.c0_blob.amplitude;
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return p;
}

State initial_state(const RunConfig& cfg, const Grid& g, FlowSolver& flow) {
    State s(g);
    fill_scalar_ic(s.n, g, cfg.n0_kind, cfg.n0_value, cfg.n0_blob);
    fill_scalar_ic(s.c, g, cfg.c0_kind, cfg.c0_value, cfg.c0_blob);
    if (min_interior(s.n) < 0.0) throw ConfigError("n0 must be nonnegative");
    if (min_interior(s.c) < 0.0) throw ConfigError("c0 must be nonnegative");

    if (cfg.u0_kind == RunConfig::VelocityIC::vortex) {
        const double A = cfg.u0_amplitude;
        const int n2 = g.dim == 3 ? g.cells[2] : 1;
        for (int k = 0; k < n2; ++k)
            for (int j = 0; j < g.cells[1]; ++j)
                for (int i = 0; i <= g.cells[0]; ++i)
                    s.u.comp(0, i, j, k) =
                        A * std::sin(M_PI * g.face(0, i) / g.extents[0]) *
                        std::cos(M_PI * g.center(1, j) / g.extents[1]);
        for (int k = 0; k < n2; ++k)
            for (int j = 0; j <= g.cells[1]; ++j)
                for (int i = 0; i < g.cells[0]; ++i)
                    s.u.comp(1, i, j, k) =
                        -A * std::cos(M_PI * g.center(0, i) / g.extents[0]) *
                        std::sin(M_PI * g.face(1, j) / g.extents[1]);
        fill_ghosts(s.u, BC::dirichlet_zero);
        ScalarField q(g);
        flow.project(s.u, q);
    }
    s.refresh_ghosts();
    return s;
}

double stable_dt(const State& s, const ModelParams& params, double cfl_safety) {
    const Grid& g = s.n.grid();
    const double dmin = g.min_dx();
    const double two_dim = 2.0 * double(g.dim);
    const double tiny = 1e-300;

    double dt = dmin * dmin / two_dim;  // unit diffusion for c and viscosity

    const double diff = max_plap_diffusivity(s.n, params.p, params.epsilon);
    if (diff > 0.0) dt = std::min(dt, dmin * dmin / (two_dim * diff));

    const double umax = max_abs(s.u);
    dt = std::min(dt, dmin / (umax + tiny));

    const double chemo = max_chemotaxis_proxy(s.n, s.c, params);
    if (chemo > 0.0) dt = std::min(dt, dmin * dmin / (two_dim * chemo));

    const double nmax = max_interior(s.n);
    if (nmax > 0.0) {
        double fpmax = 0.0;
        for (int i = 0; i <= 100; ++i)
            fpmax = std::max(fpmax,
                             params.sensitivity.f_prime(params.s0 * double(i) / 100.0));
        const double rate = f_eps(nmax, params.epsilon) * fpmax;
        if (rate > 0.0) dt = std::min(dt, 1.0 / rate);
    }

    dt *= cfl_safety;
    if (!(dt >= 1e-14)) throw SolverError("stiffness abort", dt, 0);
    return dt;
}

// --- I/O ---------------------------------------------------------------------

namespace {

void write_doubles(std::ofstream& os, const double* data, std::size_t count) {
    os.write(reinterpret_cast<const char*>(data), std::streamsize(count * sizeof(double)));
}

void read_doubles(std::ifstream& is, double* data, std::size_t count) {
    is.read(reinterpret_cast<char*>(data), std::streamsize(count * sizeof(double)));
    if (!is) throw std::runtime_error("checkpoint: truncated field data");
}

void write_field_header(std::ofstream& os, const std::string& name, const Grid& g,
                        const int* shape, double time, std::size_t count) {
    os << "cnsfield 1\n";
    os << "field " << name << "\n";
    os << "dim " << g.dim << "\n";
    os << "shape";
    for (int a = 0; a < g.dim; ++a) os << " " << shape[a];
    os << "\n";
    char buf[256];
    os << "extents";
    for (int a = 0; a < g.dim; ++a) {
        std::snprintf(buf, sizeof buf, " %.17g", g.extents[a]);
        os << buf;
    }
    os << "\n";
    std::snprintf(buf, sizeof buf, "time %.17g\n", time);
    os << buf;
    os << "count " << count << "\n";
    os << "data\n";
}

}  // namespace

void write_field(const std::string& path, const std::string& name, const ScalarField& f,
                 double time) {
    const Grid& g = f.grid();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    int shape[3] = {g.cells[0], g.cells[1], g.cells[2]};
    const std::size_t count = std::size_t(g.interior_cells());
    write_field_header(os, name, g, shape, time, count);
    std::vector<double> tmp;
    tmp.reserve(count);
    const int n2 = g.dim == 3 ? g.cells[2] : 1;
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) tmp.push_back(f(i, j, k));
    write_doubles(os, tmp.data(), tmp.size());
}

void write_field(const std::string& path, const std::string& name, const VectorField& v,
                 int component, double time) {
    const Grid& g = v.grid();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    int shape[3] = {g.cells[0], g.cells[1], g.cells[2]};
    shape[component] += 1;
    std::size_t count = 1;
    for (int a = 0; a < g.dim; ++a) count *= std::size_t(shape[a]);
    write_field_header(os, name, g, shape, time, count);
    std::vector<double> tmp;
    tmp.reserve(count);
    const int n2 = g.dim == 3 ? shape[2] : 1;
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < shape[1]; ++j)
            for (int i = 0; i < shape[0]; ++i) tmp.push_back(v.comp(component, i, j, k));
    write_doubles(os, tmp.data(), tmp.size());
}

void write_vtk_scalar(const std::string& path, const std::string& name,
                      const ScalarField& f) {
    const Grid& g = f.grid();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "# vtk DataFile Version 3.0\n" << name << "\nASCII\n";
    os << "DATASET STRUCTURED_POINTS\n";
    os << "DIMENSIONS " << g.cells[0] << " " << g.cells[1] << " "
       << (g.dim == 3 ? g.cells[2] : 1) << "\n";
    os << "ORIGIN " << 0.5 * g.dx[0] << " " << 0.5 * g.dx[1] << " "
       << (g.dim == 3 ? 0.5 * g.dx[2] : 0.0) << "\n";
    os << "SPACING " << g.dx[0] << " " << g.dx[1] << " " << (g.dim == 3 ? g.dx[2] : 1.0)
       << "\n";
    os << "POINT_DATA " << g.interior_cells() << "\n";
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    char buf[64];
    const int n2 = g.dim == 3 ? g.cells[2] : 1;
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                std::snprintf(buf, sizeof buf, "%.12g\n", f(i, j, k));
                os << buf;
            }
}

void save_checkpoint(const std::string& path, const State& s, const CumulativeLedger& led,
                     const TransportSolver& solver, double next_report,
                     double next_snapshot) {
    const Grid& g = s.n.grid();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write checkpoint " + path);
    char buf[512];
    os << "cnscheckpoint 1\n";
    std::snprintf(buf, sizeof buf, "t %.17g\nstep %ld\n", s.t, s.step_index);
    os << buf;
    os << "dim " << g.dim << "\ncells " << g.cells[0] << " " << g.cells[1] << " "
       << g.cells[2] << "\n";
    std::snprintf(buf, sizeof buf, "next_report %.17g\nnext_snapshot %.17g\n", next_report,
                  next_snapshot);
    os << buf;

    const FlowSolver& flow = solver.flow();
    os << "yosida_guess " << (flow.has_yosida_guess() ? 1 : 0) << "\n";

    std::ostringstream ledger_text;
    led.save(ledger_text);
    const std::string lt = ledger_text.str();
    os << "ledger_bytes " << lt.size() << "\n" << lt;

    os << "fields\n";
    auto dump_scalar = [&](const ScalarField& f) {
        write_doubles(os, f.raw().data(), f.raw().size());
    };
    auto dump_vector = [&](const VectorField& v) {
        for (int c = 0; c < g.dim; ++c) write_doubles(os, v.raw(c).data(), v.raw(c).size());
    };
    dump_scalar(s.n);
    dump_scalar(s.c);
    dump_scalar(s.pressure);
    dump_vector(s.u);
    if (flow.has_yosida_guess()) dump_vector(flow.yosida_guess());
}

void load_checkpoint(const std::string& path, State& s, CumulativeLedger& led,
                     TransportSolver& solver, double& next_report, double& next_snapshot) {
    const Grid& g = s.n.grid();
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint " + path);
    std::string tag;
    int version = 0;
    is >> tag >> version;
    if (tag != "cnscheckpoint") throw std::runtime_error("bad checkpoint magic");
    is >> tag >> s.t;                 // t
    is >> tag >> s.step_index;        // step
    int dim = 0;
    is >> tag >> dim;                 // dim
    std::array<int, 3> cells{};
    is >> tag >> cells[0] >> cells[1] >> cells[2];
    if (dim != g.dim || cells != g.cells)
        throw std::runtime_error("checkpoint grid does not match the config grid");
    is >> tag >> next_report;
    is >> tag >> next_snapshot;
    int have_guess = 0;
    is >> tag >> have_guess;
    std::size_t ledger_bytes = 0;
    is >> tag >> ledger_bytes;
    is.get();  // newline
    std::string lt(ledger_bytes, '\0');
    is.read(lt.data(), std::streamsize(ledger_bytes));
    std::istringstream ledger_text(lt);
    led.load(ledger_text);
    is >> tag;  // "fields"
    is.get();   // newline

    auto read_scalar = [&](ScalarField& f) { read_doubles(is, f.raw().data(), f.raw().size()); };
    auto read_vector = [&](VectorField& v) {
        for (int c = 0; c < g.dim; ++c) read_doubles(is, v.raw(c).data(), v.raw(c).size());
    };
    read_scalar(s.n);
    read_scalar(s.c);
    read_scalar(s.pressure);
    read_vector(s.u);
    if (have_guess) {
        VectorField guess(g);
        read_vector(guess);
        solver.flow().set_yosida_guess(guess, solver.params().epsilon);
    } else {
        solver.flow().clear_yosida_guess();
    }
}

// --- run loop ----------------------------------------------------------------

RunResult run(const RunConfig& cfg) {
    RunResult result;
    const auto wall0 = std::chrono::steady_clock::now();
    try {
        Grid g = make_grid(cfg);
        ModelParams params = make_params(cfg);

        // structural gate before any stepping
        const auto report = validate_structural_conditions(params.sensitivity,
                                                           std::max(params.s0, 1e-6), 101);
        if (!report.pass) throw ConfigError("sensitivity pair fails the structural conditions");
        if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0))
            throw ConfigError("cfl_safety must lie in (0,1]");
        if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
        if (!(cfg.report_interval > 0.0)) throw ConfigError("report_interval must be positive");
        if (cfg.n0_kind == RunConfig::ScalarIC::gaussian && cfg.n0_blob.amplitude < 0.0)
            throw ConfigError("n0 amplitude must be nonnegative");

        std::filesystem::create_directories(cfg.output_dir);
        TransportSolver solver(g, params, cfg.disable_flow);
        State s(g);
        CumulativeLedger ledger;
        double next_report = 0.0, next_snapshot = 0.0;
        bool checkpoint_written = false;

        const std::string csv_path = cfg.output_dir + "/diagnostics.csv";
        std::ofstream csv;

        if (!cfg.restart_from.empty()) {
            load_checkpoint(cfg.restart_from, s, ledger, solver, next_report, next_snapshot);
            s.refresh_ghosts();
            checkpoint_written = true;
        } else {
            s = initial_state(cfg, g, solver.flow());
        }
        csv.open(csv_path);
        write_csv_header(csv);
        if (!csv) throw std::runtime_error("cannot write " + csv_path);

        double last_dt = 0.0;
        auto take_report = [&](double dt_now) {
            EnergyReport rep = energy_report(s, params, cfg.norm_r);
            rep.dt = dt_now;
            ledger.update(rep);
            write_csv_row(csv, rep, ledger);
            result.history.push_back(rep);
        };
        auto take_snapshots = [&]() {
            if (cfg.snapshot_interval <= 0.0) return;
            char stamp[64];
            std::snprintf(stamp, sizeof stamp, "%07ld", s.step_index);
            const std::string base = cfg.output_dir + "/snap_" + stamp;
            write_field(base + "_n.dat", "n", s.n, s.t);
            write_field(base + "_c.dat", "c", s.c, s.t);
            for (int c = 0; c < g.dim; ++c)
                write_field(base + "_u" + std::to_string(c) + ".dat",
                            "u" + std::to_string(c), s.u, c, s.t);
            if (cfg.write_vtk) {
                write_vtk_scalar(base + "_n.vtk", "n", s.n);
                write_vtk_scalar(base + "_c.vtk", "c", s.c);
            }
        };

        if (cfg.restart_from.empty()) {
            take_report(0.0);
            next_report = cfg.report_interval;
            if (cfg.snapshot_interval > 0.0) {
                take_snapshots();
                next_snapshot = cfg.snapshot_interval;
            }
        }

        while (s.t < cfg.t_end - 1e-13) {
            double dt = stable_dt(s, params, cfg.cfl_safety);
            dt = std::min(dt, cfg.t_end - s.t);
            const StepInfo info = solver.step(s, dt);
            last_dt = dt;
            result.max_div_u = std::max(result.max_div_u, info.max_div_u);
            result.steps += 1;

            if (s.t >= next_report - 1e-13 || s.t >= cfg.t_end - 1e-13) {
                take_report(last_dt);
                while (next_report <= s.t + 1e-13) next_report += cfg.report_interval;
            }
            if (cfg.snapshot_interval > 0.0 && s.t >= next_snapshot - 1e-13) {
                take_snapshots();
                while (next_snapshot <= s.t + 1e-13) next_snapshot += cfg.snapshot_interval;
            }
            if (cfg.checkpoint_at >= 0.0 && !checkpoint_written && s.t >= cfg.checkpoint_at) {
                save_checkpoint(cfg.output_dir + "/mid.chk", s, ledger, solver, next_report,
                                next_snapshot);
                checkpoint_written = true;
            }
        }

        save_checkpoint(cfg.output_dir + "/final.chk", s, ledger, solver, next_report,
                        next_snapshot);
        result.checkpoint_path = cfg.output_dir + "/final.chk";
        result.csv_path = csv_path;

        // verdicts
        const Verdict mm = check_mass_and_max(result.history, params.s0);
        result.verdicts["mass_and_max"] = mm.pass;
        if (!mm.pass) result.message = mm.detail;
        if (cfg.disable_flow && result.history.size() >= 2) {
            const Verdict decay = check_lemma31_decay(result.history);
            result.verdicts["lemma31_decay"] = decay.pass;
            if (!decay.pass && result.message.empty()) result.message = decay.detail;
        }
        if (!ledger.empty() && ledger.times().size() >= 3) {
            result.growth = check_linear_growth(ledger, 0.25);
            bool all = true;
            for (const auto& gv : result.growth) all = all && gv.pass;
            result.verdicts["linear_growth"] = all;
        }
        result.ledger = ledger;

        bool all_pass = true;
        for (const auto& [name, pass] : result.verdicts) all_pass = all_pass && pass;
        result.exit_code = all_pass ? 0 : 2;
    } catch (const ConfigError& e) {
        result.exit_code = 4;
        result.message = e.what();
    } catch (const BlowupError& e) {
        result.exit_code = 3;
        result.message = e.what();
    } catch (const SolverError& e) {
        result.exit_code = 3;
        result.message = e.what();
    }
    result.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return result;
}

}  // namespace cns
