// Command-line front end: run / verify / exponents / sweep-eps.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "cns/driver.hpp"
#include "cns/errors.hpp"
#include "cns/exponents.hpp"

namespace {

void print_result(const cns::RunResult& r) {
    std::printf("steps=%ld  runtime=%.2fs  max|div u|=%.3e\n", r.steps, r.runtime_seconds,
                r.max_div_u);
    for (const auto& [name, pass] : r.verdicts)
        std::printf("  %-16s %s\n", name.c_str(), pass ? "PASS" : "FAIL");
    for (const auto& gv : r.growth)
        std::printf("  C_hat[%-13s] = %.6g  (window sup %.6g / median %.6g)\n",
                    gv.quantity.c_str(), gv.c_hat, gv.window_sup, gv.window_median);
    if (!r.message.empty()) std::printf("  note: %s\n", r.message.c_str());
}

int do_run(const std::string& config_path, const std::string& restart) {
    cns::RunConfig cfg;
    try {
        cfg = cns::parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    }
    cfg.restart_from = restart;
    const cns::RunResult r = cns::run(cfg);
    print_result(r);
    return r.exit_code;
}

int do_verify(const std::string& config_path) {
    cns::RunConfig cfg;
    try {
        cfg = cns::parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    }
    // short horizon: invariant suites only
    cfg.t_end = std::min(cfg.t_end, 0.05);
    cfg.report_interval = std::min(cfg.report_interval, cfg.t_end / 10.0);
    cfg.snapshot_interval = 0.0;
    const cns::RunResult r = cns::run(cfg);
    print_result(r);
    return r.exit_code;
}

int do_exponents(double m0, double p, double delta, bool csv) {
    using namespace cns;
    if (delta > 0.0) {
        const BootstrapSchedule s = bootstrap_schedule(delta);
        if (csv) {
            std::printf("k,m_k\n");
            for (std::size_t k = 0; k < s.m_values.size(); ++k)
                std::printf("%zu,%.12g\n", k, s.m_values[k]);
        } else {
            std::printf("delta=%.12g  p=%.12g  delta1=%.12g  first k with m_k>=2: %d\n",
                        s.delta, s.p, s.delta1, s.first_k_reaching_2);
            for (std::size_t k = 0; k < s.m_values.size(); ++k)
                std::printf("  m_%zu = %.12g\n", k, s.m_values[k]);
        }
        return 0;
    }
    const MRange range = admissible_m_range(m0, p);
    if (!range.nonempty) {
        std::printf("admissible range for m0=%.6g, p=%.6g is empty (lower=%.12g upper=%.12g)\n",
                    m0, p, range.lower, range.upper);
        return 0;
    }
    const double m = 0.5 * (std::max(range.lower, 1.0) + range.upper);
    const ExponentTable t = lemma51_exponents(m0, m, p);
    if (csv) {
        std::printf("name,value\n");
        std::printf("p,%.12g\np_prime,%.12g\nm0,%.12g\nm,%.12g\nm_star,%.12g\n", t.p,
                    t.p_prime, t.m0, t.m, t.m_star);
        std::printf("beta,%.12g\nalpha,%.12g\nalpha_prime,%.12g\ntheta51,%.12g\n", t.beta,
                    t.alpha, t.alpha_prime, t.theta51);
        std::printf("lower,%.12g\nupper,%.12g\n", range.lower, range.upper);
        std::printf("range_ok,%d\ntheta_in_unit_interval,%d\nyoung_ok,%d\n", t.range_ok,
                    t.theta_in_unit_interval, t.young_ok);
    } else {
        std::printf("m0=%.6g p=%.6g: admissible m in (%.12g, %.12g]\n", m0, p, range.lower,
                    range.upper);
        std::printf("  sample m=%.12g  m*=%.12g  beta=%.12g\n", t.m, t.m_star, t.beta);
        std::printf("  p'=%.12g  alpha=%.12g  alpha'=%.12g  theta=%.12g\n", t.p_prime,
                    t.alpha, t.alpha_prime, t.theta51);
        std::printf("  flags: range_ok=%d theta_in_(0,1)=%d young_ok=%d\n", t.range_ok,
                    t.theta_in_unit_interval, t.young_ok);
    }
    return 0;
}

int do_sweep(const std::string& config_path, const std::vector<double>& values) {
    cns::RunConfig base;
    try {
        base = cns::parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    }
    const std::string root = base.output_dir;
    std::filesystem::create_directories(root);
    std::ofstream summary(root + "/sweep_summary.csv");
    summary << "epsilon,exit_code,mass_n,max_c,cum_d_plap_power,cum_gradc4\n";
    int worst = 0;
    for (double eps : values) {
        cns::RunConfig cfg = base;
        cfg.epsilon = eps;
        char tag[64];
        std::snprintf(tag, sizeof tag, "%s/eps_%g", root.c_str(), eps);
        cfg.output_dir = tag;
        const cns::RunResult r = cns::run(cfg);
        std::printf("epsilon=%g -> exit %d\n", eps, r.exit_code);
        print_result(r);
        worst = std::max(worst, r.exit_code);
        if (!r.history.empty()) {
            char row[256];
            std::snprintf(row, sizeof row, "%.12g,%d,%.12g,%.12g,%.12g,%.12g\n", eps,
                          r.exit_code, r.history.back().mass_n, r.history.back().max_c,
                          r.ledger.cumulative(0), r.ledger.cumulative(6));
            summary << row;
        }
    }
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"epsilon-regularized chemotaxis-Navier-Stokes simulator and estimate auditor"};
    app.require_subcommand(1);

    std::string config_path, restart;
    auto* run_cmd = app.add_subcommand("run", "execute a configured run");
    run_cmd->add_option("config", config_path, "config file")->required();
    run_cmd->add_option("--restart", restart, "checkpoint to resume from");

    std::string verify_path;
    auto* verify_cmd = app.add_subcommand("verify", "short-horizon invariant suite");
    verify_cmd->add_option("config", verify_path, "config file")->required();

    double m0 = 1.0, p = 0.0, delta = 0.0;
    bool csv = false;
    auto* exp_cmd = app.add_subcommand("exponents", "derived exponent table");
    exp_cmd->add_option("--m0", m0, "integrability exponent hypothesis");
    exp_cmd->add_option("--p", p, "diffusion exponent");
    exp_cmd->add_option("--delta", delta, "bootstrap offset p = 32/15 + delta");
    exp_cmd->add_flag("--csv", csv, "emit CSV");

    std::string sweep_path;
    std::vector<double> sweep_values;
    auto* sweep_cmd = app.add_subcommand("sweep-eps", "run an epsilon family");
    sweep_cmd->add_option("config", sweep_path, "config file")->required();
    sweep_cmd->add_option("--values", sweep_values, "epsilon values")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return do_run(config_path, restart);
        if (verify_cmd->parsed()) return do_verify(verify_path);
        if (exp_cmd->parsed()) {
            if (delta <= 0.0 && p <= 0.0) {
                std::fprintf(stderr, "exponents: provide --p (with --m0) or --delta\n");
                return 4;
            }
            return do_exponents(m0, p, delta, csv);
        }
        if (sweep_cmd->parsed()) return do_sweep(sweep_path, sweep_values);
    } catch (const cns::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
