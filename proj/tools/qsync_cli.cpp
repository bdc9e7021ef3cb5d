// qsync: steady states, synchronization measures and parameter sweeps from a JSON config.
//
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 quality-gate failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qsync/errors.hpp"
#include "qsync/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitQuality = 4;

struct Options {
    std::string config;
    std::string out;
    std::string format;
    int workers = -1;
    std::optional<std::uint64_t> seed;
    bool no_convergence_check = false;
};

void add_common(CLI::App* cmd, Options& o, bool runs_model) {
    cmd->add_option("--config", o.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    if (!runs_model) return;
    cmd->add_option("--out", o.out, "Output file (default: output.path, else stdout)");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", o.workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", o.seed, "Seed for oracle sampling");
    cmd->add_flag("--no-convergence-check", o.no_convergence_check, "Skip the N+4 Fock cutoff repeat");
}

qsync::SweepConfig load(const Options& o) {
    std::ifstream in(o.config);
    if (!in) throw qsync::ConfigError({o.config + ": cannot read file"});
    std::stringstream ss;
    ss << in.rdbuf();
    qsync::SweepConfig cfg = qsync::parse_config(ss.str());
    if (!o.out.empty()) cfg.output_path = o.out;
    if (!o.format.empty()) cfg.format = *qsync::parse_format(o.format);
    if (o.workers >= 0) cfg.workers = o.workers;
    if (o.seed) cfg.seed = *o.seed;
    if (o.no_convergence_check) cfg.convergence_check = false;
    return cfg;
}

void write(const qsync::SweepConfig& cfg, const std::string& text) {
    if (cfg.output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) throw qsync::ConfigError({"output.path: cannot open '" + cfg.output_path + "' for writing"});
    out << text;
}

int grid_status(const qsync::SweepGrid& grid, const qsync::SweepConfig& cfg) {
    if (grid.any_failed()) {
        for (const auto& c : grid.cells)
            if (c.failed()) std::cerr << "cell failed: " << c.error << "\n";
        return kExitNumerical;
    }
    if (cfg.convergence_check && grid.max_truncation_delta() > qsync::kConvergenceTol) {
        std::cerr << "quality gate: truncation delta " << grid.max_truncation_delta() << " exceeds "
                  << qsync::kConvergenceTol << " under N -> N+4\n";
        return kExitQuality;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum synchronization measures for open quantum systems"};
    app.require_subcommand(1);
    Options o;

    auto* steady = app.add_subcommand("steady-state", "Steady state of the configured model");
    auto* measure = app.add_subcommand("measure", "Measures at the configured parameter point");
    auto* sweep = app.add_subcommand("sweep", "Measures over the configured two-parameter grid");
    auto* wigner = app.add_subcommand("wigner", "Wigner function of the oscillator steady state");
    auto* validate = app.add_subcommand("validate-config", "Check a configuration file");
    for (auto* c : {steady, measure, sweep, wigner}) add_common(c, o, true);
    add_common(validate, o, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        const qsync::SweepConfig cfg = load(o);
        if (validate->parsed()) {
            std::cout << "valid\n";
            return 0;
        }
        if (steady->parsed()) {
            const qsync::BuiltModel built = qsync::build_model(cfg.model);
            write(cfg, qsync::emit_steady_state(qsync::solve_steady_state(built.liouvillian()), cfg.format));
            return 0;
        }
        if (measure->parsed()) {
            const qsync::SweepGrid grid = qsync::run_point(cfg);
            write(cfg, qsync::emit(grid, cfg.format));
            return grid_status(grid, cfg);
        }
        if (sweep->parsed()) {
            if (!cfg.axis1 || !cfg.axis2) throw qsync::ConfigError({"sweep: missing required field"});
            const qsync::SweepGrid grid = qsync::run_sweep(cfg);
            write(cfg, qsync::emit(grid, cfg.format));
            return grid_status(grid, cfg);
        }
        if (wigner->parsed()) {
            if (!qsync::has_oscillator(cfg.model))
                throw qsync::ConfigError({"model.type: wigner needs a model with an oscillator"});
            const qsync::WignerOutput w = qsync::wigner_command(cfg.model, cfg.wigner);
            if (w.grid.truncation_warning)
                std::cerr << "warning: last Fock level is populated; increase the cutoff\n";
            write(cfg, qsync::emit_wigner(w));
            return 0;
        }
    } catch (const qsync::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
