#include "qsync/sweep.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "qsync/errors.hpp"

namespace qsync {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int pick_site(int requested, const std::vector<int>& sites, const char* what) {
    if (requested >= 0) return requested;
    if (sites.empty()) throw ContractViolation(std::string("model has no ") + what);
    return sites.front();
}

std::vector<double> evaluate_all(const std::vector<MeasureSpec>& measures, const DensityMatrix& rho,
                                 const BuiltModel& built, std::uint64_t seed) {
    std::vector<double> out;
    out.reserve(measures.size());
    for (const auto& m : measures) out.push_back(evaluate_measure(m, rho, built, seed));
    return out;
}

std::string describe(const std::exception& e) {
    if (dynamic_cast<const DegenerateSteadyState*>(&e)) return std::string("degenerate steady state: ") + e.what();
    if (dynamic_cast<const PsdViolation*>(&e)) return std::string("positivity violation: ") + e.what();
    if (dynamic_cast<const ContractViolation*>(&e)) return std::string("contract violation: ") + e.what();
    return e.what();
}

} // namespace

bool SweepGrid::any_failed() const {
    for (const auto& c : cells)
        if (c.failed()) return true;
    return false;
}

double SweepGrid::max_truncation_delta() const {
    double m = 0.0;
    for (const auto& c : cells)
        if (!c.failed() && std::isfinite(c.truncation_delta)) m = std::max(m, c.truncation_delta);
    return m;
}

double evaluate_measure(const MeasureSpec& m, const DensityMatrix& rho, const BuiltModel& built, std::uint64_t seed) {
    if (m.id == "omega_r") return omega_r(rho, m.cls).value;
    if (m.id == "omega_d") {
        OmegaDOptions opt;
        opt.seed = seed;
        return omega_d(rho, opt).value;
    }
    if (m.id == "oracle_min") return oracle_min(rho, m.cls, m.samples, seed);
    if (m.id == "s_coh") return s_coh(rho);
    if (m.id == "c_l1") return l1_coherence(rho);
    if (m.id == "mutual_information") return mutual_information(rho);
    if (m.id == "classical_mutual_information") return classical_mutual_information(rho);
    if (m.id == "c1") return c1_measure(rho, pick_site(m.site, built.boson_sites, "oscillator"));
    if (m.id == "s_phase") return s_phase_spin1(rho, pick_site(m.site, built.spin_sites, "spin-1"));
    throw ContractViolation("unknown measure '" + m.id + "'");
}

CellResult evaluate_point(const ModelSpec& model, const std::vector<MeasureSpec>& measures, bool convergence_check,
                          std::uint64_t seed, bool spectral_gap) {
    CellResult cell;
    try {
        const BuiltModel built = build_model(model);
        const Superoperator l = built.liouvillian();
        const SteadyStateSolution ss = solve_steady_state(l);
        cell.values = evaluate_all(measures, ss.rho, built, seed);
        cell.residual = ss.residual;
        if (spectral_gap) cell.spectral_gap = qsync::spectral_gap(l);
        if (!has_oscillator(model)) {
            cell.truncation_delta = 0.0;
        } else if (!convergence_check) {
            cell.truncation_delta = kNaN;
        } else {
            const ModelSpec larger = with_larger_cutoff(model, 4);
            const BuiltModel built2 = build_model(larger);
            const SteadyStateSolution ss2 = solve_steady_state(built2.liouvillian());
            const std::vector<double> v2 = evaluate_all(measures, ss2.rho, built2, seed);
            double delta = 0.0;
            for (std::size_t k = 0; k < v2.size(); ++k) delta = std::max(delta, std::abs(cell.values[k] - v2[k]));
            cell.truncation_delta = delta;
        }
    } catch (const std::exception& e) {
        cell.values.assign(measures.size(), kNaN);
        cell.residual = kNaN;
        cell.truncation_delta = kNaN;
        cell.spectral_gap.reset();
        cell.error = describe(e);
    }
    return cell;
}

SweepGrid run_sweep(const SweepConfig& config) {
    if (!config.axis1 || !config.axis2) throw ConfigError({"sweep: missing required field"});
    SweepGrid grid;
    grid.axis1_param = config.axis1->param;
    grid.axis2_param = config.axis2->param;
    grid.axis1 = config.axis1->values();
    grid.axis2 = config.axis2->values();
    grid.spectral_gap = config.spectral_gap;
    for (const auto& m : config.measures) grid.columns.push_back(m.column);

    const std::size_t n1 = grid.axis1.size(), n2 = grid.axis2.size(), total = n1 * n2;
    grid.cells.resize(total);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t idx = next++; idx < total; idx = next++) {
            ModelSpec model = config.model;
            set_parameter(model, grid.axis1_param, grid.axis1[idx / n2]);
            set_parameter(model, grid.axis2_param, grid.axis2[idx % n2]);
            grid.cells[idx] =
                evaluate_point(model, config.measures, config.convergence_check, config.seed, config.spectral_gap);
        }
    };

    unsigned workers = config.workers > 0 ? static_cast<unsigned>(config.workers) : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return grid;
}

SweepGrid run_point(const SweepConfig& config) {
    SweepGrid grid;
    grid.spectral_gap = config.spectral_gap;
    for (const auto& m : config.measures) grid.columns.push_back(m.column);
    grid.cells.push_back(
        evaluate_point(config.model, config.measures, config.convergence_check, config.seed, config.spectral_gap));
    return grid;
}

WignerOutput wigner_command(const ModelSpec& model, const WignerSpec& spec) {
    if (!has_oscillator(model)) throw ContractViolation("wigner: model has no oscillator");
    const BuiltModel built = build_model(model);
    const int site = built.boson_sites.front();
    const DensityMatrix rho = steady_state(built.liouvillian());
    const std::vector<double> axis = linspace(spec.min, spec.max, spec.count);

    WignerOutput out;
    out.grid = wigner_grid(rho, site, axis, axis);

    const BuiltModel ref = build_model(without_drive(model));
    const DensityMatrix rho0 = steady_state(ref.liouvillian()).marginal(site);
    out.reference_photon_number = expectation(rho0, boson_ops(static_cast<int>(rho0.dim())).number).real();
    return out;
}

} // namespace qsync
