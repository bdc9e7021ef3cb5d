// sweep.hpp: configuration schema, parameter-grid sweeps and CSV/JSON emission.
//
// Config (JSON, schema_version "1"):
//   model.type, model.params.<name>
//   sweep.axis1 / sweep.axis2: {param, min, max, count}
//   measures: ["omega_r", {"id": "omega_r", "class": "partially_coherent_product", "pairs": [[1,0],[1,0]],
//              "column": "omega_r_partial"}, ...]
//   output.path, output.format ("csv" | "json")
//   runtime.workers, runtime.convergence_check, runtime.seed, runtime.spectral_gap
//   wigner: {min, max, count}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsync/models.hpp"
#include "qsync/sync_measure.hpp"

namespace qsync {

inline constexpr std::string_view kSchemaVersion = "1";
inline constexpr double kConvergenceTol = 1e-6;

enum class OutputFormat { Csv, Json };

std::optional<OutputFormat> parse_format(std::string_view name);
std::string_view format_name(OutputFormat f);

struct MeasureSpec {
    // omega_r, omega_d, oracle_min, s_coh, c_l1, mutual_information,
    // classical_mutual_information, c1, s_phase
    std::string id;
    std::string column;
    LimitCycleClass cls = DiagonalCorrelated{};
    // Subsystem for c1 / s_phase; -1 picks the first oscillator or spin.
    int site = -1;
    int samples = 2000;
};

std::vector<std::string_view> measure_ids();

struct Axis {
    std::string param;
    double min{0.0};
    double max{0.0};
    int count{2};

    std::vector<double> values() const;
};

struct WignerSpec {
    double min = -4.5;
    double max = 4.5;
    int count = 201;
};

struct SweepConfig {
    std::string schema_version{kSchemaVersion};
    ModelSpec model;
    std::optional<Axis> axis1;
    std::optional<Axis> axis2;
    std::vector<MeasureSpec> measures;
    std::string output_path;
    OutputFormat format = OutputFormat::Csv;
    int workers = 0; // 0: hardware concurrency
    bool convergence_check = true;
    std::uint64_t seed = 0;
    bool spectral_gap = false;
    WignerSpec wigner;
};

// Strict parse: unknown fields and every invalid value are reported with their field path.
// Throws ConfigError.
SweepConfig parse_config(std::string_view text);
std::string serialize_config(const SweepConfig& config);

struct CellResult {
    std::vector<double> values; // NaN where the cell failed
    double residual{0.0};
    // max over measures of |m(N) − m(N+4)|; 0 without oscillators, NaN when not checked.
    double truncation_delta{0.0};
    std::optional<double> spectral_gap;
    std::string error;

    bool failed() const { return !error.empty(); }
};

struct SweepGrid {
    std::string axis1_param;
    std::string axis2_param;
    std::vector<double> axis1;
    std::vector<double> axis2;
    std::vector<std::string> columns;
    std::vector<CellResult> cells; // row-major: axis1 outer, axis2 inner
    bool spectral_gap = false;

    const CellResult& at(std::size_t i, std::size_t j) const { return cells[i * axis2.size() + j]; }
    bool any_failed() const;
    double max_truncation_delta() const;
};

// Steady state and measures for one parameter point.
CellResult evaluate_point(const ModelSpec& model, const std::vector<MeasureSpec>& measures, bool convergence_check,
                          std::uint64_t seed, bool spectral_gap = false);
double evaluate_measure(const MeasureSpec& m, const DensityMatrix& rho, const BuiltModel& built, std::uint64_t seed);

// Requires both axes. Cells run on a bounded worker pool; results do not depend on the
// worker count or completion order.
SweepGrid run_sweep(const SweepConfig& config);
// Single-point grid (no axes) at the model parameters.
SweepGrid run_point(const SweepConfig& config);

std::string emit(const SweepGrid& grid, OutputFormat format);

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

struct WignerOutput {
    WignerGrid grid;
    double reference_photon_number{0.0}; // <a†a> of the ε = 0 steady state
};

WignerOutput wigner_command(const ModelSpec& model, const WignerSpec& spec);
std::string emit_wigner(const WignerOutput& w);

std::string emit_steady_state(const SteadyStateSolution& ss, OutputFormat format);

} // namespace qsync
