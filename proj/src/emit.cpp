#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "qsync/sweep.hpp"

namespace qsync {

namespace {

using json = nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string emit_csv(const SweepGrid& grid) {
    const bool axes = !grid.axis1_param.empty();
    std::string out;
    if (axes) out += "axis1,axis2,";
    for (const auto& c : grid.columns) out += c + ",";
    out += "residual,truncation_delta";
    if (grid.spectral_gap) out += ",spectral_gap";
    out += "\n";

    auto row = [&](const CellResult& cell) {
        for (double v : cell.values) out += format_double(v) + ",";
        out += format_double(cell.residual) + "," + format_double(cell.truncation_delta);
        if (grid.spectral_gap)
            out += "," + format_double(cell.spectral_gap ? *cell.spectral_gap : std::nan(""));
        out += "\n";
    };
    if (!axes) {
        for (const auto& cell : grid.cells) row(cell);
        return out;
    }
    for (std::size_t i = 0; i < grid.axis1.size(); ++i)
        for (std::size_t j = 0; j < grid.axis2.size(); ++j) {
            out += format_double(grid.axis1[i]) + "," + format_double(grid.axis2[j]) + ",";
            row(grid.at(i, j));
        }
    return out;
}

json cell_json(const SweepGrid& grid, const CellResult& cell) {
    json j = json::object();
    for (std::size_t k = 0; k < grid.columns.size(); ++k) j[grid.columns[k]] = number_or_null(cell.values[k]);
    j["residual"] = number_or_null(cell.residual);
    j["truncation_delta"] = number_or_null(cell.truncation_delta);
    if (grid.spectral_gap) j["spectral_gap"] = cell.spectral_gap ? number_or_null(*cell.spectral_gap) : json(nullptr);
    if (cell.failed()) j["error"] = cell.error;
    return j;
}

std::string emit_json(const SweepGrid& grid) {
    json root;
    root["schema_version"] = std::string(kSchemaVersion);
    root["columns"] = grid.columns;
    json rows = json::array();
    if (grid.axis1_param.empty()) {
        for (const auto& cell : grid.cells) rows.push_back(cell_json(grid, cell));
    } else {
        root["axis1"] = {{"param", grid.axis1_param}, {"values", grid.axis1}};
        root["axis2"] = {{"param", grid.axis2_param}, {"values", grid.axis2}};
        for (std::size_t i = 0; i < grid.axis1.size(); ++i)
            for (std::size_t j = 0; j < grid.axis2.size(); ++j) {
                json r = cell_json(grid, grid.at(i, j));
                r["axis1"] = grid.axis1[i];
                r["axis2"] = grid.axis2[j];
                rows.push_back(r);
            }
    }
    root["rows"] = rows;
    return root.dump(2) + "\n";
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string emit(const SweepGrid& grid, OutputFormat format) {
    return format == OutputFormat::Csv ? emit_csv(grid) : emit_json(grid);
}

std::string emit_wigner(const WignerOutput& w) {
    std::string out = "# reference_mean_photon_number=" + format_double(w.reference_photon_number) +
                      ",reference_radius=" + format_double(std::sqrt(w.reference_photon_number)) +
                      ",truncation_warning=" + (w.grid.truncation_warning ? "1" : "0") + "\n";
    out += "x,p,W\n";
    for (std::size_t i = 0; i < w.grid.xs.size(); ++i)
        for (std::size_t j = 0; j < w.grid.ps.size(); ++j)
            out += format_double(w.grid.xs[i]) + "," + format_double(w.grid.ps[j]) + "," +
                   format_double(w.grid.values(static_cast<Index>(i), static_cast<Index>(j))) + "\n";
    return out;
}

std::string emit_steady_state(const SteadyStateSolution& ss, OutputFormat format) {
    const ComplexMatrix& m = ss.rho.matrix();
    if (format == OutputFormat::Json) {
        json re = json::array(), im = json::array();
        for (Index i = 0; i < m.rows(); ++i) {
            json rr = json::array(), ri = json::array();
            for (Index j = 0; j < m.cols(); ++j) {
                rr.push_back(m(i, j).real());
                ri.push_back(m(i, j).imag());
            }
            re.push_back(rr);
            im.push_back(ri);
        }
        json root = {{"schema_version", std::string(kSchemaVersion)},
                     {"dims", ss.rho.dims()},
                     {"residual", ss.residual},
                     {"rcond", ss.rcond},
                     {"real", re},
                     {"imag", im}};
        return root.dump(2) + "\n";
    }
    std::string out = "# residual=" + format_double(ss.residual) + ",rcond=" + format_double(ss.rcond) + "\n";
    out += "row,col,re,im\n";
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            out += std::to_string(i) + "," + std::to_string(j) + "," + format_double(m(i, j).real()) + "," +
                   format_double(m(i, j).imag()) + "\n";
    return out;
}

} // namespace qsync
