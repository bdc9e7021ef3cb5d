#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "qsync/errors.hpp"
#include "qsync/sweep.hpp"

namespace qsync {

namespace {

using json = nlohmann::json;

constexpr std::string_view kMeasureIds[] = {"omega_r", "omega_d",           "oracle_min",
                                            "s_coh",   "c_l1",              "mutual_information",
                                            "classical_mutual_information", "c1", "s_phase"};

std::string field(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

class Issues {
public:
    void add(const std::string& path, const std::string& msg) { list_.push_back(path + ": " + msg); }
    bool empty() const { return list_.empty(); }
    std::size_t size() const { return list_.size(); }
    [[noreturn]] void raise() { throw ConfigError(std::move(list_)); }

private:
    std::vector<std::string> list_;
};

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed,
                    Issues& issues) {
    for (const auto& [key, _] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            issues.add(field(path, key), "unknown field");
}

std::optional<double> get_number(const json& obj, const std::string& key, const std::string& path, Issues& issues,
                                 bool required) {
    if (!obj.contains(key)) {
        if (required) issues.add(field(path, key), "missing required field");
        return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        issues.add(field(path, key), "must be a number");
        return std::nullopt;
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        issues.add(field(path, key), "must be finite");
        return std::nullopt;
    }
    return d;
}

std::optional<long long> get_integer(const json& obj, const std::string& key, const std::string& path,
                                     Issues& issues, bool required) {
    if (!obj.contains(key)) {
        if (required) issues.add(field(path, key), "missing required field");
        return std::nullopt;
    }
    const json& v = obj.at(key);
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) return static_cast<long long>(d);
    }
    issues.add(field(path, key), "must be an integer");
    return std::nullopt;
}

std::optional<bool> get_bool(const json& obj, const std::string& key, const std::string& path, Issues& issues) {
    if (!obj.contains(key)) return std::nullopt;
    if (!obj.at(key).is_boolean()) {
        issues.add(field(path, key), "must be true or false");
        return std::nullopt;
    }
    return obj.at(key).get<bool>();
}

std::optional<std::string> get_string(const json& obj, const std::string& key, const std::string& path,
                                      Issues& issues, bool required) {
    if (!obj.contains(key)) {
        if (required) issues.add(field(path, key), "missing required field");
        return std::nullopt;
    }
    if (!obj.at(key).is_string()) {
        issues.add(field(path, key), "must be a string");
        return std::nullopt;
    }
    return obj.at(key).get<std::string>();
}

bool require_object(const json& parent, const std::string& key, const std::string& path, Issues& issues) {
    if (!parent.at(key).is_object()) {
        issues.add(path, "must be an object");
        return false;
    }
    return true;
}

std::optional<LimitCycleClass> class_from_name(std::string_view name) {
    if (name == "diagonal_correlated") return DiagonalCorrelated{};
    if (name == "diagonal_product") return DiagonalProduct{};
    if (name == "marginal_product") return MarginalProduct{};
    if (name == "partially_coherent_product") return PartiallyCoherentProduct{};
    return std::nullopt;
}

std::optional<Axis> parse_axis(const json& sweep, const std::string& key, const ModelSpec& model, Issues& issues) {
    const std::string path = "sweep." + key;
    if (!sweep.contains(key)) {
        issues.add(path, "missing required field");
        return std::nullopt;
    }
    if (!require_object(sweep, key, path, issues)) return std::nullopt;
    const json& a = sweep.at(key);
    reject_unknown(a, path, {"param", "min", "max", "count"}, issues);
    const std::size_t before = issues.size();
    Axis axis;
    if (auto p = get_string(a, "param", path, issues, true)) {
        axis.param = *p;
        if (!get_parameter(model, axis.param))
            issues.add(path + ".param", "unknown parameter '" + axis.param + "' for model " +
                                            std::string(model_type(model)));
        else if (is_integer_parameter(model, axis.param))
            issues.add(path + ".param", "integer parameter '" + axis.param + "' cannot be swept");
    }
    const auto lo = get_number(a, "min", path, issues, true);
    const auto hi = get_number(a, "max", path, issues, true);
    const auto count = get_integer(a, "count", path, issues, true);
    if (lo) axis.min = *lo;
    if (hi) axis.max = *hi;
    if (count) {
        if (*count < 1 || *count > 100000) issues.add(path + ".count", "must be between 1 and 100000");
        else axis.count = static_cast<int>(*count);
    }
    if (lo && hi && count) {
        if (*count == 1 && *lo != *hi) issues.add(path + ".count", "a single-point axis needs min == max");
        if (*count > 1 && !(*lo < *hi)) issues.add(path + ".max", "must be greater than min");
    }
    if (issues.size() != before) return std::nullopt;
    return axis;
}

std::string default_column(const MeasureSpec& m) {
    if ((m.id == "omega_r" || m.id == "oracle_min") && !std::holds_alternative<DiagonalCorrelated>(m.cls))
        return m.id + "_" + class_name(m.cls);
    return m.id;
}

void check_measure_against_model(const MeasureSpec& m, const BuiltModel& built, const std::string& path,
                                 Issues& issues) {
    const int subsystems = static_cast<int>(built.dims.size());
    const bool product_class = !std::holds_alternative<DiagonalCorrelated>(m.cls);
    if (product_class && subsystems != 2) issues.add(path + ".class", "product classes need a bipartite model");
    if (const auto* p = std::get_if<PartiallyCoherentProduct>(&m.cls)) {
        if (subsystems == 2 && (built.dims[0] != 3 || built.dims[1] != 3))
            issues.add(path + ".class", "partially_coherent_product needs two spin-1 subsystems");
        if (static_cast<int>(p->pairs.size()) != subsystems)
            issues.add(path + ".pairs", "needs one level pair per subsystem");
    }
    if ((m.id == "mutual_information" || m.id == "classical_mutual_information") && subsystems != 2)
        issues.add(path + ".id", m.id + " needs a bipartite model");
    auto site_ok = [&](const std::vector<int>& sites, const char* what) {
        if (sites.empty()) {
            issues.add(path + ".id", m.id + " needs a model with " + what);
            return;
        }
        if (m.site >= 0 && std::find(sites.begin(), sites.end(), m.site) == sites.end())
            issues.add(path + ".site", std::string("subsystem is not ") + what);
    };
    if (m.id == "c1") site_ok(built.boson_sites, "an oscillator");
    if (m.id == "s_phase") site_ok(built.spin_sites, "a spin-1");
}

std::optional<MeasureSpec> parse_measure(const json& item, const std::string& path, Issues& issues) {
    MeasureSpec m;
    if (item.is_string()) {
        m.id = item.get<std::string>();
    } else if (item.is_object()) {
        reject_unknown(item, path, {"id", "class", "pairs", "column", "site", "samples"}, issues);
        if (auto id = get_string(item, "id", path, issues, true)) m.id = *id;
        if (auto c = get_string(item, "class", path, issues, false)) {
            if (auto cls = class_from_name(*c)) m.cls = *cls;
            else issues.add(path + ".class", "unknown class '" + *c + "'");
        }
        if (auto col = get_string(item, "column", path, issues, false)) m.column = *col;
        if (auto site = get_integer(item, "site", path, issues, false)) {
            if (*site < 0) issues.add(path + ".site", "must be >= 0");
            else m.site = static_cast<int>(*site);
        }
        if (auto s = get_integer(item, "samples", path, issues, false)) {
            if (*s < 1 || *s > 10000000) issues.add(path + ".samples", "must be between 1 and 1e7");
            else m.samples = static_cast<int>(*s);
        }
        if (item.contains("pairs")) {
            auto* p = std::get_if<PartiallyCoherentProduct>(&m.cls);
            const json& pairs = item.at("pairs");
            if (!p) {
                issues.add(path + ".pairs", "only valid with class partially_coherent_product");
            } else if (!pairs.is_array()) {
                issues.add(path + ".pairs", "must be an array of [i, j] pairs");
            } else {
                for (std::size_t k = 0; k < pairs.size(); ++k) {
                    const json& pr = pairs[k];
                    const std::string pp = path + ".pairs[" + std::to_string(k) + "]";
                    if (!pr.is_array() || pr.size() != 2 || !pr[0].is_number_integer() || !pr[1].is_number_integer()) {
                        issues.add(pp, "must be [i, j] with integer levels");
                        continue;
                    }
                    const int i = pr[0].get<int>(), j = pr[1].get<int>();
                    if (i < 0 || i > 2 || j < 0 || j > 2 || i == j) issues.add(pp, "levels must be distinct and in 0..2");
                    p->pairs.emplace_back(i, j);
                }
            }
        }
    } else {
        issues.add(path, "must be a measure id or an object");
        return std::nullopt;
    }
    if (std::find(std::begin(kMeasureIds), std::end(kMeasureIds), m.id) == std::end(kMeasureIds)) {
        issues.add(path + (item.is_object() ? ".id" : ""), "unknown measure '" + m.id + "'");
        return std::nullopt;
    }
    const bool takes_class = m.id == "omega_r" || m.id == "oracle_min";
    if (item.is_object() && item.contains("class") && !takes_class)
        issues.add(path + ".class", "only omega_r and oracle_min take a class");
    if (auto* p = std::get_if<PartiallyCoherentProduct>(&m.cls); p && p->pairs.empty())
        p->pairs = {kSpin1DrivenPair, kSpin1DrivenPair};
    if (m.column.empty()) m.column = default_column(m);
    return m;
}

json axis_json(const Axis& a) {
    return json{{"param", a.param}, {"min", a.min}, {"max", a.max}, {"count", a.count}};
}

} // namespace

std::optional<OutputFormat> parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    return std::nullopt;
}

std::string_view format_name(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

std::vector<std::string_view> measure_ids() { return {std::begin(kMeasureIds), std::end(kMeasureIds)}; }

std::vector<double> Axis::values() const { return linspace(min, max, count); }

SweepConfig parse_config(std::string_view text) {
    Issues issues;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        issues.add("<root>", std::string("invalid JSON: ") + e.what());
        issues.raise();
    }
    if (!root.is_object()) {
        issues.add("<root>", "must be an object");
        issues.raise();
    }
    reject_unknown(root, "", {"schema_version", "model", "sweep", "measures", "output", "runtime", "wigner"}, issues);

    SweepConfig cfg;
    if (auto v = get_string(root, "schema_version", "", issues, true)) {
        if (*v != kSchemaVersion) issues.add("schema_version", "unsupported version '" + *v + "' (expected \"1\")");
    }

    bool model_ok = false;
    if (!root.contains("model")) {
        issues.add("model", "missing required field");
    } else if (require_object(root, "model", "model", issues)) {
        const json& m = root.at("model");
        reject_unknown(m, "model", {"type", "params"}, issues);
        if (auto type = get_string(m, "type", "model", issues, true)) {
            if (auto spec = make_model(*type)) {
                cfg.model = *spec;
                model_ok = true;
                bool cutoff_given = false;
                if (m.contains("params") && require_object(m, "params", "model.params", issues)) {
                    for (const auto& [key, val] : m.at("params").items()) {
                        const std::string path = "model.params." + key;
                        if (!get_parameter(cfg.model, key)) {
                            issues.add(path, "unknown parameter for model " + *type);
                            model_ok = false;
                            continue;
                        }
                        if (is_integer_parameter(cfg.model, key)) {
                            auto v = get_integer(m.at("params"), key, "model.params", issues, true);
                            if (!v) {
                                model_ok = false;
                                continue;
                            }
                            if (*v < 2 || *v > 200) {
                                issues.add(path, "Fock cutoff must be between 2 and 200");
                                model_ok = false;
                                continue;
                            }
                            set_parameter(cfg.model, key, static_cast<double>(*v));
                            if (key == "n_fock") cutoff_given = true;
                        } else {
                            auto v = get_number(m.at("params"), key, "model.params", issues, true);
                            if (!v) {
                                model_ok = false;
                                continue;
                            }
                            set_parameter(cfg.model, key, *v);
                        }
                    }
                }
                if (auto* vdp = std::get_if<DrivenVdp>(&cfg.model); vdp && !cutoff_given)
                    vdp->n_fock = default_cutoff(vdp->gamma_g, vdp->gamma_d);
                for (const auto& issue : validate_model(cfg.model)) {
                    issues.add("model.params." + issue.substr(0, issue.find(':')), issue.substr(issue.find(':') + 2));
                    model_ok = false;
                }
            } else {
                issues.add("model.type", "unknown model type '" + *type + "'");
            }
        }
    }

    if (root.contains("sweep") && require_object(root, "sweep", "sweep", issues)) {
        const json& s = root.at("sweep");
        reject_unknown(s, "sweep", {"axis1", "axis2"}, issues);
        cfg.axis1 = parse_axis(s, "axis1", cfg.model, issues);
        cfg.axis2 = parse_axis(s, "axis2", cfg.model, issues);
        if (cfg.axis1 && cfg.axis2 && cfg.axis1->param == cfg.axis2->param)
            issues.add("sweep.axis2.param", "must differ from sweep.axis1.param");
    }

    if (root.contains("measures")) {
        const json& ms = root.at("measures");
        if (!ms.is_array() || ms.empty()) {
            issues.add("measures", "must be a non-empty array");
        } else {
            for (std::size_t k = 0; k < ms.size(); ++k)
                if (auto m = parse_measure(ms[k], "measures[" + std::to_string(k) + "]", issues))
                    cfg.measures.push_back(*m);
        }
    } else {
        MeasureSpec m;
        m.id = "omega_r";
        m.column = "omega_r";
        cfg.measures.push_back(m);
    }
    std::set<std::string> seen;
    for (std::size_t k = 0; k < cfg.measures.size(); ++k) {
        const auto& m = cfg.measures[k];
        if (!seen.insert(m.column).second)
            issues.add("measures[" + std::to_string(k) + "].column", "duplicate column '" + m.column + "'");
        if (m.column == "axis1" || m.column == "axis2" || m.column == "residual" || m.column == "truncation_delta" ||
            m.column == "spectral_gap" || m.column == "error")
            issues.add("measures[" + std::to_string(k) + "].column", "reserved column name '" + m.column + "'");
    }
    if (model_ok) {
        const BuiltModel built = build_model(cfg.model);
        for (std::size_t k = 0; k < cfg.measures.size(); ++k)
            check_measure_against_model(cfg.measures[k], built, "measures[" + std::to_string(k) + "]", issues);
    }

    if (root.contains("output") && require_object(root, "output", "output", issues)) {
        const json& o = root.at("output");
        reject_unknown(o, "output", {"path", "format"}, issues);
        if (auto p = get_string(o, "path", "output", issues, false)) cfg.output_path = *p;
        if (auto f = get_string(o, "format", "output", issues, false)) {
            if (auto fmt = parse_format(*f)) cfg.format = *fmt;
            else issues.add("output.format", "must be \"csv\" or \"json\"");
        }
    }

    if (root.contains("runtime") && require_object(root, "runtime", "runtime", issues)) {
        const json& r = root.at("runtime");
        reject_unknown(r, "runtime", {"workers", "convergence_check", "seed", "spectral_gap"}, issues);
        if (auto w = get_integer(r, "workers", "runtime", issues, false)) {
            if (*w < 0 || *w > 1024) issues.add("runtime.workers", "must be between 0 and 1024");
            else cfg.workers = static_cast<int>(*w);
        }
        if (auto c = get_bool(r, "convergence_check", "runtime", issues)) cfg.convergence_check = *c;
        if (auto g = get_bool(r, "spectral_gap", "runtime", issues)) cfg.spectral_gap = *g;
        if (r.contains("seed")) {
            const json& s = r.at("seed");
            if (s.is_number_unsigned()) cfg.seed = s.get<std::uint64_t>();
            else if (s.is_number_integer() && s.get<long long>() >= 0) cfg.seed = s.get<std::uint64_t>();
            else issues.add("runtime.seed", "must be a nonnegative integer");
        }
    }

    if (root.contains("wigner") && require_object(root, "wigner", "wigner", issues)) {
        const json& w = root.at("wigner");
        reject_unknown(w, "wigner", {"min", "max", "count"}, issues);
        if (auto v = get_number(w, "min", "wigner", issues, false)) cfg.wigner.min = *v;
        if (auto v = get_number(w, "max", "wigner", issues, false)) cfg.wigner.max = *v;
        if (auto c = get_integer(w, "count", "wigner", issues, false)) {
            if (*c < 2 || *c > 5000) issues.add("wigner.count", "must be between 2 and 5000");
            else cfg.wigner.count = static_cast<int>(*c);
        }
        if (!(cfg.wigner.min < cfg.wigner.max)) issues.add("wigner.max", "must be greater than wigner.min");
    }

    if (!issues.empty()) issues.raise();
    return cfg;
}

std::string serialize_config(const SweepConfig& cfg) {
    json params = json::object();
    for (const auto& name : parameter_names(cfg.model)) {
        const double v = *get_parameter(cfg.model, name);
        if (is_integer_parameter(cfg.model, name)) params[name] = static_cast<long long>(v);
        else params[name] = v;
    }
    json root;
    root["schema_version"] = cfg.schema_version;
    root["model"] = {{"type", std::string(model_type(cfg.model))}, {"params", params}};
    if (cfg.axis1 && cfg.axis2) root["sweep"] = {{"axis1", axis_json(*cfg.axis1)}, {"axis2", axis_json(*cfg.axis2)}};
    json measures = json::array();
    for (const auto& m : cfg.measures) {
        json j = {{"id", m.id}, {"column", m.column}};
        if (m.id == "omega_r" || m.id == "oracle_min") j["class"] = class_name(m.cls);
        if (const auto* p = std::get_if<PartiallyCoherentProduct>(&m.cls)) {
            json pairs = json::array();
            for (const auto& [a, b] : p->pairs) pairs.push_back({a, b});
            j["pairs"] = pairs;
        }
        if (m.site >= 0) j["site"] = m.site;
        if (m.id == "oracle_min") j["samples"] = m.samples;
        measures.push_back(j);
    }
    root["measures"] = measures;
    json output = {{"format", std::string(format_name(cfg.format))}};
    if (!cfg.output_path.empty()) output["path"] = cfg.output_path;
    root["output"] = output;
    root["runtime"] = {{"workers", cfg.workers},
                       {"convergence_check", cfg.convergence_check},
                       {"seed", cfg.seed},
                       {"spectral_gap", cfg.spectral_gap}};
    root["wigner"] = {{"min", cfg.wigner.min}, {"max", cfg.wigner.max}, {"count", cfg.wigner.count}};
    return root.dump(2) + "\n";
}

} // namespace qsync
