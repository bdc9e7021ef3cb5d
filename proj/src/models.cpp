#include "qsync/models.hpp"

#include <cmath>
#include <type_traits>

#include "qsync/errors.hpp"

namespace qsync {

namespace {

// Field tables. `f(name, ref)` is called with double& or int& members.
template <class F> void fields(DrivenVdp& m, F&& f) {
    f("delta", m.delta);
    f("epsilon", m.epsilon);
    f("gamma_g", m.gamma_g);
    f("gamma_d", m.gamma_d);
    f("n_fock", m.n_fock);
}

template <class M, class F>
    requires std::is_same_v<M, CoupledVdpCoherent> || std::is_same_v<M, CoupledVdpDissipative>
void fields(M& m, F&& f) {
    f("delta_1", m.delta_1);
    f("delta_2", m.delta_2);
    f("gamma_g_1", m.gamma_g_1);
    f("gamma_d_1", m.gamma_d_1);
    f("gamma_g_2", m.gamma_g_2);
    f("gamma_d_2", m.gamma_d_2);
    f("g", m.g);
    f("n_fock_1", m.n_fock_1);
    f("n_fock_2", m.n_fock_2);
}

template <class F> void fields(DrivenSpin1& m, F&& f) {
    f("delta", m.delta);
    f("epsilon", m.epsilon);
    f("gamma_g", m.gamma_g);
    f("gamma_d", m.gamma_d);
}

template <class F> void fields(CoupledSpin1& m, F&& f) {
    f("delta", m.delta);
    f("g", m.g);
    f("gamma_g_a", m.gamma_g_a);
    f("gamma_d_a", m.gamma_d_a);
    f("gamma_g_b", m.gamma_g_b);
    f("gamma_d_b", m.gamma_d_b);
}

template <class F> void fields(CoupledDrivenSpin1& m, F&& f) {
    f("delta_local", m.delta_local);
    f("delta", m.delta);
    f("epsilon", m.epsilon);
    f("g", m.g);
    f("gamma_g_a", m.gamma_g_a);
    f("gamma_d_a", m.gamma_d_a);
    f("gamma_g_b", m.gamma_g_b);
    f("gamma_d_b", m.gamma_d_b);
}

template <class F> void fields(HybridVdpSpin1& m, F&& f) {
    f("delta", m.delta);
    f("epsilon", m.epsilon);
    f("osc_gamma_g", m.osc_gamma_g);
    f("osc_gamma_d", m.osc_gamma_d);
    f("gamma_g", m.gamma_g);
    f("gamma_d", m.gamma_d);
    f("n_fock", m.n_fock);
}

template <class F> void for_each_field(ModelSpec& spec, F&& f) {
    std::visit([&](auto& m) { fields(m, f); }, spec);
}

template <class F> void for_each_field(const ModelSpec& spec, F&& f) {
    ModelSpec copy = spec;
    for_each_field(copy, f);
}

bool is_rate(std::string_view name) { return name.find("gamma") != std::string_view::npos || name == "g"; }

struct SubsystemRates {
    const char* gain;
    double gain_value;
    const char* damping;
    double damping_value;
};

std::vector<SubsystemRates> subsystem_rates(const ModelSpec& spec) {
    return std::visit(
        [](const auto& m) -> std::vector<SubsystemRates> {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, DrivenVdp> || std::is_same_v<M, DrivenSpin1>) {
                return {{"gamma_g", m.gamma_g, "gamma_d", m.gamma_d}};
            } else if constexpr (std::is_same_v<M, CoupledVdpCoherent> || std::is_same_v<M, CoupledVdpDissipative>) {
                return {{"gamma_g_1", m.gamma_g_1, "gamma_d_1", m.gamma_d_1},
                        {"gamma_g_2", m.gamma_g_2, "gamma_d_2", m.gamma_d_2}};
            } else if constexpr (std::is_same_v<M, CoupledSpin1> || std::is_same_v<M, CoupledDrivenSpin1>) {
                return {{"gamma_g_a", m.gamma_g_a, "gamma_d_a", m.gamma_d_a},
                        {"gamma_g_b", m.gamma_g_b, "gamma_d_b", m.gamma_d_b}};
            } else {
                return {{"osc_gamma_g", m.osc_gamma_g, "osc_gamma_d", m.osc_gamma_d},
                        {"gamma_g", m.gamma_g, "gamma_d", m.gamma_d}};
            }
        },
        spec);
}

ComplexMatrix commutator_free_vdp(const BosonOps& b, double delta, double epsilon) {
    return -delta * b.number + Complex(0.0, epsilon) * (b.a - b.adag);
}

BuiltModel build(const DrivenVdp& m) {
    const BosonOps b = boson_ops(m.n_fock);
    BuiltModel out;
    out.dims = {m.n_fock};
    out.hamiltonian = commutator_free_vdp(b, m.delta, m.epsilon);
    out.terms = {{b.adag, m.gamma_g}, {b.a * b.a, m.gamma_d}};
    out.boson_sites = {0};
    out.reference_rate = m.gamma_g;
    return out;
}

template <class M> BuiltModel build_coupled_vdp(const M& m, bool dissipative) {
    BuiltModel out;
    out.dims = {m.n_fock_1, m.n_fock_2};
    const BosonOps b1 = boson_ops(m.n_fock_1);
    const BosonOps b2 = boson_ops(m.n_fock_2);
    const ComplexMatrix a1 = embed(b1.a, 0, out.dims);
    const ComplexMatrix a2 = embed(b2.a, 1, out.dims);
    const ComplexMatrix a1d = a1.adjoint(), a2d = a2.adjoint();
    out.hamiltonian = -m.delta_1 * (a1d * a1) - m.delta_2 * (a2d * a2);
    if (!dissipative) out.hamiltonian += m.g * (a1d * a2 + a1 * a2d);
    out.terms = {{a1d, m.gamma_g_1}, {a1 * a1, m.gamma_d_1}, {a2d, m.gamma_g_2}, {a2 * a2, m.gamma_d_2}};
    if (dissipative) out.terms.push_back({a1 - a2, m.g});
    out.boson_sites = {0, 1};
    out.reference_rate = m.gamma_g_1;
    return out;
}

BuiltModel build(const CoupledVdpCoherent& m) { return build_coupled_vdp(m, false); }
BuiltModel build(const CoupledVdpDissipative& m) { return build_coupled_vdp(m, true); }

BuiltModel build(const DrivenSpin1& m) {
    const Spin1Ops s = spin1_ops();
    BuiltModel out;
    out.dims = {3};
    out.hamiltonian = m.delta * s.sz + m.epsilon * s.sy;
    out.terms = {{s.splus * s.sz, 0.5 * m.gamma_g}, {s.sminus * s.sz, 0.5 * m.gamma_d}};
    out.spin_sites = {0};
    out.reference_rate = m.gamma_g;
    return out;
}

struct TwoSpins {
    ComplexMatrix sz_a, sp_a, sm_a, sz_b, sp_b, sm_b;
};

TwoSpins two_spins(const Dims& dims) {
    const Spin1Ops s = spin1_ops();
    return {embed(s.sz, 0, dims), embed(s.splus, 0, dims), embed(s.sminus, 0, dims),
            embed(s.sz, 1, dims), embed(s.splus, 1, dims), embed(s.sminus, 1, dims)};
}

std::vector<DissipatorTerm> spin_pair_terms(const TwoSpins& t, double gga, double gda, double ggb, double gdb) {
    return {{t.sp_a * t.sz_a, 0.5 * gga},
            {t.sm_a * t.sz_a, 0.5 * gda},
            {t.sp_b * t.sz_b, 0.5 * ggb},
            {t.sm_b * t.sz_b, 0.5 * gdb}};
}

BuiltModel build(const CoupledSpin1& m) {
    BuiltModel out;
    out.dims = {3, 3};
    const TwoSpins t = two_spins(out.dims);
    const Complex ig(0.0, m.g);
    out.hamiltonian = m.delta * t.sz_b + ig * (t.sm_a * t.sp_b - t.sp_a * t.sm_b);
    out.terms = spin_pair_terms(t, m.gamma_g_a, m.gamma_d_a, m.gamma_g_b, m.gamma_d_b);
    out.spin_sites = {0, 1};
    out.reference_rate = m.gamma_d_a;
    return out;
}

BuiltModel build(const CoupledDrivenSpin1& m) {
    BuiltModel out;
    out.dims = {3, 3};
    const TwoSpins t = two_spins(out.dims);
    const Complex ig(0.0, m.g);
    out.hamiltonian = m.delta_local * t.sz_a + (m.delta_local + m.delta) * t.sz_b +
                      m.epsilon * (t.sz_a * t.sp_a + t.sm_a * t.sz_a + t.sz_b * t.sp_b + t.sm_b * t.sz_b) +
                      ig * (t.sp_a * t.sm_b - t.sm_a * t.sp_b);
    out.terms = spin_pair_terms(t, m.gamma_g_a, m.gamma_d_a, m.gamma_g_b, m.gamma_d_b);
    out.spin_sites = {0, 1};
    out.reference_rate = m.gamma_d_a;
    return out;
}

BuiltModel build(const HybridVdpSpin1& m) {
    BuiltModel out;
    out.dims = {m.n_fock, 3};
    const BosonOps b = boson_ops(m.n_fock);
    const Spin1Ops s = spin1_ops();
    const ComplexMatrix a = embed(b.a, 0, out.dims);
    const ComplexMatrix ad = a.adjoint();
    const ComplexMatrix sz = embed(s.sz, 1, out.dims);
    const ComplexMatrix sp = embed(s.splus, 1, out.dims);
    const ComplexMatrix sm = embed(s.sminus, 1, out.dims);
    out.hamiltonian = m.delta * sz + m.epsilon * (sp * a + ad * sm);
    out.terms = {{sm * sz, m.gamma_d}, {sp * sz, m.gamma_g}, {a * a, m.osc_gamma_d}, {ad, m.osc_gamma_g}};
    out.boson_sites = {0};
    out.spin_sites = {1};
    out.reference_rate = m.gamma_d;
    return out;
}

} // namespace

Superoperator BuiltModel::liouvillian() const {
    return qsync::liouvillian(hamiltonian, terms, dims);
}

std::string_view model_type(const ModelSpec& spec) {
    static constexpr std::string_view names[] = {"driven_vdp",   "coupled_vdp_coherent", "coupled_vdp_dissipative",
                                                 "driven_spin1", "coupled_spin1",        "coupled_driven_spin1",
                                                 "hybrid_vdp_spin1"};
    return names[spec.index()];
}

std::vector<std::string_view> model_types() {
    std::vector<std::string_view> out;
    ModelSpec probe;
    for (std::size_t i = 0; i < std::variant_size_v<ModelSpec>; ++i) {
        switch (i) {
        case 0: probe = DrivenVdp{}; break;
        case 1: probe = CoupledVdpCoherent{}; break;
        case 2: probe = CoupledVdpDissipative{}; break;
        case 3: probe = DrivenSpin1{}; break;
        case 4: probe = CoupledSpin1{}; break;
        case 5: probe = CoupledDrivenSpin1{}; break;
        default: probe = HybridVdpSpin1{}; break;
        }
        out.push_back(model_type(probe));
    }
    return out;
}

std::optional<ModelSpec> make_model(std::string_view type) {
    if (type == "driven_vdp") return DrivenVdp{};
    if (type == "coupled_vdp_coherent") return CoupledVdpCoherent{};
    if (type == "coupled_vdp_dissipative") return CoupledVdpDissipative{};
    if (type == "driven_spin1") return DrivenSpin1{};
    if (type == "coupled_spin1") return CoupledSpin1{};
    if (type == "coupled_driven_spin1") return CoupledDrivenSpin1{};
    if (type == "hybrid_vdp_spin1") return HybridVdpSpin1{};
    return std::nullopt;
}

int default_cutoff(double gamma_g, double gamma_d) {
    return (gamma_g > 0.0 && gamma_d / gamma_g >= 10.0) ? 10 : 20;
}

std::vector<std::string> parameter_names(const ModelSpec& spec) {
    std::vector<std::string> out;
    for_each_field(spec, [&](std::string_view name, auto&) { out.emplace_back(name); });
    return out;
}

std::optional<double> get_parameter(const ModelSpec& spec, std::string_view name) {
    std::optional<double> out;
    for_each_field(spec, [&](std::string_view n, auto& v) {
        if (n == name) out = static_cast<double>(v);
    });
    return out;
}

bool is_integer_parameter(const ModelSpec& spec, std::string_view name) {
    bool out = false;
    for_each_field(spec, [&](std::string_view n, auto& v) {
        if (n == name) out = std::is_same_v<std::decay_t<decltype(v)>, int>;
    });
    return out;
}

bool set_parameter(ModelSpec& spec, std::string_view name, double value) {
    bool found = false;
    for_each_field(spec, [&](std::string_view n, auto& v) {
        if (n != name) return;
        found = true;
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, int>) v = static_cast<int>(std::lround(value));
        else v = value;
    });
    return found;
}

std::vector<std::string> validate_model(const ModelSpec& spec) {
    std::vector<std::string> issues;
    for_each_field(spec, [&](std::string_view name, auto& v) {
        const std::string n(name);
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, int>) {
            if (v < 2) issues.push_back(n + ": Fock cutoff must be >= 2");
        } else {
            if (!std::isfinite(v)) issues.push_back(n + ": must be finite");
            else if (is_rate(name) && v < 0.0) issues.push_back(n + ": rate must be >= 0");
        }
    });
    for (const auto& r : subsystem_rates(spec)) {
        if (r.gain_value <= 0.0 || r.damping_value <= 0.0)
            issues.push_back(std::string(r.gain_value <= 0.0 ? r.gain : r.damping) +
                             ": each subsystem needs positive gain and damping for a limit cycle");
    }
    return issues;
}

bool has_oscillator(const ModelSpec& spec) {
    return !std::holds_alternative<DrivenSpin1>(spec) && !std::holds_alternative<CoupledSpin1>(spec) &&
           !std::holds_alternative<CoupledDrivenSpin1>(spec);
}

ModelSpec with_larger_cutoff(const ModelSpec& spec, int extra) {
    ModelSpec out = spec;
    for_each_field(out, [&](std::string_view, auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, int>) v += extra;
    });
    return out;
}

ModelSpec without_drive(const ModelSpec& spec) {
    ModelSpec out = spec;
    set_parameter(out, "epsilon", 0.0);
    return out;
}

BuiltModel build_model(const ModelSpec& spec) {
    const auto issues = validate_model(spec);
    if (!issues.empty()) {
        std::string msg = std::string("build_model(") + std::string(model_type(spec)) + "):";
        for (const auto& s : issues) msg += " " + s + ";";
        throw ContractViolation(msg);
    }
    return std::visit([](const auto& m) { return build(m); }, spec);
}

} // namespace qsync
