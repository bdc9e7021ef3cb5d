// models.hpp: the master-equation catalog: parameters in, (H, jump operators, dims) out.
//
// Every model is written in the frame rotating with its drive (or with the oscillator,
// for the hybrid model), so only detunings appear. Rates carry the literal prefactors
// of each master equation: van der Pol terms enter as Γ·D[·], isolated and coupled
// spin-1 terms as (γ/2)·D[·], and the hybrid model uses γ·D[·] for both parts.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsync/lindblad.hpp"

namespace qsync {

// rho_dot = -i[H, rho] + Γg D[a†] + Γd D[a²],  H = -Δ a†a + iε(a - a†)
struct DrivenVdp {
    double delta = 0.1;
    double epsilon = 0.5;
    double gamma_g = 1.0;
    double gamma_d = 0.5;
    int n_fock = 20;
};

// Two undriven oscillators, H_int = g(a1†a2 + a1 a2†).
struct CoupledVdpCoherent {
    double delta_1 = 0.0;
    double delta_2 = 0.2;
    double gamma_g_1 = 1.0;
    double gamma_d_1 = 1.0;
    double gamma_g_2 = 1.0;
    double gamma_d_2 = 1.0;
    double g = 0.2;
    int n_fock_1 = 6;
    int n_fock_2 = 6;
};

// Two undriven oscillators with the extra dissipator g D[a1 - a2].
struct CoupledVdpDissipative {
    double delta_1 = 0.0;
    double delta_2 = 0.2;
    double gamma_g_1 = 1.0;
    double gamma_d_1 = 1.0;
    double gamma_g_2 = 1.0;
    double gamma_d_2 = 1.0;
    double g = 0.2;
    int n_fock_1 = 6;
    int n_fock_2 = 6;
};

// H = Δ S_z + ε S_y, dissipators (γg/2) D[S+ S_z] + (γd/2) D[S- S_z].
struct DrivenSpin1 {
    double delta = 0.0;
    double epsilon = 0.2;
    double gamma_g = 1.0;
    double gamma_d = 10.0;
};

// H = Δ S_z^B + ig(S-^A S+^B - S+^A S-^B); Δ is the detuning between the atoms.
struct CoupledSpin1 {
    double delta = 0.0;
    double g = 0.2;
    double gamma_g_a = 100.0;
    double gamma_d_a = 1.0;
    double gamma_g_b = 1.0;
    double gamma_d_b = 100.0;
};

// H = δ S_z^A + (δ+Δ) S_z^B + ε Σ_α (S_z S+ + S- S_z)^α + ig(S+^A S-^B - S-^A S+^B)
struct CoupledDrivenSpin1 {
    double delta_local = 0.0;
    double delta = 0.0;
    double epsilon = 0.01;
    double g = 0.2;
    double gamma_g_a = 100.0;
    double gamma_d_a = 1.0;
    double gamma_g_b = 1.0;
    double gamma_d_b = 100.0;
};

// Oscillator ⊗ spin-1, dims [n_fock, 3]. H = Δ S_z + ε(S+ a + a† S-) in the frame
// rotating at the oscillator frequency; dissipators γd D[S- S_z] + γg D[S+ S_z]
// + Γd D[a²] + Γg D[a†] (osc_gamma_* are the oscillator rates Γ).
struct HybridVdpSpin1 {
    double delta = 0.0;
    double epsilon = 0.1;
    double osc_gamma_g = 1.0;
    double osc_gamma_d = 0.1;
    double gamma_g = 100.0;
    double gamma_d = 1.0;
    int n_fock = 10;
};

using ModelSpec = std::variant<DrivenVdp, CoupledVdpCoherent, CoupledVdpDissipative, DrivenSpin1,
                               CoupledSpin1, CoupledDrivenSpin1, HybridVdpSpin1>;

struct BuiltModel {
    ComplexMatrix hamiltonian;
    std::vector<DissipatorTerm> terms;
    Dims dims;
    std::vector<int> boson_sites;
    std::vector<int> spin_sites;
    // Rate that sets the time unit of the model (Γg, γg or γd^A).
    double reference_rate = 1.0;

    Superoperator liouvillian() const;
};

std::string_view model_type(const ModelSpec& spec);
std::vector<std::string_view> model_types();
// Default-parameter spec for a type name; nullopt for unknown names.
std::optional<ModelSpec> make_model(std::string_view type);

// Fock cutoff used when a configuration leaves it out: 10 when Γd/Γg >= 10, else 20.
int default_cutoff(double gamma_g, double gamma_d);

std::vector<std::string> parameter_names(const ModelSpec& spec);
std::optional<double> get_parameter(const ModelSpec& spec, std::string_view name);
bool is_integer_parameter(const ModelSpec& spec, std::string_view name);
// Returns false for unknown names. Integer parameters are rounded.
bool set_parameter(ModelSpec& spec, std::string_view name, double value);

// Violations of the model invariants, each naming the offending parameter.
std::vector<std::string> validate_model(const ModelSpec& spec);

bool has_oscillator(const ModelSpec& spec);
// Every Fock cutoff increased by `extra`.
ModelSpec with_larger_cutoff(const ModelSpec& spec, int extra);
// Drive amplitude ε set to zero (the reference for the Wigner dashed circle).
ModelSpec without_drive(const ModelSpec& spec);

// Throws ContractViolation listing every invariant violation.
BuiltModel build_model(const ModelSpec& spec);

} // namespace qsync
