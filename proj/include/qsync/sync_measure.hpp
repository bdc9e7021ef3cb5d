// sync_measure.hpp: distance to the nearest limit-cycle state.
//
// Ω_R uses the relative entropy and has closed forms for every class below; Ω_D uses the
// trace distance and is minimized numerically over diagonal states. oracle_min samples
// the class at random and is used to certify the closed forms.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qsync/infomeasures.hpp"

namespace qsync {

// Any state diagonal in the composite energy basis (classical correlations allowed).
struct DiagonalCorrelated {};
// δ^A ⊗ δ^B with each factor diagonal.
struct DiagonalProduct {};
// σ^A ⊗ σ^B with arbitrary factors.
struct MarginalProduct {};
// Product of qutrit states that are diagonal except on one declared level pair each.
// pairs[α] = (index of E2, index of E3) in the basis of subsystem α.
struct PartiallyCoherentProduct {
    std::vector<std::pair<int, int>> pairs;
};

using LimitCycleClass = std::variant<DiagonalCorrelated, DiagonalProduct, MarginalProduct, PartiallyCoherentProduct>;

std::string class_name(const LimitCycleClass& cls);

// σ = u diag(q) u†, u = e^{-iθ1 σz} e^{-iθ2 σy} e^{-iθ3 σz} on the span of the pair
// (first index is the upper component). q is indexed like the matrix basis.
struct PartialCoherentParams {
    RealVector q = RealVector::Constant(3, 1.0 / 3.0);
    double theta1{0.0};
    double theta2{0.0};
    double theta3{0.0};
    // Pair subspace carries no population; the angles are meaningless.
    bool degenerate{false};
};

ComplexMatrix pair_rotation(const PartialCoherentParams& p, std::pair<int, int> pair);
DensityMatrix partial_coherent_state(const PartialCoherentParams& p, std::pair<int, int> pair);

// Σ_k <k|u†ρu|k> ln q_k = Tr[ρ ln σ]; -inf when ρ has weight where σ has none.
double partial_coherent_objective(const DensityMatrix& rho_alpha, std::pair<int, int> pair,
                                  const PartialCoherentParams& p);

struct OmegaAlpha {
    double value{0.0};
    PartialCoherentParams params;
};

// max over the partially-coherent family of Tr[ρ_α ln σ]. q at the untouched level and θ1
// take their closed-form optima; (q2, θ2) are found by a 64×64 grid and Nelder–Mead.
OmegaAlpha omega_alpha(const DensityMatrix& rho_alpha, std::pair<int, int> pair);

struct OmegaResult {
    double value{0.0};
    LimitCycleClass cls;
    std::vector<PartialCoherentParams> optimizer_state;
    // min over sampled class members minus value; set when sampling was run.
    std::optional<double> certificate;
    // Nearest diagonal populations found by omega_d.
    std::optional<RealVector> populations;
};

OmegaResult omega_r(const DensityMatrix& rho, const LimitCycleClass& cls);

struct OmegaDOptions {
    int iterations = 2000;
    int certificate_samples = 200;
    std::uint64_t seed = 0;
};

// min over diagonal σ of ‖ρ − σ‖₁. Never exceeds ‖ρ − ρ_diag‖₁ ≤ C_l1(ρ).
OmegaResult omega_d(const DensityMatrix& rho, const OmegaDOptions& options = {});

// min over `samples` random members σ of the class (plus `extra` candidates) of S(ρ‖σ).
double oracle_min(const DensityMatrix& rho, const LimitCycleClass& cls, int samples, std::uint64_t seed,
                  const std::vector<DensityMatrix>& extra = {});

// Random states for tests and oracles; deterministic in the generator state.
class StateSampler {
public:
    explicit StateSampler(std::uint64_t seed);

    RealVector dirichlet(Index n, double concentration = 1.0);
    ComplexMatrix haar_unitary(Index n);
    DensityMatrix random_density(const Dims& dims);
    // Random state of the given class on `dims`.
    DensityMatrix random_member(const LimitCycleClass& cls, const Dims& dims);
    double uniform(double lo, double hi);

private:
    std::mt19937_64 rng_;
};

} // namespace qsync
