// infomeasures.hpp: entropies, coherence, distances and comparison measures on density matrices.
//
// Entropies are in nats. Relative entropies that diverge are returned as +infinity.

#pragma once

#include <vector>

#include "qsync/numkernel.hpp"
#include "qsync/quantum_ops.hpp"

namespace qsync {

// Probability vector: entries >= 0, sum within 1e-9 of 1.
class PopulationVector {
public:
    explicit PopulationVector(RealVector p);

    const RealVector& values() const noexcept { return p_; }
    Index size() const noexcept { return p_.size(); }
    double operator[](Index i) const { return p_(i); }

private:
    RealVector p_;
};

// -Σ p ln p with 0 ln 0 = 0.
double shannon_entropy(const RealVector& p);

double vn_entropy(const DensityMatrix& rho);
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

double s_coh(const DensityMatrix& rho);
double l1_coherence(const DensityMatrix& rho);
double kl_populations(const PopulationVector& p, const PopulationVector& q);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// Bipartite only; throws ContractViolation otherwise.
double mutual_information(const DensityMatrix& rho);
double classical_mutual_information(const DensityMatrix& rho);

// ρ_A ⊗ ρ_B of a bipartite state.
DensityMatrix product_of_marginals(const DensityMatrix& rho);

// |<a>| / sqrt(<a†a>) on the given Fock factor; 0 when <a†a> < 1e-14.
double c1_measure(const DensityMatrix& rho, int boson_site);

// Husimi-Q phase localization of a spin-1 factor: max over φ of
// ∫ sinθ Q(θ,φ) dθ − 1/(2π), by trapezoidal quadrature.
double s_phase_spin1(const DensityMatrix& rho, int spin_site, int n_theta = 181, int n_phi = 360);

struct WignerGrid {
    std::vector<double> xs;
    std::vector<double> ps;
    RealMatrix values; // values(i, j) = W(xs[i] + i ps[j])
    // Set when the last Fock level carries population above 1e-8 or the grid reaches
    // amplitudes the cutoff cannot represent.
    bool truncation_warning{false};
};

// W(α) = (2/π) Tr[ρ D(α) Π D(α)†] of the reduced state on `boson_site`, α = x + ip.
WignerGrid wigner_grid(const DensityMatrix& rho, int boson_site, const std::vector<double>& xs,
                       const std::vector<double>& ps);

std::vector<double> linspace(double lo, double hi, int count);

} // namespace qsync
