// lindblad.hpp: Liouvillian superoperators, steady states and an RK4 reference integrator.

#pragma once

#include <vector>

#include "qsync/numkernel.hpp"
#include "qsync/quantum_ops.hpp"

namespace qsync {

// Generator L acting on column-stacked operators, vec(rho_dot) = L vec(rho).
struct Superoperator {
    ComplexMatrix matrix;
    Dims hilbert_dims;

    Index hilbert_dim() const;
    // unvec(L vec(rho))
    ComplexMatrix apply(const ComplexMatrix& rho) const;
    // max_j |(vec(I)† L)_j|; zero for a trace-preserving generator.
    double trace_defect() const;
};

// rate * D[op], D[O]rho = O rho O† - (O†O rho + rho O†O)/2.
struct DissipatorTerm {
    ComplexMatrix op;
    double rate{0.0};
};

Superoperator dissipator_super(const DissipatorTerm& term, const Dims& dims);
Superoperator dissipator_super(const DissipatorTerm& term);

// -i[H, .] + sum of dissipators. Throws ContractViolation on dimension mismatch
// or when the result is not trace preserving within 1e-9 per entry.
Superoperator liouvillian(const ComplexMatrix& h, const std::vector<DissipatorTerm>& terms, const Dims& dims);
Superoperator liouvillian(const ComplexMatrix& h, const std::vector<DissipatorTerm>& terms);

struct SteadyStateSolution {
    DensityMatrix rho;
    double residual{0.0}; // ‖L vec(rho)‖₂ after symmetrization and clipping
    double rcond{0.0};
};

// Unique steady state via the bordered solve (trace row replaces the population row
// with the largest diagonal magnitude). Throws DegenerateSteadyState when the steady
// state is not unique and PsdViolation when the solution is clearly not positive.
SteadyStateSolution solve_steady_state(const Superoperator& l);
DensityMatrix steady_state(const Superoperator& l);

// Classical fourth-order Runge–Kutta on vec(rho). The step is t_final / ceil(t_final / dt);
// trace is renormalized every step and a drift above 1e-3 throws IntegrationUnstable.
DensityMatrix evolve_rk4(const DensityMatrix& rho0, const Superoperator& l, double t_final, double dt);

// Second-smallest |Re λ| over the full Liouvillian spectrum; 0 signals a degenerate steady state.
double spectral_gap(const Superoperator& l);

} // namespace qsync
