// quantum_ops.hpp: bosonic and spin-1 operators, multipartite embedding, and the
// validated DensityMatrix type.
//
// Spin-1 basis: matrix index 0, 1, 2 holds m = +1, 0, -1, so S_z = diag(+1, 0, -1).
// Energy labels follow m: E1 = (m = -1) is index 2, E2 = (m = 0) is index 1,
// E3 = (m = +1) is index 0. The locally driven E2 <-> E3 transition is the index pair (1, 0).

#pragma once

#include <utility>

#include "qsync/numkernel.hpp"

namespace qsync {

inline constexpr double kDensityTol = 1e-9;

class DensityMatrix {
public:
    // Validates Hermiticity, unit trace and positivity (all within kDensityTol).
    // Throws ContractViolation / PsdViolation on failure.
    DensityMatrix(ComplexMatrix matrix, Dims dims);
    explicit DensityMatrix(ComplexMatrix matrix);

    // |psi><psi| for a normalized state vector.
    static DensityMatrix pure(const ComplexVector& psi, Dims dims);
    static DensityMatrix diagonal(const RealVector& populations, Dims dims);

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const Dims& dims() const noexcept { return dims_; }
    Index dim() const noexcept { return matrix_.rows(); }
    int subsystems() const noexcept { return static_cast<int>(dims_.size()); }
    Complex operator()(Index i, Index j) const { return matrix_(i, j); }

    RealVector populations() const;
    // Reduced state on a single factor.
    DensityMatrix marginal(int site) const;

private:
    ComplexMatrix matrix_;
    Dims dims_;
};

struct BosonOps {
    ComplexMatrix a;       // annihilation, a|n> = sqrt(n)|n-1>
    ComplexMatrix adag;
    ComplexMatrix number;  // a†a
    ComplexMatrix identity;
};

struct Spin1Ops {
    ComplexMatrix sz;
    ComplexMatrix splus;
    ComplexMatrix sminus;
    ComplexMatrix sy;      // (S+ - S-) / 2i
    ComplexMatrix identity;
};

BosonOps boson_ops(int cutoff);
Spin1Ops spin1_ops();

// Index pair of the E2 <-> E3 transition in the spin-1 basis above.
inline constexpr std::pair<int, int> kSpin1DrivenPair{1, 0};

// Identity on every factor except `site`, where `op` acts.
ComplexMatrix embed(const ComplexMatrix& op, int site, const Dims& dims);

// Drops all off-diagonal entries in the composite product basis.
DensityMatrix dephase(const DensityMatrix& rho);

Complex expectation(const DensityMatrix& rho, const ComplexMatrix& op);

} // namespace qsync
