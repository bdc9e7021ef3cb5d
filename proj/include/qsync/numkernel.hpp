// numkernel.hpp: dense complex linear algebra used across qsync.
//
// Conventions fixed project-wide:
//   * natural logarithm everywhere (entropies in nats);
//   * column-stacking vectorization, vec(A X B) = (B^T ⊗ A) vec(X);
//   * composite bases follow the Kronecker order of the subsystem dimension list.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qsync {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Subsystem dimensions of a composite Hilbert space, in Kronecker order.
using Dims = std::vector<int>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kSupportCutoff = 1e-12;
// Eigenvalues in (-kClipTol, 0) are numerical noise and are clipped to zero.
inline constexpr double kClipTol = 1e-10;

struct HermitianEigen {
    RealVector values;     // ascending
    ComplexMatrix vectors; // unitary, eigenvectors as columns

    ComplexMatrix reconstruct() const;
};

// Log restricted to the support; `support` is the projector onto eigenvalues > cutoff.
struct SupportLog {
    ComplexMatrix log;
    ComplexMatrix support;
    Index rank{0};
};

struct BorderedSolution {
    ComplexVector x;
    double residual{0.0};     // ‖a x‖₂ + |c·x − rhs|
    double rcond{0.0};        // reciprocal condition estimate of the bordered matrix
    Index replaced_row{0};
};

Index product(std::span<const int> dims);

bool all_finite(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
void require_square(const ComplexMatrix& m, const char* where);
void require_hermitian(const ComplexMatrix& m, const char* where, double tol = kHermitianTol);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

HermitianEigen hermitian_eig(const ComplexMatrix& m);

// Eigenvalues of a Hermitian matrix with the clipping policy applied: values in
// (-kClipTol, 0) become 0, anything more negative throws PsdViolation.
RealVector clipped_spectrum(const ComplexMatrix& m);

SupportLog matrix_log_support(const ComplexMatrix& m, double cutoff = kSupportCutoff);

// exp(h) for Hermitian h via eigendecomposition.
ComplexMatrix exp_hermitian(const ComplexMatrix& h);

// Reduced matrix on the factors listed in `keep` (sorted, distinct).
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims,
                            std::span<const int> keep);

double trace_norm_hermitian(const ComplexMatrix& m);

// Solves a·x = 0 together with constraint_row·x = rhs_value by replacing one redundant
// row of `a` with the constraint. `redundant_rows` lists admissible rows to replace
// (for a Liouvillian, the population rows); the one with the largest |a_rr| is used.
// When empty, admissible rows come from the left null vector of `a`.
// Throws DegenerateSteadyState when the bordered system is singular.
BorderedSolution solve_bordered(const ComplexMatrix& a, const ComplexVector& constraint_row,
                                Complex rhs_value, std::span<const Index> redundant_rows = {});

// Vectorization helpers (column stacking).
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, Index dim);

} // namespace qsync
