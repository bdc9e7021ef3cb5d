#include "qsync/quantum_ops.hpp"

#include <cmath>
#include <string>

#include "qsync/errors.hpp"

namespace qsync {

DensityMatrix::DensityMatrix(ComplexMatrix matrix, Dims dims)
    : matrix_(std::move(matrix)), dims_(std::move(dims)) {
    require_square(matrix_, "DensityMatrix");
    if (product(dims_) != matrix_.rows())
        throw ContractViolation("DensityMatrix: dims do not match matrix dimension");
    if (!all_finite(matrix_)) throw ContractViolation("DensityMatrix: non-finite entries");
    if (!is_hermitian(matrix_, kDensityTol)) throw ContractViolation("DensityMatrix: not Hermitian");
    const Complex tr = matrix_.trace();
    if (std::abs(tr - Complex(1.0)) > kDensityTol)
        throw ContractViolation("DensityMatrix: trace " + std::to_string(tr.real()) + " is not 1");
    const ComplexMatrix h = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues()(0) < -kDensityTol)
        throw PsdViolation("DensityMatrix: minimum eigenvalue " + std::to_string(solver.eigenvalues()(0)));
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix)
    : DensityMatrix(matrix, Dims{static_cast<int>(matrix.rows())}) {}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi, Dims dims) {
    return DensityMatrix(psi * psi.adjoint(), std::move(dims));
}

DensityMatrix DensityMatrix::diagonal(const RealVector& populations, Dims dims) {
    return DensityMatrix(populations.cast<Complex>().asDiagonal().toDenseMatrix(), std::move(dims));
}

RealVector DensityMatrix::populations() const {
    return matrix_.diagonal().real();
}

DensityMatrix DensityMatrix::marginal(int site) const {
    if (site < 0 || site >= subsystems()) throw ContractViolation("marginal: site out of range");
    const int keep[] = {site};
    return DensityMatrix(partial_trace(matrix_, dims_, keep), Dims{dims_[site]});
}

BosonOps boson_ops(int cutoff) {
    if (cutoff < 2) throw ContractViolation("boson_ops: cutoff must be >= 2");
    BosonOps ops;
    ops.a = ComplexMatrix::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
    ops.adag = ops.a.adjoint();
    ops.number = ops.adag * ops.a;
    ops.identity = ComplexMatrix::Identity(cutoff, cutoff);
    return ops;
}

Spin1Ops spin1_ops() {
    Spin1Ops ops;
    const double r2 = std::sqrt(2.0);
    ops.sz = ComplexMatrix::Zero(3, 3);
    ops.sz(0, 0) = 1.0;
    ops.sz(2, 2) = -1.0;
    ops.splus = ComplexMatrix::Zero(3, 3);
    ops.splus(0, 1) = r2; // |+1><0|
    ops.splus(1, 2) = r2; // |0><-1|
    ops.sminus = ops.splus.adjoint();
    ops.sy = (ops.splus - ops.sminus) / Complex(0.0, 2.0);
    ops.identity = ComplexMatrix::Identity(3, 3);
    return ops;
}

ComplexMatrix embed(const ComplexMatrix& op, int site, const Dims& dims) {
    if (site < 0 || site >= static_cast<int>(dims.size())) throw ContractViolation("embed: site out of range");
    if (op.rows() != dims[site] || op.cols() != dims[site])
        throw ContractViolation("embed: operator dimension does not match dims[site]");
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int s = 0; s < static_cast<int>(dims.size()); ++s)
        out = kron(out, s == site ? op : ComplexMatrix::Identity(dims[s], dims[s]));
    return out;
}

DensityMatrix dephase(const DensityMatrix& rho) {
    ComplexMatrix d = ComplexMatrix::Zero(rho.dim(), rho.dim());
    d.diagonal() = rho.matrix().diagonal().real().cast<Complex>();
    return DensityMatrix(std::move(d), rho.dims());
}

Complex expectation(const DensityMatrix& rho, const ComplexMatrix& op) {
    if (op.rows() != rho.dim() || op.cols() != rho.dim())
        throw ContractViolation("expectation: operator dimension mismatch");
    // Tr[rho op] = sum_ij rho_ij op_ji
    return rho.matrix().cwiseProduct(op.transpose()).sum();
}

} // namespace qsync
