#include "qsync/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qsync/errors.hpp"

namespace qsync {

Index product(std::span<const int> dims) {
    Index p = 1;
    for (int d : dims) {
        if (d <= 0) throw ContractViolation("subsystem dimensions must be positive");
        p *= d;
    }
    return p;
}

bool all_finite(const ComplexMatrix& m) {
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i <= j; ++i)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

void require_square(const ComplexMatrix& m, const char* where) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw ContractViolation(std::string(where) + ": matrix must be square and non-empty");
}

void require_hermitian(const ComplexMatrix& m, const char* where, double tol) {
    require_square(m, where);
    if (!all_finite(m)) throw ContractViolation(std::string(where) + ": non-finite entries");
    if (!is_hermitian(m, tol)) throw ContractViolation(std::string(where) + ": matrix is not Hermitian");
}

ComplexMatrix HermitianEigen::reconstruct() const {
    return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

HermitianEigen hermitian_eig(const ComplexMatrix& m) {
    require_hermitian(m, "hermitian_eig");
    // Symmetrize so the solver sees an exactly Hermitian input.
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: solver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector clipped_spectrum(const ComplexMatrix& m) {
    RealVector w = hermitian_eig(m).values;
    for (Index i = 0; i < w.size(); ++i) {
        if (w(i) < -kClipTol)
            throw PsdViolation("eigenvalue " + std::to_string(w(i)) + " below clipping tolerance");
        if (w(i) < 0.0) w(i) = 0.0;
    }
    return w;
}

SupportLog matrix_log_support(const ComplexMatrix& m, double cutoff) {
    const HermitianEigen e = hermitian_eig(m);
    const Index n = e.values.size();
    RealVector logs = RealVector::Zero(n);
    RealVector proj = RealVector::Zero(n);
    Index rank = 0;
    for (Index i = 0; i < n; ++i) {
        const double w = e.values(i);
        if (w < -cutoff) throw PsdViolation("matrix_log_support: negative eigenvalue " + std::to_string(w));
        if (w > cutoff) {
            logs(i) = std::log(w);
            proj(i) = 1.0;
            ++rank;
        }
    }
    SupportLog out;
    out.log = e.vectors * logs.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    out.support = e.vectors * proj.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    out.rank = rank;
    return out;
}

ComplexMatrix exp_hermitian(const ComplexMatrix& h) {
    const HermitianEigen e = hermitian_eig(h);
    const RealVector ex = e.values.array().exp();
    return e.vectors * ex.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims,
                            std::span<const int> keep) {
    const Index total = product(dims);
    if (m.rows() != total || m.cols() != total)
        throw ContractViolation("partial_trace: dims do not match matrix dimension");
    const int nsys = static_cast<int>(dims.size());
    std::vector<bool> kept(nsys, false);
    for (int k : keep) {
        if (k < 0 || k >= nsys || kept[k]) throw ContractViolation("partial_trace: invalid keep index");
        kept[k] = true;
    }

    // Strides of the full index, and of the kept/discarded sub-indices.
    std::vector<Index> stride(nsys);
    Index keep_dim = 1, drop_dim = 1;
    for (int s = nsys - 1, acc = 1; s >= 0; --s) {
        stride[s] = acc;
        acc *= dims[s];
    }
    for (int s = 0; s < nsys; ++s) (kept[s] ? keep_dim : drop_dim) *= dims[s];

    // Split a composite index into (kept index, discarded index).
    std::vector<Index> kidx(total), didx(total);
    for (Index i = 0; i < total; ++i) {
        Index k = 0, d = 0;
        for (int s = 0; s < nsys; ++s) {
            const Index digit = (i / stride[s]) % dims[s];
            if (kept[s]) k = k * dims[s] + digit;
            else d = d * dims[s] + digit;
        }
        kidx[i] = k;
        didx[i] = d;
    }

    ComplexMatrix out = ComplexMatrix::Zero(keep_dim, keep_dim);
    for (Index j = 0; j < total; ++j)
        for (Index i = 0; i < total; ++i)
            if (didx[i] == didx[j]) out(kidx[i], kidx[j]) += m(i, j);
    return out;
}

double trace_norm_hermitian(const ComplexMatrix& m) {
    return hermitian_eig(m).values.cwiseAbs().sum();
}

BorderedSolution solve_bordered(const ComplexMatrix& a, const ComplexVector& constraint_row,
                                Complex rhs_value, std::span<const Index> redundant_rows) {
    require_square(a, "solve_bordered");
    const Index n = a.rows();
    if (constraint_row.size() != n) throw ContractViolation("solve_bordered: constraint length mismatch");

    std::vector<Index> candidates(redundant_rows.begin(), redundant_rows.end());
    if (candidates.empty()) {
        // Rows carrying weight in the left null vector are the redundant ones.
        Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU);
        const ComplexVector left = svd.matrixU().col(n - 1);
        const double wmax = left.cwiseAbs().maxCoeff();
        for (Index i = 0; i < n; ++i)
            if (std::abs(left(i)) >= 0.5 * wmax) candidates.push_back(i);
    }
    Index row = candidates.front();
    for (Index r : candidates) {
        if (r < 0 || r >= n) throw ContractViolation("solve_bordered: redundant row out of range");
        if (std::abs(a(r, r)) > std::abs(a(row, row))) row = r;
    }

    ComplexMatrix bordered = a;
    bordered.row(row) = constraint_row.transpose();
    ComplexVector b = ComplexVector::Zero(n);
    b(row) = rhs_value;

    Eigen::PartialPivLU<ComplexMatrix> lu(bordered);
    BorderedSolution out;
    // Smaller of the LU estimate and the pivot ratio.
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    out.rcond = std::min(lu.rcond(), pivots.minCoeff() / pivots.maxCoeff());
    out.replaced_row = row;
    if (!(out.rcond > 1e-14))
        throw DegenerateSteadyState("solve_bordered: bordered system is singular (rcond " +
                                    std::to_string(out.rcond) + "); solution is not unique");
    out.x = lu.solve(b);
    if (!all_finite(out.x)) throw DegenerateSteadyState("solve_bordered: non-finite solution");
    out.residual = (a * out.x).norm() + std::abs(constraint_row.cwiseProduct(out.x).sum() - rhs_value);
    return out;
}

ComplexVector vec(const ComplexMatrix& m) {
    return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Index dim) {
    if (v.size() != dim * dim) throw ContractViolation("unvec: length is not dim^2");
    return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

} // namespace qsync
