#include "qsync/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseCore>

#include "qsync/errors.hpp"

namespace qsync {

namespace {

constexpr double kTracePreservationTol = 1e-9;

// out += scale * (a ⊗ b), skipping zero entries of a.
void add_kron(ComplexMatrix& out, const ComplexMatrix& a, const ComplexMatrix& b, Complex scale) {
    const Index br = b.rows(), bc = b.cols();
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i) {
            const Complex aij = a(i, j);
            if (aij == Complex(0.0)) continue;
            out.block(i * br, j * bc, br, bc) += (scale * aij) * b;
        }
}

// out += scale * (I_d ⊗ b)
void add_identity_kron(ComplexMatrix& out, Index d, const ComplexMatrix& b, Complex scale) {
    const Index n = b.rows();
    for (Index i = 0; i < d; ++i) out.block(i * n, i * n, n, n) += scale * b;
}

Dims default_dims(const ComplexMatrix& op) { return Dims{static_cast<int>(op.rows())}; }

void add_dissipator(ComplexMatrix& out, const DissipatorTerm& term) {
    if (!(term.rate >= 0.0) || !std::isfinite(term.rate))
        throw ContractViolation("dissipator rate must be a finite nonnegative number");
    if (term.rate == 0.0) return;
    const ComplexMatrix& o = term.op;
    const Index d = o.rows();
    const ComplexMatrix odo = o.adjoint() * o;
    const ComplexMatrix eye = ComplexMatrix::Identity(d, d);
    add_kron(out, o.conjugate(), o, term.rate);
    add_identity_kron(out, d, odo, -0.5 * term.rate);
    add_kron(out, odo.transpose(), eye, -0.5 * term.rate);
}

void check_trace_preserving(const Superoperator& l) {
    const double defect = l.trace_defect();
    if (!(defect <= kTracePreservationTol * std::max(1.0, l.matrix.cwiseAbs().maxCoeff())))
        throw ContractViolation("generator is not trace preserving (defect " + std::to_string(defect) + ")");
}

} // namespace

Index Superoperator::hilbert_dim() const {
    return static_cast<Index>(std::llround(std::sqrt(static_cast<double>(matrix.rows()))));
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& rho) const {
    return unvec(matrix * vec(rho), hilbert_dim());
}

double Superoperator::trace_defect() const {
    const Index d = hilbert_dim();
    // vec(I)† L sums the population rows i*(d+1).
    Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(matrix.cols());
    for (Index i = 0; i < d; ++i) row += matrix.row(i * (d + 1));
    return row.cwiseAbs().maxCoeff();
}

Superoperator dissipator_super(const DissipatorTerm& term, const Dims& dims) {
    require_square(term.op, "dissipator_super");
    if (product(dims) != term.op.rows()) throw ContractViolation("dissipator_super: dims mismatch");
    const Index d = term.op.rows();
    Superoperator l{ComplexMatrix::Zero(d * d, d * d), dims};
    add_dissipator(l.matrix, term);
    return l;
}

Superoperator dissipator_super(const DissipatorTerm& term) {
    return dissipator_super(term, default_dims(term.op));
}

Superoperator liouvillian(const ComplexMatrix& h, const std::vector<DissipatorTerm>& terms, const Dims& dims) {
    require_square(h, "liouvillian");
    const Index d = h.rows();
    if (product(dims) != d) throw ContractViolation("liouvillian: dims do not match Hamiltonian");
    if (!all_finite(h)) throw ContractViolation("liouvillian: non-finite Hamiltonian");

    Superoperator l{ComplexMatrix::Zero(d * d, d * d), dims};
    const Complex mi(0.0, -1.0);
    add_identity_kron(l.matrix, d, h, mi);
    add_kron(l.matrix, h.transpose(), ComplexMatrix::Identity(d, d), -mi);
    for (const auto& term : terms) {
        if (term.op.rows() != d || term.op.cols() != d)
            throw ContractViolation("liouvillian: jump operator dimension mismatch");
        add_dissipator(l.matrix, term);
    }
    check_trace_preserving(l);
    return l;
}

Superoperator liouvillian(const ComplexMatrix& h, const std::vector<DissipatorTerm>& terms) {
    return liouvillian(h, terms, default_dims(h));
}

SteadyStateSolution solve_steady_state(const Superoperator& l) {
    const Index d = l.hilbert_dim();
    if (d * d != l.matrix.rows()) throw ContractViolation("steady_state: superoperator is not d^2 x d^2");
    check_trace_preserving(l);

    ComplexVector trace_row = vec(ComplexMatrix::Identity(d, d));
    std::vector<Index> population_rows(d);
    for (Index i = 0; i < d; ++i) population_rows[i] = i * (d + 1);
    const BorderedSolution sol = solve_bordered(l.matrix, trace_row, Complex(1.0), population_rows);

    ComplexMatrix rho = unvec(sol.x, d);
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();

    const HermitianEigen e = hermitian_eig(rho);
    if (e.values(0) < 0.0) {
        RealVector w = e.values;
        for (Index i = 0; i < w.size(); ++i) {
            if (w(i) < -kClipTol)
                throw PsdViolation("steady_state: eigenvalue " + std::to_string(w(i)) + " below clipping tolerance");
            w(i) = std::max(w(i), 0.0);
        }
        rho = e.vectors * w.cast<Complex>().asDiagonal() * e.vectors.adjoint();
        rho = 0.5 * (rho + rho.adjoint());
        rho /= rho.trace().real();
    }

    const double residual = (l.matrix * vec(rho)).norm();
    const double lnorm = l.matrix.norm();
    if (!(residual <= 1e-8 * std::max(lnorm, 1.0)))
        throw DegenerateSteadyState("steady_state: residual " + std::to_string(residual) +
                                    " exceeds 1e-8 * ||L||_F");
    return {DensityMatrix(std::move(rho), l.hilbert_dims), residual, sol.rcond};
}

DensityMatrix steady_state(const Superoperator& l) {
    return solve_steady_state(l).rho;
}

DensityMatrix evolve_rk4(const DensityMatrix& rho0, const Superoperator& l, double t_final, double dt) {
    if (!(dt > 0.0)) throw ContractViolation("evolve_rk4: dt must be positive");
    if (!(t_final >= 0.0)) throw ContractViolation("evolve_rk4: t_final must be nonnegative");
    const Index d = rho0.dim();
    if (l.matrix.rows() != d * d) throw ContractViolation("evolve_rk4: dimension mismatch");

    const auto steps = static_cast<long long>(std::ceil(t_final / dt));
    if (steps == 0) return rho0;
    const double h = t_final / static_cast<double>(steps);

    std::vector<Index> diag(d);
    for (Index i = 0; i < d; ++i) diag[i] = i * (d + 1);
    auto trace_of = [&](const ComplexVector& v) {
        Complex t = 0.0;
        for (Index i : diag) t += v(i);
        return t;
    };

    const Eigen::SparseMatrix<Complex> sl = l.matrix.sparseView();
    ComplexVector v = vec(rho0.matrix());
    ComplexVector k1, k2, k3, k4;
    for (long long s = 0; s < steps; ++s) {
        k1.noalias() = sl * v;
        k2.noalias() = sl * (v + 0.5 * h * k1);
        k3.noalias() = sl * (v + 0.5 * h * k2);
        k4.noalias() = sl * (v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const Complex tr = trace_of(v);
        if (!(std::abs(tr - Complex(1.0)) <= 1e-3))
            throw IntegrationUnstable("evolve_rk4: trace drifted to " + std::to_string(tr.real()) +
                                      "; use a smaller dt");
        v /= tr;
        // |ρ_ij| ≤ 1 holds for every density matrix.
        if (!(v.cwiseAbs().maxCoeff() <= 1.0 + 1e-6))
            throw IntegrationUnstable("evolve_rk4: state left the unit ball; use a smaller dt");
    }
    ComplexMatrix rho = unvec(v, d);
    rho = 0.5 * (rho + rho.adjoint());
    try {
        return DensityMatrix(std::move(rho), rho0.dims());
    } catch (const PsdViolation& e) {
        throw IntegrationUnstable(std::string("evolve_rk4: state left the positive cone (") + e.what() +
                                  "); use a smaller dt");
    }
}

double spectral_gap(const Superoperator& l) {
    if (l.matrix.rows() == 0) return 0.0;
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(l.matrix, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("spectral_gap: eigensolver failed");
    std::vector<double> re(solver.eigenvalues().size());
    for (Index i = 0; i < solver.eigenvalues().size(); ++i) re[i] = std::abs(solver.eigenvalues()(i).real());
    std::sort(re.begin(), re.end());
    return re.size() < 2 ? 0.0 : re[1];
}

} // namespace qsync
