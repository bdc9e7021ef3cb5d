#include "qsync/infomeasures.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qsync/errors.hpp"

namespace qsync {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Weight of ρ outside supp(σ) above which S(ρ||σ) is treated as divergent.
constexpr double kSupportLeak = 1e-12;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* where) {
    if (a.dim() != b.dim()) throw ContractViolation(std::string(where) + ": dimension mismatch");
}

void require_bipartite(const DensityMatrix& rho, const char* where) {
    if (rho.subsystems() != 2) throw ContractViolation(std::string(where) + ": state must be bipartite");
}

} // namespace

PopulationVector::PopulationVector(RealVector p) : p_(std::move(p)) {
    if (p_.size() == 0) throw ContractViolation("PopulationVector: empty");
    for (Index i = 0; i < p_.size(); ++i)
        if (!(p_(i) >= 0.0) || !std::isfinite(p_(i)))
            throw ContractViolation("PopulationVector: entries must be finite and nonnegative");
    if (std::abs(p_.sum() - 1.0) > 1e-9) throw ContractViolation("PopulationVector: entries must sum to 1");
}

double shannon_entropy(const RealVector& p) {
    double s = 0.0;
    for (Index i = 0; i < p.size(); ++i) s -= xlogx(p(i));
    return s;
}

double vn_entropy(const DensityMatrix& rho) {
    return shannon_entropy(clipped_spectrum(rho.matrix()));
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma, "relative_entropy");
    const HermitianEigen es = hermitian_eig(sigma.matrix());
    // Tr[ρ ln σ] = Σ_j ln μ_j <v_j|ρ|v_j> over the support of σ.
    double cross = 0.0;
    double leak = 0.0;
    for (Index j = 0; j < es.values.size(); ++j) {
        const double w = (es.vectors.col(j).adjoint() * rho.matrix() * es.vectors.col(j))(0, 0).real();
        if (es.values(j) > kSupportCutoff) cross += w * std::log(es.values(j));
        else leak += w;
    }
    if (leak > kSupportLeak) return kInf;
    const RealVector lam = clipped_spectrum(rho.matrix());
    double self = 0.0;
    for (Index i = 0; i < lam.size(); ++i) self += xlogx(lam(i));
    return self - cross;
}

double s_coh(const DensityMatrix& rho) {
    return shannon_entropy(rho.populations().cwiseMax(0.0)) - vn_entropy(rho);
}

double l1_coherence(const DensityMatrix& rho) {
    return rho.matrix().cwiseAbs().sum() - rho.matrix().diagonal().cwiseAbs().sum();
}

double kl_populations(const PopulationVector& p, const PopulationVector& q) {
    if (p.size() != q.size()) throw ContractViolation("kl_populations: length mismatch");
    double d = 0.0;
    for (Index i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return kInf;
        d += p[i] * std::log(p[i] / q[i]);
    }
    return d;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma, "trace_distance");
    return trace_norm_hermitian(rho.matrix() - sigma.matrix());
}

double mutual_information(const DensityMatrix& rho) {
    require_bipartite(rho, "mutual_information");
    return vn_entropy(rho.marginal(0)) + vn_entropy(rho.marginal(1)) - vn_entropy(rho);
}

double classical_mutual_information(const DensityMatrix& rho) {
    require_bipartite(rho, "classical_mutual_information");
    return mutual_information(dephase(rho));
}

DensityMatrix product_of_marginals(const DensityMatrix& rho) {
    require_bipartite(rho, "product_of_marginals");
    return DensityMatrix(kron(rho.marginal(0).matrix(), rho.marginal(1).matrix()), rho.dims());
}

double c1_measure(const DensityMatrix& rho, int boson_site) {
    const DensityMatrix r = rho.subsystems() == 1 ? rho : rho.marginal(boson_site);
    const BosonOps b = boson_ops(static_cast<int>(r.dim()));
    const double n = expectation(r, b.number).real();
    if (n < 1e-14) return 0.0;
    return std::abs(expectation(r, b.a)) / std::sqrt(n);
}

double s_phase_spin1(const DensityMatrix& rho, int spin_site, int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 1) throw ContractViolation("s_phase_spin1: grid too small");
    const DensityMatrix r = rho.subsystems() == 1 ? rho : rho.marginal(spin_site);
    if (r.dim() != 3) throw ContractViolation("s_phase_spin1: site is not a spin-1");

    const double pi = std::numbers::pi;
    const double dtheta = pi / (n_theta - 1);
    std::vector<double> integral(n_phi, 0.0);
    ComplexVector psi(3);
    for (int k = 0; k < n_phi; ++k) {
        const double phi = 2.0 * pi * k / n_phi;
        const Complex e1 = std::polar(1.0, phi), e2 = std::polar(1.0, 2.0 * phi);
        double acc = 0.0;
        for (int i = 0; i < n_theta; ++i) {
            const double th = i * dtheta;
            const double c = std::cos(0.5 * th), s = std::sin(0.5 * th);
            psi << c * c, e1 * (std::sin(th) / std::numbers::sqrt2), e2 * (s * s);
            const double q = 3.0 / (4.0 * pi) * (psi.adjoint() * r.matrix() * psi)(0, 0).real();
            const double w = (i == 0 || i == n_theta - 1) ? 0.5 : 1.0;
            acc += w * std::sin(th) * q;
        }
        integral[k] = acc * dtheta;
    }
    // Discrete φ-mean of the θ-integral; equals 1/(2π) in the continuum.
    double mean = 0.0;
    for (double v : integral) mean += v;
    mean /= n_phi;
    double best = -kInf;
    for (double v : integral) best = std::max(best, v - mean);
    return best;
}

WignerGrid wigner_grid(const DensityMatrix& rho, int boson_site, const std::vector<double>& xs,
                       const std::vector<double>& ps) {
    const DensityMatrix r = rho.subsystems() == 1 ? rho : rho.marginal(boson_site);
    const Index n = r.dim();
    const ComplexMatrix& m = r.matrix();

    WignerGrid out;
    out.xs = xs;
    out.ps = ps;
    out.values = RealMatrix::Zero(static_cast<Index>(xs.size()), static_cast<Index>(ps.size()));
    out.truncation_warning = m(n - 1, n - 1).real() > 1e-8;

    std::vector<double> sqrt_n(n + 1);
    for (Index k = 0; k <= n; ++k) sqrt_n[k] = std::sqrt(static_cast<double>(k));
    const Index max_k = 4 * n + 200;

    ComplexVector d(n), next(n);
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        for (std::size_t ip = 0; ip < ps.size(); ++ip) {
            const Complex alpha(xs[ix], ps[ip]);
            if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
                throw ContractViolation("wigner_grid: non-finite grid point");
            // d_k = D(α)|k> restricted to the first n Fock rows; d_0 is the coherent state.
            d(0) = std::exp(-0.5 * std::norm(alpha));
            for (Index j = 1; j < n; ++j) d(j) = d(j - 1) * alpha / sqrt_n[j];
            double w = 0.0;
            for (Index k = 0; k < max_k; ++k) {
                const double term = (d.adjoint() * m * d)(0, 0).real();
                w += (k % 2 == 0) ? term : -term;
                if (k >= n && d.squaredNorm() < 1e-20) break;
                const double inv = 1.0 / std::sqrt(static_cast<double>(k + 1));
                next(0) = -std::conj(alpha) * d(0) * inv;
                for (Index j = 1; j < n; ++j) next(j) = (sqrt_n[j] * d(j - 1) - std::conj(alpha) * d(j)) * inv;
                d.swap(next);
            }
            out.values(static_cast<Index>(ix), static_cast<Index>(ip)) = 2.0 / std::numbers::pi * w;
        }
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 1) throw ContractViolation("linspace: count must be positive");
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
    v[count - 1] = hi;
    return v;
}

} // namespace qsync
