#include "qsync/sync_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qsync/errors.hpp"

namespace qsync {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_bipartite(const DensityMatrix& rho, const char* where) {
    if (rho.subsystems() != 2)
        throw ContractViolation(std::string(where) + ": product classes need a bipartite state");
}

const PartiallyCoherentProduct& checked_partial(const DensityMatrix& rho, const PartiallyCoherentProduct& cls) {
    if (static_cast<int>(cls.pairs.size()) != rho.subsystems())
        throw ContractViolation("partially coherent class needs one pair per subsystem");
    for (int d : rho.dims())
        if (d != 3) throw ContractViolation("partially coherent class is defined for qutrit subsystems");
    return cls;
}

// Euclidean projection onto the probability simplex.
RealVector project_simplex(const RealVector& v) {
    const Index n = v.size();
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0, tau = 0.0;
    for (Index k = 0; k < n; ++k) {
        cum += u[k];
        const double t = (cum - 1.0) / static_cast<double>(k + 1);
        if (u[k] - t > 0.0) tau = t;
    }
    return (v.array() - tau).cwiseMax(0.0).matrix();
}

struct DiagonalDistance {
    const ComplexMatrix& rho;

    HermitianEigen eig(const RealVector& q) const {
        ComplexMatrix a = rho;
        a.diagonal() -= q.cast<Complex>();
        return hermitian_eig(0.5 * (a + a.adjoint()));
    }

    double value(const RealVector& q) const { return eig(q).values.cwiseAbs().sum(); }

    RealVector subgradient(const HermitianEigen& e) const {
        const Index n = e.values.size();
        RealVector g = RealVector::Zero(n);
        for (Index i = 0; i < n; ++i) {
            const double s = e.values(i) > 0.0 ? 1.0 : (e.values(i) < 0.0 ? -1.0 : 0.0);
            g -= s * e.vectors.col(i).cwiseAbs2();
        }
        return g;
    }

    // Σ sqrt(λ² + μ²) with gradient and Hessian in q.
    double smoothed(const RealVector& q, double mu, RealVector* grad, RealMatrix* hess) const {
        const HermitianEigen e = eig(q);
        const Index n = e.values.size();
        RealVector h(n), d1(n), d2(n);
        for (Index i = 0; i < n; ++i) {
            const double l = e.values(i);
            h(i) = std::hypot(l, mu);
            d1(i) = l / h(i);
            d2(i) = mu * mu / (h(i) * h(i) * h(i));
        }
        if (grad) {
            *grad = RealVector::Zero(n);
            for (Index i = 0; i < n; ++i) *grad -= d1(i) * e.vectors.col(i).cwiseAbs2();
        }
        if (hess) {
            // Daleckii–Krein: first divided differences of h' weight the eigenbasis entries.
            RealMatrix dd(n, n);
            for (Index a = 0; a < n; ++a)
                for (Index b = 0; b < n; ++b) {
                    const double gap = e.values(a) - e.values(b);
                    dd(a, b) = std::abs(gap) < 1e-6 * mu ? 0.5 * (d2(a) + d2(b)) : (d1(a) - d1(b)) / gap;
                }
            ComplexMatrix w(n, n * n);
            for (Index j = 0; j < n; ++j)
                for (Index b = 0; b < n; ++b)
                    for (Index a = 0; a < n; ++a)
                        w(j, a + n * b) = std::conj(e.vectors(j, a)) * e.vectors(j, b) * std::sqrt(std::max(dd(a, b), 0.0));
            *hess = (w * w.adjoint()).real();
        }
        return h.sum();
    }
};

// Active-set Newton on the smoothed objective with μ driven towards zero.
RealVector newton_polish(const DiagonalDistance& f, RealVector q, double scale) {
    const Index n = q.size();
    for (double mu = 1e-2 * scale; mu >= 1e-13 * scale; mu *= 0.1) {
        for (int it = 0; it < 60; ++it) {
            RealVector g;
            RealMatrix h;
            const double f0 = f.smoothed(q, mu, &g, &h);

            std::vector<Index> free;
            for (Index j = 0; j < n; ++j)
                if (q(j) > 0.0) free.push_back(j);
            if (free.empty()) break;
            double nu = 0.0;
            for (Index j : free) nu += g(j);
            nu /= static_cast<double>(free.size());
            for (Index j = 0; j < n; ++j)
                if (q(j) <= 0.0 && g(j) < nu - 1e-12) free.push_back(j);
            std::sort(free.begin(), free.end());

            const Index m = static_cast<Index>(free.size());
            RealMatrix kkt = RealMatrix::Zero(m + 1, m + 1);
            RealVector rhs = RealVector::Zero(m + 1);
            double diag_max = 0.0;
            for (Index r = 0; r < m; ++r) diag_max = std::max(diag_max, h(free[r], free[r]));
            for (Index r = 0; r < m; ++r) {
                for (Index c = 0; c < m; ++c) kkt(r, c) = h(free[r], free[c]);
                kkt(r, r) += 1e-12 * diag_max + 1e-300;
                kkt(r, m) = kkt(m, r) = 1.0;
                rhs(r) = -g(free[r]);
            }
            const RealVector sol = kkt.fullPivLu().solve(rhs);
            RealVector d = RealVector::Zero(n);
            for (Index r = 0; r < m; ++r) d(free[r]) = sol(r);

            double slope = g.dot(d);
            if (!(slope < 0.0) || !d.allFinite()) break;

            double alpha_max = 1.0;
            Index blocking = -1;
            for (Index j = 0; j < n; ++j)
                if (d(j) < 0.0 && -q(j) / d(j) < alpha_max) {
                    alpha_max = -q(j) / d(j);
                    blocking = j;
                }
            double alpha = alpha_max;
            RealVector trial;
            double f1 = f0;
            bool accepted = false;
            for (int ls = 0; ls < 50; ++ls) {
                trial = (q + alpha * d).cwiseMax(0.0);
                if (alpha == alpha_max && blocking >= 0) trial(blocking) = 0.0;
                trial /= trial.sum();
                f1 = f.smoothed(trial, mu, nullptr, nullptr);
                if (f1 <= f0 + 1e-4 * alpha * slope) {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break;
            const double moved = (trial - q).cwiseAbs().maxCoeff();
            q = trial;
            if (moved < 1e-15 || f0 - f1 < 1e-17 * scale) break;
        }
    }
    return q;
}

} // namespace

std::string class_name(const LimitCycleClass& cls) {
    return std::visit(overloaded{[](const DiagonalCorrelated&) { return std::string("diagonal_correlated"); },
                                 [](const DiagonalProduct&) { return std::string("diagonal_product"); },
                                 [](const MarginalProduct&) { return std::string("marginal_product"); },
                                 [](const PartiallyCoherentProduct&) {
                                     return std::string("partially_coherent_product");
                                 }},
                      cls);
}

OmegaResult omega_r(const DensityMatrix& rho, const LimitCycleClass& cls) {
    OmegaResult out;
    out.cls = cls;
    std::visit(overloaded{[&](const DiagonalCorrelated&) { out.value = s_coh(rho); },
                          [&](const DiagonalProduct&) {
                              require_bipartite(rho, "omega_r");
                              out.value = s_coh(rho) + classical_mutual_information(rho);
                          },
                          [&](const MarginalProduct&) {
                              require_bipartite(rho, "omega_r");
                              out.value = mutual_information(rho);
                          },
                          [&](const PartiallyCoherentProduct& p) {
                              require_bipartite(rho, "omega_r");
                              checked_partial(rho, p);
                              out.value = -vn_entropy(rho);
                              for (int site = 0; site < 2; ++site) {
                                  const OmegaAlpha w = omega_alpha(rho.marginal(site), p.pairs[site]);
                                  out.value -= w.value;
                                  out.optimizer_state.push_back(w.params);
                              }
                          }},
               cls);
    return out;
}

OmegaResult omega_d(const DensityMatrix& rho, const OmegaDOptions& options) {
    const DiagonalDistance f{rho.matrix()};
    const Index n = rho.dim();
    OmegaResult out;
    out.cls = DiagonalCorrelated{};

    const RealVector q0 = project_simplex(rho.populations());
    const double f0 = f.value(q0);
    RealVector best_q = q0;
    double best = f0;
    if (f0 > 0.0) {
        RealVector q = q0;
        for (int k = 1; k <= options.iterations; ++k) {
            const HermitianEigen e = f.eig(q);
            const double v = e.values.cwiseAbs().sum();
            if (v < best) best = v, best_q = q;
            const RealVector g = f.subgradient(e);
            const double gn = g.norm();
            if (gn == 0.0) break;
            q = project_simplex(q - (f0 / std::sqrt(static_cast<double>(k))) * g / gn);
        }
        const RealVector polished = newton_polish(f, best_q, f0);
        const double fp = f.value(polished);
        if (fp < best) best = fp, best_q = polished;
    }
    out.value = best;
    out.populations = best_q;

    if (options.certificate_samples > 0) {
        StateSampler sampler(options.seed);
        std::normal_distribution<double> normal;
        std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
        double sampled = f0;
        for (int s = 0; s < options.certificate_samples; ++s) {
            RealVector q;
            if (s % 2 == 0) {
                q = sampler.dirichlet(n);
            } else {
                q = best_q;
                const double width = 1e-3 * std::pow(10.0, -(s % 10) / 2.0);
                for (Index j = 0; j < n; ++j) q(j) += width * normal(rng);
                q = project_simplex(q);
            }
            sampled = std::min(sampled, f.value(q));
        }
        out.certificate = sampled - out.value;
    }
    return out;
}

StateSampler::StateSampler(std::uint64_t seed) : rng_(seed) {}

double StateSampler::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

RealVector StateSampler::dirichlet(Index n, double concentration) {
    std::gamma_distribution<double> gamma(concentration, 1.0);
    RealVector p(n);
    for (Index i = 0; i < n; ++i) p(i) = gamma(rng_);
    const double s = p.sum();
    if (s <= 0.0) return RealVector::Constant(n, 1.0 / static_cast<double>(n));
    return p / s;
}

ComplexMatrix StateSampler::haar_unitary(Index n) {
    std::normal_distribution<double> normal;
    ComplexMatrix z(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) z(i, j) = Complex(normal(rng_), normal(rng_));
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

DensityMatrix StateSampler::random_density(const Dims& dims) {
    const Index n = product(dims);
    const ComplexMatrix u = haar_unitary(n);
    const RealVector p = dirichlet(n);
    ComplexMatrix m = u * p.cast<Complex>().asDiagonal() * u.adjoint();
    m = 0.5 * (m + m.adjoint());
    m /= m.trace().real();
    return DensityMatrix(std::move(m), dims);
}

DensityMatrix StateSampler::random_member(const LimitCycleClass& cls, const Dims& dims) {
    const Index n = product(dims);
    return std::visit(
        overloaded{
            [&](const DiagonalCorrelated&) { return DensityMatrix::diagonal(dirichlet(n), dims); },
            [&](const DiagonalProduct&) {
                RealVector p = RealVector::Ones(1);
                for (int d : dims) {
                    const RealVector f = dirichlet(d);
                    RealVector next(p.size() * d);
                    for (Index i = 0; i < p.size(); ++i) next.segment(i * d, d) = p(i) * f;
                    p = next;
                }
                p /= p.sum();
                return DensityMatrix::diagonal(p, dims);
            },
            [&](const MarginalProduct&) {
                ComplexMatrix m = ComplexMatrix::Identity(1, 1);
                for (int d : dims) m = kron(m, random_density(Dims{d}).matrix());
                return DensityMatrix(std::move(m), dims);
            },
            [&](const PartiallyCoherentProduct& p) {
                if (p.pairs.size() != dims.size()) throw ContractViolation("random_member: one pair per subsystem");
                ComplexMatrix m = ComplexMatrix::Identity(1, 1);
                for (std::size_t s = 0; s < dims.size(); ++s) {
                    if (dims[s] != 3) throw ContractViolation("random_member: partially coherent needs qutrits");
                    PartialCoherentParams params;
                    params.q = dirichlet(3);
                    params.theta1 = uniform(0.0, 2.0 * std::numbers::pi);
                    params.theta2 = uniform(0.0, std::numbers::pi);
                    params.theta3 = uniform(0.0, 2.0 * std::numbers::pi);
                    m = kron(m, partial_coherent_state(params, p.pairs[s]).matrix());
                }
                return DensityMatrix(std::move(m), dims);
            }},
        cls);
}

double oracle_min(const DensityMatrix& rho, const LimitCycleClass& cls, int samples, std::uint64_t seed,
                  const std::vector<DensityMatrix>& extra) {
    if (samples < 1) throw ContractViolation("oracle_min: samples must be >= 1");
    StateSampler sampler(seed);
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s)
        best = std::min(best, relative_entropy(rho, sampler.random_member(cls, rho.dims())));
    for (const auto& sigma : extra) best = std::min(best, relative_entropy(rho, sigma));
    return best;
}

} // namespace qsync
