#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "qsync/errors.hpp"
#include "qsync/sync_measure.hpp"

namespace qsync {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kGrid = 64;

int untouched_level(std::pair<int, int> pair) { return 3 - pair.first - pair.second; }

void check_pair(std::pair<int, int> pair) {
    const auto [i, j] = pair;
    if (i < 0 || i > 2 || j < 0 || j > 2 || i == j)
        throw ContractViolation("partially coherent pair must be two distinct qutrit levels");
}

// e^{-iθ1σz} e^{-iθ2σy} e^{-iθ3σz}
Eigen::Matrix2cd zyz(double t1, double t2, double t3) {
    const Complex a = std::polar(1.0, -t1), b = std::polar(1.0, -t3);
    const double c = std::cos(t2), s = std::sin(t2);
    Eigen::Matrix2cd u;
    u << a * c * b, -a * s * std::conj(b), std::conj(a) * s * b, std::conj(a) * c * std::conj(b);
    return u;
}

using Point = std::array<double, 2>;

// Minimizes f from `start`; the initial simplex spans `step` along each axis.
template <class F> Point nelder_mead(F&& f, Point start, Point step, double xtol, int max_iter) {
    std::array<Point, 3> x{start, start, start};
    x[1][0] += step[0];
    x[2][1] += step[1];
    std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};
    auto combine = [](const Point& a, const Point& b, double t) {
        return Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
    };
    for (int it = 0; it < max_iter; ++it) {
        std::array<int, 3> order{0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
        const int best = order[0], mid = order[1], worst = order[2];
        double size = 0.0;
        for (int k : {mid, worst})
            size = std::max({size, std::abs(x[k][0] - x[best][0]), std::abs(x[k][1] - x[best][1])});
        if (size < xtol) break;

        const Point centroid{0.5 * (x[best][0] + x[mid][0]), 0.5 * (x[best][1] + x[mid][1])};
        const Point r = combine(centroid, x[worst], -1.0);
        const double fr = f(r);
        if (fr < fx[best]) {
            const Point e = combine(centroid, x[worst], -2.0);
            const double fe = f(e);
            if (fe < fr) x[worst] = e, fx[worst] = fe;
            else x[worst] = r, fx[worst] = fr;
        } else if (fr < fx[mid]) {
            x[worst] = r, fx[worst] = fr;
        } else {
            const bool outside = fr < fx[worst];
            const Point c = combine(centroid, outside ? r : x[worst], 0.5);
            const double fc = f(c);
            if (fc < (outside ? fr : fx[worst])) {
                x[worst] = c, fx[worst] = fc;
            } else {
                for (int k : {mid, worst}) {
                    x[k] = combine(x[best], x[k], 0.5);
                    fx[k] = f(x[k]);
                }
            }
        }
    }
    const int best = static_cast<int>(std::min_element(fx.begin(), fx.end()) - fx.begin());
    return x[best];
}

} // namespace

ComplexMatrix pair_rotation(const PartialCoherentParams& p, std::pair<int, int> pair) {
    check_pair(pair);
    const Eigen::Matrix2cd u2 = zyz(p.theta1, p.theta2, p.theta3);
    const int idx[2] = {pair.first, pair.second};
    ComplexMatrix u = ComplexMatrix::Zero(3, 3);
    const int k = untouched_level(pair);
    u(k, k) = 1.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) u(idx[r], idx[c]) = u2(r, c);
    return u;
}

DensityMatrix partial_coherent_state(const PartialCoherentParams& p, std::pair<int, int> pair) {
    const ComplexMatrix u = pair_rotation(p, pair);
    ComplexMatrix s = u * p.q.cast<Complex>().asDiagonal() * u.adjoint();
    s = 0.5 * (s + s.adjoint());
    return DensityMatrix(std::move(s));
}

double partial_coherent_objective(const DensityMatrix& rho_alpha, std::pair<int, int> pair,
                                  const PartialCoherentParams& p) {
    if (rho_alpha.dim() != 3) throw ContractViolation("partial_coherent_objective: state is not a qutrit");
    const ComplexMatrix u = pair_rotation(p, pair);
    const ComplexMatrix r = u.adjoint() * rho_alpha.matrix() * u;
    double value = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double w = r(k, k).real();
        if (w <= 1e-300) continue;
        if (p.q(k) <= 0.0) return kNegInf;
        value += w * std::log(p.q(k));
    }
    return value;
}

OmegaAlpha omega_alpha(const DensityMatrix& rho_alpha, std::pair<int, int> pair) {
    if (rho_alpha.dim() != 3) throw ContractViolation("omega_alpha: state is not a qutrit");
    check_pair(pair);
    const ComplexMatrix& m = rho_alpha.matrix();
    const int k1 = untouched_level(pair);
    const double rho11 = std::clamp(m(k1, k1).real(), 0.0, 1.0);
    const double span = 1.0 - rho11;

    OmegaAlpha out;
    out.params.q = RealVector::Zero(3);
    out.params.q(k1) = rho11;
    if (span < 1e-12) {
        out.params.q(k1) = 1.0;
        out.params.degenerate = true;
        out.value = 0.0;
        return out;
    }

    const double phi23 = std::arg(m(pair.first, pair.second));
    out.params.theta1 = 0.5 * std::numbers::pi - 0.5 * phi23;
    if (out.params.theta1 < 0.0) out.params.theta1 += 2.0 * std::numbers::pi;

    auto eval = [&](double q2, double theta2) {
        PartialCoherentParams p = out.params;
        p.q(pair.first) = q2;
        p.q(pair.second) = span - q2;
        p.theta2 = theta2;
        return partial_coherent_objective(rho_alpha, pair, p);
    };

    // Coarse grid over cell centres; ties keep the lexicographically first cell.
    double best = kNegInf;
    Point arg{0.5 * span, 0.0};
    for (int i = 0; i < kGrid; ++i) {
        const double q2 = (i + 0.5) / kGrid * span;
        for (int j = 0; j < kGrid; ++j) {
            const double t2 = (j + 0.5) / kGrid * std::numbers::pi;
            const double v = eval(q2, t2);
            if (v > best) {
                best = v;
                arg = {q2, t2};
            }
        }
    }

    auto neg = [&](const Point& x) {
        if (!(x[0] > 0.0 && x[0] < span)) return std::numeric_limits<double>::infinity();
        return -eval(x[0], x[1]);
    };
    const Point step{span / kGrid, std::numbers::pi / kGrid};
    Point x = nelder_mead(neg, arg, step, 1e-10, 4000);
    if (!(-neg(x) >= best)) x = arg;

    double theta2 = std::fmod(x[1], std::numbers::pi);
    if (theta2 < 0.0) theta2 += std::numbers::pi;
    out.params.q(pair.first) = x[0];
    out.params.q(pair.second) = span - x[0];
    out.params.theta2 = theta2;
    out.value = eval(x[0], theta2);
    return out;
}

} // namespace qsync
