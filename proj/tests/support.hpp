#pragma once

#include <cstdint>
#include <random>

#include "qsync/numkernel.hpp"

namespace qsync::testing {

inline ComplexMatrix random_complex(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = Complex(n(rng), n(rng));
    return m;
}

inline ComplexMatrix random_hermitian(Index n, std::mt19937_64& rng) {
    const ComplexMatrix g = random_complex(n, n, rng);
    return 0.5 * (g + g.adjoint());
}

// Full-rank random state G G† / Tr.
inline ComplexMatrix random_state_matrix(Index n, std::mt19937_64& rng) {
    const ComplexMatrix g = random_complex(n, n, rng);
    ComplexMatrix m = g * g.adjoint();
    m = 0.5 * (m + m.adjoint());
    return m / m.trace().real();
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace qsync::testing
