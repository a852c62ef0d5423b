#pragma once

#include <vector>

#include "dequant/rng.hh"
#include "dequant/sparse.hh"
#include "dequant/types.hh"

namespace dequant {

// Seeded synthetic instances. Entries are complex only when `complex` is set.

/// Standard normal draws (Box-Muller on the stream).
double gaussian(Rng& rng);

/// m x n matrix with orthonormal random U (m x k), V (n x k) and the given
/// singular values (k = singular_values.size() <= min(m, n)).
Mat spectrum_matrix(Index m, Index n, const std::vector<double>& singular_values, Rng& rng, bool complex = false);

/// Gaussian matrix / vector.
Mat gaussian_matrix(Index m, Index n, Rng& rng, bool complex = false);
Vec gaussian_vector(Index n, Rng& rng, bool complex = false);
Vec unit_vector(Index n, Rng& rng, bool complex = false);

/// Unit vector in the span of the leading `rank` right singular vectors of A.
Vec row_space_vector(const Mat& a, Index rank, Rng& rng);
/// Unit vector in the span of the left singular vectors of A with value >= sigma.
Vec column_space_vector(const Mat& a, double sigma, Rng& rng);

/// n x n sum of `s` random permutation matrices with Gaussian weights,
/// rescaled so the operator norm is at most 1. Row and column sparsity <= s.
SparseMatrix sparse_instance(Index n, Index s, Rng& rng);

}  // namespace dequant
