#pragma once

#include <vector>

namespace oscatter {

// Dense symmetric matrix in row-major storage, n x n.
struct SymmetricEigen {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // column k of the row-major n x n block is eigenvector k
    int n = 0;
    double vec(int row, int k) const { return vectors[static_cast<std::size_t>(row) * n + k]; }
};

// Cyclic Jacobi eigensolver for small real symmetric matrices (n <= ~200 here).
// Deterministic sweep order; eigenvalues sorted ascending with matching vectors.
SymmetricEigen jacobi_eigen(std::vector<double> a, int n, int max_sweeps = 60);

}  // namespace oscatter
