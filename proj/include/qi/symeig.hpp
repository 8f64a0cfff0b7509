#pragma once

#include <cstdint>
#include <vector>

namespace qi::symeig {

// Dense real symmetric eigendecomposition, Householder tridiagonalization
// followed by implicit-shift QL.  Eigenvalues ascend; eigenvector k is the
// column vectors[row*n + k].
struct EigenResult {
    std::vector<double> values;
    std::vector<double> vectors;
};

EigenResult eigh(std::vector<double> matrix, int n);

// Single-mode quadrature b + b^dag in the Fock basis (real symmetric tridiagonal).
std::vector<double> quadrature_matrix(int dim);

// a w + a^dag w^dag on a two-mode product (first mode dim_a, second dim_b),
// row-major over the joint index i = k*dim_b + mu.
std::vector<double> joint_photon_matrix(int dim_a, int dim_b);

// Orthonormal basis from a seeded Gaussian matrix (modified Gram-Schmidt,
// two passes).  Column k is basis vector k.
std::vector<double> random_orthonormal(int n, std::uint64_t seed);

// Max deviation of U^T U from the identity.
double orthonormality_defect(const std::vector<double>& u, int n);

} // namespace qi::symeig
