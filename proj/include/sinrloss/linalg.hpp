#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace sinrloss {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
/// Column i of `vectors` pairs with `values[i]`; each column's phase is fixed
/// so that its largest-modulus component is real and positive.
struct HermitianEig {
    RealVector values;
    ComplexMatrix vectors;
};

HermitianEig hermitian_eig(const ComplexMatrix& a);

/// Hermitian PSD square root S with S*S ~= a. Eigenvalues in
/// [-1e-10*||a||_2, 0) are clamped to zero; anything lower throws NotPsdError.
ComplexMatrix psd_sqrt(const ComplexMatrix& a);

/// m x k matrix of iid CN(0,1) entries (real/imag parts N(0,1/2) each).
/// Identical seed gives a bit-identical matrix.
ComplexMatrix complex_gauss_matrix(Eigen::Index m, Eigen::Index k, std::uint64_t seed);

/// s1^H M s2
Complex quad_form(const ComplexVector& s1, const ComplexMatrix& m, const ComplexVector& s2);

/// Solves a*x = b for Hermitian positive definite a. Throws SingularError if
/// the smallest eigenvalue is <= 1e-12 * ||a||_2.
ComplexVector solve_hermitian_pd(const ComplexMatrix& a, const ComplexVector& b);

/// Deterministic seed derivation for independent sub-streams (splitmix64 mix).
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace sinrloss
