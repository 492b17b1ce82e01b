#include "sinrloss/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sinrloss/errors.hpp"

namespace sinrloss {

namespace {

void check_finite(const ComplexMatrix& a, const char* what) {
    if (!a.allFinite()) {
        throw InvalidArgumentError(std::string(what) + ": non-finite entries");
    }
}

double spectral_norm_bound(const RealVector& eigvals) {
    return eigvals.size() == 0 ? 0.0 : eigvals.cwiseAbs().maxCoeff();
}

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatchError("hermitian_eig: matrix is not square");
    }
    check_finite(a, "hermitian_eig");
    const double norm = a.norm();
    if ((a - a.adjoint()).norm() > 1e-8 * std::max(norm, 1e-300)) {
        throw NotHermitianError("hermitian_eig: input is not Hermitian");
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw NoConvergenceError("hermitian_eig: eigensolver did not converge");
    }

    const Eigen::Index m = a.rows();
    // Eigen returns ascending order; re-sort descending, ties by original index.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return solver.eigenvalues()[i] > solver.eigenvalues()[j];
    });

    HermitianEig out;
    out.values.resize(m);
    out.vectors.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        out.values[i] = solver.eigenvalues()[order[static_cast<std::size_t>(i)]];
        ComplexVector v = solver.eigenvectors().col(order[static_cast<std::size_t>(i)]);
        // Phase convention: largest-modulus component real-positive.
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        const Complex pivot = v[imax];
        if (std::abs(pivot) > 0.0) {
            v *= std::conj(pivot) / std::abs(pivot);
        }
        out.vectors.col(i) = v;
    }
    return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
    HermitianEig eig = hermitian_eig(a);
    const double top = spectral_norm_bound(eig.values);
    RealVector clamped = eig.values;
    for (Eigen::Index i = 0; i < clamped.size(); ++i) {
        if (clamped[i] < -1e-10 * top) {
            throw NotPsdError("psd_sqrt: eigenvalue " + std::to_string(clamped[i]) +
                              " below clamp tolerance");
        }
        clamped[i] = std::max(clamped[i], 0.0);
    }
    const ComplexVector roots = clamped.cwiseSqrt().cast<Complex>();
    return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    // splitmix64 finalizer over the combined state
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ComplexMatrix complex_gauss_matrix(Eigen::Index m, Eigen::Index k, std::uint64_t seed) {
    if (m < 1 || k < 1) {
        throw InvalidArgumentError("complex_gauss_matrix: dimensions must be >= 1");
    }
    std::mt19937_64 gen(seed);
    auto uniform01 = [&gen]() {
        // 53-bit mantissa in (0, 1]; never 0, so log() below is safe
        return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
    };
    constexpr double two_pi = 6.283185307179586476925286766559;
    ComplexMatrix out(m, k);
    // Box-Muller; one uniform pair per complex entry, scaled so E|y|^2 = 1.
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const double radius = std::sqrt(-std::log(uniform01()));
            const double angle = two_pi * uniform01();
            out(i, j) = Complex(radius * std::cos(angle), radius * std::sin(angle));
        }
    }
    return out;
}

Complex quad_form(const ComplexVector& s1, const ComplexMatrix& m, const ComplexVector& s2) {
    if (s1.size() != m.rows() || s2.size() != m.cols()) {
        throw DimensionMismatchError("quad_form: dimensions not conformable");
    }
    return s1.dot(m * s2);
}

ComplexVector solve_hermitian_pd(const ComplexMatrix& a, const ComplexVector& b) {
    if (a.rows() != a.cols() || a.rows() != b.size()) {
        throw DimensionMismatchError("solve_hermitian_pd: dimensions not conformable");
    }
    HermitianEig eig = hermitian_eig(a);
    const double top = spectral_norm_bound(eig.values);
    if (eig.values[eig.values.size() - 1] <= 1e-12 * top) {
        throw SingularError("solve_hermitian_pd: matrix is singular or indefinite");
    }
    const ComplexVector proj = eig.vectors.adjoint() * b;
    return eig.vectors * proj.cwiseQuotient(eig.values.cast<Complex>());
}

}  // namespace sinrloss
