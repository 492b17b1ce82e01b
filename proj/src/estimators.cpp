#include "sinrloss/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "sinrloss/errors.hpp"

namespace sinrloss {

namespace {

ProjectorPair projectors_from_basis(const Eigen::Ref<const ComplexMatrix>& u, int m) {
    ProjectorPair p;
    p.pi_c = u * u.adjoint();
    p.pi_c_perp = ComplexMatrix::Identity(m, m) - p.pi_c;
    return p;
}

}  // namespace

ProjectorPair true_projectors(const CovarianceModel& model) {
    return projectors_from_basis(model.eigenvectors.leftCols(model.rank), model.m());
}

ProjectorPair estimated_projectors(const SampleSet& samples, int r) {
    const int m = static_cast<int>(samples.scm.rows());
    if (r >= m) {
        throw RankTooLargeError("estimated_projectors: r must be < m");
    }
    return projectors_from_basis(samples.eig.vectors.leftCols(r), m);
}

FilterBank filters(const CovarianceModel& model, const SampleSet& samples,
                   const ComplexVector& a) {
    FilterBank bank;
    bank.w_opt = solve_hermitian_pd(model.R, a);
    if (samples.K >= model.m()) {
        try {
            bank.w_hat = solve_hermitian_pd(samples.scm, a);
        } catch (const SingularError&) {
            bank.w_hat.reset();
        }
    }
    bank.w_lr = true_projectors(model).pi_c_perp * a;
    bank.w_hat_lr = estimated_projectors(samples, model.rank).pi_c_perp * a;
    return bank;
}

double sinr_loss_fullrank(const SampleSet& samples, const CovarianceModel& model,
                          const ComplexVector& a) {
    const int m = model.m();
    if (samples.K < m + 2) {
        throw SingularError("sinr_loss_fullrank: need K >= m + 2 snapshots");
    }
    // Rhat^{-1} a through the SCM eigendecomposition already at hand.
    const HermitianEig& eig = samples.eig;
    const double top = eig.values[0];
    if (eig.values[m - 1] <= 1e-12 * top) {
        throw SingularError("sinr_loss_fullrank: SCM is numerically singular");
    }
    const ComplexVector proj = eig.vectors.adjoint() * a;
    const ComplexVector w = eig.vectors * proj.cwiseQuotient(eig.values.cast<Complex>());
    const double numer = std::norm(a.dot(w));
    const double denom_struct = std::real(w.dot(model.R * w));
    const double denom_opt = model.inv_quad_form(a);
    return numer / (denom_struct * denom_opt);
}

double sinr_loss_lr(const CovarianceModel& model, const ComplexVector& a,
                    const ComplexMatrix& pi_perp) {
    const ComplexVector pa = pi_perp * a;
    const double denom_struct = std::real(pa.dot(model.R * pa));
    const double r_norm = model.eigenvalues[0];
    if (denom_struct <= 1e-14 * a.squaredNorm() * r_norm) {
        throw DegenerateSteeringError(
            "sinr_loss_lr: steering vector lies inside the jammer subspace");
    }
    const double numer = std::norm(a.dot(pa));
    return numer / (denom_struct * model.inv_quad_form(a));
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> eigvals) : sorted_(std::move(eigvals)) {
    if (sorted_.empty()) {
        throw InvalidArgumentError("EmpiricalCdf: empty eigenvalue list");
    }
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

Complex empirical_stieltjes(const std::vector<double>& eigvals, Complex z) {
    if (eigvals.empty()) {
        throw InvalidArgumentError("empirical_stieltjes: empty eigenvalue list");
    }
    if (z.imag() <= 0.0) {
        throw InvalidArgumentError("empirical_stieltjes: need Im z > 0");
    }
    Complex acc = 0.0;
    for (double lambda : eigvals) {
        acc += 1.0 / (lambda - z);
    }
    return acc / static_cast<double>(eigvals.size());
}

double pdf_from_stieltjes(const std::function<Complex(Complex)>& stieltjes, double x,
                          double eps) {
    if (eps <= 0.0) {
        throw InvalidArgumentError("pdf_from_stieltjes: eps must be positive");
    }
    constexpr double kPi = 3.14159265358979323846;
    return stieltjes(Complex(x, eps)).imag() / kPi;
}

}  // namespace sinrloss
