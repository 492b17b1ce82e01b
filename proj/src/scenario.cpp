#include "sinrloss/scenario.hpp"

#include <cmath>
#include <string>

#include "sinrloss/errors.hpp"

namespace sinrloss {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Orthonormalize the normalized steering vectors in the given jammer order.
/// Throws DegenerateJammersError if two directions are (nearly) collinear.
ComplexMatrix orthonormal_jammer_basis(const std::vector<double>& aoas_deg, int m,
                                       double spacing) {
    const int r = static_cast<int>(aoas_deg.size());
    ComplexMatrix cols(m, r);
    for (int i = 0; i < r; ++i) {
        cols.col(i) = steering_vector(aoas_deg[i], m, spacing) / std::sqrt(double(m));
    }
    for (int i = 0; i < r; ++i) {
        for (int j = i + 1; j < r; ++j) {
            if (std::abs(cols.col(i).dot(cols.col(j))) > 1.0 - 1e-10) {
                throw DegenerateJammersError(
                    "jammer AoAs " + std::to_string(aoas_deg[i]) + " and " +
                    std::to_string(aoas_deg[j]) + " give collinear steering vectors");
            }
        }
    }
    // modified Gram-Schmidt
    ComplexMatrix u = cols;
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < i; ++j) {
            u.col(i) -= u.col(j).dot(u.col(i)) * u.col(j);
        }
        const double norm = u.col(i).norm();
        if (norm < 1e-8) {
            throw DegenerateJammersError("jammer steering vectors are linearly dependent");
        }
        u.col(i) /= norm;
    }
    return u;
}

/// Assemble a model from an orthonormal jammer basis and spike eigenvalues.
CovarianceModel assemble_model(const ComplexMatrix& u, const RealVector& spike_eigs,
                               int m, double sigma2) {
    const int r = static_cast<int>(u.cols());
    CovarianceModel model;
    model.rank = r;
    model.sigma2 = sigma2;
    model.R = (u * (spike_eigs.array() - sigma2).matrix().cast<Complex>().asDiagonal() *
               u.adjoint());
    model.R += sigma2 * ComplexMatrix::Identity(m, m);

    model.eigenvalues.resize(m);
    model.eigenvectors.resize(m, m);
    model.eigenvalues.head(r) = spike_eigs;
    model.eigenvalues.tail(m - r).setConstant(sigma2);
    model.eigenvectors.leftCols(r) = u;
    if (r > 0) {
        Eigen::HouseholderQR<ComplexMatrix> qr(u);
        ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m, m);
        model.eigenvectors.rightCols(m - r) = q.rightCols(m - r);
    } else {
        model.eigenvectors = ComplexMatrix::Identity(m, m);
    }
    return model;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (m < 2) throw ValidationError("m", "sensor count must be >= 2");
    if (r < 1 || r >= m) throw ValidationError("r", "need 1 <= r < m");
    if (static_cast<int>(jammer_aoas_deg.size()) != r) {
        throw ValidationError("jammer_aoas_deg", "expected " + std::to_string(r) + " angles");
    }
    if (static_cast<int>(jammer_powers.size()) != r) {
        throw ValidationError("jammer_powers", "expected " + std::to_string(r) + " powers");
    }
    for (int i = 0; i < r; ++i) {
        if (jammer_powers[i] <= 0.0) {
            throw ValidationError("jammer_powers", "powers must be strictly positive");
        }
        if (i > 0 && jammer_powers[i] >= jammer_powers[i - 1]) {
            throw ValidationError("jammer_powers", "powers must be strictly decreasing");
        }
    }
    if (sigma2 <= 0.0) throw ValidationError("sigma2", "noise power must be positive");
    if (spacing_over_wavelength <= 0.0) {
        throw ValidationError("spacing_over_wavelength", "must be positive");
    }
}

ComplexVector steering_vector(double theta_deg, int m, double spacing_over_wavelength) {
    if (m < 1) throw InvalidArgumentError("steering_vector: m must be >= 1");
    const double phase = 2.0 * kPi * spacing_over_wavelength *
                         std::sin(theta_deg * kPi / 180.0);
    ComplexVector a(m);
    for (int k = 0; k < m; ++k) {
        a[k] = std::polar(1.0, phase * k);
    }
    return a;
}

CovarianceModel build_covariance(const ScenarioConfig& cfg) {
    cfg.validate();
    const ComplexMatrix u =
        orthonormal_jammer_basis(cfg.jammer_aoas_deg, cfg.m, cfg.spacing_over_wavelength);
    const double scale = std::pow(10.0, cfg.jnr_db / 10.0);
    RealVector spikes(cfg.r);
    for (int i = 0; i < cfg.r; ++i) {
        spikes[i] = cfg.sigma2 + scale * cfg.jammer_powers[i];
    }
    return assemble_model(u, spikes, cfg.m, cfg.sigma2);
}

CovarianceModel build_covariance_from_spikes(const std::vector<double>& aoas_deg,
                                             const std::vector<double>& spike_eigenvalues,
                                             int m, double sigma2,
                                             double spacing_over_wavelength) {
    if (aoas_deg.size() != spike_eigenvalues.size()) {
        throw InvalidArgumentError("build_covariance_from_spikes: AoA/eigenvalue count mismatch");
    }
    const int r = static_cast<int>(spike_eigenvalues.size());
    if (r < 1 || r >= m) throw InvalidArgumentError("build_covariance_from_spikes: need 1 <= r < m");
    RealVector spikes(r);
    for (int i = 0; i < r; ++i) {
        if (spike_eigenvalues[i] <= sigma2) {
            throw InvalidArgumentError(
                "build_covariance_from_spikes: spike eigenvalues must exceed sigma2");
        }
        if (i > 0 && spike_eigenvalues[i] >= spike_eigenvalues[i - 1]) {
            throw InvalidArgumentError(
                "build_covariance_from_spikes: spike eigenvalues must be strictly decreasing");
        }
        spikes[i] = spike_eigenvalues[i];
    }
    const ComplexMatrix u = orthonormal_jammer_basis(aoas_deg, m, spacing_over_wavelength);
    return assemble_model(u, spikes, m, sigma2);
}

CovarianceModel identity_covariance(int m, double sigma2) {
    if (m < 1) throw InvalidArgumentError("identity_covariance: m must be >= 1");
    CovarianceModel model;
    model.rank = 0;
    model.sigma2 = sigma2;
    model.R = sigma2 * ComplexMatrix::Identity(m, m);
    model.eigenvalues = RealVector::Constant(m, sigma2);
    model.eigenvectors = ComplexMatrix::Identity(m, m);
    return model;
}

double CovarianceModel::inv_quad_form(const ComplexVector& s) const {
    const ComplexVector proj = eigenvectors.adjoint() * s;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < proj.size(); ++i) {
        acc += std::norm(proj[i]) / eigenvalues[i];
    }
    return acc;
}

SpikedSpectrum spiked_spectrum(const CovarianceModel& model, double c) {
    if (c <= 0.0) throw InvalidArgumentError("spiked_spectrum: c must be positive");
    SpikedSpectrum s;
    s.c = c;
    s.omegas.reserve(model.rank);
    for (int i = 0; i < model.rank; ++i) {
        const double omega = model.eigenvalues[i] / model.sigma2 - 1.0;
        s.omegas.push_back(omega);
        s.taus.push_back(1.0 + omega + c * (1.0 + omega) / omega);
        const double chi = (1.0 - c / (omega * omega)) / (1.0 + c / omega);
        s.chis.push_back(chi);
        s.psis.push_back(1.0 - chi);
    }
    return s;
}

SampleSet draw_samples(const CovarianceModel& model, int K, std::uint64_t seed) {
    if (K < 1) throw InvalidArgumentError("draw_samples: K must be >= 1");
    const int m = model.m();
    SampleSet set;
    set.K = K;
    const double sigma = std::sqrt(model.sigma2);
    set.X = sigma * complex_gauss_matrix(m, K, seed);
    if (model.rank > 0) {
        // R^{1/2} = sigma*I + sum_{i<=r} (sqrt(lambda_i) - sigma) u_i u_i^H,
        // applied as a rank-r update instead of a dense m x m product.
        const auto u = model.eigenvectors.leftCols(model.rank);
        RealVector delta(model.rank);
        for (int i = 0; i < model.rank; ++i) {
            delta[i] = std::sqrt(model.eigenvalues[i]) - sigma;
        }
        set.X += u * (delta.cast<Complex>().asDiagonal() * (u.adjoint() * set.X)) / sigma;
    }
    set.scm = ComplexMatrix::Zero(m, m);
    set.scm.selfadjointView<Eigen::Lower>().rankUpdate(set.X, 1.0 / K);
    set.scm = set.scm.selfadjointView<Eigen::Lower>();
    set.eig = hermitian_eig(set.scm);
    return set;
}

}  // namespace sinrloss
