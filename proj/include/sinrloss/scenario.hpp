#pragma once

#include <cstdint>
#include <vector>

#include "sinrloss/linalg.hpp"

namespace sinrloss {

/// ULA jamming scenario: r jammers impinging on an m-element array over a
/// white noise floor of power sigma2.
struct ScenarioConfig {
    int m = 100;
    int r = 3;
    std::vector<double> jammer_aoas_deg = {-20.0, 0.0, 20.0};
    std::vector<double> jammer_powers = {6.0, 2.0, 1.0};  // diagonal of Lambda
    double jnr_db = 10.0;                                 // JNR / tr(Lambda), dB
    double sigma2 = 1.0;
    double spacing_over_wavelength = 0.5;

    void validate() const;  // throws ValidationError
};

/// True noise covariance R = s * U Lambda U^H + sigma2 * I with its exact
/// eigenstructure. Columns 0..rank-1 of `eigenvectors` span the jammer
/// subspace; the remaining columns complete an orthonormal basis.
struct CovarianceModel {
    ComplexMatrix R;
    RealVector eigenvalues;     // descending, length m
    ComplexMatrix eigenvectors; // m x m, column i pairs with eigenvalues[i]
    int rank = 0;
    double sigma2 = 1.0;

    int m() const { return static_cast<int>(R.rows()); }
    /// s^H R^{-1} s via the stored eigenstructure.
    double inv_quad_form(const ComplexVector& s) const;
};

/// Spiked-model spectrum in sigma2-normalized units: omega_i = lambda_i/sigma2 - 1,
/// tau_i the sample-eigenvalue limit, chi_i / psi_i the eigenprojector weights.
struct SpikedSpectrum {
    std::vector<double> omegas;
    std::vector<double> taus;
    std::vector<double> chis;
    std::vector<double> psis;
    double c = 0.0;
};

/// Secondary data X (m x K), its SCM and the SCM eigendecomposition.
struct SampleSet {
    ComplexMatrix X;
    int K = 0;
    ComplexMatrix scm;
    HermitianEig eig;
};

/// a_k = exp(j 2 pi (d/l0) k sin theta), k = 0..m-1.
ComplexVector steering_vector(double theta_deg, int m, double spacing_over_wavelength = 0.5);

CovarianceModel build_covariance(const ScenarioConfig& cfg);

/// Covariance with prescribed spike eigenvalues (descending, all > sigma2) and
/// a jammer subspace spanned by the given AoAs. Used by the spectrum
/// diagnostics whose eigenvalue lists do not come from a JNR scaling.
CovarianceModel build_covariance_from_spikes(const std::vector<double>& aoas_deg,
                                             const std::vector<double>& spike_eigenvalues,
                                             int m, double sigma2 = 1.0,
                                             double spacing_over_wavelength = 0.5);

/// R = sigma2 * I, rank 0. Pure-noise diagnostic model.
CovarianceModel identity_covariance(int m, double sigma2 = 1.0);

SpikedSpectrum spiked_spectrum(const CovarianceModel& model, double c);

SampleSet draw_samples(const CovarianceModel& model, int K, std::uint64_t seed);

}  // namespace sinrloss
