#pragma once

#include <vector>

#include "sinrloss/linalg.hpp"
#include "sinrloss/scenario.hpp"

namespace sinrloss {

/// Marcenko-Pastur law parameters for aspect ratio c = m/K.
struct MpLaw {
    double c;
    double lambda_minus;
    double lambda_plus;
    double atom_at_zero;

    explicit MpLaw(double aspect_ratio);
};

/// Continuous MP density (the atom at zero is reported separately in MpLaw).
double mp_pdf(double x, double c);

/// omega_i - sqrt(c) per spike; separation holds iff every margin is > 0.
std::vector<double> separation_margin(const SpikedSpectrum& spectrum);

/// Deterministic equivalent of the estimated complement projector:
/// Pi_bar = I - sum_{i<=r} chi_i u_i u_i^H. Hermitian but not idempotent.
struct DeterministicProjector {
    std::vector<double> psis;  // spike weights, psi_i = 1 - chi_i
    ComplexMatrix basis;       // m x r spike eigenvectors

    ComplexVector apply(const ComplexVector& s) const;
    ComplexMatrix matrix() const;
};

/// Throws SeparationViolatedError (with offending spike indices) unless
/// omega_i > sqrt(c) strictly for all spikes.
DeterministicProjector deterministic_projector(const CovarianceModel& model, double c);

/// Limit of s1^H Pi_hat_perp B Pi_hat_perp s2: s1^H Pi_bar B Pi_bar s2.
Complex deterministic_structured_qf(const ComplexVector& s1, const ComplexMatrix& b,
                                    const ComplexVector& s2, const CovarianceModel& model,
                                    double c);

/// Limit of the base structured QF s1^H Pi_hat_{j1} B Pi_hat_{j2} s2:
/// chi_{j1} chi_{j2} s1^H u_{j1} u_{j1}^H B u_{j2} u_{j2}^H s2. Indices are 1-based.
Complex deterministic_base_qf(int j1, int j2, const ComplexVector& s1,
                              const ComplexMatrix& b, const ComplexVector& s2,
                              const CovarianceModel& model, double c);

/// 1 - c, valid for 0 < c < 1 only (the SCM must be invertible).
double predict_sinr_loss_fullrank(double c);

/// LR SINR loss with the true complement projector replaced by Pi_bar.
double predict_sinr_loss_lr(const CovarianceModel& model, const ComplexVector& a, double c);

/// 1 - r/K, the classical expectation approximation.
double predict_gifo_baseline(int r, int K);

/// Performance-break angle of a predicted SINR-loss curve: the grid angle
/// nearest the closest jammer at which the curve, approached from afar, first
/// drops below half of its far-field plateau. The plateau is the median of the
/// prediction over angles more than 15 degrees away from every jammer.
struct BreakResult {
    bool found = false;
    double theta_deg = 0.0;
    double plateau = 0.0;
};

BreakResult performance_break(const ScenarioConfig& cfg, const CovarianceModel& model,
                              double c, const std::vector<double>& theta_grid_deg,
                              const std::vector<double>& rho_bar);

}  // namespace sinrloss
