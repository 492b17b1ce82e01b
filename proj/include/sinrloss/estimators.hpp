#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sinrloss/linalg.hpp"
#include "sinrloss/scenario.hpp"

namespace sinrloss {

/// Complementary projectors onto the jammer subspace and its orthogonal
/// complement (true or SCM-estimated).
struct ProjectorPair {
    ComplexMatrix pi_c;
    ComplexMatrix pi_c_perp;
};

/// Empirical/predicted SINR losses for one configuration. NaN-free optional
/// fields are absent when the regime does not allow them (e.g. K < m + 2).
struct SinrLossReport {
    std::optional<double> rho_hat;        // full-rank adaptive, Monte-Carlo mean
    double rho_lr = 0.0;                  // true-projector LR loss
    std::optional<double> rho_hat_lr;     // estimated-projector LR loss (MC mean)
    std::optional<double> pred_fullrank;  // 1 - c when c < 1
    double pred_lr_spiked = 0.0;          // LR loss with the deterministic equivalent
    double pred_gifo = 0.0;               // 1 - r/K
};

ProjectorPair true_projectors(const CovarianceModel& model);
ProjectorPair estimated_projectors(const SampleSet& samples, int r);

struct FilterBank {
    ComplexVector w_opt;                 // R^{-1} a
    std::optional<ComplexVector> w_hat;  // R_hat^{-1} a; absent when K < m
    ComplexVector w_lr;                  // Pi_c_perp a
    ComplexVector w_hat_lr;              // Pi_hat_c_perp a
};

FilterBank filters(const CovarianceModel& model, const SampleSet& samples,
                   const ComplexVector& a);

/// rho_hat = |a^H Rhat^{-1} a|^2 / ((a^H Rhat^{-1} R Rhat^{-1} a)(a^H R^{-1} a)).
/// Requires K >= m + 2.
double sinr_loss_fullrank(const SampleSet& samples, const CovarianceModel& model,
                          const ComplexVector& a);

/// LR SINR loss with an arbitrary complement operator P (a projector or the
/// deterministic equivalent): |a^H P a|^2 / ((a^H P R P a)(a^H R^{-1} a)).
double sinr_loss_lr(const CovarianceModel& model, const ComplexVector& a,
                    const ComplexMatrix& pi_perp);

/// Empirical CDF of a set of eigenvalues, queryable at any x.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> eigvals);
    double operator()(double x) const;

private:
    std::vector<double> sorted_;
};

/// (1/m) sum 1/(lambda_i - z), Im z > 0.
Complex empirical_stieltjes(const std::vector<double>& eigvals, Complex z);

/// eps-smoothed density: (1/pi) Im[stieltjes(x + i eps)].
double pdf_from_stieltjes(const std::function<Complex(Complex)>& stieltjes, double x,
                          double eps = 0.01);

}  // namespace sinrloss
