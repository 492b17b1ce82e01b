#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sinrloss/rmt.hpp"
#include "sinrloss/scenario.hpp"

namespace sinrloss {

struct McConfig {
    int trials = 1000;
    std::uint64_t master_seed = 0;
    int parallelism = 0;  // worker hint, 0 = hardware concurrency

    void validate() const;
};

constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();

/// One grid point of a sweep. NaN marks a column that does not apply.
struct SweepRecord {
    double axis = 0.0;
    double mc_mean = kAbsent;
    double mc_std = kAbsent;
    double prediction_spiked = kAbsent;
    double prediction_naive = kAbsent;
    double prediction_gifo = kAbsent;
    double mse_spiked = kAbsent;
    double mse_naive = kAbsent;
    int trials = 0;
    std::string flag;
};

struct SweepResult {
    std::string axis_name;
    std::vector<SweepRecord> records;
    double break_theta_deg = kAbsent;  // sweep-theta only
};

/// Pooled SCM eigenvalue histogram with MP support and spike-limit annotations.
struct EigenPdfHistogram {
    std::vector<double> bin_edges;  // bins + 1 entries
    std::vector<double> density;    // normalized so the histogram integrates to 1
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    std::vector<double> taus;  // sigma2-scaled spike limits
    long total_eigenvalues = 0;
};

EigenPdfHistogram eigen_pdf_histogram(const CovarianceModel& model, double c,
                                      const McConfig& mc, int bins);

struct SeparationRow {
    double jnr_db;
    double c;
    double margin;
};

/// Closed-form margin omega_r - sqrt(c) over a (jnr_db, c) grid; no MC.
std::vector<SeparationRow> separation_sweep(const ScenarioConfig& cfg,
                                            const std::vector<double>& jnr_db_grid,
                                            const std::vector<double>& c_grid);

/// MSE of the structured QF s1^H Pi_hat_perp R Pi_hat_perp s1 against the
/// spiked deterministic equivalent and the naive (fixed-m) limit, per m.
/// s1 is the first jammer's steering vector; K = round(m/c).
SweepResult mse_structured_qf_sweep(const std::vector<double>& aoas_deg,
                                    const std::vector<double>& spike_eigenvalues, double c,
                                    const std::vector<int>& m_grid, const McConfig& mc,
                                    double sigma2 = 1.0, double spacing = 0.5);

/// MSE of rho_hat_LR against rho_LR and against rho_bar_LR^(S), per m at fixed c.
SweepResult mse_sinr_loss_sweep(const ScenarioConfig& cfg, double c,
                                const std::vector<int>& m_grid, double theta_deg,
                                const McConfig& mc);

/// MC mean/std of rho_hat_LR vs K, with the three predictions as columns.
SweepResult sinr_loss_vs_k(const ScenarioConfig& cfg, double theta_deg,
                           const std::vector<int>& k_grid, const McConfig& mc);

/// MC mean/std of rho_hat_LR vs theta at fixed K, plus the performance break
/// computed from the predicted curve. Degenerate angles are flagged, not fatal.
SweepResult sinr_loss_vs_theta(const ScenarioConfig& cfg, int K,
                               const std::vector<double>& theta_grid_deg, const McConfig& mc);

}  // namespace sinrloss
