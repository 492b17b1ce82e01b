#include "sinrloss/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

#include "sinrloss/errors.hpp"
#include "sinrloss/estimators.hpp"

namespace sinrloss {

namespace {

/// Runs `trials` independent trials, each producing a fixed-size vector of
/// outputs, and returns them indexed by trial. Workers only race on the trial
/// counter; results land in preallocated slots, so any reduction done in trial
/// order is independent of the parallelism setting.
std::vector<std::vector<double>> run_trials(
    const McConfig& mc, std::size_t outputs_per_trial,
    const std::function<void(int trial, std::uint64_t seed, std::vector<double>& out)>& body) {
    mc.validate();
    std::vector<std::vector<double>> results(static_cast<std::size_t>(mc.trials),
                                             std::vector<double>(outputs_per_trial, kAbsent));
    int workers = mc.parallelism > 0 ? mc.parallelism
                                     : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, mc.trials));

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (int t = next.fetch_add(1); t < mc.trials; t = next.fetch_add(1)) {
            try {
                body(t, mix_seed(mc.master_seed, static_cast<std::uint64_t>(t)),
                     results[static_cast<std::size_t>(t)]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

struct Moments {
    double mean = kAbsent;
    double stddev = 0.0;
    int count = 0;
};

/// Mean / std over the finite entries of column `col`, reduced in trial order.
Moments column_moments(const std::vector<std::vector<double>>& rows, std::size_t col) {
    Moments mom;
    double sum = 0.0;
    int n = 0;
    for (const auto& row : rows) {
        if (std::isfinite(row[col])) {
            sum += row[col];
            ++n;
        }
    }
    if (n == 0) return mom;
    mom.count = n;
    mom.mean = sum / n;
    double sq = 0.0;
    for (const auto& row : rows) {
        if (std::isfinite(row[col])) {
            const double d = row[col] - mom.mean;
            sq += d * d;
        }
    }
    mom.stddev = n > 1 ? std::sqrt(sq / (n - 1)) : 0.0;
    return mom;
}

double column_mse(const std::vector<std::vector<double>>& rows, std::size_t col,
                  double target) {
    double sum = 0.0;
    int n = 0;
    for (const auto& row : rows) {
        if (std::isfinite(row[col])) {
            const double d = row[col] - target;
            sum += d * d;
            ++n;
        }
    }
    return n > 0 ? sum / n : kAbsent;
}

int snapshots_for_ratio(int m, double c) {
    return std::max(1, static_cast<int>(std::lround(static_cast<double>(m) / c)));
}

ScenarioConfig with_dimension(ScenarioConfig cfg, int m) {
    cfg.m = m;
    return cfg;
}

}  // namespace

void McConfig::validate() const {
    if (trials < 1) throw ValidationError("trials", "must be >= 1");
    if (parallelism < 0) throw ValidationError("parallelism", "must be >= 0");
}

EigenPdfHistogram eigen_pdf_histogram(const CovarianceModel& model, double c,
                                      const McConfig& mc, int bins) {
    if (bins < 10) throw InvalidArgumentError("eigen_pdf_histogram: need bins >= 10");
    const int m = model.m();
    const int K = snapshots_for_ratio(m, c);

    const auto rows = run_trials(
        mc, static_cast<std::size_t>(m), [&](int, std::uint64_t seed, std::vector<double>& out) {
            const SampleSet samples = draw_samples(model, K, seed);
            for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = samples.eig.values[i];
        });

    double lo = rows[0][0], hi = rows[0][0];
    for (const auto& row : rows) {
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi <= lo) hi = lo + 1.0;

    EigenPdfHistogram hist;
    hist.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    hist.density.assign(static_cast<std::size_t>(bins), 0.0);
    const double width = (hi - lo) / bins;
    for (int b = 0; b <= bins; ++b) {
        hist.bin_edges[static_cast<std::size_t>(b)] = lo + b * width;
    }
    for (const auto& row : rows) {
        for (double v : row) {
            int b = static_cast<int>((v - lo) / width);
            b = std::clamp(b, 0, bins - 1);
            hist.density[static_cast<std::size_t>(b)] += 1.0;
            ++hist.total_eigenvalues;
        }
    }
    const double mass = static_cast<double>(hist.total_eigenvalues) * width;
    for (double& d : hist.density) d /= mass;

    const MpLaw law(c);
    hist.lambda_minus = model.sigma2 * law.lambda_minus;
    hist.lambda_plus = model.sigma2 * law.lambda_plus;
    const SpikedSpectrum spectrum = spiked_spectrum(model, c);
    for (double tau : spectrum.taus) hist.taus.push_back(model.sigma2 * tau);
    return hist;
}

std::vector<SeparationRow> separation_sweep(const ScenarioConfig& cfg,
                                            const std::vector<double>& jnr_db_grid,
                                            const std::vector<double>& c_grid) {
    cfg.validate();
    if (jnr_db_grid.empty() || c_grid.empty()) {
        throw InvalidArgumentError("separation_sweep: grids must be non-empty");
    }
    const double lowest_power = cfg.jammer_powers.back();
    std::vector<SeparationRow> rows;
    rows.reserve(jnr_db_grid.size() * c_grid.size());
    for (double jnr_db : jnr_db_grid) {
        const double omega_r = std::pow(10.0, jnr_db / 10.0) * lowest_power / cfg.sigma2;
        for (double c : c_grid) {
            rows.push_back({jnr_db, c, omega_r - std::sqrt(c)});
        }
    }
    return rows;
}

SweepResult mse_structured_qf_sweep(const std::vector<double>& aoas_deg,
                                    const std::vector<double>& spike_eigenvalues, double c,
                                    const std::vector<int>& m_grid, const McConfig& mc,
                                    double sigma2, double spacing) {
    if (m_grid.empty()) throw InvalidArgumentError("mse_structured_qf_sweep: empty m grid");
    SweepResult result;
    result.axis_name = "m";
    const int r = static_cast<int>(spike_eigenvalues.size());
    for (int m : m_grid) {
        const CovarianceModel model =
            build_covariance_from_spikes(aoas_deg, spike_eigenvalues, m, sigma2, spacing);
        const int K = snapshots_for_ratio(m, c);
        // Unit-norm steering keeps the quadratic form O(1) across the m grid, so
        // the MSE decay reflects convergence rather than vector scaling.
        const ComplexVector s1 =
            steering_vector(aoas_deg[0], m, spacing).normalized();

        const double pred_spiked =
            deterministic_structured_qf(s1, model.R, s1, model, c).real();
        const ComplexMatrix pi_perp = true_projectors(model).pi_c_perp;
        const double pred_naive = quad_form(s1, pi_perp * model.R * pi_perp, s1).real();

        const auto rows =
            run_trials(mc, 1, [&](int, std::uint64_t seed, std::vector<double>& out) {
                const SampleSet samples = draw_samples(model, K, seed);
                const ComplexMatrix perp_hat = estimated_projectors(samples, r).pi_c_perp;
                out[0] = quad_form(s1, perp_hat * model.R * perp_hat, s1).real();
            });

        SweepRecord rec;
        rec.axis = m;
        const Moments mom = column_moments(rows, 0);
        rec.mc_mean = mom.mean;
        rec.mc_std = mc.trials > 1 ? mom.stddev : 0.0;
        rec.prediction_spiked = pred_spiked;
        rec.prediction_naive = pred_naive;
        rec.mse_spiked = column_mse(rows, 0, pred_spiked);
        rec.mse_naive = column_mse(rows, 0, pred_naive);
        rec.trials = mc.trials;
        result.records.push_back(std::move(rec));
    }
    return result;
}

SweepResult mse_sinr_loss_sweep(const ScenarioConfig& cfg, double c,
                                const std::vector<int>& m_grid, double theta_deg,
                                const McConfig& mc) {
    cfg.validate();
    if (m_grid.empty()) throw InvalidArgumentError("mse_sinr_loss_sweep: empty m grid");
    SweepResult result;
    result.axis_name = "m";
    for (int m : m_grid) {
        const ScenarioConfig scaled = with_dimension(cfg, m);
        const CovarianceModel model = build_covariance(scaled);
        const int K = std::max(snapshots_for_ratio(m, c), cfg.r + 1);
        const ComplexVector a = steering_vector(theta_deg, m, cfg.spacing_over_wavelength);

        const double rho_lr = sinr_loss_lr(model, a, true_projectors(model).pi_c_perp);
        const double rho_bar = predict_sinr_loss_lr(model, a, c);

        const auto rows =
            run_trials(mc, 1, [&](int, std::uint64_t seed, std::vector<double>& out) {
                const SampleSet samples = draw_samples(model, K, seed);
                const ComplexMatrix perp_hat =
                    estimated_projectors(samples, cfg.r).pi_c_perp;
                out[0] = sinr_loss_lr(model, a, perp_hat);
            });

        SweepRecord rec;
        rec.axis = m;
        const Moments mom = column_moments(rows, 0);
        rec.mc_mean = mom.mean;
        rec.mc_std = mc.trials > 1 ? mom.stddev : 0.0;
        rec.prediction_spiked = rho_bar;
        rec.prediction_naive = rho_lr;
        rec.mse_spiked = column_mse(rows, 0, rho_bar);
        rec.mse_naive = column_mse(rows, 0, rho_lr);
        rec.trials = mc.trials;
        result.records.push_back(std::move(rec));
    }
    return result;
}

SweepResult sinr_loss_vs_k(const ScenarioConfig& cfg, double theta_deg,
                           const std::vector<int>& k_grid, const McConfig& mc) {
    cfg.validate();
    if (k_grid.empty()) throw InvalidArgumentError("sinr_loss_vs_k: empty K grid");
    for (int k : k_grid) {
        if (k < cfg.r + 1) {
            throw InvalidArgumentError("sinr_loss_vs_k: every K must be >= r + 1");
        }
    }
    const CovarianceModel model = build_covariance(cfg);
    const ComplexVector a = steering_vector(theta_deg, cfg.m, cfg.spacing_over_wavelength);
    const double rho_lr = sinr_loss_lr(model, a, true_projectors(model).pi_c_perp);

    SweepResult result;
    result.axis_name = "K";
    for (int k : k_grid) {
        const double c = static_cast<double>(cfg.m) / k;
        SweepRecord rec;
        rec.axis = k;
        rec.prediction_naive = rho_lr;
        rec.prediction_gifo = predict_gifo_baseline(cfg.r, k);
        try {
            rec.prediction_spiked = predict_sinr_loss_lr(model, a, c);
        } catch (const SeparationViolatedError&) {
            rec.flag = "separation_violated";
        }
        const auto rows =
            run_trials(mc, 1, [&](int, std::uint64_t seed, std::vector<double>& out) {
                const SampleSet samples = draw_samples(model, k, seed);
                const ComplexMatrix perp_hat =
                    estimated_projectors(samples, cfg.r).pi_c_perp;
                out[0] = sinr_loss_lr(model, a, perp_hat);
            });
        const Moments mom = column_moments(rows, 0);
        rec.mc_mean = mom.mean;
        rec.mc_std = mc.trials > 1 ? mom.stddev : 0.0;
        rec.trials = mc.trials;
        result.records.push_back(std::move(rec));
    }
    return result;
}

SweepResult sinr_loss_vs_theta(const ScenarioConfig& cfg, int K,
                               const std::vector<double>& theta_grid_deg,
                               const McConfig& mc) {
    cfg.validate();
    if (theta_grid_deg.empty()) throw InvalidArgumentError("sinr_loss_vs_theta: empty grid");
    if (K < cfg.r + 1) throw InvalidArgumentError("sinr_loss_vs_theta: need K >= r + 1");

    const CovarianceModel model = build_covariance(cfg);
    const double c = static_cast<double>(cfg.m) / K;
    const std::size_t n = theta_grid_deg.size();

    std::vector<ComplexVector> steerings(n);
    for (std::size_t i = 0; i < n; ++i) {
        steerings[i] = steering_vector(theta_grid_deg[i], cfg.m, cfg.spacing_over_wavelength);
    }

    // The secondary data do not depend on theta, so each trial draws once and
    // evaluates the whole grid.
    const auto rows = run_trials(mc, n, [&](int, std::uint64_t seed, std::vector<double>& out) {
        const SampleSet samples = draw_samples(model, K, seed);
        const ComplexMatrix perp_hat = estimated_projectors(samples, cfg.r).pi_c_perp;
        for (std::size_t i = 0; i < n; ++i) {
            try {
                out[i] = sinr_loss_lr(model, steerings[i], perp_hat);
            } catch (const DegenerateSteeringError&) {
                out[i] = kAbsent;
            }
        }
    });

    SweepResult result;
    result.axis_name = "theta_deg";
    std::vector<double> rho_bar_curve(n, kAbsent);
    for (std::size_t i = 0; i < n; ++i) {
        SweepRecord rec;
        rec.axis = theta_grid_deg[i];
        rec.prediction_gifo = predict_gifo_baseline(cfg.r, K);
        try {
            rec.prediction_naive =
                sinr_loss_lr(model, steerings[i], true_projectors(model).pi_c_perp);
            rec.prediction_spiked = predict_sinr_loss_lr(model, steerings[i], c);
            rho_bar_curve[i] = rec.prediction_spiked;
        } catch (const DegenerateSteeringError&) {
            rec.flag = "degenerate_steering";
        } catch (const SeparationViolatedError&) {
            rec.flag = "separation_violated";
        }
        const Moments mom = column_moments(rows, i);
        if (mom.count == 0 && rec.flag.empty()) rec.flag = "degenerate_steering";
        rec.mc_mean = mom.mean;
        rec.mc_std = mom.count > 1 ? mom.stddev : (mom.count == 1 ? 0.0 : kAbsent);
        rec.trials = mom.count;
        result.records.push_back(std::move(rec));
    }

    const BreakResult brk = performance_break(cfg, model, c, theta_grid_deg, rho_bar_curve);
    if (brk.found) result.break_theta_deg = brk.theta_deg;
    return result;
}

}  // namespace sinrloss
