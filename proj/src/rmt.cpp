#include "sinrloss/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sinrloss/errors.hpp"
#include "sinrloss/estimators.hpp"

namespace sinrloss {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> checked_chis(const CovarianceModel& model, double c) {
    const SpikedSpectrum spectrum = spiked_spectrum(model, c);
    const double edge = std::sqrt(c);
    std::vector<int> bad;
    for (int i = 0; i < model.rank; ++i) {
        if (spectrum.omegas[i] <= edge + 1e-9) {
            bad.push_back(i + 1);
        }
    }
    if (!bad.empty()) {
        std::string msg = "separation condition violated (omega_i <= sqrt(c)";
        for (int i : bad) {
            const double omega = spectrum.omegas[static_cast<std::size_t>(i - 1)];
            if (omega > edge) {
                msg += "; spike " + std::to_string(i) + " within 1e-9 of the edge";
            } else {
                msg += "; spike " + std::to_string(i);
            }
        }
        msg += ")";
        throw SeparationViolatedError(msg, std::move(bad));
    }
    return spectrum.chis;
}

// Average of B over the deterministic noise subspace: tr(Pi_perp B Pi_perp)/(m-r).
// The estimated complement leaks a psi_j fraction of each spike direction into the
// bulk, where it picks up this average instead of vanishing.
double bulk_average(const ComplexMatrix& b, const CovarianceModel& model) {
    const auto basis = model.eigenvectors.leftCols(model.rank);
    const Complex tr_perp = b.trace() - (basis.adjoint() * b * basis).trace();
    return tr_perp.real() / static_cast<double>(model.m() - model.rank);
}

double min_jammer_distance(double theta, const std::vector<double>& jammers) {
    double best = std::numeric_limits<double>::infinity();
    for (double j : jammers) {
        best = std::min(best, std::abs(theta - j));
    }
    return best;
}

}  // namespace

MpLaw::MpLaw(double aspect_ratio) : c(aspect_ratio) {
    if (c <= 0.0) throw InvalidArgumentError("MpLaw: c must be positive");
    const double root = std::sqrt(c);
    lambda_minus = (1.0 - root) * (1.0 - root);
    lambda_plus = (1.0 + root) * (1.0 + root);
    atom_at_zero = std::max(0.0, 1.0 - 1.0 / c);
}

double mp_pdf(double x, double c) {
    const MpLaw law(c);
    if (x <= law.lambda_minus || x >= law.lambda_plus) return 0.0;
    return std::sqrt((law.lambda_plus - x) * (x - law.lambda_minus)) / (2.0 * kPi * c * x);
}

std::vector<double> separation_margin(const SpikedSpectrum& spectrum) {
    const double edge = std::sqrt(spectrum.c);
    std::vector<double> margins;
    margins.reserve(spectrum.omegas.size());
    for (double omega : spectrum.omegas) {
        margins.push_back(omega - edge);
    }
    return margins;
}

ComplexVector DeterministicProjector::apply(const ComplexVector& s) const {
    if (basis.cols() == 0) return s;
    RealVector chis(basis.cols());
    for (Eigen::Index i = 0; i < basis.cols(); ++i) {
        chis[i] = 1.0 - psis[static_cast<std::size_t>(i)];
    }
    return s - basis * (chis.cast<Complex>().asDiagonal() * (basis.adjoint() * s));
}

ComplexMatrix DeterministicProjector::matrix() const {
    const Eigen::Index m = basis.rows();
    ComplexMatrix out = ComplexMatrix::Identity(m, m);
    for (Eigen::Index i = 0; i < basis.cols(); ++i) {
        const double chi = 1.0 - psis[static_cast<std::size_t>(i)];
        out -= chi * (basis.col(i) * basis.col(i).adjoint());
    }
    return out;
}

DeterministicProjector deterministic_projector(const CovarianceModel& model, double c) {
    const std::vector<double> chis = checked_chis(model, c);
    DeterministicProjector proj;
    proj.basis = model.eigenvectors.leftCols(model.rank);
    proj.psis.reserve(chis.size());
    for (double chi : chis) {
        proj.psis.push_back(1.0 - chi);
    }
    return proj;
}

Complex deterministic_structured_qf(const ComplexVector& s1, const ComplexMatrix& b,
                                    const ComplexVector& s2, const CovarianceModel& model,
                                    double c) {
    if (s1.size() != b.rows() || s2.size() != b.cols()) {
        throw DimensionMismatchError("deterministic_structured_qf: dimension mismatch");
    }
    const DeterministicProjector proj = deterministic_projector(model, c);
    Complex value = proj.apply(s1).dot(b * proj.apply(s2));
    const double b_bar = bulk_average(b, model);
    for (int j = 0; j < model.rank; ++j) {
        const ComplexVector u = model.eigenvectors.col(j);
        const double chi = 1.0 - proj.psis[static_cast<std::size_t>(j)];
        value += chi * proj.psis[static_cast<std::size_t>(j)] * b_bar * s1.dot(u) * u.dot(s2);
    }
    return value;
}

Complex deterministic_base_qf(int j1, int j2, const ComplexVector& s1,
                              const ComplexMatrix& b, const ComplexVector& s2,
                              const CovarianceModel& model, double c) {
    if (j1 < 1 || j1 > model.rank || j2 < 1 || j2 > model.rank) {
        throw InvalidArgumentError("deterministic_base_qf: spike index out of range");
    }
    const std::vector<double> chis = checked_chis(model, c);
    const ComplexVector u1 = model.eigenvectors.col(j1 - 1);
    const ComplexVector u2 = model.eigenvectors.col(j2 - 1);
    const double chi1 = chis[static_cast<std::size_t>(j1 - 1)];
    const double chi2 = chis[static_cast<std::size_t>(j2 - 1)];
    Complex value = chi1 * chi2 * s1.dot(u1) * u1.dot(b * u2) * u2.dot(s2);
    if (j1 == j2) {
        value += chi1 * (1.0 - chi1) * bulk_average(b, model) * s1.dot(u1) * u1.dot(s2);
    }
    return value;
}

double predict_sinr_loss_fullrank(double c) {
    if (c <= 0.0) throw InvalidArgumentError("predict_sinr_loss_fullrank: c must be positive");
    if (c >= 1.0) {
        throw InvalidRegimeError(
            "predict_sinr_loss_fullrank: limit 1 - c requires c < 1 (invertible SCM)");
    }
    return 1.0 - c;
}

double predict_sinr_loss_lr(const CovarianceModel& model, const ComplexVector& a, double c) {
    const DeterministicProjector proj = deterministic_projector(model, c);
    const ComplexVector pa = proj.apply(a);
    // Denominator limit of a^H Pi_hat R Pi_hat a; for B = R the bulk average is
    // exactly sigma2, so the leak term needs no trace.
    double denom_struct = std::real(pa.dot(model.R * pa));
    for (int j = 0; j < model.rank; ++j) {
        const double psi = proj.psis[static_cast<std::size_t>(j)];
        denom_struct += (1.0 - psi) * psi * model.sigma2 *
                        std::norm(a.dot(model.eigenvectors.col(j)));
    }
    const double r_norm = model.eigenvalues[0];
    if (denom_struct <= 1e-14 * a.squaredNorm() * r_norm) {
        throw DegenerateSteeringError(
            "predict_sinr_loss_lr: steering vector lies inside the jammer subspace");
    }
    const double numer = std::norm(a.dot(pa));
    return numer / (denom_struct * model.inv_quad_form(a));
}

double predict_gifo_baseline(int r, int K) {
    if (K <= r) throw InvalidArgumentError("predict_gifo_baseline: need K > r");
    return 1.0 - static_cast<double>(r) / static_cast<double>(K);
}

BreakResult performance_break(const ScenarioConfig& cfg, const CovarianceModel& model,
                              double c, const std::vector<double>& theta_grid_deg,
                              const std::vector<double>& rho_bar) {
    if (theta_grid_deg.size() != rho_bar.size() || theta_grid_deg.empty()) {
        throw InvalidArgumentError("performance_break: grid/value size mismatch");
    }
    // Far-field plateau from an internal grid, so narrow sweeps near the
    // jammer still get a meaningful reference level.
    std::vector<double> far_values;
    for (double theta = -89.0; theta <= 89.0; theta += 1.0) {
        if (min_jammer_distance(theta, cfg.jammer_aoas_deg) <= 15.0) continue;
        const ComplexVector a = steering_vector(theta, cfg.m, cfg.spacing_over_wavelength);
        try {
            far_values.push_back(predict_sinr_loss_lr(model, a, c));
        } catch (const DegenerateSteeringError&) {
        }
    }
    BreakResult result;
    if (far_values.empty()) return result;
    std::nth_element(far_values.begin(), far_values.begin() + far_values.size() / 2,
                     far_values.end());
    result.plateau = far_values[far_values.size() / 2];

    // Approach the nearest jammer from afar; the first grid angle whose value
    // falls below half the plateau is the break.
    std::vector<std::size_t> order(theta_grid_deg.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return min_jammer_distance(theta_grid_deg[i], cfg.jammer_aoas_deg) >
               min_jammer_distance(theta_grid_deg[j], cfg.jammer_aoas_deg);
    });
    for (std::size_t i : order) {
        if (std::isfinite(rho_bar[i]) && rho_bar[i] < 0.5 * result.plateau) {
            result.found = true;
            result.theta_deg = theta_grid_deg[i];
            return result;
        }
    }
    return result;
}

}  // namespace sinrloss
