#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "sinrloss/errors.hpp"
#include "sinrloss/scenario.hpp"

using namespace sinrloss;

namespace {

ScenarioConfig reference_scenario(int m = 100) {
    ScenarioConfig cfg;
    cfg.m = m;
    cfg.r = 3;
    cfg.jammer_aoas_deg = {-20.0, 0.0, 20.0};
    cfg.jammer_powers = {6.0, 2.0, 1.0};
    cfg.jnr_db = 10.0;
    cfg.sigma2 = 1.0;
    return cfg;
}

}  // namespace

TEST_CASE("steering_vector basics") {
    ComplexVector a0 = steering_vector(0.0, 4);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(a0[k] - Complex(1.0, 0.0)) < 1e-15);
    CHECK(a0.norm() == doctest::Approx(2.0));

    // theta = 30 deg, half-wavelength spacing: phase step pi/2.
    ComplexVector a = steering_vector(30.0, 2);
    CHECK(std::abs(a[0] - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(a[1] - Complex(0.0, 1.0)) < 1e-12);
}

TEST_CASE("steering_vector phase aliasing") {
    // With spacing d/l0 = 2, sin(theta) = 0.25 and sin(theta') = 0.75 give
    // per-element phases 0.5 and 1.5 turns: identical vectors.
    double t1 = std::asin(0.25) * 180.0 / M_PI;
    double t2 = std::asin(0.75) * 180.0 / M_PI;
    ComplexVector a1 = steering_vector(t1, 8, 2.0);
    ComplexVector a2 = steering_vector(t2, 8, 2.0);
    CHECK((a1 - a2).norm() < 1e-10);
}

TEST_CASE("build_covariance reference configuration") {
    CovarianceModel model = build_covariance(reference_scenario());
    REQUIRE(model.rank == 3);
    // JNR 10 dB scales Lambda by 10: spikes 61, 21, 11 over unit noise.
    CHECK(model.eigenvalues[0] == doctest::Approx(61.0).epsilon(1e-12));
    CHECK(model.eigenvalues[1] == doctest::Approx(21.0).epsilon(1e-12));
    CHECK(model.eigenvalues[2] == doctest::Approx(11.0).epsilon(1e-12));
    for (int i = 3; i < 100; ++i) CHECK(model.eigenvalues[i] == doctest::Approx(1.0));

    // trace R = m*sigma2 + s*tr(Lambda)
    CHECK(model.R.trace().real() == doctest::Approx(100.0 + 10.0 * 9.0).epsilon(1e-12));
    CHECK((model.R - model.R.adjoint()).norm() < 1e-10);

    // Stored eigenstructure reconstructs R.
    ComplexMatrix recon = model.eigenvectors *
                          model.eigenvalues.cast<Complex>().asDiagonal() *
                          model.eigenvectors.adjoint();
    CHECK((recon - model.R).norm() <= 1e-9 * model.R.norm());
    CHECK((model.eigenvectors.adjoint() * model.eigenvectors -
           ComplexMatrix::Identity(100, 100))
              .norm() < 1e-10);
}

TEST_CASE("build_covariance single jammer") {
    ScenarioConfig cfg = reference_scenario(16);
    cfg.r = 1;
    cfg.jammer_aoas_deg = {10.0};
    cfg.jammer_powers = {1.0};
    cfg.jnr_db = 0.0;
    CovarianceModel model = build_covariance(cfg);
    CHECK(model.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(model.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
    // The spike eigenvector is the normalized steering vector.
    ComplexVector u = steering_vector(10.0, 16) / 4.0;
    CHECK(std::abs(std::abs(u.dot(model.eigenvectors.col(0))) - 1.0) < 1e-10);
}

TEST_CASE("spike eigenvalues scale linearly with the JNR factor") {
    ScenarioConfig cfg = reference_scenario(32);
    CovarianceModel m1 = build_covariance(cfg);
    cfg.jnr_db += 10.0 * std::log10(2.0);
    CovarianceModel m2 = build_covariance(cfg);
    for (int i = 0; i < 3; ++i) {
        double excess1 = m1.eigenvalues[i] - cfg.sigma2;
        double excess2 = m2.eigenvalues[i] - cfg.sigma2;
        CHECK(excess2 == doctest::Approx(2.0 * excess1).epsilon(1e-12));
    }
}

TEST_CASE("build_covariance rejects collinear jammers") {
    ScenarioConfig cfg = reference_scenario(16);
    cfg.r = 2;
    cfg.jammer_aoas_deg = {15.0, 15.0};
    cfg.jammer_powers = {2.0, 1.0};
    CHECK_THROWS_AS(build_covariance(cfg), DegenerateJammersError);
}

TEST_CASE("scenario validation") {
    ScenarioConfig cfg = reference_scenario();
    cfg.m = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = reference_scenario();
    cfg.jammer_powers = {1.0};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = reference_scenario();
    cfg.sigma2 = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("build_covariance_from_spikes") {
    CovarianceModel model =
        build_covariance_from_spikes({-20.0, 0.0, 20.0}, {71.0, 31.0, 21.0}, 50);
    CHECK(model.eigenvalues[0] == doctest::Approx(71.0));
    CHECK(model.eigenvalues[2] == doctest::Approx(21.0));
    CHECK(model.eigenvalues[3] == doctest::Approx(1.0));
    CHECK_THROWS_AS(build_covariance_from_spikes({0.0}, {0.5}, 10), InvalidArgumentError);
}

TEST_CASE("spiked_spectrum sample-eigenvalue limits") {
    CovarianceModel model = build_covariance_from_spikes({-20.0, 0.0, 20.0}, {7.0, 3.0, 2.0}, 40);
    SpikedSpectrum sp = spiked_spectrum(model, 0.1);
    REQUIRE(sp.omegas.size() == 3);
    CHECK(sp.omegas[0] == doctest::Approx(6.0));
    CHECK(sp.taus[0] == doctest::Approx(7.0 + 0.1 * 7.0 / 6.0).epsilon(1e-14));
    CHECK(sp.taus[1] == doctest::Approx(3.15).epsilon(1e-14));
    CHECK(sp.taus[2] == doctest::Approx(2.2).epsilon(1e-14));
    CHECK(sp.chis[0] == doctest::Approx((1.0 - 0.1 / 36.0) / (1.0 + 0.1 / 6.0)).epsilon(1e-14));
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(sp.psis[i] == doctest::Approx(1.0 - sp.chis[i]).epsilon(1e-14));

    // c -> 0: tau_i -> lambda_i, chi_i -> 1.
    SpikedSpectrum sp0 = spiked_spectrum(model, 1e-9);
    CHECK(sp0.taus[0] == doctest::Approx(7.0).epsilon(1e-8));
    CHECK(sp0.chis[2] == doctest::Approx(1.0).epsilon(1e-8));

    CovarianceModel m2 = build_covariance_from_spikes({-20.0, 20.0}, {7.0, 3.0}, 40);
    SpikedSpectrum sp15 = spiked_spectrum(m2, 1.5);
    CHECK(sp15.taus[0] == doctest::Approx(8.75).epsilon(1e-14));
    CHECK(sp15.taus[1] == doctest::Approx(5.25).epsilon(1e-14));
}

TEST_CASE("draw_samples single snapshot gives a rank-one SCM") {
    CovarianceModel model = identity_covariance(6);
    SampleSet s = draw_samples(model, 1, 99);
    REQUIRE(s.X.cols() == 1);
    ComplexMatrix expected = s.X.col(0) * s.X.col(0).adjoint();
    CHECK((s.scm - expected).norm() < 1e-12 * expected.norm());
    CHECK(s.eig.values[0] > 0.0);
    for (int i = 1; i < 6; ++i) CHECK(std::abs(s.eig.values[i]) < 1e-10 * s.eig.values[0]);
}

TEST_CASE("draw_samples is deterministic in the seed") {
    CovarianceModel model = build_covariance(reference_scenario(24));
    SampleSet a = draw_samples(model, 48, 5);
    SampleSet b = draw_samples(model, 48, 5);
    CHECK(a.X == b.X);
    CHECK(a.scm == b.scm);
    SampleSet c = draw_samples(model, 48, 6);
    CHECK((a.X - c.X).norm() > 1e-6);
}

TEST_CASE("pure-noise SCM spectrum stays near the Marcenko-Pastur bulk") {
    CovarianceModel model = identity_covariance(20);
    SampleSet s = draw_samples(model, 2000, 17);
    // c = 0.01: edges (1 +- 0.1)^2.
    CHECK(s.eig.values[0] < 1.21 + 0.05);
    CHECK(s.eig.values[19] > 0.81 - 0.05);
    CHECK((s.scm - ComplexMatrix::Identity(20, 20)).operatorNorm() < 0.25);
}

TEST_CASE("SCM error halves when the snapshot count quadruples") {
    CovarianceModel model = build_covariance(reference_scenario(20));
    double err_small = 0.0, err_large = 0.0;
    const int reps = 20;
    for (int t = 0; t < reps; ++t) {
        err_small += (draw_samples(model, 500, 100 + t).scm - model.R).norm();
        err_large += (draw_samples(model, 2000, 200 + t).scm - model.R).norm();
    }
    double ratio = err_small / err_large;
    CHECK(ratio > 2.0 * 0.7);
    CHECK(ratio < 2.0 * 1.3);
}

TEST_CASE("largest SCM eigenvalue concentrates at its deterministic limit") {
    CovarianceModel model = build_covariance(reference_scenario(100));
    SpikedSpectrum sp = spiked_spectrum(model, 0.2);
    const int trials = 300;
    double mean = 0.0;
    for (int t = 0; t < trials; ++t)
        mean += draw_samples(model, 500, mix_seed(31, t)).eig.values[0];
    mean /= trials;
    CHECK(mean == doctest::Approx(sp.taus[0]).epsilon(0.05));
}

TEST_CASE("inv_quad_form matches a direct solve") {
    CovarianceModel model = build_covariance(reference_scenario(30));
    ComplexVector a = steering_vector(50.0, 30);
    ComplexVector x = solve_hermitian_pd(model.R, a);
    double direct = a.dot(x).real();
    CHECK(model.inv_quad_form(a) == doctest::Approx(direct).epsilon(1e-10));
}
