#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "sinrloss/errors.hpp"
#include "sinrloss/experiments.hpp"
#include "sinrloss/rmt.hpp"
#include "sinrloss/scenario.hpp"

using namespace sinrloss;

namespace {

ScenarioConfig reference_scenario(int m = 100) {
    ScenarioConfig cfg;
    cfg.m = m;
    cfg.jammer_aoas_deg = {-20.0, 0.0, 20.0};
    cfg.jammer_powers = {6.0, 2.0, 1.0};
    cfg.jnr_db = 10.0;
    return cfg;
}

McConfig mc_of(int trials, std::uint64_t seed = 0, int parallelism = 1) {
    McConfig mc;
    mc.trials = trials;
    mc.master_seed = seed;
    mc.parallelism = parallelism;
    return mc;
}

bool records_equal(const SweepResult& a, const SweepResult& b) {
    if (a.records.size() != b.records.size()) return false;
    auto same = [](double x, double y) {
        return (std::isnan(x) && std::isnan(y)) || x == y;
    };
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const SweepRecord& ra = a.records[i];
        const SweepRecord& rb = b.records[i];
        if (!same(ra.mc_mean, rb.mc_mean) || !same(ra.mc_std, rb.mc_std) ||
            !same(ra.mse_spiked, rb.mse_spiked) || ra.flag != rb.flag)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("McConfig validation") {
    CHECK_THROWS_AS(mc_of(0).validate(), ValidationError);
    McConfig neg = mc_of(10);
    neg.parallelism = -1;
    CHECK_THROWS_AS(neg.validate(), ValidationError);
    CHECK_NOTHROW(mc_of(1).validate());
}

TEST_CASE("separation_sweep closed form") {
    ScenarioConfig cfg = reference_scenario(40);
    std::vector<double> jnr = {-10.0, -6.9897000433601875, 0.0, 4.0, 10.0};
    std::vector<double> cs = {0.04, 2.0};
    std::vector<SeparationRow> rows = separation_sweep(cfg, jnr, cs);
    REQUIRE(rows.size() == jnr.size() * cs.size());
    for (const SeparationRow& row : rows) {
        double s = std::pow(10.0, row.jnr_db / 10.0);
        CHECK(row.margin == doctest::Approx(s * 1.0 - std::sqrt(row.c)).epsilon(1e-12));
    }
    // At c = 0.04 the margin changes sign exactly at 10 log10(0.2) dB.
    for (const SeparationRow& row : rows) {
        if (row.c != 0.04) continue;
        if (row.jnr_db < -6.99) CHECK(row.margin < 0.0);
        if (row.jnr_db > -6.98) CHECK(row.margin > 0.0);
        if (std::abs(row.jnr_db + 6.9897000433601875) < 1e-9)
            CHECK(std::abs(row.margin) < 1e-12);
    }
    // jnr > 4 dB keeps every margin positive even at c = 2.
    CHECK(std::pow(10.0, 0.41) - std::sqrt(2.0) > 0.0);
}

TEST_CASE("pure-noise eigenvalue histogram sits on the MP bulk") {
    CovarianceModel model = identity_covariance(200);
    EigenPdfHistogram hist = eigen_pdf_histogram(model, 0.5, mc_of(100, 1), 60);
    REQUIRE(hist.bin_edges.size() == 61);
    CHECK(hist.taus.empty());
    CHECK(hist.total_eigenvalues == 200L * 100L);
    MpLaw law(0.5);
    CHECK(hist.lambda_minus == doctest::Approx(law.lambda_minus));
    CHECK(hist.lambda_plus == doctest::Approx(law.lambda_plus));

    double mass_in = 0.0, mass_total = 0.0;
    for (std::size_t i = 0; i + 1 < hist.bin_edges.size(); ++i) {
        double w = hist.bin_edges[i + 1] - hist.bin_edges[i];
        double mid = 0.5 * (hist.bin_edges[i] + hist.bin_edges[i + 1]);
        mass_total += hist.density[i] * w;
        if (mid > law.lambda_minus - 0.05 && mid < law.lambda_plus + 0.05)
            mass_in += hist.density[i] * w;
    }
    CHECK(mass_total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mass_in / mass_total > 0.99);
}

TEST_CASE("spiked histogram shows mass near each spike limit") {
    CovarianceModel model = build_covariance_from_spikes({-20.0, 0.0, 20.0}, {7.0, 3.0, 2.0}, 200);
    EigenPdfHistogram hist = eigen_pdf_histogram(model, 0.1, mc_of(40, 2), 120);
    REQUIRE(hist.taus.size() == 3);
    CHECK(hist.taus[0] == doctest::Approx(7.0 + 0.7 / 6.0).epsilon(1e-12));
    for (double tau : hist.taus) {
        double near = 0.0;
        for (std::size_t i = 0; i + 1 < hist.bin_edges.size(); ++i) {
            double mid = 0.5 * (hist.bin_edges[i] + hist.bin_edges[i + 1]);
            if (std::abs(mid - tau) < 0.25) near += hist.density[i];
        }
        CHECK(near > 0.0);
    }
}

TEST_CASE("structured QF MSE improves with dimension and beats the naive limit") {
    SweepResult res = mse_structured_qf_sweep({-20.0, 0.0, 20.0}, {71.0, 31.0, 21.0}, 0.1,
                                              {50, 100}, mc_of(60, 3));
    REQUIRE(res.records.size() == 2);
    CHECK(res.axis_name == "m");
    for (const SweepRecord& rec : res.records) {
        CHECK(std::isfinite(rec.mse_spiked));
        CHECK(std::isfinite(rec.mse_naive));
        CHECK(rec.trials == 60);
    }
    CHECK(res.records[1].mse_spiked < res.records[0].mse_spiked);
    CHECK(res.records[1].mse_spiked < res.records[1].mse_naive);
}

TEST_CASE("SINR-loss MSE: both limits coincide as c vanishes") {
    ScenarioConfig cfg = reference_scenario();
    SweepResult res = mse_sinr_loss_sweep(cfg, 0.01, {64}, 50.0, mc_of(30, 4));
    REQUIRE(res.records.size() == 1);
    const SweepRecord& rec = res.records[0];
    // At c = 0.01 the two predicted limits nearly agree, so the MSEs do too.
    CHECK(rec.mse_spiked < 2.0 * rec.mse_naive + 1e-12);
    CHECK(rec.mse_naive < 2.0 * rec.mse_spiked + 1e-12);
}

TEST_CASE("SINR-loss MSE in the snapshot-starved regime") {
    ScenarioConfig base = reference_scenario();
    SweepResult res = mse_sinr_loss_sweep(base, 3.0, {33, 66, 132}, 21.0, mc_of(300, 5));
    REQUIRE(res.records.size() == 3);
    // MSE against the aspect-aware limit shrinks with m and ends below the
    // MSE against the fixed-m limit.
    CHECK(res.records[1].mse_spiked < res.records[0].mse_spiked);
    CHECK(res.records[2].mse_spiked < res.records[1].mse_spiked);
    CHECK(res.records[2].mse_spiked < res.records[2].mse_naive);
}

TEST_CASE("sinr_loss_vs_k single point, large K") {
    ScenarioConfig cfg = reference_scenario(100);
    SweepResult res = sinr_loss_vs_k(cfg, 50.0, {1000}, mc_of(100, 6));
    REQUIRE(res.records.size() == 1);
    const SweepRecord& rec = res.records[0];
    CHECK(rec.axis == doctest::Approx(1000.0));
    CHECK(std::abs(rec.mc_mean - rec.prediction_naive) < 0.02);
    CHECK(rec.prediction_gifo == doctest::Approx(1.0 - 3.0 / 1000.0));
    CHECK(rec.mc_std > 0.0);
    CHECK(rec.flag.empty());
}

TEST_CASE("sinr_loss_vs_k flags separation violations instead of aborting") {
    ScenarioConfig cfg = reference_scenario(100);
    cfg.jnr_db = 3.0;  // weakest spike omega ~ 2 < sqrt(m/K) when K = 4
    SweepResult res = sinr_loss_vs_k(cfg, 50.0, {4, 400}, mc_of(5, 7));
    REQUIRE(res.records.size() == 2);
    CHECK(!res.records[0].flag.empty());
    CHECK(std::isnan(res.records[0].prediction_spiked));
    CHECK(res.records[1].flag.empty());
}

TEST_CASE("degenerate trial statistics") {
    ScenarioConfig cfg = reference_scenario(50);
    SweepResult res = sinr_loss_vs_k(cfg, 50.0, {25}, mc_of(1, 8));
    REQUIRE(res.records.size() == 1);
    CHECK(res.records[0].mc_std == doctest::Approx(0.0));
    CHECK(res.records[0].trials == 1);
}

TEST_CASE("mc_std shrinks like one over sqrt(trials)") {
    ScenarioConfig cfg = reference_scenario(30);
    SweepResult small = sinr_loss_vs_k(cfg, 50.0, {15}, mc_of(50, 9));
    SweepResult big = sinr_loss_vs_k(cfg, 50.0, {15}, mc_of(800, 9));
    // mc_std estimates the per-trial spread, which is trial-count independent;
    // the two estimates must agree within sampling error.
    CHECK(small.records[0].mc_std ==
          doctest::Approx(big.records[0].mc_std).epsilon(0.5));
    // And the mean's own error shrinks: check against the dense-trial mean.
    CHECK(std::abs(big.records[0].mc_mean - small.records[0].mc_mean) <
          4.0 * small.records[0].mc_std / std::sqrt(50.0));
}

TEST_CASE("sinr_loss_vs_theta flags jammer angles and reports the break") {
    ScenarioConfig cfg = reference_scenario(100);
    std::vector<double> grid = {20.0, 20.5, 21.0, 22.0, 23.0, 24.0};
    SweepResult res = sinr_loss_vs_theta(cfg, 6, grid, mc_of(60, 10));
    REQUIRE(res.records.size() == grid.size());
    CHECK(res.axis_name == "theta_deg");
    CHECK(res.records[0].flag == "degenerate_steering");
    // Predictions degenerate on the jammer, the MC estimate itself does not.
    CHECK(std::isnan(res.records[0].prediction_spiked));
    CHECK(std::isfinite(res.records[0].mc_mean));
    for (std::size_t i = 1; i < res.records.size(); ++i) {
        CHECK(res.records[i].flag.empty());
        CHECK(std::isfinite(res.records[i].mc_mean));
        CHECK(res.records[i].prediction_gifo == doctest::Approx(0.5));  // K = 2r
    }
    CHECK(std::isfinite(res.break_theta_deg));
    // Far from jammers at K = 2r the asymptotics are loose but still closer to
    // the MC mean than the classical 1 - r/K estimate.
    const SweepRecord& far = res.records.back();
    CHECK(std::abs(far.mc_mean - far.prediction_spiked) <
          std::abs(far.mc_mean - far.prediction_gifo));
}

TEST_CASE("sweeps are reproducible across parallelism settings") {
    ScenarioConfig cfg = reference_scenario(40);
    std::vector<double> grid = {30.0, 40.0, 50.0};
    SweepResult serial = sinr_loss_vs_theta(cfg, 8, grid, mc_of(40, 11, 1));
    SweepResult threaded = sinr_loss_vs_theta(cfg, 8, grid, mc_of(40, 11, 3));
    CHECK(records_equal(serial, threaded));
    SweepResult reseeded = sinr_loss_vs_theta(cfg, 8, grid, mc_of(40, 12, 1));
    CHECK(!records_equal(serial, reseeded));
}
