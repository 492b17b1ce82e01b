#pragma once

#include <string>
#include <vector>

#include "sinrloss/estimators.hpp"
#include "sinrloss/experiments.hpp"
#include "sinrloss/scenario.hpp"

namespace sinrloss {

/// One experiment run, deserialized from a JSON config document.
/// Angles are degrees at this boundary; internals use radians.
struct RunConfig {
    ScenarioConfig scenario;
    std::string experiment;  // predict | simulate | sweep-k | sweep-theta |
                             // mse-qf | mse-sinr | eig-pdf | separation
    McConfig mc;
    std::string output_path = "out.csv";
    std::string output_format = "csv";  // csv | json

    double theta_deg = 50.0;
    double c = 0.0;       // aspect ratio, required by predict/mse-qf/mse-sinr/eig-pdf
    int snapshots = 0;    // K, required by simulate/sweep-theta
    int bins = 50;
    std::vector<int> k_grid;
    std::vector<int> m_grid;
    std::vector<double> theta_grid;
    std::vector<double> jnr_db_grid;
    std::vector<double> c_grid;
    std::vector<double> eigenvalues;  // explicit spike eigenvalues (mse-qf, eig-pdf)

    void validate() const;  // throws ValidationError
};

/// Parses and validates a JSON config; unknown keys are rejected.
RunConfig parse_config(const std::string& json_text);

/// Inverse of parse_config up to defaulting; parse(serialize(x)) == x.
std::string serialize_config(const RunConfig& cfg);

/// Executes the configured experiment and writes the output file.
/// Returns 0 on success, 2 on validation/regime errors, 3 on numerical failure.
int run(const RunConfig& cfg);

// Output writers (UTF-8, 12 significant digits, header row).
void write_csv(const SweepResult& result, const std::string& path);
void write_csv(const SinrLossReport& report, const std::string& path);
void write_csv(const std::vector<SeparationRow>& rows, const std::string& path);
void write_csv(const EigenPdfHistogram& hist, const std::string& path);
void write_json(const SweepResult& result, const std::string& path);
void write_json(const SinrLossReport& report, const std::string& path);
void write_json(const std::vector<SeparationRow>& rows, const std::string& path);
void write_json(const EigenPdfHistogram& hist, const std::string& path);

}  // namespace sinrloss
