#include "sinrloss/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sinrloss/errors.hpp"
#include "sinrloss/rmt.hpp"

namespace sinrloss {

namespace {

using nlohmann::json;

const std::set<std::string> kExperiments = {"predict",  "simulate", "sweep-k",
                                            "sweep-theta", "mse-qf", "mse-sinr",
                                            "eig-pdf",  "separation"};

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& context) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ValidationError(context + item.key(), "unknown key");
        }
    }
}

double require_number(const json& obj, const std::string& key) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        throw ValidationError(key, "expected a number");
    }
    return obj[key].get<double>();
}

/// Grid: either an array of numbers or {"start": a, "stop": b, "step": s}
/// (stop inclusive up to half a step of round-off).
std::vector<double> parse_grid(const json& node, const std::string& key) {
    std::vector<double> grid;
    if (node.is_array()) {
        for (const auto& v : node) {
            if (!v.is_number()) throw ValidationError(key, "grid entries must be numbers");
            grid.push_back(v.get<double>());
        }
    } else if (node.is_object()) {
        reject_unknown_keys(node, {"start", "stop", "step"}, key + ".");
        const double start = require_number(node, "start");
        const double stop = require_number(node, "stop");
        const double step = require_number(node, "step");
        if (step <= 0.0 || stop < start) throw ValidationError(key, "bad range");
        const int count = static_cast<int>(std::floor((stop - start) / step + 0.5)) + 1;
        for (int i = 0; i < count; ++i) grid.push_back(start + i * step);
    } else {
        throw ValidationError(key, "expected an array or a start/stop/step object");
    }
    if (grid.empty()) throw ValidationError(key, "grid must be non-empty");
    return grid;
}

std::vector<int> parse_int_grid(const json& node, const std::string& key) {
    std::vector<int> out;
    for (double v : parse_grid(node, key)) {
        const int i = static_cast<int>(std::lround(v));
        if (std::abs(v - i) > 1e-9) throw ValidationError(key, "grid entries must be integers");
        out.push_back(i);
    }
    return out;
}

ScenarioConfig parse_scenario(const json& node) {
    reject_unknown_keys(node,
                        {"m", "r", "jammer_aoas_deg", "jammer_powers", "jnr_db", "sigma2",
                         "spacing_over_wavelength"},
                        "scenario.");
    ScenarioConfig sc;
    sc.m = static_cast<int>(require_number(node, "m"));
    sc.r = static_cast<int>(require_number(node, "r"));
    if (!node.contains("jammer_aoas_deg") || !node.contains("jammer_powers")) {
        throw ValidationError("scenario", "jammer_aoas_deg and jammer_powers are required");
    }
    sc.jammer_aoas_deg = parse_grid(node["jammer_aoas_deg"], "scenario.jammer_aoas_deg");
    sc.jammer_powers = parse_grid(node["jammer_powers"], "scenario.jammer_powers");
    if (node.contains("jnr_db")) sc.jnr_db = require_number(node, "jnr_db");
    if (node.contains("sigma2")) sc.sigma2 = require_number(node, "sigma2");
    if (node.contains("spacing_over_wavelength")) {
        sc.spacing_over_wavelength = require_number(node, "spacing_over_wavelength");
    }
    sc.validate();
    return sc;
}

McConfig parse_mc(const json& node) {
    reject_unknown_keys(node, {"trials", "master_seed", "parallelism"}, "mc.");
    McConfig mc;
    if (node.contains("trials")) mc.trials = static_cast<int>(require_number(node, "trials"));
    if (node.contains("master_seed")) {
        if (!node["master_seed"].is_number_unsigned() && !node["master_seed"].is_number_integer()) {
            throw ValidationError("mc.master_seed", "expected an integer");
        }
        mc.master_seed = node["master_seed"].get<std::uint64_t>();
    }
    if (node.contains("parallelism")) {
        mc.parallelism = static_cast<int>(require_number(node, "parallelism"));
    }
    mc.validate();
    return mc;
}

std::string format_number(double v) {
    if (!std::isfinite(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path + "'");
}

json json_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

void RunConfig::validate() const {
    scenario.validate();
    mc.validate();
    if (!kExperiments.count(experiment)) {
        throw ValidationError("experiment", "unknown experiment '" + experiment + "'");
    }
    if (output_format != "csv" && output_format != "json") {
        throw ValidationError("output_format", "must be 'csv' or 'json'");
    }
    if (output_path.empty()) throw ValidationError("output_path", "must be non-empty");

    const bool needs_c = experiment == "predict" || experiment == "mse-qf" ||
                         experiment == "mse-sinr" || experiment == "eig-pdf";
    if (needs_c && c <= 0.0) throw ValidationError("c", "must be positive");
    if ((experiment == "simulate" || experiment == "sweep-theta") && snapshots < 1) {
        throw ValidationError("K", "must be >= 1");
    }
    if (experiment == "sweep-k" && k_grid.empty()) throw ValidationError("k_grid", "required");
    if (experiment == "sweep-theta" && theta_grid.empty()) {
        throw ValidationError("theta_grid", "required");
    }
    if ((experiment == "mse-qf" || experiment == "mse-sinr") && m_grid.empty()) {
        throw ValidationError("m_grid", "required");
    }
    if (experiment == "separation" && (jnr_db_grid.empty() || c_grid.empty())) {
        throw ValidationError("jnr_db_grid", "jnr_db_grid and c_grid required");
    }
    if (experiment == "eig-pdf" && bins < 10) throw ValidationError("bins", "must be >= 10");
    if (!eigenvalues.empty()) {
        if (eigenvalues.size() != scenario.jammer_aoas_deg.size()) {
            throw ValidationError("eigenvalues", "expected one spike per jammer AoA");
        }
        for (double v : eigenvalues) {
            if (v <= scenario.sigma2) {
                throw ValidationError("eigenvalues", "spikes must exceed sigma2");
            }
        }
    }
}

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("config root must be a JSON object");
    reject_unknown_keys(doc,
                        {"scenario", "experiment", "mc", "output_path", "output_format",
                         "theta_deg", "c", "K", "bins", "k_grid", "m_grid", "theta_grid",
                         "jnr_db_grid", "c_grid", "eigenvalues"},
                        "");

    RunConfig cfg;
    if (!doc.contains("scenario")) throw ValidationError("scenario", "required");
    cfg.scenario = parse_scenario(doc["scenario"]);
    if (!doc.contains("experiment") || !doc["experiment"].is_string()) {
        throw ValidationError("experiment", "required string");
    }
    cfg.experiment = doc["experiment"].get<std::string>();
    if (doc.contains("mc")) cfg.mc = parse_mc(doc["mc"]);
    if (doc.contains("output_path")) cfg.output_path = doc["output_path"].get<std::string>();
    if (doc.contains("output_format")) {
        cfg.output_format = doc["output_format"].get<std::string>();
    }
    if (doc.contains("theta_deg")) cfg.theta_deg = require_number(doc, "theta_deg");
    if (doc.contains("c")) cfg.c = require_number(doc, "c");
    if (doc.contains("K")) cfg.snapshots = static_cast<int>(require_number(doc, "K"));
    if (doc.contains("bins")) cfg.bins = static_cast<int>(require_number(doc, "bins"));
    if (doc.contains("k_grid")) cfg.k_grid = parse_int_grid(doc["k_grid"], "k_grid");
    if (doc.contains("m_grid")) cfg.m_grid = parse_int_grid(doc["m_grid"], "m_grid");
    if (doc.contains("theta_grid")) cfg.theta_grid = parse_grid(doc["theta_grid"], "theta_grid");
    if (doc.contains("jnr_db_grid")) {
        cfg.jnr_db_grid = parse_grid(doc["jnr_db_grid"], "jnr_db_grid");
    }
    if (doc.contains("c_grid")) cfg.c_grid = parse_grid(doc["c_grid"], "c_grid");
    if (doc.contains("eigenvalues")) {
        cfg.eigenvalues = parse_grid(doc["eigenvalues"], "eigenvalues");
    }
    cfg.validate();
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json doc;
    doc["scenario"] = {{"m", cfg.scenario.m},
                       {"r", cfg.scenario.r},
                       {"jammer_aoas_deg", cfg.scenario.jammer_aoas_deg},
                       {"jammer_powers", cfg.scenario.jammer_powers},
                       {"jnr_db", cfg.scenario.jnr_db},
                       {"sigma2", cfg.scenario.sigma2},
                       {"spacing_over_wavelength", cfg.scenario.spacing_over_wavelength}};
    doc["experiment"] = cfg.experiment;
    doc["mc"] = {{"trials", cfg.mc.trials},
                 {"master_seed", cfg.mc.master_seed},
                 {"parallelism", cfg.mc.parallelism}};
    doc["output_path"] = cfg.output_path;
    doc["output_format"] = cfg.output_format;
    doc["theta_deg"] = cfg.theta_deg;
    if (cfg.c > 0.0) doc["c"] = cfg.c;
    if (cfg.snapshots > 0) doc["K"] = cfg.snapshots;
    doc["bins"] = cfg.bins;
    if (!cfg.k_grid.empty()) doc["k_grid"] = cfg.k_grid;
    if (!cfg.m_grid.empty()) doc["m_grid"] = cfg.m_grid;
    if (!cfg.theta_grid.empty()) doc["theta_grid"] = cfg.theta_grid;
    if (!cfg.jnr_db_grid.empty()) doc["jnr_db_grid"] = cfg.jnr_db_grid;
    if (!cfg.c_grid.empty()) doc["c_grid"] = cfg.c_grid;
    if (!cfg.eigenvalues.empty()) doc["eigenvalues"] = cfg.eigenvalues;
    return doc.dump(2);
}

void write_csv(const SweepResult& result, const std::string& path) {
    const auto any = [&](double SweepRecord::* field) {
        for (const auto& r : result.records) {
            if (std::isfinite(r.*field)) return true;
        }
        return false;
    };
    std::ostringstream out;
    struct Column {
        const char* name;
        double SweepRecord::* field;
        bool present;
    };
    std::vector<Column> cols = {
        {"mc_mean", &SweepRecord::mc_mean, any(&SweepRecord::mc_mean)},
        {"mc_std", &SweepRecord::mc_std, any(&SweepRecord::mc_std)},
        {"prediction_spiked", &SweepRecord::prediction_spiked,
         any(&SweepRecord::prediction_spiked)},
        {"prediction_naive", &SweepRecord::prediction_naive,
         any(&SweepRecord::prediction_naive)},
        {"prediction_gifo", &SweepRecord::prediction_gifo, any(&SweepRecord::prediction_gifo)},
        {"mse_spiked", &SweepRecord::mse_spiked, any(&SweepRecord::mse_spiked)},
        {"mse_naive", &SweepRecord::mse_naive, any(&SweepRecord::mse_naive)},
    };
    const bool has_break = std::isfinite(result.break_theta_deg);

    out << result.axis_name;
    for (const auto& col : cols) {
        if (col.present) out << ',' << col.name;
    }
    if (has_break) out << ",break_theta_deg";
    out << ",trials,flag\n";
    for (const auto& rec : result.records) {
        out << format_number(rec.axis);
        for (const auto& col : cols) {
            if (col.present) out << ',' << format_number(rec.*col.field);
        }
        if (has_break) out << ',' << format_number(result.break_theta_deg);
        out << ',' << rec.trials << ',' << rec.flag << '\n';
    }
    write_file(path, out.str());
}

void write_csv(const SinrLossReport& report, const std::string& path) {
    std::ostringstream out;
    out << "rho_hat,rho_lr,rho_hat_lr,pred_fullrank,pred_lr_spiked,pred_gifo\n";
    out << (report.rho_hat ? format_number(*report.rho_hat) : "") << ','
        << format_number(report.rho_lr) << ','
        << (report.rho_hat_lr ? format_number(*report.rho_hat_lr) : "") << ','
        << (report.pred_fullrank ? format_number(*report.pred_fullrank) : "") << ','
        << format_number(report.pred_lr_spiked) << ',' << format_number(report.pred_gifo)
        << '\n';
    write_file(path, out.str());
}

void write_csv(const std::vector<SeparationRow>& rows, const std::string& path) {
    std::ostringstream out;
    out << "jnr_db,c,margin\n";
    for (const auto& row : rows) {
        out << format_number(row.jnr_db) << ',' << format_number(row.c) << ','
            << format_number(row.margin) << '\n';
    }
    write_file(path, out.str());
}

void write_csv(const EigenPdfHistogram& hist, const std::string& path) {
    std::ostringstream out;
    out << "bin_left,bin_right,density,lambda_minus,lambda_plus";
    for (std::size_t i = 0; i < hist.taus.size(); ++i) out << ",tau_" << (i + 1);
    out << '\n';
    for (std::size_t b = 0; b < hist.density.size(); ++b) {
        out << format_number(hist.bin_edges[b]) << ',' << format_number(hist.bin_edges[b + 1])
            << ',' << format_number(hist.density[b]) << ',' << format_number(hist.lambda_minus)
            << ',' << format_number(hist.lambda_plus);
        for (double tau : hist.taus) out << ',' << format_number(tau);
        out << '\n';
    }
    write_file(path, out.str());
}

void write_json(const SweepResult& result, const std::string& path) {
    json doc;
    doc["axis_name"] = result.axis_name;
    if (std::isfinite(result.break_theta_deg)) {
        doc["break_theta_deg"] = result.break_theta_deg;
    }
    doc["records"] = json::array();
    for (const auto& rec : result.records) {
        doc["records"].push_back({{"axis", rec.axis},
                                  {"mc_mean", json_or_null(rec.mc_mean)},
                                  {"mc_std", json_or_null(rec.mc_std)},
                                  {"prediction_spiked", json_or_null(rec.prediction_spiked)},
                                  {"prediction_naive", json_or_null(rec.prediction_naive)},
                                  {"prediction_gifo", json_or_null(rec.prediction_gifo)},
                                  {"mse_spiked", json_or_null(rec.mse_spiked)},
                                  {"mse_naive", json_or_null(rec.mse_naive)},
                                  {"trials", rec.trials},
                                  {"flag", rec.flag}});
    }
    write_file(path, doc.dump(2) + "\n");
}

void write_json(const SinrLossReport& report, const std::string& path) {
    json doc = {{"rho_hat", report.rho_hat ? json(*report.rho_hat) : json(nullptr)},
                {"rho_lr", report.rho_lr},
                {"rho_hat_lr", report.rho_hat_lr ? json(*report.rho_hat_lr) : json(nullptr)},
                {"pred_fullrank",
                 report.pred_fullrank ? json(*report.pred_fullrank) : json(nullptr)},
                {"pred_lr_spiked", report.pred_lr_spiked},
                {"pred_gifo", report.pred_gifo}};
    write_file(path, doc.dump(2) + "\n");
}

void write_json(const std::vector<SeparationRow>& rows, const std::string& path) {
    json doc = json::array();
    for (const auto& row : rows) {
        doc.push_back({{"jnr_db", row.jnr_db}, {"c", row.c}, {"margin", row.margin}});
    }
    write_file(path, doc.dump(2) + "\n");
}

void write_json(const EigenPdfHistogram& hist, const std::string& path) {
    json doc;
    doc["bin_edges"] = hist.bin_edges;
    doc["density"] = hist.density;
    doc["lambda_minus"] = hist.lambda_minus;
    doc["lambda_plus"] = hist.lambda_plus;
    doc["taus"] = hist.taus;
    doc["total_eigenvalues"] = hist.total_eigenvalues;
    write_file(path, doc.dump(2) + "\n");
}

namespace {

CovarianceModel model_for(const RunConfig& cfg) {
    if (!cfg.eigenvalues.empty()) {
        return build_covariance_from_spikes(cfg.scenario.jammer_aoas_deg, cfg.eigenvalues,
                                            cfg.scenario.m, cfg.scenario.sigma2,
                                            cfg.scenario.spacing_over_wavelength);
    }
    return build_covariance(cfg.scenario);
}

template <typename T>
void emit(const RunConfig& cfg, const T& payload) {
    if (cfg.output_format == "json") {
        write_json(payload, cfg.output_path);
    } else {
        write_csv(payload, cfg.output_path);
    }
}

SinrLossReport run_predict(const RunConfig& cfg) {
    const CovarianceModel model = model_for(cfg);
    const ComplexVector a = steering_vector(cfg.theta_deg, cfg.scenario.m,
                                            cfg.scenario.spacing_over_wavelength);
    SinrLossReport report;
    report.rho_lr = sinr_loss_lr(model, a, true_projectors(model).pi_c_perp);
    report.pred_lr_spiked = predict_sinr_loss_lr(model, a, cfg.c);
    try {
        report.pred_fullrank = predict_sinr_loss_fullrank(cfg.c);
    } catch (const InvalidRegimeError&) {
        report.pred_fullrank.reset();  // c >= 1: SCM not invertible, no limit
    }
    const int K = std::max(cfg.scenario.r + 1,
                           static_cast<int>(std::lround(cfg.scenario.m / cfg.c)));
    report.pred_gifo = predict_gifo_baseline(cfg.scenario.r, K);
    return report;
}

SinrLossReport run_simulate(const RunConfig& cfg) {
    const CovarianceModel model = model_for(cfg);
    const int m = cfg.scenario.m;
    const int K = cfg.snapshots;
    const ComplexVector a =
        steering_vector(cfg.theta_deg, m, cfg.scenario.spacing_over_wavelength);
    const double c = static_cast<double>(m) / K;

    SinrLossReport report;
    report.rho_lr = sinr_loss_lr(model, a, true_projectors(model).pi_c_perp);
    report.pred_lr_spiked = predict_sinr_loss_lr(model, a, c);
    if (c < 1.0) report.pred_fullrank = predict_sinr_loss_fullrank(c);
    report.pred_gifo = predict_gifo_baseline(cfg.scenario.r, K);

    double sum_lr = 0.0, sum_fr = 0.0;
    int n_fr = 0;
    for (int t = 0; t < cfg.mc.trials; ++t) {
        const SampleSet samples =
            draw_samples(model, K, mix_seed(cfg.mc.master_seed, static_cast<std::uint64_t>(t)));
        sum_lr += sinr_loss_lr(model, a,
                               estimated_projectors(samples, cfg.scenario.r).pi_c_perp);
        if (K >= m + 2) {
            sum_fr += sinr_loss_fullrank(samples, model, a);
            ++n_fr;
        }
    }
    report.rho_hat_lr = sum_lr / cfg.mc.trials;
    if (n_fr > 0) report.rho_hat = sum_fr / n_fr;
    return report;
}

}  // namespace

int run(const RunConfig& cfg) {
    try {
        cfg.validate();
        if (cfg.experiment == "predict") {
            emit(cfg, run_predict(cfg));
        } else if (cfg.experiment == "simulate") {
            emit(cfg, run_simulate(cfg));
        } else if (cfg.experiment == "sweep-k") {
            emit(cfg, sinr_loss_vs_k(cfg.scenario, cfg.theta_deg, cfg.k_grid, cfg.mc));
        } else if (cfg.experiment == "sweep-theta") {
            emit(cfg, sinr_loss_vs_theta(cfg.scenario, cfg.snapshots, cfg.theta_grid, cfg.mc));
        } else if (cfg.experiment == "mse-qf") {
            std::vector<double> spikes = cfg.eigenvalues;
            if (spikes.empty()) {
                const double scale = std::pow(10.0, cfg.scenario.jnr_db / 10.0);
                for (double p : cfg.scenario.jammer_powers) {
                    spikes.push_back(cfg.scenario.sigma2 + scale * p);
                }
            }
            emit(cfg, mse_structured_qf_sweep(cfg.scenario.jammer_aoas_deg, spikes, cfg.c,
                                              cfg.m_grid, cfg.mc, cfg.scenario.sigma2,
                                              cfg.scenario.spacing_over_wavelength));
        } else if (cfg.experiment == "mse-sinr") {
            emit(cfg, mse_sinr_loss_sweep(cfg.scenario, cfg.c, cfg.m_grid, cfg.theta_deg,
                                          cfg.mc));
        } else if (cfg.experiment == "eig-pdf") {
            emit(cfg, eigen_pdf_histogram(model_for(cfg), cfg.c, cfg.mc, cfg.bins));
        } else {  // separation
            emit(cfg, separation_sweep(cfg.scenario, cfg.jnr_db_grid, cfg.c_grid));
        }
        return 0;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
    } catch (const SeparationViolatedError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
    } catch (const InvalidRegimeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
    } catch (const DegenerateJammersError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
    } catch (const DegenerateSteeringError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
    } catch (const InvalidArgumentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    }
    return 2;
}

}  // namespace sinrloss
