#pragma once

#include <string>

#include <json.hpp>

#include "bgw/dyadic_coeffs.hpp"
#include "bgw/fields.hpp"
#include "bgw/seminorms.hpp"
#include "bgw/verifier.hpp"

namespace bgw {

using Json = nlohmann::json;

// 17 significant digits, '.' decimal point, no locale.
std::string format_double(double x);

Json to_json(const DyadicCoefficients& coeffs);
Json to_json(const SeminormReport& report);
Json to_json(const ChainStep& step);
Json to_json(const InequalityReport& report);
Json to_json(const SweepRow& row);
Json to_json(const SharpnessSweep& sweep);
Json to_json(const Lemma22Estimate& estimate);

// One row per delta; exact column order is part of the output contract.
std::string sweep_to_csv(const SharpnessSweep& sweep);

// Grid samples: JSON header (n, L, h) plus row-major values, or the CSV
// alternative with index columns first.
void save_grid_field_json(const GridField& f, const std::string& path);
GridField load_grid_field_json(const std::string& path);
void save_grid_field_csv(const GridField& f, const std::string& path);
GridField load_grid_field_csv(const std::string& path);
GridField load_grid_field(const std::string& path);  // dispatch on extension

struct FieldConfig {
    std::string family;  // log_bump | holder_cone | gaussian | polynomial | indicator | constant
    double delta = 0.0;
    double eta = 0.0;
    double radius = 0.0;
    double sigma = 0.0;
    double value = 0.0;
    std::vector<double> coeffs;
    std::vector<double> lo, hi;
    std::string sample_file;  // alternative to a family
};

struct ExperimentConfig {
    FieldConfig field;
    GridSpec grid{1, 1.0, 1.0 / 256};
    double eta = 0.5, alpha = 0.5, s = 0.5, p = 2.0;
    std::string mode = "bmo";  // bmo | sobolev
    std::vector<double> deltas;
    double gamma_test = 0.5;
    std::string out_json = "report.json";
    std::string out_csv = "sweep.csv";
    int workers = 0;  // 0: hardware default (still capped by BGW_MAX_WORKERS)
};

ExperimentConfig parse_experiment_config(const Json& j);
ExperimentConfig load_experiment_config(const std::string& path);

// Every precondition that can be checked before any compute; throws
// std::invalid_argument naming the violated one.
void validate_for_seminorm(const ExperimentConfig& cfg);
void validate_for_bgw(const ExperimentConfig& cfg);
void validate_for_sharpness(const ExperimentConfig& cfg);

AnalyticField make_analytic_field(const FieldConfig& fc, int dim);
GridField realize_field(const ExperimentConfig& cfg);

}  // namespace bgw
