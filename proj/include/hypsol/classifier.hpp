#pragma once

// Numerical pipeline for attractors in 3-manifolds: orbit clouds, box-counting
// dimension, Lyapunov spectra, and the decision table taking (dim Lambda,
// dim E^u) to the type of attractor.

#include "hypsol/linalg_torus.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace hypsol {

class InvalidCombination : public DomainError {
public:
    using DomainError::DomainError;
};

/// Throws InvalidCombination naming the violated constraint.
std::string classify(int dim_lambda, int dim_eu);

struct ClassTableEntry {
    int dim_lambda;
    int dim_eu;
    std::string label;   // "invalid-combination" for excluded pairs
    std::string reason;  // constraint text for excluded pairs
};

/// All pairs 0..3 x 0..2.
std::vector<ClassTableEntry> classify_table();

struct MapSpec {
    std::string builtin;
    std::vector<std::vector<long long>> matrix;
    double lambda_c = 0.25;
    double c_off = 0.5;
    double rate = 0.5;               // toral_times_contraction
    std::vector<double> sink_rates;  // fixed_point_sink
    double eps = 0.05;               // perturbed_toral

    std::size_t ambient_dim() const;
    nlohmann::json to_json() const;
};

/// Validates per builtin; throws DomainError on unknown names or bad parameters.
MapSpec map_spec_from_json(const nlohmann::json& j);
void validate(const MapSpec& spec);

struct DynamicalMap {
    std::size_t dim = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> step;
    /// Step used for orbit generation; may refresh low-order bits lost by
    /// expanding maps in floating point.
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, std::mt19937_64&)> orbit_step;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
    std::function<Eigen::VectorXd(std::mt19937_64&)> initial;
    std::function<bool(const Eigen::VectorXd&)> in_bounds;
};

DynamicalMap make_map(const MapSpec& spec);

struct OrbitCloud {
    std::vector<Eigen::VectorXd> points;
    std::size_t transient = 0;
    std::uint64_t seed = 0;
};

/// Throws DomainError naming the first iterate that leaves the ambient bounds.
OrbitCloud generate_orbit(const MapSpec& spec, std::size_t transient, std::size_t count, std::uint64_t seed);

std::string cloud_csv(const OrbitCloud& cloud);
double cloud_diameter(const OrbitCloud& cloud);

struct BoxDimension {
    double estimate = 0.0;
    double r2 = 0.0;
    bool flagged = false;  // r2 below the configured minimum
    std::vector<int> levels;
    std::vector<std::size_t> counts;
};

/// Least-squares slope of log N(2^-l) against l log 2 over dyadic levels
/// level_min..level_max.
BoxDimension box_counting_dimension(const OrbitCloud& cloud, int level_min, int level_max, double r2_min = 0.9);

struct LyapunovSpectrum {
    std::vector<double> exponents;  // descending, nats per iterate
    std::size_t steps = 0;
    std::size_t restarts = 0;
};

LyapunovSpectrum lyapunov_spectrum(const MapSpec& spec, std::size_t steps, std::uint64_t seed,
                                   std::size_t transient = 1000);

struct ClassifierConfig {
    std::uint64_t seed = 1;
    std::size_t transient = 1000;
    std::size_t count = 200000;
    std::size_t lyapunov_steps = 20000;
    int box_level_min = 2;
    int box_level_max = 6;
    double exponent_margin = 0.05;
    double cantor_threshold = 0.75;  // transverse residual below this counts as Cantor
    double r2_min = 0.9;
    double sink_diameter = 1e-6;

    nlohmann::json to_json() const;
};

ClassifierConfig classifier_config_from_json(const nlohmann::json& j, ClassifierConfig base = {});

/// dim Lambda = dim E^u + s, s = 0 when the transverse residual
/// (box - dim E^u) is below the Cantor threshold, else its rounding; capped
/// at 3. A collapsed cloud gives dim Lambda = 0.
int topological_dimension(double box_estimate, int dim_eu, bool collapsed, double cantor_threshold);

/// Runs generate -> box dimension -> Lyapunov -> rounding -> classify.
/// Errors carry the failing stage name. The JSON has "schema_version",
/// "class_label", "quality_ok" and full provenance.
nlohmann::json report(const MapSpec& spec, const ClassifierConfig& config);

/// One report per spec, computed concurrently; output order follows input.
std::vector<nlohmann::json> report_all(const std::vector<MapSpec>& specs, const ClassifierConfig& config);

inline constexpr const char* kReportSchemaVersion = "1.0";

}  // namespace hypsol
