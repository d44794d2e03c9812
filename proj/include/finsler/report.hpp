#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finsler/conformal.hpp"
#include "finsler/metric.hpp"
#include "finsler/sampling.hpp"
#include "finsler/warped.hpp"

namespace finsler {

// One batch run: metric, optional factor, point sample, derivative settings
// and tolerance overrides. The seed fixes the sample exactly.
struct RunConfig {
    MetricSpec metric;
    std::optional<ConformalFactor> conformal;
    bool sweep_builtin_factors = false;
    std::vector<BundlePoint> explicit_points;
    SampleConfig sample;
    DiffConfig diff;
    std::map<std::string, double> tol;
    std::optional<OdeCase> theorem_case;
    std::vector<double> case_params;
    bool with_timestamp = true;

    double tolerance(const std::string& key, double fallback) const {
        auto it = tol.find(key);
        return it == tol.end() ? fallback : it->second;
    }
};

struct GeometryReport {
    ojson doc;
    bool all_pass = true;
};

GeometryReport cmd_tensors(const RunConfig& rc);
GeometryReport cmd_check_einstein(const RunConfig& rc);
GeometryReport cmd_conformal(const RunConfig& rc);
GeometryReport cmd_warp(const RunConfig& rc);

std::string report_to_csv(const ojson& doc);

// Serialized with a stable key order; identical configs give identical bytes
// apart from the generated_at field.
std::string report_to_string(const ojson& doc);

} // namespace finsler
