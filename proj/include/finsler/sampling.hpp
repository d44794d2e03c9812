#pragma once
#include <cstdint>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

struct SampleConfig {
    int count = 5;
    uint64_t seed = 1;
    double min_fiber_norm = 0.1;
    std::vector<std::pair<double, double>> box; // empty = family default
};

// Deterministic rejection sampler over the family's chart box. The same seed
// produces the same points on every platform (explicit bit-level uniforms).
std::vector<BundlePoint> sample_points(const MetricSpec& spec, const SampleConfig& sc);

} // namespace finsler
