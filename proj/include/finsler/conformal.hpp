#pragma once
#include <string>
#include <vector>

#include "finsler/curvature.hpp"
#include "finsler/geometry.hpp"
#include "finsler/metric.hpp"

namespace finsler {

// F -> e^u F as a metric spec of the conformal family.
MetricSpec deform(const MetricSpec& spec, const ConformalFactor& u);

// B^i_j = (1/2F) grad_r u d(F^2 g^{ir} - 2 y^i y^r)/dy^j; vanishes for
// constant u, and its Cartan contraction vanishes for quadratic metrics.
Vec b_map(const MetricSpec& spec, const ConformalFactor& u, const BundlePoint& p,
          const DiffConfig& cfg = {});

// Residual matrix of the locally-conformally-R-Einstein equation evaluated on
// (spec, u) at one point; approximately zero iff e^u F is R-Einstein there.
Vec lce_residual(const MetricSpec& spec, const ConformalFactor& u, const BundlePoint& p,
                 const DiffConfig& cfg = {});

double lce_residual_norm(const MetricSpec& spec, const ConformalFactor& u, const BundlePoint& p,
                         const DiffConfig& cfg = {});

struct TwoPathPoint {
    BundlePoint p;
    double lce_norm = 0;
    double direct_norm = 0;
    bool lce_zero = false, direct_zero = false, agree = false;
};

struct TwoPathReport {
    double threshold = 1e-4;
    std::vector<TwoPathPoint> points;
    bool all_agree = true;
};

// Cross-check of the residual equation against the recomputed trace-free Ricci
// of the deformed metric; the two must agree on zero vs nonzero everywhere.
TwoPathReport direct_vs_residual_check(const MetricSpec& spec, const ConformalFactor& u,
                                       std::span<const BundlePoint> pts, const DiffConfig& cfg = {},
                                       double threshold = 1e-4);

// Conformal tensor hierarchy (n >= 3).
Vec schouten(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});
TensorValue weyl(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});
TensorValue cotton_york(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});
Vec bach(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});

// max-norm of div W - (n-3) C, the divergence identity tying Weyl to Cotton.
double weyl_divergence_check(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});

struct ClassifyConfig {
    double cartan_zero = 1e-6;
    double einstein_zero = 1e-5;
    double lce_zero = 1e-4;
    double cotton_zero = 1e-4;
    double bach_zero = 1e-2;
};

struct FactorStat {
    ConformalFactor u;
    double max_lce = 0;
    double max_direct = 0;
    bool solves = false;
};

struct ConformalClassification {
    int n = 0;
    std::string verdict;
    bool riemannian = false;
    bool einstein = false;
    bool cotton_vanishes = false;
    bool bach_vanishes = false;
    double max_cartan_norm = 0;
    double max_einstein_residual = 0;
    double max_cotton = 0;
    double max_bach = 0;
    std::vector<FactorStat> factors;
};

// Dimension-specific conformal classification over a point sample; candidate
// factors contribute residual statistics only.
ConformalClassification classify(const MetricSpec& spec, std::span<const ConformalFactor> u_families,
                                 std::span<const BundlePoint> pts, const DiffConfig& cfg = {},
                                 const ClassifyConfig& cc = {});

} // namespace finsler
