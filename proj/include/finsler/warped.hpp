#pragma once
#include <string>
#include <vector>

#include "finsler/conformal.hpp"
#include "finsler/metric.hpp"

namespace finsler {

// F = sqrt(F1^2 + f^2 F2^2) over the product chart.
MetricSpec build_warped(const MetricSpec& base, const MetricSpec& fiber, const WarpFunction& warp);

// Cylinder: 1-dimensional euclidean base, f == 1.
struct CylinderSpec {
    MetricSpec fiber;
    MetricSpec to_metric() const;
};

// Block structure of the fundamental tensor at one point.
struct BlockReport {
    double off_diagonal = 0;   // coupling between base and fiber y-blocks
    double base_block = 0;     // |g_base - g1|
    double fiber_block = 0;    // |g_fiber - f^2 g2|
};
BlockReport warped_block_residuals(const MetricSpec& warped, const BundlePoint& p,
                                   const DiffConfig& cfg = {});

// Connection restriction and mixed-slot pattern of the warped Chern symbols.
struct Prop21Report {
    double base_gamma = 0;     // base block vs the base metric's own symbols
    double mixed_pattern = 0;  // Gamma^gamma_{i beta} vs (d_i f / f) delta^gamma_beta
    double curvature_mixed = 0;// R with two base sections, fiber X and base Y
};
Prop21Report check_prop_2_1(const MetricSpec& warped, const BundlePoint& p, const DiffConfig& cfg = {});

enum class OdeCase { linear, cosh_profile, cos_profile };
std::string ode_case_name(OdeCase c);

// phi solving phi'' = s* phi in the matching sign class, with u = -log phi.
struct OdeFamily {
    OdeCase family = OdeCase::linear;
    double s_star = 0;
    std::vector<double> params; // linear: [alpha, beta]; cosh: [gamma]; cos: [theta, mu]

    double phi(double t) const;
    // |phi'' - s* phi| and |u'' - u'^2 + s*| measured through 1-variable jets
    double phi_ode_residual(double t) const;
    double u_ode_residual(double t) const;
};

// Conformal factor e^u = 1/phi for the matching curvature sign; the family
// must agree with the sign of s_star.
ConformalFactor theorem_1_2_factor(double s_star, OdeCase family, std::span<const double> params);
OdeFamily theorem_1_2_ode(double s_star, OdeCase family, std::span<const double> params);

struct Theorem12Report {
    bool precondition_ok = false; // fiber measured R-Einstein
    std::string precondition_note;
    double fiber_scal = 0;
    double s_star = 0;
    OdeCase family = OdeCase::linear;
    double max_deformed_residual = 0; // einstein residual of e^u F on the grid
    double max_mixed_component = 0;   // base-fiber components of the deformed E
    double max_phi_ode = 0;
    double max_u_ode = 0;
    size_t points = 0;
    bool pass = false;
    double tolerance = 1e-4;
};

// Deform the cylinder over `fiber` by the case factor and measure the
// Einstein residual on a t-grid times a fiber sample.
Theorem12Report verify_theorem_1_2(const CylinderSpec& cylinder, OdeCase family,
                                   std::span<const double> params, std::span<const double> t_grid,
                                   std::span<const BundlePoint> fiber_points,
                                   const DiffConfig& cfg = {}, double tolerance = 1e-4);

} // namespace finsler
