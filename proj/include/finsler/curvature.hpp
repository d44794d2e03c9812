#pragma once
#include "finsler/fd.hpp"
#include "finsler/geometry.hpp"
#include "finsler/metric.hpp"

namespace finsler {

// hh-curvature and its traces at one point.
//
// Slot convention for the stored (2,2;0) tensor: R_{lijk} is antisymmetric in
// the horizontal pair (j,k) and normalized so that Ric_ij = g^{kl} R_{ikjl}
// reduces to the classical Ricci tensor for quadratic metrics (positive on
// round spheres). Ric is not symmetrized; its asymmetry is reported.
struct CurvatureBundle {
    BundlePoint base;
    int n = 0;
    TensorValue R;   // signature (2,2;0)
    Vec ric;         // n x n
    double scal = 0;
    Vec E;           // n x n, Ric - (Scal/n) g
    double ric_az = 0;
    double ricci_asymmetry = 0;
};

CurvatureBundle curvature_bundle(const MetricSpec& spec, const BundlePoint& p,
                                 const DiffConfig& cfg = {});

TensorValue hh_curvature(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});
Vec ricci_h(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});
double scal_h(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});
Vec trace_free_ricci(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});
double akbar_zadeh_ric(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});
// flag-curvature scalar k with Ric_az = (n-1) k; undefined in dimension 1
double einstein_k(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});

// Covariant derivative of a (p1,p2;0) tensor field in the horizontal direction
// k: delta T / delta x^k minus one Chern correction per lower slot.
TensorValue horizontal_covariant_derivative(const MetricSpec& spec, const BundlePoint& p,
                                            const TensorField& field, int direction,
                                            const DiffConfig& cfg = {});
// All n horizontal directions at once (shares the FD sweeps).
std::vector<TensorValue> horizontal_gradient(const MetricSpec& spec, const BundlePoint& p,
                                             const TensorField& field, const DiffConfig& cfg = {});
std::vector<TensorValue> horizontal_gradient(const PointGeometry& geo, const MetricSpec& spec,
                                             const TensorField& field);

// max-norm of the cyclic sum of the covariant derivative of R over horizontal
// directions; vanishes identically in the flat and quadratic cases.
double bianchi_residual(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});

// max-norm of E = Ric - (Scal/n) g; zero iff pointwise R-Einstein.
double einstein_residual(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});

// max_k |delta Scal / delta x^k|; constant horizontal scalar curvature gives 0.
double scal_gradient_max(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});

enum class EinsteinVerdict { not_einstein, einstein_pointwise, ricci_constant, ricci_flat };
std::string verdict_name(EinsteinVerdict v);

struct EinsteinReport {
    EinsteinVerdict verdict = EinsteinVerdict::not_einstein;
    double max_residual = 0;     // einstein residual over the sample
    double scal_min = 0, scal_max = 0;
    double max_schur = 0;        // max |grad Scal|, n >= 3 only
    double max_asymmetry = 0;
    size_t points = 0;
};

EinsteinReport classify_einstein(const MetricSpec& spec, std::span<const BundlePoint> pts,
                                 const DiffConfig& cfg = {}, double tol = 1e-6);

} // namespace finsler
