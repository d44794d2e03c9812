#pragma once
#include "finsler/fd.hpp"
#include "finsler/geometry.hpp"
#include "finsler/metric.hpp"

namespace finsler {

// Spray, nonlinear connection and Chern coefficients at one point.
// Gamma is torsion-free and N^i_j = Gamma^i_jk y^k holds by construction.
struct ConnectionData {
    BundlePoint base;
    int n = 0;
    Vec G;     // spray coefficients, length n
    Vec N;     // n x n
    Vec Gamma; // n x n x n
};

Vec spray(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});

ConnectionData chern_coefficients(const MetricSpec& spec, const BundlePoint& p,
                                  const DiffConfig& cfg = {});

// Horizontal frame applied to a point-evaluable field:
// delta/delta x^k = d/dx^k - N^m_k d/dy^m, derivatives taken by the FD layer.
double delta_derivative(const MetricSpec& spec, const BundlePoint& p, const ScalarField& field,
                        int direction, const DiffConfig& cfg = {});
TensorValue delta_derivative(const MetricSpec& spec, const BundlePoint& p, const TensorField& field,
                             int direction, const DiffConfig& cfg = {});

} // namespace finsler
