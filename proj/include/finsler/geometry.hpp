#pragma once
#include <vector>

#include "finsler/jet.hpp"
#include "finsler/metric.hpp"
#include "finsler/types.hpp"

namespace finsler {

inline size_t idx2(int n, int i, int j) { return static_cast<size_t>(i) * n + j; }
inline size_t idx3(int n, int i, int j, int k) { return (static_cast<size_t>(i) * n + j) * n + k; }
inline size_t idx4(int n, int i, int j, int k, int l) {
    return ((static_cast<size_t>(i) * n + j) * n + k) * n + l;
}

enum class GeomLevel { metric, connection, curvature };

// Everything the jet pipeline produces at one bundle point. The x and y
// coordinates are both seeded, so every stored jet knows its own mixed
// partials up to the remaining order; derived quantities keep their jets so
// later layers can take more derivatives without re-evaluating the metric.
struct PointGeometry {
    int n = 0;
    BundlePoint p;
    DiffConfig cfg;

    double F = 0;
    Jet Fsq;                // order = jet_order
    std::vector<Jet> g;     // n*n, order-2 jets
    std::vector<Jet> ginv;  // n*n
    Vec gv, ginvv;          // component values
    Vec A;                  // Cartan values, n^3

    std::vector<Jet> spray; // n
    std::vector<Jet> N;     // n*n
    std::vector<Jet> Gamma; // n^3, symmetric in the last two slots
    Vec Nv, Gammav;

    Vec R4;                 // n^4; see curvature.hpp for the slot convention
    Vec ric;                // n*n
    double scal = 0;
    Vec E;                  // n*n trace-free part
    double ric_az = 0;      // l^i l^j Ric_ij

    GeomLevel level = GeomLevel::metric;
};

PointGeometry compute_geometry(const MetricSpec& spec, const BundlePoint& p,
                               const DiffConfig& cfg = {}, GeomLevel level = GeomLevel::curvature);

// delta/delta x^k of a jet quantity, one derivative order down.
Jet delta_x(const PointGeometry& geo, const Jet& q, int k);

std::vector<Jet> jet_mat_inverse(const std::vector<Jet>& m, int n);

} // namespace finsler
