#include "finsler/connection.hpp"

namespace finsler {

Vec spray(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::connection);
    Vec g(static_cast<size_t>(geo.n));
    for (int i = 0; i < geo.n; ++i) g[static_cast<size_t>(i)] = geo.spray[static_cast<size_t>(i)].value();
    return g;
}

ConnectionData chern_coefficients(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::connection);
    ConnectionData out;
    out.base = p;
    out.n = geo.n;
    out.G.resize(static_cast<size_t>(geo.n));
    for (int i = 0; i < geo.n; ++i) out.G[static_cast<size_t>(i)] = geo.spray[static_cast<size_t>(i)].value();
    out.N = geo.Nv;
    out.Gamma = geo.Gammav;
    return out;
}

double delta_derivative(const MetricSpec& spec, const BundlePoint& p, const ScalarField& field,
                        int direction, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::connection);
    int n = geo.n;
    double d = outer_fd_scalar(field, p, direction, cfg);
    for (int m = 0; m < n; ++m) {
        double nm = geo.Nv[idx2(n, m, direction)];
        if (nm != 0.0) d -= nm * outer_fd_scalar(field, p, n + m, cfg);
    }
    return d;
}

TensorValue delta_derivative(const MetricSpec& spec, const BundlePoint& p, const TensorField& field,
                             int direction, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::connection);
    int n = geo.n;
    TensorValue d = outer_fd_tensor(field, p, direction, cfg);
    for (int m = 0; m < n; ++m) {
        double nm = geo.Nv[idx2(n, m, direction)];
        if (nm != 0.0) d -= outer_fd_tensor(field, p, n + m, cfg) * nm;
    }
    return d;
}

} // namespace finsler
