#include "finsler/curvature.hpp"

#include <cmath>

namespace finsler {

CurvatureBundle curvature_bundle(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::curvature);
    int n = geo.n;
    CurvatureBundle out;
    out.base = p;
    out.n = n;
    out.R = TensorValue(Signature{2, 2, 0}, n, p);
    std::copy(geo.R4.begin(), geo.R4.end(), out.R.components().begin());
    out.ric = geo.ric;
    out.scal = geo.scal;
    out.E = geo.E;
    out.ric_az = geo.ric_az;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.ricci_asymmetry = std::max(out.ricci_asymmetry,
                                           std::fabs(geo.ric[idx2(n, i, j)] - geo.ric[idx2(n, j, i)]));
    return out;
}

TensorValue hh_curvature(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    return curvature_bundle(spec, p, cfg).R;
}

Vec ricci_h(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    return compute_geometry(spec, p, cfg, GeomLevel::curvature).ric;
}

double scal_h(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    return compute_geometry(spec, p, cfg, GeomLevel::curvature).scal;
}

Vec trace_free_ricci(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    return compute_geometry(spec, p, cfg, GeomLevel::curvature).E;
}

double akbar_zadeh_ric(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    return compute_geometry(spec, p, cfg, GeomLevel::curvature).ric_az;
}

double einstein_k(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    if (spec.dim < 2) throw DimensionError("flag curvature constant k is undefined in dimension 1");
    return akbar_zadeh_ric(spec, p, cfg) / (spec.dim - 1);
}

namespace {

// subtract one Chern correction per lower slot of T
void apply_gamma_corrections(const PointGeometry& geo, const TensorValue& T, int direction,
                             TensorValue& out) {
    int n = geo.n;
    int r = T.sig().total();
    if (T.sig().q != 0)
        throw ConfigError("horizontal covariant derivative expects a purely covariant tensor");
    std::vector<int> idx(static_cast<size_t>(r), 0);
    std::vector<int> jdx(static_cast<size_t>(r), 0);
    for (;;) {
        double corr = 0;
        for (int s = 0; s < r; ++s) {
            jdx = idx;
            int a = idx[static_cast<size_t>(s)];
            for (int m = 0; m < n; ++m) {
                jdx[static_cast<size_t>(s)] = m;
                corr += geo.Gammav[idx3(n, m, direction, a)] * T.at(jdx);
            }
        }
        out.at(idx) -= corr;
        int s = r - 1;
        while (s >= 0 && ++idx[static_cast<size_t>(s)] == n) idx[static_cast<size_t>(s--)] = 0;
        if (s < 0) break;
    }
}

} // namespace

std::vector<TensorValue> horizontal_gradient(const PointGeometry& geo, const MetricSpec& spec,
                                             const TensorField& field) {
    (void)spec;
    int n = geo.n;
    TensorValue Tc = field(geo.p);
    // one FD sweep per bundle coordinate, shared across all directions
    std::vector<TensorValue> fd(static_cast<size_t>(2 * n));
    for (int c = 0; c < 2 * n; ++c) fd[static_cast<size_t>(c)] = outer_fd_tensor(field, geo.p, c, geo.cfg);

    std::vector<TensorValue> out;
    out.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        TensorValue d = fd[static_cast<size_t>(k)];
        for (int m = 0; m < n; ++m) {
            double nm = geo.Nv[idx2(n, m, k)];
            if (nm != 0.0) d -= fd[static_cast<size_t>(n + m)] * nm;
        }
        apply_gamma_corrections(geo, Tc, k, d);
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<TensorValue> horizontal_gradient(const MetricSpec& spec, const BundlePoint& p,
                                             const TensorField& field, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::connection);
    return horizontal_gradient(geo, spec, field);
}

TensorValue horizontal_covariant_derivative(const MetricSpec& spec, const BundlePoint& p,
                                            const TensorField& field, int direction,
                                            const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::connection);
    int n = geo.n;
    TensorValue d = outer_fd_tensor(field, p, direction, cfg);
    for (int m = 0; m < n; ++m) {
        double nm = geo.Nv[idx2(n, m, direction)];
        if (nm != 0.0) d -= outer_fd_tensor(field, p, n + m, cfg) * nm;
    }
    TensorValue Tc = field(p);
    apply_gamma_corrections(geo, Tc, direction, d);
    return d;
}

double bianchi_residual(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::connection);
    int n = geo.n;
    TensorField Rfield = [&spec, &cfg](const BundlePoint& q) {
        PointGeometry g = compute_geometry(spec, q, cfg, GeomLevel::curvature);
        TensorValue R(Signature{2, 2, 0}, g.n, q);
        std::copy(g.R4.begin(), g.R4.end(), R.components().begin());
        return R;
    };
    auto grad = horizontal_gradient(geo, spec, Rfield);
    double res = 0;
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c) {
                        double s = grad[static_cast<size_t>(a)].at({l, i, c, b}) +
                                   grad[static_cast<size_t>(b)].at({l, i, a, c}) +
                                   grad[static_cast<size_t>(c)].at({l, i, b, a});
                        res = std::max(res, std::fabs(s));
                    }
    return res;
}

double einstein_residual(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::curvature);
    return max_abs(geo.E);
}

double scal_gradient_max(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::connection);
    int n = geo.n;
    ScalarField f = [&spec, &cfg](const BundlePoint& q) {
        return compute_geometry(spec, q, cfg, GeomLevel::curvature).scal;
    };
    std::vector<double> fd(static_cast<size_t>(2 * n));
    for (int c = 0; c < 2 * n; ++c) fd[static_cast<size_t>(c)] = outer_fd_scalar(f, p, c, cfg);
    double res = 0;
    for (int k = 0; k < n; ++k) {
        double d = fd[static_cast<size_t>(k)];
        for (int m = 0; m < n; ++m) d -= geo.Nv[idx2(n, m, k)] * fd[static_cast<size_t>(n + m)];
        res = std::max(res, std::fabs(d));
    }
    return res;
}

std::string verdict_name(EinsteinVerdict v) {
    switch (v) {
    case EinsteinVerdict::not_einstein: return "not_einstein";
    case EinsteinVerdict::einstein_pointwise: return "einstein_pointwise";
    case EinsteinVerdict::ricci_constant: return "ricci_constant";
    case EinsteinVerdict::ricci_flat: return "ricci_flat";
    }
    return "?";
}

EinsteinReport classify_einstein(const MetricSpec& spec, std::span<const BundlePoint> pts,
                                 const DiffConfig& cfg, double tol) {
    EinsteinReport rep;
    rep.points = pts.size();
    bool first = true;
    double max_ric = 0;
    for (const auto& p : pts) {
        PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::curvature);
        rep.max_residual = std::max(rep.max_residual, max_abs(geo.E));
        max_ric = std::max(max_ric, max_abs(geo.ric));
        if (first) {
            rep.scal_min = rep.scal_max = geo.scal;
            first = false;
        } else {
            rep.scal_min = std::min(rep.scal_min, geo.scal);
            rep.scal_max = std::max(rep.scal_max, geo.scal);
        }
        for (int i = 0; i < geo.n; ++i)
            for (int j = 0; j < geo.n; ++j)
                rep.max_asymmetry = std::max(rep.max_asymmetry,
                                             std::fabs(geo.ric[idx2(geo.n, i, j)] - geo.ric[idx2(geo.n, j, i)]));
        if (spec.dim >= 3) rep.max_schur = std::max(rep.max_schur, scal_gradient_max(spec, p, cfg));
    }
    if (rep.max_residual > tol) {
        rep.verdict = EinsteinVerdict::not_einstein;
    } else if (max_ric <= tol) {
        rep.verdict = EinsteinVerdict::ricci_flat;
    } else if (rep.scal_max - rep.scal_min <= tol * std::max(1.0, std::fabs(rep.scal_max))) {
        rep.verdict = EinsteinVerdict::ricci_constant;
    } else {
        rep.verdict = EinsteinVerdict::einstein_pointwise;
    }
    return rep;
}

} // namespace finsler
