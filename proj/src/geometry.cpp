#include "finsler/geometry.hpp"

#include <cmath>

namespace finsler {

std::vector<Jet> jet_mat_inverse(const std::vector<Jet>& m, int n) {
    std::vector<Jet> a = m;
    const auto& t = m[0].table();
    int order = m[0].order();
    std::vector<Jet> inv(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            inv[idx2(n, i, j)] = Jet::constant(t, i == j ? 1.0 : 0.0, order);

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (scalar_mag(a[idx2(n, r, col)]) > scalar_mag(a[idx2(n, piv, col)])) piv = r;
        if (scalar_mag(a[idx2(n, piv, col)]) < 1e-300)
            throw InvalidMetricError("singular jet matrix");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a[idx2(n, piv, j)], a[idx2(n, col, j)]);
                std::swap(inv[idx2(n, piv, j)], inv[idx2(n, col, j)]);
            }
        Jet d = a[idx2(n, col, col)];
        for (int j = 0; j < n; ++j) {
            a[idx2(n, col, j)] = a[idx2(n, col, j)] / d;
            inv[idx2(n, col, j)] = inv[idx2(n, col, j)] / d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            Jet f = a[idx2(n, r, col)];
            for (int j = 0; j < n; ++j) {
                a[idx2(n, r, j)] -= f * a[idx2(n, col, j)];
                inv[idx2(n, r, j)] -= f * inv[idx2(n, col, j)];
            }
        }
    }
    return inv;
}

Jet delta_x(const PointGeometry& geo, const Jet& q, int k) {
    int n = geo.n;
    Jet d = q.derivative(k);
    for (int m = 0; m < n; ++m) d -= geo.N[idx2(n, m, k)] * q.derivative(n + m);
    return d;
}

PointGeometry compute_geometry(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg,
                               GeomLevel level) {
    cfg.validate();
    validate_point(spec, p);
    const int n = spec.dim;
    const int jo = cfg.jet_order;
    const int lvl = static_cast<int>(level);
    if (lvl >= static_cast<int>(GeomLevel::connection) && jo < 3)
        throw CapabilityError("connection data needs jet order >= 3");
    if (lvl >= static_cast<int>(GeomLevel::curvature) && jo < 4)
        throw CapabilityError("hh-curvature needs jet order >= 4");

    PointGeometry geo;
    geo.n = n;
    geo.p = p;
    geo.cfg = cfg;
    geo.level = level;

    auto t = JetTable::get(2 * n, jo);
    std::vector<Jet> jets;
    jets.reserve(static_cast<size_t>(2 * n));
    for (int i = 0; i < n; ++i) jets.push_back(Jet::variable(t, i, p.x[static_cast<size_t>(i)]));
    for (int i = 0; i < n; ++i) jets.push_back(Jet::variable(t, n + i, p.y[static_cast<size_t>(i)]));
    std::span<const Jet> all(jets);
    auto xs = all.subspan(0, static_cast<size_t>(n));
    auto ys = all.subspan(static_cast<size_t>(n));

    geo.Fsq = f_squared_jet(spec, xs, ys);
    if (!(geo.Fsq.value() > 0)) throw InvalidMetricError("F^2 nonpositive at evaluation point");
    geo.F = std::sqrt(geo.Fsq.value());

    geo.g.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        Jet di = geo.Fsq.derivative(n + i);
        for (int j = i; j < n; ++j) {
            Jet gij = 0.5 * di.derivative(n + j);
            geo.g[idx2(n, i, j)] = gij;
            if (j != i) geo.g[idx2(n, j, i)] = gij;
        }
    }
    geo.gv.assign(static_cast<size_t>(n) * n, 0.0);
    for (size_t i = 0; i < geo.g.size(); ++i) geo.gv[i] = geo.g[i].value();
    double mn = sym_min_eigenvalue(geo.gv, n);
    if (mn <= 0)
        throw InvalidMetricError("fundamental tensor not positive definite (eigenvalue " +
                                 std::to_string(mn) + ")");
    geo.ginv = jet_mat_inverse(geo.g, n);
    geo.ginvv.assign(static_cast<size_t>(n) * n, 0.0);
    for (size_t i = 0; i < geo.ginv.size(); ++i) geo.ginvv[i] = geo.ginv[i].value();

    // Cartan values A_ijk = (F/4) d^3 F^2 / dy^i dy^j dy^k
    if (jo >= 3) {
        geo.A.assign(static_cast<size_t>(n) * n * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                Jet dij = geo.g[idx2(n, i, j)];
                for (int k = 0; k < n; ++k) {
                    double v = 0.5 * geo.F * dij.derivative(n + k).value();
                    geo.A[idx3(n, i, j, k)] = v;
                    geo.A[idx3(n, j, i, k)] = v;
                }
            }
    }

    if (level == GeomLevel::metric) return geo;

    // spray G^i = 1/4 g^{il} (y^k d2F2/dx^k dy^l - dF2/dx^l)
    std::vector<Jet> rhs(static_cast<size_t>(n));
    for (int l = 0; l < n; ++l) {
        Jet dl = geo.Fsq.derivative(n + l); // dF2/dy^l, order jo-1
        Jet acc = -geo.Fsq.derivative(l);   // -dF2/dx^l
        for (int k = 0; k < n; ++k) acc += ys[static_cast<size_t>(k)] * dl.derivative(k);
        rhs[static_cast<size_t>(l)] = acc;
    }
    geo.spray.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Jet acc = Jet::constant(t, 0.0);
        for (int l = 0; l < n; ++l) acc += geo.ginv[idx2(n, i, l)] * rhs[static_cast<size_t>(l)];
        geo.spray[static_cast<size_t>(i)] = 0.25 * acc;
    }

    geo.N.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) geo.N[idx2(n, i, j)] = geo.spray[static_cast<size_t>(i)].derivative(n + j);
    geo.Nv.assign(static_cast<size_t>(n) * n, 0.0);
    for (size_t i = 0; i < geo.N.size(); ++i) geo.Nv[i] = geo.N[i].value();

    // delta g_ij / delta x^k
    std::vector<Jet> dgdel(static_cast<size_t>(n) * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const Jet& gij = geo.g[idx2(n, i, j)];
            for (int k = 0; k < n; ++k) {
                Jet d = delta_x(geo, gij, k);
                dgdel[idx3(n, k, i, j)] = d;
                if (j != i) dgdel[idx3(n, k, j, i)] = d;
            }
        }

    geo.Gamma.resize(static_cast<size_t>(n) * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                Jet acc = Jet::constant(t, 0.0);
                for (int l = 0; l < n; ++l)
                    acc += geo.ginv[idx2(n, i, l)] *
                           (dgdel[idx3(n, k, j, l)] + dgdel[idx3(n, j, l, k)] - dgdel[idx3(n, l, j, k)]);
                Jet gam = 0.5 * acc;
                geo.Gamma[idx3(n, i, j, k)] = gam;
                if (k != j) geo.Gamma[idx3(n, i, k, j)] = gam;
            }
    geo.Gammav.assign(static_cast<size_t>(n) * n * n, 0.0);
    for (size_t i = 0; i < geo.Gamma.size(); ++i) geo.Gammav[i] = geo.Gamma[i].value();

    // N^i_j = Gamma^i_jk y^k must hold by construction
    double nscale = std::max(1.0, inf_norm(geo.Nv));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0;
            for (int k = 0; k < n; ++k) acc += geo.Gammav[idx3(n, i, j, k)] * p.y[static_cast<size_t>(k)];
            if (std::fabs(acc - geo.Nv[idx2(n, i, j)]) > 1e-6 * nscale)
                throw ConsistencyError("nonlinear connection does not match Gamma^i_jk y^k (residual " +
                                       std::to_string(std::fabs(acc - geo.Nv[idx2(n, i, j)])) + ")");
        }

    if (level == GeomLevel::connection) return geo;

    // R^i_jkl = delta Gamma^i_jl / delta x^k - delta Gamma^i_jk / delta x^l
    //           + Gamma^i_km Gamma^m_jl - Gamma^i_lm Gamma^m_jk
    Vec dGam(static_cast<size_t>(n) * n * n * n, 0.0); // [k][i][j][l]
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = j; l < n; ++l) {
                const Jet& gam = geo.Gamma[idx3(n, i, j, l)];
                for (int k = 0; k < n; ++k) {
                    double d = delta_x(geo, gam, k).value();
                    dGam[idx4(n, k, i, j, l)] = d;
                    if (l != j) dGam[idx4(n, k, i, l, j)] = d;
                }
            }

    Vec Rmixed(static_cast<size_t>(n) * n * n * n, 0.0); // R^i_{jkl}
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = dGam[idx4(n, k, i, j, l)] - dGam[idx4(n, l, i, j, k)];
                    for (int m = 0; m < n; ++m)
                        v += geo.Gammav[idx3(n, i, k, m)] * geo.Gammav[idx3(n, m, j, l)] -
                             geo.Gammav[idx3(n, i, l, m)] * geo.Gammav[idx3(n, m, j, k)];
                    Rmixed[idx4(n, i, j, k, l)] = v;
                }

    // Stored hh-curvature R_{lijk} = g_{im} R^m_{lkj}; with this layout
    // Ric_ij = g^{kl} R_{ikjl} reduces to the classical Ricci tensor.
    geo.R4.assign(static_cast<size_t>(n) * n * n * n, 0.0);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double v = 0;
                    for (int m = 0; m < n; ++m) v += geo.gv[idx2(n, i, m)] * Rmixed[idx4(n, m, l, k, j)];
                    geo.R4[idx4(n, l, i, j, k)] = v;
                }

    geo.ric.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = 0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) v += geo.ginvv[idx2(n, k, l)] * geo.R4[idx4(n, i, k, j, l)];
            geo.ric[idx2(n, i, j)] = v;
        }
    geo.scal = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) geo.scal += geo.ginvv[idx2(n, i, j)] * geo.ric[idx2(n, i, j)];
    geo.E = geo.ric;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) geo.E[idx2(n, i, j)] -= geo.scal / n * geo.gv[idx2(n, i, j)];
    geo.ric_az = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            geo.ric_az += p.y[static_cast<size_t>(i)] / geo.F * p.y[static_cast<size_t>(j)] / geo.F *
                          geo.ric[idx2(n, i, j)];
    return geo;
}

} // namespace finsler
