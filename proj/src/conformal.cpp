#include "finsler/conformal.hpp"

#include <cmath>

namespace finsler {

namespace {

// u, du_i and the plain x-Hessian of u at p, through x-only jets
struct FactorDerivs {
    double u = 0;
    Vec du;     // n
    Vec hess;   // n x n
};

FactorDerivs factor_derivs(const ConformalFactor& u, const Vec& x) {
    int n = static_cast<int>(x.size());
    auto t = JetTable::get(n, 2);
    std::vector<Jet> xj;
    xj.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) xj.push_back(Jet::variable(t, i, x[static_cast<size_t>(i)]));
    ConformalFactor uu = u;
    uu.dim = n;
    Jet uj = uu.eval(xj);

    FactorDerivs out;
    out.u = uj.value();
    out.du.assign(static_cast<size_t>(n), 0.0);
    out.hess.assign(static_cast<size_t>(n) * n, 0.0);
    std::vector<int> e(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        e[static_cast<size_t>(i)] = 1;
        out.du[static_cast<size_t>(i)] = uj.partial(e);
        e[static_cast<size_t>(i)] = 0;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            e[static_cast<size_t>(i)] += 1;
            e[static_cast<size_t>(j)] += 1;
            double v = uj.partial(e);
            mat_at(out.hess, n, i, j) = v;
            mat_at(out.hess, n, j, i) = v;
            e[static_cast<size_t>(i)] -= 1;
            e[static_cast<size_t>(j)] -= 1;
        }
    return out;
}

Vec schouten_from_geo(const PointGeometry& geo) {
    int n = geo.n;
    if (n < 3) throw DimensionError("Schouten tensor needs dimension >= 3");
    Vec S(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            mat_at(S, n, i, j) = (geo.ric[idx2(n, i, j)] -
                                  geo.scal / (2.0 * (n - 1)) * geo.gv[idx2(n, i, j)]) /
                                 (n - 2);
    return S;
}

TensorValue schouten_field_value(const MetricSpec& spec, const BundlePoint& q, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, q, cfg, GeomLevel::curvature);
    Vec S = schouten_from_geo(geo);
    TensorValue T(Signature{1, 1, 0}, geo.n, q);
    std::copy(S.begin(), S.end(), T.components().begin());
    return T;
}

Vec weyl_from(const PointGeometry& geo, const Vec& S) {
    int n = geo.n;
    Vec W = geo.R4;
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    W[idx4(n, l, i, j, k)] += -geo.gv[idx2(n, i, k)] * mat_at(S, n, l, j) +
                                              geo.gv[idx2(n, i, j)] * mat_at(S, n, l, k) -
                                              geo.gv[idx2(n, l, j)] * mat_at(S, n, i, k) +
                                              geo.gv[idx2(n, l, k)] * mat_at(S, n, i, j);
    return W;
}

Vec cotton_from(const PointGeometry& geo, const std::vector<TensorValue>& gradS) {
    int n = geo.n;
    Vec C(static_cast<size_t>(n) * n * n, 0.0); // C_{ijk} = (grad_j S)_{ik} - (grad_k S)_{ij}
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                C[idx3(n, i, j, k)] = gradS[static_cast<size_t>(j)].at({i, k}) -
                                      gradS[static_cast<size_t>(k)].at({i, j});
    return C;
}

} // namespace

MetricSpec deform(const MetricSpec& spec, const ConformalFactor& u) {
    MetricSpec out;
    out.family = MetricFamily::conformal;
    out.dim = spec.dim;
    out.base = std::make_shared<MetricSpec>(spec);
    out.factor = u;
    out.factor.dim = spec.dim;
    out.validate();
    return out;
}

Vec b_map(const MetricSpec& spec, const ConformalFactor& u, const BundlePoint& p, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::metric);
    int n = geo.n;
    FactorDerivs fd = factor_derivs(u, p.x);
    Vec B(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0;
            for (int r = 0; r < n; ++r) {
                Jet q = geo.Fsq * geo.ginv[idx2(n, i, r)];
                double d = q.derivative(n + j).value();
                d -= 2.0 * ((i == j ? p.y[static_cast<size_t>(r)] : 0.0) +
                            (r == j ? p.y[static_cast<size_t>(i)] : 0.0));
                acc += fd.du[static_cast<size_t>(r)] * d;
            }
            mat_at(B, n, i, j) = acc / (2.0 * geo.F);
        }
    return B;
}

Vec lce_residual(const MetricSpec& spec, const ConformalFactor& u, const BundlePoint& p,
                 const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::curvature);
    const int n = geo.n;
    FactorDerivs fd = factor_derivs(u, p.x);

    // horizontal Hessian with the Chern coefficients
    Vec hessH(static_cast<size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double v = mat_at(fd.hess, n, j, i);
            for (int m = 0; m < n; ++m) v -= geo.Gammav[idx3(n, m, j, i)] * fd.du[static_cast<size_t>(m)];
            mat_at(hessH, n, j, i) = v;
        }
    double lap = 0, gradsq = 0;
    for (int a = 0; a < n; ++a)
        for (int bb = 0; bb < n; ++bb) {
            lap += geo.ginvv[idx2(n, a, bb)] * mat_at(hessH, n, a, bb);
            gradsq += geo.ginvv[idx2(n, a, bb)] * fd.du[static_cast<size_t>(a)] * fd.du[static_cast<size_t>(bb)];
        }

    // mean Cartan covector I_s = g^{kl} A_skl
    Vec I(static_cast<size_t>(n), 0.0);
    for (int s = 0; s < n; ++s)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                I[static_cast<size_t>(s)] += geo.ginvv[idx2(n, k, l)] * geo.A[idx3(n, s, k, l)];

    // scalar coupling grad_r u grad^q u d(F^2 g^{rs} - 2 y^r y^s)/dy^q I_s
    Vec duup(static_cast<size_t>(n), 0.0);
    for (int q = 0; q < n; ++q)
        for (int m = 0; m < n; ++m)
            duup[static_cast<size_t>(q)] += geo.ginvv[idx2(n, q, m)] * fd.du[static_cast<size_t>(m)];
    double coupling = 0;
    for (int r = 0; r < n; ++r) {
        if (fd.du[static_cast<size_t>(r)] == 0.0) continue;
        for (int s = 0; s < n; ++s) {
            if (I[static_cast<size_t>(s)] == 0.0) continue;
            Jet q = geo.Fsq * geo.ginv[idx2(n, r, s)];
            for (int d = 0; d < n; ++d) {
                double deriv = q.derivative(n + d).value() -
                               2.0 * ((r == d ? p.y[static_cast<size_t>(s)] : 0.0) +
                                      (s == d ? p.y[static_cast<size_t>(r)] : 0.0));
                coupling += fd.du[static_cast<size_t>(r)] * duup[static_cast<size_t>(d)] * deriv *
                            I[static_cast<size_t>(s)];
            }
        }
    }

    Vec res(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = geo.E[idx2(n, i, j)];
            v -= (n - 2) * (mat_at(hessH, n, j, i) - fd.du[static_cast<size_t>(i)] * fd.du[static_cast<size_t>(j)]);
            v += static_cast<double>(n - 2) / n * (lap - gradsq) * geo.gv[idx2(n, i, j)];
            v += static_cast<double>(n - 1) / (2.0 * n * geo.F) * coupling * geo.gv[idx2(n, i, j)];
            mat_at(res, n, i, j) = v;
        }
    return res;
}

double lce_residual_norm(const MetricSpec& spec, const ConformalFactor& u, const BundlePoint& p,
                         const DiffConfig& cfg) {
    return max_abs(lce_residual(spec, u, p, cfg));
}

TwoPathReport direct_vs_residual_check(const MetricSpec& spec, const ConformalFactor& u,
                                       std::span<const BundlePoint> pts, const DiffConfig& cfg,
                                       double threshold) {
    TwoPathReport rep;
    rep.threshold = threshold;
    MetricSpec tilde = deform(spec, u);
    for (const auto& p : pts) {
        TwoPathPoint tp;
        tp.p = p;
        tp.lce_norm = lce_residual_norm(spec, u, p, cfg);
        tp.direct_norm = einstein_residual(tilde, p, cfg);
        tp.lce_zero = tp.lce_norm <= threshold;
        tp.direct_zero = tp.direct_norm <= threshold;
        tp.agree = tp.lce_zero == tp.direct_zero;
        rep.all_agree = rep.all_agree && tp.agree;
        rep.points.push_back(std::move(tp));
    }
    return rep;
}

Vec schouten(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    return schouten_from_geo(compute_geometry(spec, p, cfg, GeomLevel::curvature));
}

TensorValue weyl(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::curvature);
    Vec W = weyl_from(geo, schouten_from_geo(geo));
    TensorValue T(Signature{2, 2, 0}, geo.n, p);
    std::copy(W.begin(), W.end(), T.components().begin());
    return T;
}

TensorValue cotton_york(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::connection);
    if (geo.n < 3) throw DimensionError("Cotton-York tensor needs dimension >= 3");
    TensorField Sf = [&spec, &cfg](const BundlePoint& q) { return schouten_field_value(spec, q, cfg); };
    auto gradS = horizontal_gradient(geo, spec, Sf);
    Vec C = cotton_from(geo, gradS);
    TensorValue T(Signature{1, 2, 0}, geo.n, p);
    std::copy(C.begin(), C.end(), T.components().begin());
    return T;
}

Vec bach(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::curvature);
    const int n = geo.n;
    if (n < 3) throw DimensionError("Bach tensor needs dimension >= 3");
    TensorField Cf = [&spec, &cfg](const BundlePoint& q) { return cotton_york(spec, q, cfg); };
    auto gradC = horizontal_gradient(geo, spec, Cf);

    Vec S = schouten_from_geo(geo);
    Vec W = weyl_from(geo, S);
    Vec Sup(static_cast<size_t>(n) * n, 0.0); // S^{lk}
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) {
            double acc = 0;
            for (int a = 0; a < n; ++a)
                for (int bb = 0; bb < n; ++bb)
                    acc += geo.ginvv[idx2(n, l, a)] * mat_at(S, n, a, bb) * geo.ginvv[idx2(n, bb, k)];
            mat_at(Sup, n, l, k) = acc;
        }

    Vec B(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = 0;
            for (int k = 0; k < n; ++k)
                for (int m = 0; m < n; ++m)
                    v += geo.ginvv[idx2(n, k, m)] * gradC[static_cast<size_t>(m)].at({i, j, k});
            for (int l = 0; l < n; ++l)
                for (int k = 0; k < n; ++k) v += mat_at(Sup, n, l, k) * W[idx4(n, l, i, j, k)];
            mat_at(B, n, i, j) = v;
        }
    return B;
}

double weyl_divergence_check(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    PointGeometry geo = compute_geometry(spec, p, cfg, GeomLevel::curvature);
    const int n = geo.n;
    if (n < 3) throw DimensionError("Weyl divergence identity needs dimension >= 3");

    TensorField Wf = [&spec, &cfg](const BundlePoint& q) { return weyl(spec, q, cfg); };
    auto gradW = horizontal_gradient(geo, spec, Wf);

    TensorField Sf = [&spec, &cfg](const BundlePoint& q) { return schouten_field_value(spec, q, cfg); };
    auto gradS = horizontal_gradient(geo, spec, Sf);
    Vec C = cotton_from(geo, gradS);

    double res = 0;
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double div = 0;
                for (int i = 0; i < n; ++i)
                    for (int m = 0; m < n; ++m)
                        div += geo.ginvv[idx2(n, i, m)] * gradW[static_cast<size_t>(m)].at({l, i, j, k});
                double rhs = (n - 3) * C[idx3(n, l, k, j)];
                res = std::max(res, std::fabs(div - rhs));
            }
    return res;
}

ConformalClassification classify(const MetricSpec& spec, std::span<const ConformalFactor> u_families,
                                 std::span<const BundlePoint> pts, const DiffConfig& cfg,
                                 const ClassifyConfig& cc) {
    ConformalClassification out;
    out.n = spec.dim;
    for (const auto& p : pts) {
        out.max_cartan_norm = std::max(out.max_cartan_norm, mean_cartan_norm(spec, p, cfg));
        out.max_einstein_residual = std::max(out.max_einstein_residual, einstein_residual(spec, p, cfg));
        if (spec.dim == 3)
            out.max_cotton = std::max(out.max_cotton, cotton_york(spec, p, cfg).max_abs());
        if (spec.dim == 4) out.max_bach = std::max(out.max_bach, max_abs(bach(spec, p, cfg)));
    }
    out.riemannian = out.max_cartan_norm <= cc.cartan_zero;
    out.einstein = out.max_einstein_residual <= cc.einstein_zero;
    out.cotton_vanishes = spec.dim == 3 && out.max_cotton <= cc.cotton_zero;
    out.bach_vanishes = spec.dim == 4 && out.max_bach <= cc.bach_zero;

    for (const auto& u : u_families) {
        FactorStat fs;
        fs.u = u;
        fs.u.dim = spec.dim;
        MetricSpec tilde = deform(spec, fs.u);
        for (const auto& p : pts) {
            fs.max_lce = std::max(fs.max_lce, lce_residual_norm(spec, fs.u, p, cfg));
            fs.max_direct = std::max(fs.max_direct, einstein_residual(tilde, p, cfg));
        }
        fs.solves = fs.max_lce <= cc.lce_zero;
        out.factors.push_back(std::move(fs));
    }

    switch (spec.dim) {
    case 2:
        if (out.riemannian)
            out.verdict = "riemannian";
        else if (out.einstein)
            out.verdict = "constant_factor_and_R_Einstein";
        else
            out.verdict = "not_conformally_einstein";
        break;
    case 3:
        out.verdict = out.cotton_vanishes ? "constant_factor_and_cotton_vanishing"
                                          : "not_conformally_einstein";
        break;
    case 4:
        out.verdict = out.bach_vanishes ? "constant_factor_and_bach_vanishing"
                                        : "not_conformally_einstein";
        break;
    default: out.verdict = "no_theorem_verdict"; break;
    }
    return out;
}

} // namespace finsler
