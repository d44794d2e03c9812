#include "finsler/warped.hpp"

#include <cmath>

#include "finsler/curvature.hpp"
#include "finsler/geometry.hpp"

namespace finsler {

MetricSpec build_warped(const MetricSpec& base, const MetricSpec& fiber, const WarpFunction& warp) {
    MetricSpec s;
    s.family = MetricFamily::warped;
    s.dim = base.dim + fiber.dim;
    s.base = std::make_shared<MetricSpec>(base);
    s.fiber = std::make_shared<MetricSpec>(fiber);
    s.warp = warp;
    s.warp.dim = base.dim;
    s.validate();
    return s;
}

MetricSpec CylinderSpec::to_metric() const {
    return build_warped(MetricSpec::euclidean_metric(1), fiber,
                        WarpFunction{WarpFunction::Kind::constant, {1.0}, 1});
}

BlockReport warped_block_residuals(const MetricSpec& warped, const BundlePoint& p, const DiffConfig& cfg) {
    if (warped.family != MetricFamily::warped) throw ConfigError("expected a warped metric spec");
    const int n = warped.dim, n1 = warped.base->dim;
    FundamentalTensor g = fundamental_tensor(warped, p, cfg);

    BundlePoint p1{Vec(p.x.begin(), p.x.begin() + n1), Vec(p.y.begin(), p.y.begin() + n1)};
    BundlePoint p2{Vec(p.x.begin() + n1, p.x.end()), Vec(p.y.begin() + n1, p.y.end())};
    FundamentalTensor g1 = fundamental_tensor(*warped.base, p1, cfg);
    FundamentalTensor g2 = fundamental_tensor(*warped.fiber, p2, cfg);
    double f = warped.warp.value(p1.x);

    BlockReport rep;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bool bi = i < n1, bj = j < n1;
            double v = mat_at(g.g, n, i, j);
            if (bi != bj)
                rep.off_diagonal = std::max(rep.off_diagonal, std::fabs(v));
            else if (bi)
                rep.base_block = std::max(rep.base_block, std::fabs(v - mat_at(g1.g, n1, i, j)));
            else
                rep.fiber_block = std::max(
                    rep.fiber_block,
                    std::fabs(v - f * f * mat_at(g2.g, n - n1, i - n1, j - n1)));
        }
    return rep;
}

Prop21Report check_prop_2_1(const MetricSpec& warped, const BundlePoint& p, const DiffConfig& cfg) {
    if (warped.family != MetricFamily::warped) throw ConfigError("expected a warped metric spec");
    const int n = warped.dim, n1 = warped.base->dim;
    PointGeometry geo = compute_geometry(warped, p, cfg, GeomLevel::curvature);

    BundlePoint p1{Vec(p.x.begin(), p.x.begin() + n1), Vec(p.y.begin(), p.y.begin() + n1)};
    PointGeometry geo1 = compute_geometry(*warped.base, p1, cfg,
                                          cfg.jet_order >= 4 ? GeomLevel::connection : GeomLevel::metric);

    Prop21Report rep;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j)
            for (int k = 0; k < n1; ++k)
                rep.base_gamma = std::max(rep.base_gamma,
                                          std::fabs(geo.Gammav[idx3(n, i, j, k)] -
                                                    geo1.Gammav[idx3(n1, i, j, k)]));

    // d_i f / f on the base chart
    auto t1 = JetTable::get(n1, 1);
    std::vector<Jet> x1;
    for (int i = 0; i < n1; ++i) x1.push_back(Jet::variable(t1, i, p1.x[static_cast<size_t>(i)]));
    WarpFunction w = warped.warp;
    w.dim = n1;
    Jet fj = w.eval(x1);
    double f = fj.value();
    Vec dlogf(static_cast<size_t>(n1), 0.0);
    std::vector<int> e(static_cast<size_t>(n1), 0);
    for (int i = 0; i < n1; ++i) {
        e[static_cast<size_t>(i)] = 1;
        dlogf[static_cast<size_t>(i)] = fj.partial(e) / f;
        e[static_cast<size_t>(i)] = 0;
    }
    for (int g_ = n1; g_ < n; ++g_)
        for (int i = 0; i < n1; ++i)
            for (int b = n1; b < n; ++b) {
                double want = (g_ == b) ? dlogf[static_cast<size_t>(i)] : 0.0;
                rep.mixed_pattern = std::max(rep.mixed_pattern,
                                             std::fabs(geo.Gammav[idx3(n, g_, i, b)] - want));
            }

    for (int l = 0; l < n1; ++l)
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n1; ++j)
                for (int k = n1; k < n; ++k)
                    rep.curvature_mixed = std::max(rep.curvature_mixed,
                                                   std::fabs(geo.R4[idx4(n, l, i, j, k)]));
    return rep;
}

std::string ode_case_name(OdeCase c) {
    switch (c) {
    case OdeCase::linear: return "linear";
    case OdeCase::cosh_profile: return "cosh";
    case OdeCase::cos_profile: return "cos";
    }
    return "?";
}

namespace {

ConformalFactor factor_for(const OdeFamily& ode) {
    ConformalFactor u;
    u.dim = 1;
    switch (ode.family) {
    case OdeCase::linear:
        u.kind = ConformalFactor::Kind::log_affine;
        u.coeffs = {ode.params[0], ode.params[1]};
        break;
    case OdeCase::cosh_profile:
        u.kind = ConformalFactor::Kind::log_cosh;
        u.coeffs = {std::sqrt(ode.s_star), ode.params[0]};
        break;
    case OdeCase::cos_profile:
        u.kind = ConformalFactor::Kind::log_cos;
        u.coeffs = {std::sqrt(-ode.s_star), ode.params[0], ode.params.size() > 1 ? ode.params[1] : 1.0};
        break;
    }
    u.validate();
    return u;
}

} // namespace

double OdeFamily::phi(double t) const {
    switch (family) {
    case OdeCase::linear: return params[0] * t + params[1];
    case OdeCase::cosh_profile: return std::cosh(std::sqrt(s_star) * t + params[0]);
    case OdeCase::cos_profile:
        return (params.size() > 1 ? params[1] : 1.0) * std::cos(std::sqrt(-s_star) * t + params[0]);
    }
    return 0;
}

double OdeFamily::phi_ode_residual(double t) const {
    auto tt = JetTable::get(1, 2);
    Jet tj = Jet::variable(tt, 0, t);
    Jet pj;
    switch (family) {
    case OdeCase::linear: pj = params[0] * tj + params[1]; break;
    case OdeCase::cosh_profile: pj = jet_cosh(std::sqrt(s_star) * tj + params[0]); break;
    case OdeCase::cos_profile:
        pj = (params.size() > 1 ? params[1] : 1.0) * jet_cos(std::sqrt(-s_star) * tj + params[0]);
        break;
    }
    int e2[1] = {2};
    double ddphi = pj.partial(e2);
    return std::fabs(ddphi - s_star * pj.value());
}

double OdeFamily::u_ode_residual(double t) const {
    ConformalFactor u = factor_for(*this);
    auto tt = JetTable::get(1, 2);
    std::vector<Jet> tj{Jet::variable(tt, 0, t)};
    Jet uj = u.eval(tj);
    int e1[1] = {1}, e2[1] = {2};
    double du = uj.partial(e1), ddu = uj.partial(e2);
    return std::fabs(ddu - du * du + s_star);
}

OdeFamily theorem_1_2_ode(double s_star, OdeCase family, std::span<const double> params) {
    constexpr double sign_eps = 1e-8;
    if (family == OdeCase::linear && std::fabs(s_star) > sign_eps)
        throw CaseError("linear factor family requires vanishing fiber scalar curvature, got s* = " +
                        std::to_string(s_star));
    if (family == OdeCase::cosh_profile && s_star <= sign_eps)
        throw CaseError("cosh factor family requires positive fiber scalar curvature, got s* = " +
                        std::to_string(s_star));
    if (family == OdeCase::cos_profile && s_star >= -sign_eps)
        throw CaseError("cos factor family requires negative fiber scalar curvature, got s* = " +
                        std::to_string(s_star));
    OdeFamily ode;
    ode.family = family;
    ode.s_star = family == OdeCase::linear ? 0.0 : s_star;
    ode.params.assign(params.begin(), params.end());
    size_t want = family == OdeCase::linear ? 2 : (family == OdeCase::cosh_profile ? 1 : 2);
    if (ode.params.size() < (family == OdeCase::cos_profile ? 1 : want))
        throw ConfigError("not enough parameters for the " + ode_case_name(family) + " factor family");
    if (family == OdeCase::cos_profile && ode.params.size() == 1) ode.params.push_back(1.0);
    return ode;
}

ConformalFactor theorem_1_2_factor(double s_star, OdeCase family, std::span<const double> params) {
    return factor_for(theorem_1_2_ode(s_star, family, params));
}

Theorem12Report verify_theorem_1_2(const CylinderSpec& cylinder, OdeCase family,
                                   std::span<const double> params, std::span<const double> t_grid,
                                   std::span<const BundlePoint> fiber_points, const DiffConfig& cfg,
                                   double tolerance) {
    Theorem12Report rep;
    rep.family = family;
    rep.tolerance = tolerance;
    const MetricSpec& fiber = cylinder.fiber;
    const int n = 1 + fiber.dim;
    if (n < 3) throw DimensionError("theorem check needs total dimension >= 3");

    EinsteinReport fiber_rep = classify_einstein(fiber, fiber_points, cfg, tolerance);
    rep.fiber_scal = 0.5 * (fiber_rep.scal_min + fiber_rep.scal_max);
    if (fiber_rep.verdict == EinsteinVerdict::not_einstein ||
        fiber_rep.scal_max - fiber_rep.scal_min > tolerance * std::max(1.0, std::fabs(rep.fiber_scal))) {
        rep.precondition_ok = false;
        rep.precondition_note = "fiber is not horizontally Ricci-constant (residual " +
                                std::to_string(fiber_rep.max_residual) + ", scal range [" +
                                std::to_string(fiber_rep.scal_min) + ", " +
                                std::to_string(fiber_rep.scal_max) + "])";
        return rep;
    }
    rep.precondition_ok = true;
    rep.s_star = rep.fiber_scal / ((n - 1.0) * (n - 2.0));

    OdeFamily ode = theorem_1_2_ode(std::fabs(rep.s_star) < 1e-8 ? 0.0 : rep.s_star, family, params);
    ConformalFactor u = factor_for(ode);
    MetricSpec cyl = cylinder.to_metric();
    MetricSpec tilde = deform(cyl, u);

    for (double t : t_grid) {
        rep.max_phi_ode = std::max(rep.max_phi_ode, ode.phi_ode_residual(t));
        rep.max_u_ode = std::max(rep.max_u_ode, ode.u_ode_residual(t));
        for (const auto& fp : fiber_points) {
            BundlePoint p;
            p.x.assign(1, t);
            p.x.insert(p.x.end(), fp.x.begin(), fp.x.end());
            p.y.assign(1, 0.7);
            p.y.insert(p.y.end(), fp.y.begin(), fp.y.end());
            PointGeometry geo = compute_geometry(tilde, p, cfg, GeomLevel::curvature);
            rep.max_deformed_residual = std::max(rep.max_deformed_residual, max_abs(geo.E));
            for (int j = 1; j < n; ++j) {
                rep.max_mixed_component =
                    std::max({rep.max_mixed_component, std::fabs(geo.E[idx2(n, 0, j)]),
                              std::fabs(geo.E[idx2(n, j, 0)])});
            }
            ++rep.points;
        }
    }
    rep.pass = rep.max_deformed_residual <= tolerance && rep.max_mixed_component <= tolerance;
    return rep;
}

} // namespace finsler
