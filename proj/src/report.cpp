#include "finsler/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include "finsler/curvature.hpp"
#include "finsler/version.hpp"

namespace finsler {

namespace {

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ojson mat_json(const Vec& m, int n) {
    ojson rows = ojson::array();
    for (int i = 0; i < n; ++i) {
        ojson row = ojson::array();
        for (int j = 0; j < n; ++j) row.push_back(mat_at(m, n, i, j));
        rows.push_back(row);
    }
    return rows;
}

ojson ten3_json(const Vec& t, int n) {
    ojson out = ojson::array();
    for (int i = 0; i < n; ++i) {
        ojson mid = ojson::array();
        for (int j = 0; j < n; ++j) {
            ojson row = ojson::array();
            for (int k = 0; k < n; ++k) row.push_back(t[idx3(n, i, j, k)]);
            mid.push_back(row);
        }
        out.push_back(mid);
    }
    return out;
}

ojson ten4_json(const Vec& t, int n) {
    ojson out = ojson::array();
    for (int l = 0; l < n; ++l) {
        ojson a = ojson::array();
        for (int i = 0; i < n; ++i) {
            ojson b = ojson::array();
            for (int j = 0; j < n; ++j) {
                ojson c = ojson::array();
                for (int k = 0; k < n; ++k) c.push_back(t[idx4(n, l, i, j, k)]);
                b.push_back(c);
            }
            a.push_back(b);
        }
        out.push_back(a);
    }
    return out;
}

ojson point_coords(const BundlePoint& p) {
    return ojson{{"x", p.x}, {"y", p.y}};
}

std::vector<BundlePoint> resolve_points(const RunConfig& rc) {
    if (!rc.explicit_points.empty()) {
        for (const auto& p : rc.explicit_points) validate_point(rc.metric, p);
        return rc.explicit_points;
    }
    return sample_points(rc.metric, rc.sample);
}

ojson header(const RunConfig& rc, const std::string& command) {
    ojson doc;
    doc["schema"] = "finslergeo.report.v1";
    doc["command"] = command;
    ojson engine;
    engine["name"] = kEngineName;
    engine["version"] = kEngineVersion;
    engine["jet_order"] = rc.diff.jet_order;
    engine["fd_scheme"] = rc.diff.fd_scheme == FdScheme::central_2 ? "central_2" : "central_4_richardson";
    engine["fd_step"] = rc.diff.fd_step;
    doc["engine"] = engine;
    if (rc.with_timestamp) doc["generated_at"] = iso_timestamp();
    doc["metric"] = rc.metric.to_json();
    if (rc.conformal) doc["conformal"] = rc.conformal->to_json();
    ojson sample;
    sample["count"] = rc.sample.count;
    sample["seed"] = rc.sample.seed;
    sample["min_fiber_norm"] = rc.sample.min_fiber_norm;
    sample["explicit_points"] = !rc.explicit_points.empty();
    doc["sample"] = sample;
    return doc;
}

struct CheckAccum {
    ojson checks = ojson::array();
    bool all_pass = true;

    void add(const std::string& name, double value, double tol) {
        bool pass = value <= tol;
        checks.push_back(ojson{{"name", name}, {"value", value}, {"tol", tol}, {"pass", pass}});
        all_pass = all_pass && pass;
    }
    void add_flag(const std::string& name, bool pass) {
        checks.push_back(ojson{{"name", name}, {"pass", pass}});
        all_pass = all_pass && pass;
    }
};

} // namespace

GeometryReport cmd_tensors(const RunConfig& rc) {
    auto pts = resolve_points(rc);
    ojson doc = header(rc, "tensors");
    const int n = rc.metric.dim;
    double tol_bianchi = rc.tolerance("bianchi", 1e-4);

    double max_bianchi = 0;
    ojson jpts = ojson::array();
    for (size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        PointGeometry geo = compute_geometry(rc.metric, p, rc.diff, GeomLevel::curvature);
        double cart = mean_cartan_norm(rc.metric, p, rc.diff);
        double bianchi = n >= 2 ? bianchi_residual(rc.metric, p, rc.diff) : 0.0;
        max_bianchi = std::max(max_bianchi, bianchi);

        ojson jp;
        jp["index"] = i;
        jp["point"] = point_coords(p);
        jp["F"] = geo.F;
        jp["g"] = mat_json(geo.gv, n);
        jp["g_inv"] = mat_json(geo.ginvv, n);
        jp["cartan_norm"] = cart;
        ojson gvals = ojson::array();
        for (int k = 0; k < n; ++k) gvals.push_back(geo.spray[static_cast<size_t>(k)].value());
        jp["spray"] = gvals;
        jp["nonlinear_connection"] = mat_json(geo.Nv, n);
        jp["chern_gamma"] = ten3_json(geo.Gammav, n);
        jp["hh_curvature"] = ten4_json(geo.R4, n);
        jp["ric_h"] = mat_json(geo.ric, n);
        jp["scal_h"] = geo.scal;
        jp["trace_free_ricci"] = mat_json(geo.E, n);
        jp["ric_az"] = geo.ric_az;
        if (n >= 2) jp["flag_k"] = geo.ric_az / (n - 1);
        jp["einstein_residual"] = max_abs(geo.E);
        jp["bianchi_residual"] = bianchi;
        jpts.push_back(std::move(jp));
    }
    doc["points"] = jpts;

    CheckAccum ca;
    ca.add("bianchi_residual_max", max_bianchi, tol_bianchi);
    doc["summary"] = ojson{{"checks", ca.checks}, {"all_pass", ca.all_pass}};
    return {doc, ca.all_pass};
}

GeometryReport cmd_check_einstein(const RunConfig& rc) {
    auto pts = resolve_points(rc);
    ojson doc = header(rc, "check-einstein");
    const int n = rc.metric.dim;
    double tol = rc.tolerance("einstein", 1e-6);
    double tol_schur = rc.tolerance("schur", 1e-5);

    ojson jpts = ojson::array();
    for (size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        PointGeometry geo = compute_geometry(rc.metric, p, rc.diff, GeomLevel::curvature);
        ojson jp;
        jp["index"] = i;
        jp["point"] = point_coords(p);
        jp["scal_h"] = geo.scal;
        jp["ric_az"] = geo.ric_az;
        jp["einstein_residual"] = max_abs(geo.E);
        if (n >= 3) jp["scal_gradient_max"] = scal_gradient_max(rc.metric, p, rc.diff);
        jpts.push_back(std::move(jp));
    }
    doc["points"] = jpts;

    EinsteinReport er = classify_einstein(rc.metric, pts, rc.diff, tol);
    ojson sum;
    sum["verdict"] = verdict_name(er.verdict);
    sum["einstein_residual_max"] = er.max_residual;
    sum["scal_min"] = er.scal_min;
    sum["scal_max"] = er.scal_max;
    sum["schur_max"] = er.max_schur;
    sum["ricci_asymmetry_max"] = er.max_asymmetry;

    CheckAccum ca;
    ca.add("einstein_residual_max", er.max_residual, tol);
    if (n >= 3 && er.verdict != EinsteinVerdict::not_einstein)
        ca.add("schur_scal_gradient_max", er.max_schur, tol_schur);
    sum["checks"] = ca.checks;
    sum["all_pass"] = ca.all_pass;
    doc["summary"] = sum;
    return {doc, ca.all_pass};
}

GeometryReport cmd_conformal(const RunConfig& rc) {
    if (!rc.conformal && !rc.sweep_builtin_factors)
        throw ConfigError("conformal command needs a factor file or the builtin sweep");
    auto pts = resolve_points(rc);
    ojson doc = header(rc, "conformal");
    const int n = rc.metric.dim;
    double tol_two_path = rc.tolerance("two_path", 1e-4);
    double tol_lce = rc.tolerance("lce", 1e-4);

    std::vector<ConformalFactor> factors;
    if (rc.conformal) {
        factors.push_back(*rc.conformal);
        factors.back().dim = n;
    } else {
        factors.push_back(ConformalFactor::constant_u(0.3));
        ConformalFactor aff;
        aff.kind = ConformalFactor::Kind::affine;
        aff.dim = n;
        aff.coeffs.assign(static_cast<size_t>(n) + 1, 0.0);
        aff.coeffs[0] = 0.05;
        aff.coeffs[1] = 0.2;
        factors.push_back(aff);
    }

    CheckAccum ca;
    ojson jpts = ojson::array();
    if (rc.conformal) {
        TwoPathReport tp = direct_vs_residual_check(rc.metric, factors[0], pts, rc.diff, tol_two_path);
        double max_lce = 0;
        for (size_t i = 0; i < tp.points.size(); ++i) {
            const auto& q = tp.points[i];
            ojson jp;
            jp["index"] = i;
            jp["point"] = point_coords(q.p);
            jp["lce_residual"] = q.lce_norm;
            jp["deformed_einstein_residual"] = q.direct_norm;
            jp["two_path_agree"] = q.agree;
            jpts.push_back(std::move(jp));
            max_lce = std::max(max_lce, q.lce_norm);
        }
        ca.add_flag("two_path_agreement", tp.all_agree);
        ca.add("lce_residual_max", max_lce, tol_lce);
    } else {
        for (size_t i = 0; i < pts.size(); ++i) {
            ojson jp;
            jp["index"] = i;
            jp["point"] = point_coords(pts[i]);
            jp["einstein_residual"] = einstein_residual(rc.metric, pts[i], rc.diff);
            jp["cartan_norm"] = mean_cartan_norm(rc.metric, pts[i], rc.diff);
            jpts.push_back(std::move(jp));
        }
    }
    doc["points"] = jpts;

    ojson sum;
    if (n >= 2 && n <= 4) {
        ClassifyConfig cc;
        cc.lce_zero = tol_lce;
        ConformalClassification cl = classify(rc.metric, factors, pts, rc.diff, cc);
        ojson jc;
        jc["verdict"] = cl.verdict;
        jc["riemannian"] = cl.riemannian;
        jc["einstein"] = cl.einstein;
        jc["max_cartan_norm"] = cl.max_cartan_norm;
        jc["max_einstein_residual"] = cl.max_einstein_residual;
        if (n == 3) {
            jc["cotton_vanishes"] = cl.cotton_vanishes;
            jc["max_cotton"] = cl.max_cotton;
        }
        if (n == 4) {
            jc["bach_vanishes"] = cl.bach_vanishes;
            jc["max_bach"] = cl.max_bach;
        }
        ojson jf = ojson::array();
        for (const auto& fs : cl.factors)
            jf.push_back(ojson{{"factor", fs.u.to_json()},
                               {"lce_residual_max", fs.max_lce},
                               {"deformed_einstein_residual_max", fs.max_direct},
                               {"solves", fs.solves}});
        jc["factors"] = jf;
        sum["classification"] = jc;
    }
    sum["checks"] = ca.checks;
    sum["all_pass"] = ca.all_pass;
    doc["summary"] = sum;
    return {doc, ca.all_pass};
}

GeometryReport cmd_warp(const RunConfig& rc) {
    if (rc.metric.family != MetricFamily::warped)
        throw ConfigError("warp command needs a warped or cylinder metric spec");
    auto pts = resolve_points(rc);
    ojson doc = header(rc, "warp");
    double tol_block = rc.tolerance("block", 1e-9);
    double tol_thm = rc.tolerance("theorem", 1e-4);

    CheckAccum ca;
    double max_off = 0, max_base = 0, max_fiber = 0;
    ojson jpts = ojson::array();
    for (size_t i = 0; i < pts.size(); ++i) {
        BlockReport br = warped_block_residuals(rc.metric, pts[i], rc.diff);
        Prop21Report pr = check_prop_2_1(rc.metric, pts[i], rc.diff);
        max_off = std::max(max_off, br.off_diagonal);
        max_base = std::max(max_base, br.base_block);
        max_fiber = std::max(max_fiber, br.fiber_block);
        ojson jp;
        jp["index"] = i;
        jp["point"] = point_coords(pts[i]);
        jp["g_off_diagonal"] = br.off_diagonal;
        jp["g_base_block_residual"] = br.base_block;
        jp["g_fiber_block_residual"] = br.fiber_block;
        jp["gamma_base_restriction"] = pr.base_gamma;
        jp["gamma_mixed_pattern"] = pr.mixed_pattern;
        jp["curvature_mixed"] = pr.curvature_mixed;
        jpts.push_back(std::move(jp));
    }
    doc["points"] = jpts;
    ca.add("g_off_diagonal_max", max_off, tol_block);
    ca.add("g_base_block_max", max_base, 1e-6);
    ca.add("g_fiber_block_max", max_fiber, 1e-6);

    ojson sum;
    bool is_cylinder = rc.metric.base->family == MetricFamily::euclidean && rc.metric.base->dim == 1 &&
                       rc.metric.warp.kind == WarpFunction::Kind::constant &&
                       rc.metric.warp.coeffs[0] == 1.0;
    if (rc.theorem_case) {
        if (!is_cylinder) throw ConfigError("theorem case checks need a cylinder metric");
        CylinderSpec cyl{*rc.metric.fiber};
        SampleConfig fsc;
        fsc.count = std::max(3, rc.sample.count / 4);
        fsc.seed = rc.sample.seed + 1;
        auto fpts = sample_points(*rc.metric.fiber, fsc);
        std::vector<double> grid;
        for (int i = 0; i < 10; ++i) grid.push_back(-0.9 + 0.2 * i);
        Theorem12Report tr =
            verify_theorem_1_2(cyl, *rc.theorem_case, rc.case_params, grid, fpts, rc.diff, tol_thm);
        ojson jt;
        jt["case"] = ode_case_name(tr.family);
        jt["precondition_ok"] = tr.precondition_ok;
        if (!tr.precondition_ok) jt["precondition_note"] = tr.precondition_note;
        jt["fiber_scal"] = tr.fiber_scal;
        jt["s_star"] = tr.s_star;
        jt["deformed_einstein_residual_max"] = tr.max_deformed_residual;
        jt["mixed_component_max"] = tr.max_mixed_component;
        jt["phi_ode_residual_max"] = tr.max_phi_ode;
        jt["u_ode_residual_max"] = tr.max_u_ode;
        sum["theorem_case"] = jt;
        ca.add_flag("fiber_precondition", tr.precondition_ok);
        if (tr.precondition_ok) {
            ca.add("deformed_einstein_residual_max", tr.max_deformed_residual, tol_thm);
            ca.add("phi_ode_residual_max", tr.max_phi_ode, rc.tolerance("ode", 1e-9));
        }
    }
    sum["checks"] = ca.checks;
    sum["all_pass"] = ca.all_pass;
    doc["summary"] = sum;
    return {doc, ca.all_pass};
}

std::string report_to_string(const ojson& doc) { return doc.dump(2) + "\n"; }

std::string report_to_csv(const ojson& doc) {
    std::ostringstream out;
    out.precision(17);
    if (!doc.contains("points")) return "";
    const auto& pts = doc.at("points");
    // union of scalar columns over all points, in first-seen order
    std::vector<std::string> cols;
    for (const auto& jp : pts)
        for (auto it = jp.begin(); it != jp.end(); ++it) {
            if (it.key() == "point" || it.value().is_array() || it.value().is_object()) continue;
            if (std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
        }
    int n = 0;
    if (!pts.empty()) n = static_cast<int>(pts.at(0).at("point").at("x").size());
    out << "index";
    for (int i = 0; i < n; ++i) out << ",x" << i;
    for (int i = 0; i < n; ++i) out << ",y" << i;
    for (const auto& c : cols)
        if (c != "index") out << "," << c;
    out << "\n";
    for (const auto& jp : pts) {
        out << jp.at("index").get<size_t>();
        for (const char* key : {"x", "y"})
            for (const auto& v : jp.at("point").at(key)) out << "," << v.get<double>();
        for (const auto& c : cols) {
            if (c == "index") continue;
            out << ",";
            if (!jp.contains(c)) continue;
            const auto& v = jp.at(c);
            if (v.is_boolean())
                out << (v.get<bool>() ? 1 : 0);
            else
                out << v.get<double>();
        }
        out << "\n";
    }
    return out.str();
}

} // namespace finsler
