#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "finsler/report.hpp"
#include "schema_check.hpp"

using namespace finsler;

namespace {

ojson load_schema() {
    std::ifstream in(std::string(TEST_SOURCE_DIR) + "/../schemas/geometry_report.schema.json");
    REQUIRE(in.good());
    ojson s;
    in >> s;
    return s;
}

RunConfig basic(MetricSpec spec, int count = 5, uint64_t seed = 42) {
    RunConfig rc;
    rc.metric = std::move(spec);
    rc.sample.count = count;
    rc.sample.seed = seed;
    return rc;
}

} // namespace

TEST_CASE("tensors report on flat space has vanishing curvature columns") {
    RunConfig rc = basic(MetricSpec::euclidean_metric(3));
    GeometryReport rep = cmd_tensors(rc);
    CHECK(rep.all_pass);
    REQUIRE(rep.doc.at("points").size() == 5);
    for (const auto& jp : rep.doc.at("points")) {
        CHECK(jp.at("scal_h").get<double>() == doctest::Approx(0.0));
        CHECK(jp.at("einstein_residual").get<double>() < 1e-12);
        CHECK(jp.at("bianchi_residual").get<double>() < 1e-10);
        for (const auto& a : jp.at("hh_curvature"))
            for (const auto& b : a)
                for (const auto& c : b)
                    for (const auto& v : c) CHECK(std::fabs(v.get<double>()) < 1e-12);
    }
    CHECK(schema_check::check(load_schema(), rep.doc).empty());
}

TEST_CASE("tensors report on the sphere carries a constant scal column") {
    RunConfig rc = basic(MetricSpec::sphere_chart(2, 1.0));
    GeometryReport rep = cmd_tensors(rc);
    for (const auto& jp : rep.doc.at("points"))
        CHECK(jp.at("scal_h").get<double>() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("tensors report on a randers metric shows a cartan column") {
    RunConfig rc = basic(MetricSpec::randers_metric({0.5, 0.0}));
    GeometryReport rep = cmd_tensors(rc);
    for (const auto& jp : rep.doc.at("points")) CHECK(jp.at("cartan_norm").get<double>() > 1e-3);
}

TEST_CASE("einstein verdicts") {
    SUBCASE("sphere") {
        RunConfig rc = basic(MetricSpec::sphere_chart(3, 1.0), 4);
        GeometryReport rep = cmd_check_einstein(rc);
        CHECK(rep.all_pass);
        CHECK(rep.doc.at("summary").at("verdict") == "ricci_constant");
    }
    SUBCASE("euclidean") {
        RunConfig rc = basic(MetricSpec::euclidean_metric(2), 4);
        GeometryReport rep = cmd_check_einstein(rc);
        CHECK(rep.all_pass);
        CHECK(rep.doc.at("summary").at("verdict") == "ricci_flat");
    }
    SUBCASE("unequal sphere product fails the residual check") {
        MetricSpec prod;
        prod.family = MetricFamily::warped;
        prod.dim = 4;
        prod.base = std::make_shared<MetricSpec>(MetricSpec::sphere_chart(2, 1.0));
        prod.fiber = std::make_shared<MetricSpec>(MetricSpec::sphere_chart(2, 2.0));
        prod.warp = WarpFunction{WarpFunction::Kind::constant, {1.0}, 2};
        RunConfig rc = basic(prod, 3);
        GeometryReport rep = cmd_check_einstein(rc);
        CHECK_FALSE(rep.all_pass);
        CHECK(rep.doc.at("summary").at("verdict") == "not_einstein");
    }
}

TEST_CASE("conformal command") {
    SUBCASE("needs a factor or the sweep") {
        RunConfig rc = basic(MetricSpec::sphere_chart(2, 1.0));
        CHECK_THROWS_AS(cmd_conformal(rc), ConfigError);
    }
    SUBCASE("2d quadratic with a polynomial factor co-vanishes on both paths") {
        RunConfig rc = basic(MetricSpec::riemannian(2, {1.5, 0.2, 0.2, 0.8}), 4);
        ConformalFactor u;
        u.kind = ConformalFactor::Kind::poly;
        u.dim = 2;
        u.coeffs = {0.1, 0.3, -0.2, 0.05, 0.4, -0.1};
        rc.conformal = u;
        GeometryReport rep = cmd_conformal(rc);
        CHECK(rep.all_pass);
        for (const auto& jp : rep.doc.at("points")) {
            CHECK(jp.at("lce_residual").get<double>() <= 1e-6);
            CHECK(jp.at("two_path_agree").get<bool>());
        }
        CHECK(rep.doc.at("summary").at("classification").at("verdict") == "riemannian");
        CHECK(schema_check::check(load_schema(), rep.doc).empty());
    }
    SUBCASE("einstein 3-metric flags cotton") {
        RunConfig rc = basic(MetricSpec::sphere_chart(3, 1.0), 3);
        rc.conformal = ConformalFactor::constant_u(0.2);
        GeometryReport rep = cmd_conformal(rc);
        CHECK(rep.all_pass);
        CHECK(rep.doc.at("summary").at("classification").at("cotton_vanishes").get<bool>());
    }
    SUBCASE("flat 4-metric flags bach") {
        RunConfig rc = basic(MetricSpec::euclidean_metric(4), 1);
        rc.conformal = ConformalFactor::constant_u(0.1);
        GeometryReport rep = cmd_conformal(rc);
        CHECK(rep.all_pass);
        CHECK(rep.doc.at("summary").at("classification").at("bach_vanishes").get<bool>());
    }
    SUBCASE("builtin sweep runs without a factor file") {
        RunConfig rc = basic(MetricSpec::minkowski_quartic(2), 3);
        rc.sweep_builtin_factors = true;
        GeometryReport rep = cmd_conformal(rc);
        CHECK(rep.doc.at("summary").at("classification").at("verdict") ==
              "constant_factor_and_R_Einstein");
    }
}

TEST_CASE("warp command") {
    MetricSpec cyl;
    cyl.family = MetricFamily::warped;
    cyl.dim = 3;
    cyl.base = std::make_shared<MetricSpec>(MetricSpec::euclidean_metric(1));
    cyl.fiber = std::make_shared<MetricSpec>(MetricSpec::sphere_chart(2, 1.0));
    cyl.warp = WarpFunction{WarpFunction::Kind::constant, {1.0}, 1};

    SUBCASE("block checks alone") {
        RunConfig rc = basic(cyl, 3);
        GeometryReport rep = cmd_warp(rc);
        CHECK(rep.all_pass);
        CHECK(schema_check::check(load_schema(), rep.doc).empty());
    }
    SUBCASE("theorem case over the sphere fiber") {
        RunConfig rc = basic(cyl, 3);
        rc.theorem_case = OdeCase::cosh_profile;
        rc.case_params = {0.0};
        GeometryReport rep = cmd_warp(rc);
        CHECK(rep.all_pass);
        auto jt = rep.doc.at("summary").at("theorem_case");
        CHECK(jt.at("precondition_ok").get<bool>());
        CHECK(jt.at("deformed_einstein_residual_max").get<double>() <= 1e-4);
    }
    SUBCASE("non-cylinder rejects theorem cases") {
        MetricSpec w = cyl;
        w.warp = WarpFunction{WarpFunction::Kind::exp, {0.3}, 1};
        RunConfig rc = basic(w, 2);
        rc.theorem_case = OdeCase::linear;
        rc.case_params = {2.0, 3.0};
        CHECK_THROWS_AS(cmd_warp(rc), ConfigError);
    }
}

TEST_CASE("reports are deterministic apart from the timestamp") {
    RunConfig rc = basic(MetricSpec::sphere_chart(2, 1.0), 4, 1234);
    GeometryReport a = cmd_tensors(rc);
    GeometryReport b = cmd_tensors(rc);
    a.doc.erase("generated_at");
    b.doc.erase("generated_at");
    CHECK(report_to_string(a.doc) == report_to_string(b.doc));
}

TEST_CASE("csv flattening emits one row per point") {
    RunConfig rc = basic(MetricSpec::sphere_chart(2, 1.0), 4);
    GeometryReport rep = cmd_tensors(rc);
    std::string csv = report_to_csv(rep.doc);
    size_t rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == 5); // header + 4 points
    CHECK(csv.find("scal_h") != std::string::npos);
    CHECK(csv.find(",x0,") != std::string::npos);
}

TEST_CASE("explicit points are honored and validated") {
    RunConfig rc = basic(MetricSpec::euclidean_metric(2), 1);
    rc.explicit_points = {{{0.0, 0.0}, {3.0, 4.0}}};
    GeometryReport rep = cmd_tensors(rc);
    CHECK(rep.doc.at("points").at(0).at("F").get<double>() == doctest::Approx(5.0));
    rc.explicit_points = {{{0.0, 0.0}, {0.0, 0.0}}};
    CHECK_THROWS_AS(cmd_tensors(rc), SlitBundleError);
}
