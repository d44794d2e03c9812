#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/connection.hpp"
#include "finsler/sampling.hpp"
#include "finsler/warped.hpp"

using namespace finsler;

TEST_CASE("trivial product of lines is euclidean") {
    MetricSpec w = build_warped(MetricSpec::euclidean_metric(1), MetricSpec::euclidean_metric(1),
                                WarpFunction{WarpFunction::Kind::constant, {1.0}, 1});
    BundlePoint p{{0.3, -0.2}, {0.5, 0.7}};
    FundamentalTensor ft = fundamental_tensor(w, p);
    CHECK(mat_at(ft.g, 2, 0, 0) == doctest::Approx(1.0));
    CHECK(mat_at(ft.g, 2, 1, 1) == doctest::Approx(1.0));
    CHECK(std::fabs(mat_at(ft.g, 2, 0, 1)) < 1e-14);
}

TEST_CASE("block structure of the warped fundamental tensor") {
    MetricSpec w = build_warped(MetricSpec::euclidean_metric(1), MetricSpec::sphere_chart(1, 1.0),
                                WarpFunction{WarpFunction::Kind::cosh, {1.0, 0.0}, 1});
    SampleConfig sc;
    sc.count = 6;
    sc.seed = 3;
    for (const auto& p : sample_points(w, sc)) {
        BlockReport br = warped_block_residuals(w, p);
        CHECK(br.off_diagonal <= 1e-10);
        CHECK(br.base_block <= 1e-9);
        CHECK(br.fiber_block <= 1e-9);
    }
}

TEST_CASE("warped metric stays 1-homogeneous and positive definite") {
    MetricSpec w = build_warped(MetricSpec::sphere_chart(2, 1.0), MetricSpec::sphere_chart(2, 2.0),
                                WarpFunction{WarpFunction::Kind::affine, {1.2, 0.1, -0.05}, 2});
    SampleConfig sc;
    sc.count = 6;
    sc.seed = 4;
    for (const auto& p : sample_points(w, sc)) {
        double F = eval_F(w, p);
        Vec cy = p.y;
        for (auto& v : cy) v *= 2.0;
        CHECK(std::fabs(eval_F(w, {p.x, cy}) - 2 * F) <= 1e-10 * F);
        fundamental_tensor(w, p); // validates positive definiteness internally
    }
}

TEST_CASE("warp and slit domain errors") {
    MetricSpec w = build_warped(MetricSpec::euclidean_metric(1), MetricSpec::euclidean_metric(1),
                                WarpFunction{WarpFunction::Kind::affine, {0.5, 1.0}, 1});
    CHECK_THROWS_AS(eval_F(w, {{-1.0, 0.0}, {1.0, 1.0}}), WarpDomainError);
    CHECK_THROWS_AS(eval_F(w, {{0.5, 0.0}, {0.0, 1.0}}), SlitBundleError);
    CHECK_THROWS_AS(eval_F(w, {{0.5, 0.0}, {1.0, 0.0}}), SlitBundleError);
}

TEST_CASE("connection restriction onto the base and the mixed pattern") {
    SUBCASE("unwarped product has no mixing") {
        MetricSpec w = build_warped(MetricSpec::euclidean_metric(1), MetricSpec::sphere_chart(2, 1.0),
                                    WarpFunction{WarpFunction::Kind::constant, {1.0}, 1});
        SampleConfig sc;
        sc.count = 3;
        sc.seed = 5;
        for (const auto& p : sample_points(w, sc)) {
            Prop21Report pr = check_prop_2_1(w, p);
            CHECK(pr.base_gamma <= 1e-9);
            CHECK(pr.mixed_pattern <= 1e-9);
        }
    }
    SUBCASE("exponential warp gives a unit mixed component") {
        MetricSpec w = build_warped(MetricSpec::euclidean_metric(1), MetricSpec::euclidean_metric(1),
                                    WarpFunction{WarpFunction::Kind::exp, {1.0}, 1});
        SampleConfig sc;
        sc.count = 4;
        sc.seed = 6;
        for (const auto& p : sample_points(w, sc)) {
            Prop21Report pr = check_prop_2_1(w, p);
            CHECK(pr.mixed_pattern <= 1e-7);
            ConnectionData cd = chern_coefficients(w, p);
            CHECK(cd.Gamma[idx3(2, 1, 0, 1)] == doctest::Approx(1.0).epsilon(1e-7));
        }
    }
    SUBCASE("curvature has no base-fiber mixing for quadratic blocks") {
        MetricSpec w = build_warped(MetricSpec::euclidean_metric(2), MetricSpec::sphere_chart(2, 1.0),
                                    WarpFunction{WarpFunction::Kind::affine, {1.0, 0.2, 0.0}, 2});
        SampleConfig sc;
        sc.count = 2;
        sc.seed = 7;
        for (const auto& p : sample_points(w, sc)) {
            Prop21Report pr = check_prop_2_1(w, p);
            CHECK(pr.base_gamma <= 1e-6);
            CHECK(pr.mixed_pattern <= 1e-6);
            CHECK(pr.curvature_mixed <= 1e-6);
        }
    }
}

TEST_CASE("factor families solve their equations") {
    SUBCASE("flat case with a constant factor") {
        double params[] = {0.0, 1.0};
        ConformalFactor u = theorem_1_2_factor(0.0, OdeCase::linear, params);
        Vec x{0.4};
        CHECK(u.value(x) == doctest::Approx(0.0));
        CHECK(max_abs(u.grad(x)) < 1e-14);
    }
    SUBCASE("log-cosh factor satisfies the exponent equation") {
        double params[] = {0.0};
        OdeFamily ode = theorem_1_2_ode(1.0, OdeCase::cosh_profile, params);
        for (double t : {-1.0, 0.0, 0.7}) CHECK(ode.u_ode_residual(t) <= 1e-9);
    }
    SUBCASE("cosine profile satisfies its oscillator equation") {
        double params[] = {0.0, 1.0};
        OdeFamily ode = theorem_1_2_ode(-1.0, OdeCase::cos_profile, params);
        for (double t : {-0.9, 0.2, 1.1}) CHECK(ode.phi_ode_residual(t) <= 1e-9);
    }
    SUBCASE("residual grids for all three families") {
        double p1[] = {2.0, 3.0};
        double p2[] = {0.4};
        double p3[] = {0.2, 1.5};
        OdeFamily fams[] = {theorem_1_2_ode(0.0, OdeCase::linear, p1),
                            theorem_1_2_ode(0.7, OdeCase::cosh_profile, p2),
                            theorem_1_2_ode(-1.3, OdeCase::cos_profile, p3)};
        for (const auto& ode : fams)
            for (int i = 0; i < 20; ++i) {
                double t = -0.5 + i * 0.05; // keeps every family in its positivity window
                CHECK(ode.phi_ode_residual(t) <= 1e-9);
                CHECK(ode.u_ode_residual(t) <= 1e-8);
            }
    }
    SUBCASE("sign mismatches are rejected") {
        double params[] = {0.0};
        CHECK_THROWS_AS(theorem_1_2_factor(-1.0, OdeCase::cosh_profile, params), CaseError);
        CHECK_THROWS_AS(theorem_1_2_factor(1.0, OdeCase::cos_profile, params), CaseError);
        double lin[] = {1.0, 2.0};
        CHECK_THROWS_AS(theorem_1_2_factor(0.5, OdeCase::linear, lin), CaseError);
    }
    SUBCASE("factors outside the positivity window fail loudly") {
        double params[] = {1.0, 0.0}; // phi = t, nonpositive at t <= 0
        ConformalFactor u = theorem_1_2_factor(0.0, OdeCase::linear, params);
        Vec bad{-0.5};
        CHECK_THROWS_AS(u.value(bad), MathDomainError);
        CHECK_FALSE(u.domain_ok(bad));
    }
}

TEST_CASE("cylinder deformations realize all three theorem cases") {
    DiffConfig cfg;
    SampleConfig fsc;
    fsc.count = 3;
    fsc.seed = 8;
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(-0.85 + 0.09 * i);

    SUBCASE("affine phi over a flat fiber") {
        CylinderSpec cyl{MetricSpec::euclidean_metric(2)};
        auto fpts = sample_points(cyl.fiber, fsc);
        double params[] = {2.0, 3.0};
        auto rep = verify_theorem_1_2(cyl, OdeCase::linear, params, grid, fpts, cfg);
        CHECK(rep.precondition_ok);
        CHECK(rep.pass);
        CHECK(rep.max_deformed_residual <= 1e-4);
        CHECK(rep.max_phi_ode <= 1e-9);
    }
    SUBCASE("log-cosh over the unit sphere") {
        CylinderSpec cyl{MetricSpec::sphere_chart(2, 1.0)};
        auto fpts = sample_points(cyl.fiber, fsc);
        double params[] = {0.0};
        auto rep = verify_theorem_1_2(cyl, OdeCase::cosh_profile, params, grid, fpts, cfg);
        CHECK(rep.precondition_ok);
        CHECK(rep.s_star == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(rep.pass);
        CHECK(rep.max_mixed_component <= 1e-4);
    }
    SUBCASE("log-cos over the hyperbolic plane") {
        CylinderSpec cyl{MetricSpec::hyperbolic(2, 1.0)};
        auto fpts = sample_points(cyl.fiber, fsc);
        double params[] = {0.0, 1.0};
        auto rep = verify_theorem_1_2(cyl, OdeCase::cos_profile, params, grid, fpts, cfg);
        CHECK(rep.precondition_ok);
        CHECK(rep.s_star == doctest::Approx(-1.0).epsilon(1e-6));
        CHECK(rep.pass);
    }
    SUBCASE("a fiber without constant scalar curvature is refused") {
        // nonharmonic exponent, so the fiber curvature genuinely varies
        auto t = JetTable::get(2, 2);
        std::vector<double> c(static_cast<size_t>(t->count(2)), 0.0);
        int e[2] = {2, 0};
        c[static_cast<size_t>(t->rank(e))] = 0.25;
        CylinderSpec cyl{MetricSpec::riemannian(2, {}, c)};
        auto fpts = sample_points(cyl.fiber, fsc);
        double params[] = {2.0, 3.0};
        auto rep = verify_theorem_1_2(cyl, OdeCase::linear, params, grid, fpts, cfg);
        CHECK_FALSE(rep.precondition_ok);
        CHECK_FALSE(rep.pass);
        CHECK(!rep.precondition_note.empty());
    }
}
