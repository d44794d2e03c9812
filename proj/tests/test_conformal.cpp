#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/conformal.hpp"
#include "finsler/sampling.hpp"
#include "finsler/warped.hpp"

using namespace finsler;

namespace {

ConformalFactor poly2d(std::initializer_list<double> graded) {
    ConformalFactor u;
    u.kind = ConformalFactor::Kind::poly;
    u.dim = 2;
    u.coeffs = graded;
    return u;
}

} // namespace

TEST_CASE("deform is the identity for u = 0 and a homothety for constants") {
    MetricSpec s = MetricSpec::sphere_chart(2, 1.0);
    BundlePoint p{{0.2, -0.3}, {0.7, 0.4}};
    FundamentalTensor g0 = fundamental_tensor(s, p);

    MetricSpec id = deform(s, ConformalFactor::constant_u(0.0));
    FundamentalTensor g1 = fundamental_tensor(id, p);
    for (size_t i = 0; i < g0.g.size(); ++i) CHECK(std::fabs(g1.g[i] - g0.g[i]) < 1e-12);

    double c = 0.35;
    MetricSpec hom = deform(s, ConformalFactor::constant_u(c));
    FundamentalTensor g2 = fundamental_tensor(hom, p);
    for (size_t i = 0; i < g0.g.size(); ++i)
        CHECK(g2.g[i] == doctest::Approx(std::exp(2 * c) * g0.g[i]).epsilon(1e-10));
    CHECK(eval_F(hom, p) == doctest::Approx(std::exp(c) * eval_F(s, p)).epsilon(1e-12));
}

TEST_CASE("lce residual vanishes where the theorems say it must") {
    DiffConfig cfg;
    SUBCASE("constant factor on an einstein metric") {
        MetricSpec s = MetricSpec::sphere_chart(3, 1.0);
        SampleConfig sc;
        sc.count = 4;
        sc.seed = 3;
        for (const auto& p : sample_points(s, sc))
            CHECK(lce_residual_norm(s, ConformalFactor::constant_u(0.4), p, cfg) <= 1e-6);
    }
    SUBCASE("any factor on a 2d quadratic metric") {
        MetricSpec s = MetricSpec::riemannian(2, {1.5, 0.2, 0.2, 0.8});
        ConformalFactor u = poly2d({0.1, 0.3, -0.2, 0.05, 0.4, -0.1}); // generic quadratic
        SampleConfig sc;
        sc.count = 5;
        sc.seed = 4;
        for (const auto& p : sample_points(s, sc)) CHECK(lce_residual_norm(s, u, p, cfg) <= 1e-6);
    }
    SUBCASE("log-cosh profile on the cylinder over the unit sphere") {
        CylinderSpec cyl{MetricSpec::sphere_chart(2, 1.0)};
        MetricSpec m = cyl.to_metric();
        ConformalFactor u;
        u.kind = ConformalFactor::Kind::log_cosh;
        u.coeffs = {1.0, 0.3}; // shifted profile
        u.dim = 3;
        SampleConfig sc;
        sc.count = 5;
        sc.seed = 5;
        for (const auto& p : sample_points(m, sc)) CHECK(lce_residual_norm(m, u, p, cfg) <= 1e-4);
    }
}

TEST_CASE("b-map vanishes for constant factors") {
    auto alpha = std::make_shared<MetricSpec>(MetricSpec::sphere_chart(2, 1.0));
    MetricSpec s = MetricSpec::randers_metric({0.2, 0.0}, alpha);
    BundlePoint p{{0.1, 0.2}, {0.9, -0.4}};
    CHECK(max_abs(b_map(s, ConformalFactor::constant_u(1.7), p)) < 1e-13);
    ConformalFactor aff;
    aff.kind = ConformalFactor::Kind::affine;
    aff.dim = 2;
    aff.coeffs = {0.0, 1.0, 0.0};
    CHECK(max_abs(b_map(s, aff, p)) > 1e-3); // nonzero for a genuinely finslerian metric
}

TEST_CASE("two-path equivalence of the residual equation") {
    DiffConfig cfg;
    SUBCASE("solving pairs co-vanish") {
        CylinderSpec cyl{MetricSpec::sphere_chart(2, 1.0)};
        MetricSpec m = cyl.to_metric();
        ConformalFactor u;
        u.kind = ConformalFactor::Kind::log_cosh;
        u.coeffs = {1.0, 0.0};
        u.dim = 3;
        SampleConfig sc;
        sc.count = 4;
        sc.seed = 6;
        auto pts = sample_points(m, sc);
        TwoPathReport rep = direct_vs_residual_check(m, u, pts, cfg);
        CHECK(rep.all_agree);
        for (const auto& q : rep.points) {
            CHECK(q.lce_zero);
            CHECK(q.direct_zero);
        }
    }
    SUBCASE("non-solving pairs agree on nonzero") {
        MetricSpec s = MetricSpec::euclidean_metric(3);
        ConformalFactor u;
        u.kind = ConformalFactor::Kind::affine;
        u.dim = 3;
        u.coeffs = {0.0, 1.0, 0.0, 0.0}; // u = x^1
        SampleConfig sc;
        sc.count = 4;
        sc.seed = 7;
        auto pts = sample_points(s, sc);
        TwoPathReport rep = direct_vs_residual_check(s, u, pts, cfg);
        CHECK(rep.all_agree);
        for (const auto& q : rep.points) {
            CHECK_FALSE(q.lce_zero);
            CHECK_FALSE(q.direct_zero);
        }
    }
}

TEST_CASE("homothety leaves the trace-free residual unchanged") {
    MetricSpec prod;
    prod.family = MetricFamily::warped;
    prod.dim = 4;
    prod.base = std::make_shared<MetricSpec>(MetricSpec::sphere_chart(2, 1.0));
    prod.fiber = std::make_shared<MetricSpec>(MetricSpec::sphere_chart(2, 2.0));
    prod.warp = WarpFunction{WarpFunction::Kind::constant, {1.0}, 2};
    MetricSpec scaled = deform(prod, ConformalFactor::constant_u(0.5));
    SampleConfig sc;
    sc.count = 3;
    sc.seed = 8;
    for (const auto& p : sample_points(prod, sc)) {
        double a = einstein_residual(prod, p), b = einstein_residual(scaled, p);
        CHECK(b == doctest::Approx(a).epsilon(1e-9));
    }
}

TEST_CASE("conformal tensor hierarchy") {
    DiffConfig cfg;
    SUBCASE("flat space: everything vanishes") {
        for (int n : {3, 4}) {
            MetricSpec s = MetricSpec::euclidean_metric(n);
            BundlePoint p{Vec(static_cast<size_t>(n), 0.1), Vec(static_cast<size_t>(n), 0.0)};
            p.y[0] = 1.0;
            p.y[1] = 0.4;
            CHECK(max_abs(schouten(s, p, cfg)) < 1e-12);
            CHECK(weyl(s, p, cfg).max_abs() < 1e-12);
            CHECK(cotton_york(s, p, cfg).max_abs() < 1e-10);
            CHECK(max_abs(bach(s, p, cfg)) < 1e-9);
        }
    }
    SUBCASE("weyl vanishes identically in dimension 3 on the zoo") {
        for (const auto& z : zoo()) {
            if (z.spec.dim != 3) continue;
            SampleConfig sc;
            sc.count = 3;
            sc.seed = 9;
            for (const auto& p : sample_points(z.spec, sc)) CHECK(weyl(z.spec, p, cfg).max_abs() <= 1e-6);
        }
    }
    SUBCASE("weyl contractions vanish for quadratic metrics") {
        MetricSpec prod;
        prod.family = MetricFamily::warped;
        prod.dim = 4;
        prod.base = std::make_shared<MetricSpec>(MetricSpec::sphere_chart(2, 1.0));
        prod.fiber = std::make_shared<MetricSpec>(MetricSpec::sphere_chart(2, 2.0));
        prod.warp = WarpFunction{WarpFunction::Kind::constant, {1.0}, 2};
        SampleConfig sc;
        sc.count = 2;
        sc.seed = 10;
        for (const auto& p : sample_points(prod, sc)) {
            PointGeometry geo = compute_geometry(prod, p, cfg);
            TensorValue W = weyl(prod, p, cfg);
            int n = 4;
            REQUIRE(W.max_abs() > 0.1); // the check below must not be vacuous
            // contract every slot pair that pairs through g_inv
            double worst = 0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    double c1 = 0, c2 = 0, c3 = 0;
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) {
                            double gi = geo.ginvv[idx2(n, i, j)];
                            c1 += gi * W.at({i, j, a, b});
                            c2 += gi * W.at({i, a, j, b});
                            c3 += gi * W.at({a, i, b, j});
                        }
                    worst = std::max({worst, std::fabs(c1), std::fabs(c2), std::fabs(c3)});
                }
            CHECK(worst <= 1e-6);
        }
    }
    SUBCASE("einstein metrics have vanishing cotton tensor") {
        for (const auto& z : einstein_zoo()) {
            if (z.spec.dim < 3) continue;
            SampleConfig sc;
            sc.count = 2;
            sc.seed = 11;
            for (const auto& p : sample_points(z.spec, sc))
                CHECK(cotton_york(z.spec, p, cfg).max_abs() <= 1e-5);
        }
    }
    SUBCASE("bach vanishes on conformally flat 4-metrics") {
        MetricSpec s = MetricSpec::sphere_chart(4, 1.0);
        BundlePoint p{{0.1, -0.2, 0.15, 0.05}, {0.8, 0.3, -0.5, 0.2}};
        CHECK(max_abs(bach(s, p, cfg)) <= 1e-3);

        ConformalFactor u;
        u.kind = ConformalFactor::Kind::affine;
        u.dim = 4;
        u.coeffs = {0.0, 0.3, -0.2, 0.1, 0.05};
        MetricSpec cf = deform(MetricSpec::euclidean_metric(4), u);
        CHECK(weyl(cf, p, cfg).max_abs() <= 1e-6);
        CHECK(cotton_york(cf, p, cfg).max_abs() <= 1e-4);
        CHECK(max_abs(bach(cf, p, cfg)) <= 1e-3);
        REQUIRE(max_abs(schouten(cf, p, cfg)) > 1e-3); // the metric is genuinely curved
    }
}

TEST_CASE("weyl divergence identity") {
    DiffConfig cfg;
    SUBCASE("dimension 3: both sides vanish") {
        MetricSpec s = MetricSpec::hyperbolic(3, 1.0);
        BundlePoint p{{0.1, -0.1, 0.2}, {0.7, 0.5, -0.3}};
        CHECK(weyl_divergence_check(s, p, cfg) <= 1e-5);
    }
    SUBCASE("dimension 4 products") {
        MetricSpec prod;
        prod.family = MetricFamily::warped;
        prod.dim = 4;
        prod.base = std::make_shared<MetricSpec>(MetricSpec::sphere_chart(2, 1.0));
        prod.fiber = std::make_shared<MetricSpec>(MetricSpec::sphere_chart(2, 2.0));
        prod.warp = WarpFunction{WarpFunction::Kind::constant, {1.0}, 2};
        SampleConfig sc;
        sc.count = 2;
        sc.seed = 12;
        for (const auto& p : sample_points(prod, sc)) CHECK(weyl_divergence_check(prod, p, cfg) <= 1e-3);
    }
    SUBCASE("dimension 4 with nonzero cotton pins the slot convention") {
        MetricSpec w = build_warped(MetricSpec::euclidean_metric(2), MetricSpec::sphere_chart(2, 1.0),
                                    WarpFunction{WarpFunction::Kind::affine, {1.0, 0.2, 0.0}, 2});
        SampleConfig sc;
        sc.count = 2;
        sc.seed = 13;
        for (const auto& p : sample_points(w, sc)) {
            REQUIRE(cotton_york(w, p, cfg).max_abs() > 1e-2);
            CHECK(weyl_divergence_check(w, p, cfg) <= 1e-8);
        }
    }
    SUBCASE("euclidean dimension 4") {
        MetricSpec s = MetricSpec::euclidean_metric(4);
        BundlePoint p{{0.0, 0.0, 0.0, 0.0}, {1.0, 0.2, -0.4, 0.6}};
        CHECK(weyl_divergence_check(s, p, cfg) <= 1e-11);
    }
}

TEST_CASE("classification per dimension") {
    DiffConfig cfg;
    ClassifyConfig cc;
    SUBCASE("2d minkowski norm is conformally R-einstein") {
        MetricSpec s = MetricSpec::minkowski_quartic(2);
        SampleConfig sc;
        sc.count = 5;
        sc.seed = 14;
        auto pts = sample_points(s, sc);
        auto cl = classify(s, {}, pts, cfg, cc);
        CHECK(cl.verdict == "constant_factor_and_R_Einstein");
        CHECK_FALSE(cl.riemannian);
        CHECK(cl.einstein);
    }
    SUBCASE("2d quadratic metric is riemannian") {
        MetricSpec s = MetricSpec::riemannian(2, {1.5, 0.2, 0.2, 0.8});
        SampleConfig sc;
        sc.count = 5;
        sc.seed = 15;
        auto pts = sample_points(s, sc);
        CHECK(classify(s, {}, pts, cfg, cc).verdict == "riemannian");
    }
    SUBCASE("curved 2d randers with nonzero E is not conformally einstein") {
        auto alpha = std::make_shared<MetricSpec>(MetricSpec::sphere_chart(2, 1.0));
        MetricSpec s = MetricSpec::randers_metric({0.2, 0.0}, alpha);
        SampleConfig sc;
        sc.count = 5;
        sc.seed = 16;
        auto pts = sample_points(s, sc);
        auto cl = classify(s, {}, pts, cfg, cc);
        CHECK(cl.verdict == "not_conformally_einstein");
        CHECK(cl.max_cartan_norm > 10 * cc.cartan_zero);
        CHECK(cl.max_einstein_residual > 10 * cc.einstein_zero);
    }
    SUBCASE("einstein 3-metric carries the cotton flag") {
        MetricSpec s = MetricSpec::sphere_chart(3, 1.0);
        SampleConfig sc;
        sc.count = 3;
        sc.seed = 17;
        auto pts = sample_points(s, sc);
        std::vector<ConformalFactor> us{ConformalFactor::constant_u(0.2)};
        auto cl = classify(s, us, pts, cfg, cc);
        CHECK(cl.cotton_vanishes);
        CHECK(cl.verdict == "constant_factor_and_cotton_vanishing");
        REQUIRE(cl.factors.size() == 1);
        CHECK(cl.factors[0].solves);
    }
    SUBCASE("flat 4-metric carries the bach flag") {
        MetricSpec s = MetricSpec::euclidean_metric(4);
        SampleConfig sc;
        sc.count = 2;
        sc.seed = 18;
        auto pts = sample_points(s, sc);
        std::vector<ConformalFactor> us{ConformalFactor::constant_u(-0.3)};
        auto cl = classify(s, us, pts, cfg, cc);
        CHECK(cl.bach_vanishes);
        CHECK(cl.verdict == "constant_factor_and_bach_vanishing");
    }
}

TEST_CASE("dimension guards") {
    MetricSpec s = MetricSpec::euclidean_metric(2);
    BundlePoint p{{0.0, 0.0}, {1.0, 0.2}};
    CHECK_THROWS_AS(schouten(s, p), DimensionError);
    CHECK_THROWS_AS(cotton_york(s, p), DimensionError);
    CHECK_THROWS_AS(bach(s, p), DimensionError);
}
