#pragma once
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "finsler/jet.hpp"
#include "finsler/types.hpp"

namespace finsler {

using ojson = nlohmann::ordered_json;

enum class MetricFamily {
    euclidean,
    riemannian_quadratic,
    round_sphere_chart,
    hyperbolic_chart,
    randers,
    minkowski_norm,
    warped,
    conformal,
};

std::string family_name(MetricFamily f);
MetricFamily family_from_name(const std::string& s);

// Conformal exponent u(x); never depends on y.
struct ConformalFactor {
    enum class Kind { constant, affine, log_cosh, log_cos, poly, log_affine };

    Kind kind = Kind::constant;
    std::vector<double> coeffs{0.0};
    int dim = 1;

    double value(std::span<const double> x) const;
    std::vector<double> grad(std::span<const double> x) const;
    // u evaluated through jet arithmetic on the x-jets of a chart.
    Jet eval(std::span<const Jet> x) const;
    bool domain_ok(std::span<const double> x) const;
    void validate() const;

    static ConformalFactor constant_u(double c) { return {Kind::constant, {c}, 1}; }

    ojson to_json() const;
    static ConformalFactor from_json(const ojson& j, int dim);
};

// Warping function f(x1) > 0 on the base chart.
struct WarpFunction {
    enum class Kind { constant, affine, cosh, cos, exp, poly };

    Kind kind = Kind::constant;
    std::vector<double> coeffs{1.0};
    int dim = 1;

    double value(std::span<const double> x1) const;
    Jet eval(std::span<const Jet> x1) const;
    void validate() const;

    ojson to_json() const;
    static WarpFunction from_json(const ojson& j, int dim);
};

// Declarative description of a Finsler metric: family, chart dimension and
// family-specific parameters. Warped and conformal families nest further specs.
struct MetricSpec {
    MetricFamily family = MetricFamily::euclidean;
    int dim = 2;

    double radius = 1.0;                  // sphere / hyperbolic charts
    std::vector<double> matrix;           // riemannian: constant SPD part (row-major), empty = identity
    std::vector<double> conformal_poly;   // riemannian: graded coefficients of the exponent
    std::vector<double> b;                // randers drift 1-form
    int exponent = 4;                     // minkowski norm exponent (even, >= 4)
    std::shared_ptr<MetricSpec> base;     // randers alpha, warped base, conformal base
    std::shared_ptr<MetricSpec> fiber;    // warped fiber
    WarpFunction warp;                    // warped
    ConformalFactor factor;               // conformal

    void validate() const;

    static MetricSpec euclidean_metric(int n);
    static MetricSpec riemannian(int n, std::vector<double> m, std::vector<double> conf_poly = {});
    static MetricSpec sphere_chart(int n, double r = 1.0);
    static MetricSpec hyperbolic(int n, double r = 1.0);
    static MetricSpec randers_metric(std::vector<double> drift, std::shared_ptr<MetricSpec> alpha = nullptr);
    static MetricSpec minkowski_quartic(int n, int p = 4);

    ojson to_json() const;
    static MetricSpec from_json(const ojson& j);
};

MetricSpec parse_metric_file(const std::string& path);

// Chart-domain and sampling metadata for a family.
struct ChartInfo {
    std::vector<std::pair<double, double>> box; // default sampling box per x coordinate
    double min_fiber_norm = 0.1;                // per y block for warped metrics
    double min_fiber_component = 0.0;           // nondegenerate directions (minkowski norm)
};
ChartInfo chart_info(const MetricSpec& spec);

void validate_point(const MetricSpec& spec, const BundlePoint& p);

// F^2 through jet arithmetic; the single evaluation path every operation uses.
Jet f_squared_jet(const MetricSpec& spec, std::span<const Jet> x, std::span<const Jet> y);

double eval_F(const MetricSpec& spec, const BundlePoint& p);

struct FundamentalTensor {
    double F = 0;
    Vec g;     // n x n, symmetric
    Vec g_inv; // n x n
    Vec l;     // distinguished section y^i / F
};

FundamentalTensor fundamental_tensor(const MetricSpec& spec, const BundlePoint& p,
                                     const DiffConfig& cfg = {});

// A_ijk = (F/2) dg_ij/dy^k, signature (3,0;0); totally symmetric.
TensorValue cartan_tensor(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});

// || g^{jk} A_ijk ||_g; zero exactly for quadratic (Riemannian) metrics.
double mean_cartan_norm(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg = {});

struct ZooEntry {
    std::string name;
    MetricSpec spec;
};
// Canonical metric collection exercised by the identity suites.
std::vector<ZooEntry> zoo();
// Entries of the zoo that are pointwise R-Einstein by construction.
std::vector<ZooEntry> einstein_zoo();
// One-dimensional metrics for the flatness suite.
std::vector<ZooEntry> zoo_dim1();

} // namespace finsler
