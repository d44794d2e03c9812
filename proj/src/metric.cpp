#include "finsler/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace finsler {

namespace {

// graded coefficient layout shared with the jet tables
int poly_degree(int dim, size_t len) {
    for (int d = 0; d <= 8; ++d) {
        auto t = JetTable::get(dim, d);
        if (static_cast<size_t>(t->count(d)) == len) return d;
    }
    throw ConfigError("polynomial coefficient count " + std::to_string(len) +
                      " does not match any total degree in " + std::to_string(dim) + " variables");
}

Jet poly_eval_jet(int dim, const std::vector<double>& coeffs, std::span<const Jet> x) {
    int deg = poly_degree(dim, coeffs.size());
    auto t = JetTable::get(dim, deg);
    Jet acc = Jet::constant(x[0].table(), 0.0);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0.0) continue;
        Jet term = Jet::constant(x[0].table(), coeffs[i]);
        auto e = t->exponents(static_cast<int>(i));
        for (int v = 0; v < dim; ++v)
            if (e[static_cast<size_t>(v)] > 0) term = term * jet_powi(x[static_cast<size_t>(v)], e[static_cast<size_t>(v)]);
        acc += term;
    }
    return acc;
}

double poly_eval(int dim, const std::vector<double>& coeffs, std::span<const double> x) {
    int deg = poly_degree(dim, coeffs.size());
    auto t = JetTable::get(dim, deg);
    double acc = 0;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0.0) continue;
        double term = coeffs[i];
        auto e = t->exponents(static_cast<int>(i));
        for (int v = 0; v < dim; ++v)
            for (int k = 0; k < e[static_cast<size_t>(v)]; ++k) term *= x[static_cast<size_t>(v)];
        acc += term;
    }
    return acc;
}

std::vector<Jet> lift_x_only(std::span<const double> x, int order) {
    auto t = JetTable::get(static_cast<int>(x.size()), order);
    std::vector<Jet> out;
    out.reserve(x.size());
    for (size_t v = 0; v < x.size(); ++v) out.push_back(Jet::variable(t, static_cast<int>(v), x[v]));
    return out;
}

} // namespace

std::string family_name(MetricFamily f) {
    switch (f) {
    case MetricFamily::euclidean: return "euclidean";
    case MetricFamily::riemannian_quadratic: return "riemannian_quadratic";
    case MetricFamily::round_sphere_chart: return "round_sphere_chart";
    case MetricFamily::hyperbolic_chart: return "hyperbolic_chart";
    case MetricFamily::randers: return "randers";
    case MetricFamily::minkowski_norm: return "minkowski_norm";
    case MetricFamily::warped: return "warped";
    case MetricFamily::conformal: return "conformal";
    }
    throw ConfigError("unknown metric family");
}

MetricFamily family_from_name(const std::string& s) {
    for (auto f : {MetricFamily::euclidean, MetricFamily::riemannian_quadratic,
                   MetricFamily::round_sphere_chart, MetricFamily::hyperbolic_chart,
                   MetricFamily::randers, MetricFamily::minkowski_norm, MetricFamily::warped,
                   MetricFamily::conformal})
        if (family_name(f) == s) return f;
    throw ConfigError("unknown metric family '" + s + "'");
}

// --- ConformalFactor --------------------------------------------------------

void ConformalFactor::validate() const {
    switch (kind) {
    case Kind::constant:
        if (coeffs.size() != 1) throw ConfigError("constant factor takes one coefficient");
        break;
    case Kind::affine:
        if (coeffs.size() != static_cast<size_t>(dim) + 1)
            throw ConfigError("affine factor takes dim+1 coefficients");
        break;
    case Kind::log_cosh:
        if (coeffs.size() != 2) throw ConfigError("log_cosh factor takes coefficients [k, gamma]");
        break;
    case Kind::log_cos:
        if (coeffs.size() != 2 && coeffs.size() != 3)
            throw ConfigError("log_cos factor takes coefficients [k, theta] or [k, theta, mu]");
        if (coeffs.size() == 3 && coeffs[2] <= 0) throw ConfigError("log_cos amplitude must be positive");
        break;
    case Kind::log_affine:
        if (coeffs.size() != 2) throw ConfigError("log_affine factor takes coefficients [alpha, beta]");
        break;
    case Kind::poly:
        poly_degree(dim, coeffs.size());
        break;
    }
}

double ConformalFactor::value(std::span<const double> x) const {
    switch (kind) {
    case Kind::constant: return coeffs[0];
    case Kind::affine: {
        double v = coeffs[0];
        for (int i = 0; i < dim; ++i) v += coeffs[static_cast<size_t>(i) + 1] * x[static_cast<size_t>(i)];
        return v;
    }
    case Kind::log_cosh: return -std::log(std::cosh(coeffs[0] * x[0] + coeffs[1]));
    case Kind::log_cos: {
        double mu = coeffs.size() == 3 ? coeffs[2] : 1.0;
        double phi = mu * std::cos(coeffs[0] * x[0] + coeffs[1]);
        if (phi <= 0) throw MathDomainError("log_cos factor outside its positivity window");
        return -std::log(phi);
    }
    case Kind::log_affine: {
        double phi = coeffs[0] * x[0] + coeffs[1];
        if (phi <= 0) throw MathDomainError("log_affine factor outside its positivity window");
        return -std::log(phi);
    }
    case Kind::poly: return poly_eval(dim, coeffs, x);
    }
    throw ConfigError("unknown conformal factor kind");
}

Jet ConformalFactor::eval(std::span<const Jet> x) const {
    const auto& t = x[0].table();
    switch (kind) {
    case Kind::constant: return Jet::constant(t, coeffs[0]);
    case Kind::affine: {
        Jet v = Jet::constant(t, coeffs[0]);
        for (int i = 0; i < dim; ++i) v += coeffs[static_cast<size_t>(i) + 1] * x[static_cast<size_t>(i)];
        return v;
    }
    case Kind::log_cosh: return -jet_log(jet_cosh(coeffs[0] * x[0] + coeffs[1]));
    case Kind::log_cos: {
        double mu = coeffs.size() == 3 ? coeffs[2] : 1.0;
        return -jet_log(mu * jet_cos(coeffs[0] * x[0] + coeffs[1]));
    }
    case Kind::log_affine: return -jet_log(coeffs[0] * x[0] + coeffs[1]);
    case Kind::poly: return poly_eval_jet(dim, coeffs, x);
    }
    throw ConfigError("unknown conformal factor kind");
}

std::vector<double> ConformalFactor::grad(std::span<const double> x) const {
    auto xj = lift_x_only(x, 1);
    Jet u = eval(xj);
    std::vector<double> g(static_cast<size_t>(dim));
    std::vector<int> e(static_cast<size_t>(dim), 0);
    for (int i = 0; i < dim; ++i) {
        e[static_cast<size_t>(i)] = 1;
        g[static_cast<size_t>(i)] = u.partial(e);
        e[static_cast<size_t>(i)] = 0;
    }
    return g;
}

bool ConformalFactor::domain_ok(std::span<const double> x) const {
    switch (kind) {
    case Kind::log_cos: {
        double mu = coeffs.size() == 3 ? coeffs[2] : 1.0;
        return mu * std::cos(coeffs[0] * x[0] + coeffs[1]) >= 0.05;
    }
    case Kind::log_affine: return coeffs[0] * x[0] + coeffs[1] >= 0.05;
    default: return true;
    }
}

ojson ConformalFactor::to_json() const {
    const char* names[] = {"constant", "affine", "log_cosh", "log_cos", "poly", "log_affine"};
    return ojson{{"kind", names[static_cast<int>(kind)]}, {"coeffs", coeffs}};
}

ConformalFactor ConformalFactor::from_json(const ojson& j, int dim) {
    ConformalFactor f;
    f.dim = dim;
    std::string k = j.at("kind").get<std::string>();
    if (k == "constant") f.kind = Kind::constant;
    else if (k == "affine") f.kind = Kind::affine;
    else if (k == "log_cosh") f.kind = Kind::log_cosh;
    else if (k == "log_cos") f.kind = Kind::log_cos;
    else if (k == "poly") f.kind = Kind::poly;
    else if (k == "log_affine") f.kind = Kind::log_affine;
    else throw ConfigError("unknown conformal factor kind '" + k + "'");
    f.coeffs = j.at("coeffs").get<std::vector<double>>();
    f.validate();
    return f;
}

// --- WarpFunction -----------------------------------------------------------

void WarpFunction::validate() const {
    switch (kind) {
    case Kind::constant:
        if (coeffs.size() != 1 || coeffs[0] <= 0)
            throw ConfigError("constant warp takes one positive coefficient");
        break;
    case Kind::affine:
        if (coeffs.size() != static_cast<size_t>(dim) + 1)
            throw ConfigError("affine warp takes dim+1 coefficients");
        break;
    case Kind::cosh:
    case Kind::cos:
        if (coeffs.size() != 2) throw ConfigError("cosh/cos warp takes coefficients [k, shift]");
        break;
    case Kind::exp:
        if (coeffs.size() != 1) throw ConfigError("exp warp takes one coefficient");
        break;
    case Kind::poly:
        poly_degree(dim, coeffs.size());
        break;
    }
}

double WarpFunction::value(std::span<const double> x1) const {
    switch (kind) {
    case Kind::constant: return coeffs[0];
    case Kind::affine: {
        double v = coeffs[0];
        for (int i = 0; i < dim; ++i) v += coeffs[static_cast<size_t>(i) + 1] * x1[static_cast<size_t>(i)];
        return v;
    }
    case Kind::cosh: return std::cosh(coeffs[0] * x1[0] + coeffs[1]);
    case Kind::cos: return std::cos(coeffs[0] * x1[0] + coeffs[1]);
    case Kind::exp: return std::exp(coeffs[0] * x1[0]);
    case Kind::poly: return poly_eval(dim, coeffs, x1);
    }
    throw ConfigError("unknown warp kind");
}

Jet WarpFunction::eval(std::span<const Jet> x1) const {
    const auto& t = x1[0].table();
    switch (kind) {
    case Kind::constant: return Jet::constant(t, coeffs[0]);
    case Kind::affine: {
        Jet v = Jet::constant(t, coeffs[0]);
        for (int i = 0; i < dim; ++i) v += coeffs[static_cast<size_t>(i) + 1] * x1[static_cast<size_t>(i)];
        return v;
    }
    case Kind::cosh: return jet_cosh(coeffs[0] * x1[0] + coeffs[1]);
    case Kind::cos: return jet_cos(coeffs[0] * x1[0] + coeffs[1]);
    case Kind::exp: return jet_exp(coeffs[0] * x1[0]);
    case Kind::poly: return poly_eval_jet(dim, coeffs, x1);
    }
    throw ConfigError("unknown warp kind");
}

ojson WarpFunction::to_json() const {
    const char* names[] = {"constant", "affine", "cosh", "cos", "exp", "poly"};
    return ojson{{"kind", names[static_cast<int>(kind)]}, {"coeffs", coeffs}};
}

WarpFunction WarpFunction::from_json(const ojson& j, int dim) {
    WarpFunction f;
    f.dim = dim;
    std::string k = j.at("kind").get<std::string>();
    if (k == "constant") f.kind = Kind::constant;
    else if (k == "affine") f.kind = Kind::affine;
    else if (k == "cosh") f.kind = Kind::cosh;
    else if (k == "cos") f.kind = Kind::cos;
    else if (k == "exp") f.kind = Kind::exp;
    else if (k == "poly") f.kind = Kind::poly;
    else throw ConfigError("unknown warp kind '" + k + "'");
    f.coeffs = j.at("coeffs").get<std::vector<double>>();
    f.validate();
    return f;
}

// --- MetricSpec -------------------------------------------------------------

namespace {

bool is_quadratic_family(MetricFamily f) {
    return f == MetricFamily::euclidean || f == MetricFamily::riemannian_quadratic ||
           f == MetricFamily::round_sphere_chart || f == MetricFamily::hyperbolic_chart;
}

// a_ij(x) of a quadratic (Riemannian) spec, as plain values
Vec quadratic_form(const MetricSpec& s, std::span<const double> x) {
    int n = s.dim;
    Vec a(static_cast<size_t>(n) * n, 0.0);
    switch (s.family) {
    case MetricFamily::euclidean:
        for (int i = 0; i < n; ++i) mat_at(a, n, i, i) = 1.0;
        break;
    case MetricFamily::riemannian_quadratic: {
        double scale = s.conformal_poly.empty() ? 1.0 : std::exp(2 * poly_eval(n, s.conformal_poly, x));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                mat_at(a, n, i, j) = scale * (s.matrix.empty() ? (i == j ? 1.0 : 0.0) : mat_at(s.matrix, n, i, j));
        break;
    }
    case MetricFamily::round_sphere_chart:
    case MetricFamily::hyperbolic_chart: {
        double r2 = s.radius * s.radius, xx = 0;
        for (int i = 0; i < n; ++i) xx += x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
        double den = s.family == MetricFamily::round_sphere_chart ? r2 + xx : r2 - xx;
        double lam = 2 * r2 / den;
        for (int i = 0; i < n; ++i) mat_at(a, n, i, i) = lam * lam;
        break;
    }
    default: throw ConfigError("quadratic form requested for a non-quadratic family");
    }
    return a;
}

} // namespace

void MetricSpec::validate() const {
    if (dim < 1) throw ConfigError("metric dimension must be >= 1");
    switch (family) {
    case MetricFamily::euclidean: break;
    case MetricFamily::riemannian_quadratic: {
        if (!matrix.empty()) {
            if (matrix.size() != static_cast<size_t>(dim) * dim)
                throw ConfigError("riemannian matrix must be dim x dim");
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    if (std::fabs(mat_at(matrix, dim, i, j) - mat_at(matrix, dim, j, i)) > 1e-12)
                        throw ConfigError("riemannian matrix must be symmetric");
            double mn = sym_min_eigenvalue(matrix, dim);
            if (mn <= 0)
                throw InvalidMetricError("riemannian matrix not positive definite (eigenvalue " +
                                         std::to_string(mn) + ")");
        }
        if (!conformal_poly.empty()) poly_degree(dim, conformal_poly.size());
        break;
    }
    case MetricFamily::round_sphere_chart:
    case MetricFamily::hyperbolic_chart:
        if (radius <= 0) throw ConfigError("chart radius must be positive");
        break;
    case MetricFamily::randers: {
        if (b.size() != static_cast<size_t>(dim)) throw ConfigError("randers drift must have dim entries");
        const MetricSpec& alpha = base ? *base : euclidean_metric(dim);
        if (!is_quadratic_family(alpha.family))
            throw ConfigError("randers base must be a quadratic (Riemannian) family");
        if (alpha.dim != dim) throw ConfigError("randers base dimension mismatch");
        alpha.validate();
        break;
    }
    case MetricFamily::minkowski_norm:
        if (exponent < 4 || exponent % 2 != 0)
            throw ConfigError("minkowski norm exponent must be an even integer >= 4");
        break;
    case MetricFamily::warped: {
        if (!base || !fiber) throw ConfigError("warped metric needs base and fiber specs");
        if (base->dim + fiber->dim != dim)
            throw ConfigError("warped dimension must equal base dim + fiber dim");
        base->validate();
        fiber->validate();
        WarpFunction w = warp;
        w.dim = base->dim;
        w.validate();
        break;
    }
    case MetricFamily::conformal: {
        if (!base) throw ConfigError("conformal metric needs a base spec");
        if (base->dim != dim) throw ConfigError("conformal base dimension mismatch");
        base->validate();
        ConformalFactor f = factor;
        f.dim = dim;
        f.validate();
        break;
    }
    }
}

MetricSpec MetricSpec::euclidean_metric(int n) {
    MetricSpec s;
    s.family = MetricFamily::euclidean;
    s.dim = n;
    return s;
}

MetricSpec MetricSpec::riemannian(int n, std::vector<double> m, std::vector<double> conf_poly) {
    MetricSpec s;
    s.family = MetricFamily::riemannian_quadratic;
    s.dim = n;
    s.matrix = std::move(m);
    s.conformal_poly = std::move(conf_poly);
    return s;
}

MetricSpec MetricSpec::sphere_chart(int n, double r) {
    MetricSpec s;
    s.family = MetricFamily::round_sphere_chart;
    s.dim = n;
    s.radius = r;
    return s;
}

MetricSpec MetricSpec::hyperbolic(int n, double r) {
    MetricSpec s;
    s.family = MetricFamily::hyperbolic_chart;
    s.dim = n;
    s.radius = r;
    return s;
}

MetricSpec MetricSpec::randers_metric(std::vector<double> drift, std::shared_ptr<MetricSpec> alpha) {
    MetricSpec s;
    s.family = MetricFamily::randers;
    s.dim = alpha ? alpha->dim : static_cast<int>(drift.size());
    s.b = std::move(drift);
    s.base = std::move(alpha);
    return s;
}

MetricSpec MetricSpec::minkowski_quartic(int n, int p) {
    MetricSpec s;
    s.family = MetricFamily::minkowski_norm;
    s.dim = n;
    s.exponent = p;
    return s;
}

ojson MetricSpec::to_json() const {
    ojson params = ojson::object();
    switch (family) {
    case MetricFamily::euclidean: break;
    case MetricFamily::riemannian_quadratic: {
        if (!matrix.empty()) {
            ojson rows = ojson::array();
            for (int i = 0; i < dim; ++i) {
                ojson row = ojson::array();
                for (int j = 0; j < dim; ++j) row.push_back(mat_at(matrix, dim, i, j));
                rows.push_back(row);
            }
            params["matrix"] = rows;
        }
        if (!conformal_poly.empty()) params["conformal_poly"] = conformal_poly;
        break;
    }
    case MetricFamily::round_sphere_chart:
    case MetricFamily::hyperbolic_chart: params["radius"] = radius; break;
    case MetricFamily::randers:
        params["b"] = b;
        if (base) params["base"] = base->to_json();
        break;
    case MetricFamily::minkowski_norm: params["exponent"] = exponent; break;
    case MetricFamily::warped:
        params["base"] = base->to_json();
        params["fiber"] = fiber->to_json();
        params["warp"] = warp.to_json();
        break;
    case MetricFamily::conformal:
        params["base"] = base->to_json();
        params["factor"] = factor.to_json();
        break;
    }
    return ojson{{"family", family_name(family)}, {"dim", dim}, {"params", params}};
}

MetricSpec MetricSpec::from_json(const ojson& j) {
    if (j.contains("cylinder")) {
        // shorthand for a product over a 1-dimensional euclidean base
        const ojson& c = j.at("cylinder");
        MetricSpec fiber = from_json(c.at("fiber"));
        MetricSpec s;
        s.family = MetricFamily::warped;
        s.dim = 1 + fiber.dim;
        s.base = std::make_shared<MetricSpec>(euclidean_metric(1));
        s.fiber = std::make_shared<MetricSpec>(std::move(fiber));
        s.warp = WarpFunction{WarpFunction::Kind::constant, {1.0}, 1};
        s.validate();
        return s;
    }
    MetricSpec s;
    s.family = family_from_name(j.at("family").get<std::string>());
    s.dim = j.at("dim").get<int>();
    ojson params = j.contains("params") ? j.at("params") : ojson::object();
    switch (s.family) {
    case MetricFamily::euclidean: break;
    case MetricFamily::riemannian_quadratic: {
        if (params.contains("matrix")) {
            auto rows = params.at("matrix");
            s.matrix.assign(static_cast<size_t>(s.dim) * s.dim, 0.0);
            for (int i = 0; i < s.dim; ++i)
                for (int jj = 0; jj < s.dim; ++jj)
                    mat_at(s.matrix, s.dim, i, jj) = rows.at(static_cast<size_t>(i)).at(static_cast<size_t>(jj)).get<double>();
        }
        if (params.contains("conformal_poly"))
            s.conformal_poly = params.at("conformal_poly").get<std::vector<double>>();
        break;
    }
    case MetricFamily::round_sphere_chart:
    case MetricFamily::hyperbolic_chart:
        if (params.contains("radius")) s.radius = params.at("radius").get<double>();
        break;
    case MetricFamily::randers:
        s.b = params.at("b").get<std::vector<double>>();
        if (params.contains("base"))
            s.base = std::make_shared<MetricSpec>(from_json(params.at("base")));
        break;
    case MetricFamily::minkowski_norm:
        if (params.contains("exponent")) s.exponent = params.at("exponent").get<int>();
        break;
    case MetricFamily::warped:
        s.base = std::make_shared<MetricSpec>(from_json(params.at("base")));
        s.fiber = std::make_shared<MetricSpec>(from_json(params.at("fiber")));
        s.warp = WarpFunction::from_json(params.at("warp"), s.base->dim);
        break;
    case MetricFamily::conformal:
        s.base = std::make_shared<MetricSpec>(from_json(params.at("base")));
        s.factor = ConformalFactor::from_json(params.at("factor"), s.dim);
        break;
    }
    s.validate();
    return s;
}

MetricSpec parse_metric_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open metric file '" + path + "'");
    ojson j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("metric file '" + path + "': " + e.what());
    }
    return MetricSpec::from_json(j);
}

ChartInfo chart_info(const MetricSpec& spec) {
    ChartInfo ci;
    switch (spec.family) {
    case MetricFamily::euclidean:
        ci.box.assign(static_cast<size_t>(spec.dim), {-1.0, 1.0});
        break;
    case MetricFamily::riemannian_quadratic:
        ci.box.assign(static_cast<size_t>(spec.dim), {-0.5, 0.5});
        break;
    case MetricFamily::round_sphere_chart:
        ci.box.assign(static_cast<size_t>(spec.dim), {-0.45 * spec.radius, 0.45 * spec.radius});
        break;
    case MetricFamily::hyperbolic_chart:
        ci.box.assign(static_cast<size_t>(spec.dim), {-0.35 * spec.radius, 0.35 * spec.radius});
        break;
    case MetricFamily::randers:
        ci = chart_info(spec.base ? *spec.base : MetricSpec::euclidean_metric(spec.dim));
        break;
    case MetricFamily::minkowski_norm:
        ci.box.assign(static_cast<size_t>(spec.dim), {-1.0, 1.0});
        ci.min_fiber_component = 0.2;
        break;
    case MetricFamily::warped: {
        ChartInfo cb = chart_info(*spec.base), cf = chart_info(*spec.fiber);
        ci.box = cb.box;
        ci.box.insert(ci.box.end(), cf.box.begin(), cf.box.end());
        ci.min_fiber_norm = 0.1;
        ci.min_fiber_component = std::max(cb.min_fiber_component, cf.min_fiber_component);
        break;
    }
    case MetricFamily::conformal:
        ci = chart_info(*spec.base);
        break;
    }
    return ci;
}

void validate_point(const MetricSpec& spec, const BundlePoint& p) {
    if (p.dim() != spec.dim || p.y.size() != static_cast<size_t>(spec.dim))
        throw ConfigError("bundle point dimension does not match the metric");
    double xscale = std::max(1.0, inf_norm(p.x));
    if (inf_norm(p.y) < 1e-6 * xscale)
        throw SlitBundleError("y is numerically on the zero section");
    switch (spec.family) {
    case MetricFamily::hyperbolic_chart: {
        double xx = 0;
        for (double v : p.x) xx += v * v;
        if (xx >= 0.95 * spec.radius * spec.radius)
            throw ConfigError("point outside the hyperbolic chart domain");
        break;
    }
    case MetricFamily::randers: {
        const MetricSpec alpha = spec.base ? *spec.base : MetricSpec::euclidean_metric(spec.dim);
        validate_point(alpha, p);
        Vec a = quadratic_form(alpha, p.x);
        Vec ainv = mat_inverse(a, spec.dim, "randers base form");
        double bb = 0;
        for (int i = 0; i < spec.dim; ++i)
            for (int j = 0; j < spec.dim; ++j)
                bb += mat_at(ainv, spec.dim, i, j) * spec.b[static_cast<size_t>(i)] * spec.b[static_cast<size_t>(j)];
        if (bb >= 1.0 - 1e-9)
            throw InvalidMetricError("randers drift norm " + std::to_string(std::sqrt(bb)) +
                                     " violates strong convexity (must be < 1)");
        break;
    }
    case MetricFamily::warped: {
        int n1 = spec.base->dim;
        BundlePoint p1{Vec(p.x.begin(), p.x.begin() + n1), Vec(p.y.begin(), p.y.begin() + n1)};
        BundlePoint p2{Vec(p.x.begin() + n1, p.x.end()), Vec(p.y.begin() + n1, p.y.end())};
        if (inf_norm(p1.y) < 1e-6 * xscale || inf_norm(p2.y) < 1e-6 * xscale)
            throw SlitBundleError("warped metric is not smooth where a y block vanishes");
        validate_point(*spec.base, p1);
        validate_point(*spec.fiber, p2);
        double f = spec.warp.value(p1.x);
        if (f <= 0)
            throw WarpDomainError("warping function nonpositive (f = " + std::to_string(f) + ") at evaluation point");
        break;
    }
    case MetricFamily::conformal:
        validate_point(*spec.base, p);
        break;
    default: break;
    }
}

Jet f_squared_jet(const MetricSpec& spec, std::span<const Jet> x, std::span<const Jet> y) {
    const auto& t = x[0].table();
    int n = spec.dim;
    switch (spec.family) {
    case MetricFamily::euclidean: {
        Jet s = Jet::constant(t, 0.0);
        for (int i = 0; i < n; ++i) s += y[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
        return s;
    }
    case MetricFamily::riemannian_quadratic: {
        Jet s = Jet::constant(t, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double m = spec.matrix.empty() ? (i == j ? 1.0 : 0.0) : mat_at(spec.matrix, n, i, j);
                if (m != 0.0) s += m * (y[static_cast<size_t>(i)] * y[static_cast<size_t>(j)]);
            }
        if (!spec.conformal_poly.empty())
            s = s * jet_exp(2.0 * poly_eval_jet(n, spec.conformal_poly, x));
        return s;
    }
    case MetricFamily::round_sphere_chart:
    case MetricFamily::hyperbolic_chart: {
        double r2 = spec.radius * spec.radius;
        Jet xx = Jet::constant(t, 0.0);
        for (int i = 0; i < n; ++i) xx += x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
        Jet den = spec.family == MetricFamily::round_sphere_chart ? (r2 + xx) : (r2 - xx);
        Jet lam = (2.0 * r2) / den;
        Jet yy = Jet::constant(t, 0.0);
        for (int i = 0; i < n; ++i) yy += y[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
        return lam * lam * yy;
    }
    case MetricFamily::randers: {
        const MetricSpec alpha = spec.base ? *spec.base : MetricSpec::euclidean_metric(n);
        Jet a2 = f_squared_jet(alpha, x, y);
        Jet beta = Jet::constant(t, 0.0);
        for (int i = 0; i < n; ++i) beta += spec.b[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
        Jet f = jet_sqrt(a2) + beta;
        return f * f;
    }
    case MetricFamily::minkowski_norm: {
        Jet s = Jet::constant(t, 0.0);
        for (int i = 0; i < n; ++i) s += jet_powi(y[static_cast<size_t>(i)], spec.exponent);
        return jet_pow(s, 2.0 / spec.exponent);
    }
    case MetricFamily::warped: {
        int n1 = spec.base->dim;
        Jet f1 = f_squared_jet(*spec.base, x.subspan(0, static_cast<size_t>(n1)), y.subspan(0, static_cast<size_t>(n1)));
        Jet f2 = f_squared_jet(*spec.fiber, x.subspan(static_cast<size_t>(n1)), y.subspan(static_cast<size_t>(n1)));
        Jet f = spec.warp.eval(x.subspan(0, static_cast<size_t>(n1)));
        if (f.value() <= 0)
            throw WarpDomainError("warping function nonpositive at evaluation point");
        return f1 + f * f * f2;
    }
    case MetricFamily::conformal: {
        Jet u = spec.factor.eval(x);
        return jet_exp(2.0 * u) * f_squared_jet(*spec.base, x, y);
    }
    }
    throw ConfigError("unknown metric family");
}

namespace {

// all 2n coordinates as jets, y block seeded; x block seeded only when asked
std::vector<Jet> bundle_jets(const BundlePoint& p, int order, bool seed_x) {
    int n = p.dim();
    auto t = JetTable::get(2 * n, order);
    std::vector<Jet> out;
    out.reserve(static_cast<size_t>(2 * n));
    for (int i = 0; i < n; ++i)
        out.push_back(seed_x ? Jet::variable(t, i, p.x[static_cast<size_t>(i)])
                             : Jet::constant(t, p.x[static_cast<size_t>(i)]));
    for (int i = 0; i < n; ++i) out.push_back(Jet::variable(t, n + i, p.y[static_cast<size_t>(i)]));
    return out;
}

} // namespace

double eval_F(const MetricSpec& spec, const BundlePoint& p) {
    validate_point(spec, p);
    int n = spec.dim;
    auto t = JetTable::get(2 * n, 0);
    std::vector<Jet> j;
    j.reserve(static_cast<size_t>(2 * n));
    for (int i = 0; i < n; ++i) j.push_back(Jet::constant(t, p.x[static_cast<size_t>(i)]));
    for (int i = 0; i < n; ++i) j.push_back(Jet::constant(t, p.y[static_cast<size_t>(i)]));
    std::span<const Jet> all(j);
    double f2 = f_squared_jet(spec, all.subspan(0, static_cast<size_t>(n)), all.subspan(static_cast<size_t>(n))).value();
    if (!(f2 > 0)) throw InvalidMetricError("F^2 nonpositive at evaluation point");
    return std::sqrt(f2);
}

FundamentalTensor fundamental_tensor(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    cfg.validate();
    validate_point(spec, p);
    int n = spec.dim;
    auto jets = bundle_jets(p, 2, false);
    std::span<const Jet> all(jets);
    Jet f2 = f_squared_jet(spec, all.subspan(0, static_cast<size_t>(n)), all.subspan(static_cast<size_t>(n)));

    FundamentalTensor out;
    out.F = std::sqrt(f2.value());
    out.g.assign(static_cast<size_t>(n) * n, 0.0);
    std::vector<int> e(static_cast<size_t>(2 * n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            e[static_cast<size_t>(n + i)] += 1;
            e[static_cast<size_t>(n + j)] += 1;
            double v = 0.5 * f2.partial(e);
            mat_at(out.g, n, i, j) = v;
            mat_at(out.g, n, j, i) = v;
            e[static_cast<size_t>(n + i)] -= 1;
            e[static_cast<size_t>(n + j)] -= 1;
        }
    double mn = sym_min_eigenvalue(out.g, n);
    if (mn <= 0)
        throw InvalidMetricError("fundamental tensor not positive definite (eigenvalue " +
                                 std::to_string(mn) + ")");
    out.g_inv = mat_inverse(out.g, n, "fundamental tensor");
    out.l.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out.l[static_cast<size_t>(i)] = p.y[static_cast<size_t>(i)] / out.F;
    return out;
}

TensorValue cartan_tensor(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    cfg.validate();
    if (cfg.jet_order < 3)
        throw CapabilityError("cartan tensor needs jet order >= 3");
    validate_point(spec, p);
    int n = spec.dim;
    auto jets = bundle_jets(p, 3, false);
    std::span<const Jet> all(jets);
    Jet f2 = f_squared_jet(spec, all.subspan(0, static_cast<size_t>(n)), all.subspan(static_cast<size_t>(n)));
    double F = std::sqrt(f2.value());

    TensorValue A(Signature{3, 0, 0}, n, p);
    std::vector<int> e(static_cast<size_t>(2 * n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                e[static_cast<size_t>(n + i)] += 1;
                e[static_cast<size_t>(n + j)] += 1;
                e[static_cast<size_t>(n + k)] += 1;
                A.at({i, j, k}) = 0.25 * F * f2.partial(e);
                e[static_cast<size_t>(n + i)] -= 1;
                e[static_cast<size_t>(n + j)] -= 1;
                e[static_cast<size_t>(n + k)] -= 1;
            }
    return A;
}

double mean_cartan_norm(const MetricSpec& spec, const BundlePoint& p, const DiffConfig& cfg) {
    TensorValue A = cartan_tensor(spec, p, cfg);
    FundamentalTensor ft = fundamental_tensor(spec, p, cfg);
    int n = spec.dim;
    Vec I(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                I[static_cast<size_t>(i)] += mat_at(ft.g_inv, n, j, k) * A.at({i, j, k});
    double s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += mat_at(ft.g_inv, n, i, j) * I[static_cast<size_t>(i)] * I[static_cast<size_t>(j)];
    return std::sqrt(std::max(0.0, s));
}

// --- zoo --------------------------------------------------------------------

namespace {

std::vector<double> poly_with(int dim, int degree, const std::vector<std::pair<std::vector<int>, double>>& terms) {
    auto t = JetTable::get(dim, degree);
    std::vector<double> c(static_cast<size_t>(t->count(degree)), 0.0);
    for (const auto& [e, v] : terms) c[static_cast<size_t>(t->rank(e))] = v;
    return c;
}

} // namespace

std::vector<ZooEntry> zoo() {
    std::vector<ZooEntry> z;
    z.push_back({"euclidean-2", MetricSpec::euclidean_metric(2)});
    z.push_back({"euclidean-3", MetricSpec::euclidean_metric(3)});
    z.push_back({"euclidean-4", MetricSpec::euclidean_metric(4)});
    z.push_back({"riemannian-2",
                 MetricSpec::riemannian(2, {}, poly_with(2, 2, {{{1, 1}, 0.25}, {{2, 0}, 0.2}}))});
    z.push_back({"riemannian-3",
                 MetricSpec::riemannian(3,
                                        {1.2, 0.1, 0.0, 0.1, 1.0, 0.05, 0.0, 0.05, 0.9},
                                        poly_with(3, 2, {{{1, 0, 0}, 0.1}, {{0, 1, 1}, -0.15}, {{2, 0, 0}, 0.05}}))});
    z.push_back({"sphere-2", MetricSpec::sphere_chart(2)});
    z.push_back({"sphere-3", MetricSpec::sphere_chart(3)});
    z.push_back({"sphere-4", MetricSpec::sphere_chart(4)});
    z.push_back({"hyperbolic-2", MetricSpec::hyperbolic(2)});
    z.push_back({"hyperbolic-3", MetricSpec::hyperbolic(3)});
    z.push_back({"randers-flat-2", MetricSpec::randers_metric({0.5, 0.0})});
    z.push_back({"randers-sphere-2",
                 MetricSpec::randers_metric({0.2, 0.0},
                                            std::make_shared<MetricSpec>(MetricSpec::sphere_chart(2)))});
    z.push_back({"minkowski-quartic-2", MetricSpec::minkowski_quartic(2)});
    return z;
}

std::vector<ZooEntry> einstein_zoo() {
    std::vector<ZooEntry> z;
    for (auto& e : zoo()) {
        if (e.name.rfind("riemannian-", 0) == 0) continue;    // generic curvature
        if (e.name == "randers-sphere-2") continue;           // E != 0
        z.push_back(e);
    }
    return z;
}

std::vector<ZooEntry> zoo_dim1() {
    std::vector<ZooEntry> z;
    z.push_back({"euclidean-1", MetricSpec::euclidean_metric(1)});
    z.push_back({"hyperbolic-1", MetricSpec::hyperbolic(1)});
    z.push_back({"randers-flat-1", MetricSpec::randers_metric({0.3})});
    return z;
}

} // namespace finsler
