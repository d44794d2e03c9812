#include "finsler/sampling.hpp"

#include <cmath>
#include <random>

namespace finsler {

namespace {

double u01(std::mt19937_64& rng) {
    // fixed mapping keeps runs bit-reproducible across standard libraries
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool y_acceptable(const MetricSpec& spec, const BundlePoint& p, double min_norm,
                  double min_component) {
    if (inf_norm(p.y) < min_norm) return false;
    if (min_component > 0)
        for (double v : p.y)
            if (std::fabs(v) < min_component) return false;
    if (spec.family == MetricFamily::warped) {
        int n1 = spec.base->dim;
        Vec y1(p.y.begin(), p.y.begin() + n1), y2(p.y.begin() + n1, p.y.end());
        if (norm2(y1) < min_norm || norm2(y2) < min_norm) return false;
        BundlePoint p1{Vec(p.x.begin(), p.x.begin() + n1), y1};
        BundlePoint p2{Vec(p.x.begin() + n1, p.x.end()), y2};
        ChartInfo cb = chart_info(*spec.base), cf = chart_info(*spec.fiber);
        if (!y_acceptable(*spec.base, p1, min_norm, cb.min_fiber_component)) return false;
        if (!y_acceptable(*spec.fiber, p2, min_norm, cf.min_fiber_component)) return false;
    }
    if (spec.family == MetricFamily::conformal)
        return y_acceptable(*spec.base, p, min_norm, chart_info(*spec.base).min_fiber_component);
    return true;
}

bool x_acceptable(const MetricSpec& spec, const Vec& x) {
    if (spec.family == MetricFamily::conformal) {
        if (!spec.factor.domain_ok(x)) return false;
        return x_acceptable(*spec.base, x);
    }
    return true;
}

} // namespace

std::vector<BundlePoint> sample_points(const MetricSpec& spec, const SampleConfig& sc) {
    spec.validate();
    ChartInfo ci = chart_info(spec);
    auto box = sc.box.empty() ? ci.box : sc.box;
    if (box.size() != static_cast<size_t>(spec.dim))
        throw ConfigError("sampling box arity does not match the chart dimension");
    double min_norm = std::max(sc.min_fiber_norm, ci.min_fiber_norm);

    std::mt19937_64 rng(sc.seed);
    std::vector<BundlePoint> pts;
    pts.reserve(static_cast<size_t>(sc.count));
    int attempts = 0;
    const int max_attempts = 20000 * std::max(1, sc.count);
    while (static_cast<int>(pts.size()) < sc.count) {
        if (++attempts > max_attempts)
            throw ConfigError("point sampler failed to find valid points; check chart box");
        BundlePoint p;
        p.x.resize(static_cast<size_t>(spec.dim));
        p.y.resize(static_cast<size_t>(spec.dim));
        for (int i = 0; i < spec.dim; ++i) {
            auto [lo, hi] = box[static_cast<size_t>(i)];
            p.x[static_cast<size_t>(i)] = lo + (hi - lo) * u01(rng);
        }
        for (int i = 0; i < spec.dim; ++i) p.y[static_cast<size_t>(i)] = -1.0 + 2.0 * u01(rng);
        if (!x_acceptable(spec, p.x)) continue;
        if (!y_acceptable(spec, p, min_norm, ci.min_fiber_component)) continue;
        try {
            validate_point(spec, p);
            fundamental_tensor(spec, p);
        } catch (const FinslerError&) {
            continue;
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

} // namespace finsler
