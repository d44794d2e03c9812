#include "finsler/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

namespace finsler {

namespace {

uint64_t pack_exps(std::span<const uint8_t> e) {
    uint64_t key = 0;
    for (uint8_t v : e) key = (key << 5) | v;
    return key;
}

struct TableKey {
    int nvars, order;
    bool operator<(const TableKey& o) const {
        return nvars != o.nvars ? nvars < o.nvars : order < o.order;
    }
};

std::map<TableKey, std::shared_ptr<const JetTable>>& registry() {
    static std::map<TableKey, std::shared_ptr<const JetTable>> r;
    return r;
}
std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

void enumerate(int nvars, int order, std::vector<uint8_t>& cur, int remaining, int var,
               std::vector<std::vector<uint8_t>>& out) {
    if (var == nvars) {
        out.push_back(cur);
        return;
    }
    for (int e = 0; e <= remaining; ++e) {
        cur[static_cast<size_t>(var)] = static_cast<uint8_t>(e);
        enumerate(nvars, order, cur, remaining - e, var + 1, out);
    }
    cur[static_cast<size_t>(var)] = 0;
}

} // namespace

JetTable::JetTable(int nvars, int order) : nvars_(nvars), max_order_(order) {
    if (nvars < 1 || nvars > 12) throw ConfigError("jet variable count out of range: " + std::to_string(nvars));
    if (order < 0 || order > 10) throw ConfigError("jet order out of range: " + std::to_string(order));

    std::vector<std::vector<uint8_t>> all;
    std::vector<uint8_t> cur(static_cast<size_t>(nvars), 0);
    enumerate(nvars, order, cur, order, 0, all);
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        int da = 0, db = 0;
        for (auto v : a) da += v;
        for (auto v : b) db += v;
        if (da != db) return da < db;
        return a < b;
    });

    offsets_.assign(static_cast<size_t>(order) + 2, 0);
    for (size_t i = 0; i < all.size(); ++i) {
        int d = 0;
        double f = 1.0;
        for (auto v : all[i]) {
            d += v;
            for (int k = 2; k <= v; ++k) f *= k;
        }
        exps_.insert(exps_.end(), all[i].begin(), all[i].end());
        degree_.push_back(d);
        fact_.push_back(f);
        rank_[pack_exps(all[i])] = static_cast<int>(i);
    }
    for (int d = 0; d <= order; ++d) {
        int cnt = 0;
        for (int dd : degree_)
            if (dd <= d) ++cnt;
        offsets_[static_cast<size_t>(d) + 1] = cnt;
    }

    // ordered product pairs, grouped by total degree of the result
    std::vector<uint8_t> sum(static_cast<size_t>(nvars));
    std::vector<std::vector<ProdTerm>> by_deg(static_cast<size_t>(order) + 1);
    const int total = static_cast<int>(all.size());
    for (int ia = 0; ia < total; ++ia) {
        for (int ib = 0; ib < total; ++ib) {
            int ds = degree_[static_cast<size_t>(ia)] + degree_[static_cast<size_t>(ib)];
            if (ds > order) continue;
            for (int v = 0; v < nvars; ++v)
                sum[static_cast<size_t>(v)] = static_cast<uint8_t>(
                    exps_[static_cast<size_t>(ia) * nvars + v] + exps_[static_cast<size_t>(ib) * nvars + v]);
            int out = rank_.at(pack_exps(sum));
            by_deg[static_cast<size_t>(ds)].push_back({ia, ib, out});
        }
    }
    prod_offsets_.assign(static_cast<size_t>(order) + 2, 0);
    for (int d = 0; d <= order; ++d) {
        prod_.insert(prod_.end(), by_deg[static_cast<size_t>(d)].begin(), by_deg[static_cast<size_t>(d)].end());
        prod_offsets_[static_cast<size_t>(d) + 1] = static_cast<int>(prod_.size());
    }

    deriv_.resize(static_cast<size_t>(nvars));
    std::vector<uint8_t> low(static_cast<size_t>(nvars));
    for (int v = 0; v < nvars; ++v) {
        for (int i = 0; i < total; ++i) {
            uint8_t ev = exps_[static_cast<size_t>(i) * nvars + v];
            if (ev == 0) continue;
            for (int w = 0; w < nvars; ++w) low[static_cast<size_t>(w)] = exps_[static_cast<size_t>(i) * nvars + w];
            low[static_cast<size_t>(v)] -= 1;
            deriv_[static_cast<size_t>(v)].push_back({i, rank_.at(pack_exps(low)), static_cast<double>(ev)});
        }
    }
}

std::shared_ptr<const JetTable> JetTable::get(int nvars, int order) {
    std::lock_guard<std::mutex> lk(registry_mutex());
    auto& reg = registry();
    auto it = reg.find({nvars, order});
    if (it != reg.end()) return it->second;
    // construct outside the registry lock would be nicer, but tables are tiny
    auto t = std::shared_ptr<const JetTable>(new JetTable(nvars, order));
    reg[{nvars, order}] = t;
    return t;
}

int JetTable::rank(std::span<const int> exps) const {
    if (static_cast<int>(exps.size()) != nvars_) throw ConfigError("multi-index arity mismatch");
    std::vector<uint8_t> e(static_cast<size_t>(nvars_));
    int d = 0;
    for (int v = 0; v < nvars_; ++v) {
        if (exps[static_cast<size_t>(v)] < 0) throw ConfigError("negative exponent in multi-index");
        d += exps[static_cast<size_t>(v)];
        e[static_cast<size_t>(v)] = static_cast<uint8_t>(exps[static_cast<size_t>(v)]);
    }
    if (d > max_order_) return -1;
    auto it = rank_.find(pack_exps(e));
    return it == rank_.end() ? -1 : it->second;
}

Jet::Jet(std::shared_ptr<const JetTable> t, int order) : table_(std::move(t)), order_(order) {
    c_.assign(static_cast<size_t>(table_->count(order)), 0.0);
}

Jet Jet::constant(const std::shared_ptr<const JetTable>& t, double value) {
    return constant(t, value, t->max_order());
}

Jet Jet::constant(const std::shared_ptr<const JetTable>& t, double value, int order) {
    Jet j(t, order);
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(const std::shared_ptr<const JetTable>& t, int var, double value) {
    if (t->max_order() < 1) throw CapabilityError("jet order 0 cannot seed a variable");
    if (var < 0 || var >= t->nvars()) throw ConfigError("jet variable index out of range");
    Jet j(t, t->max_order());
    j.c_[0] = value;
    std::vector<int> e(static_cast<size_t>(t->nvars()), 0);
    e[static_cast<size_t>(var)] = 1;
    j.c_[static_cast<size_t>(t->rank(e))] = 1.0;
    return j;
}

void check_same_table(const Jet& a, const Jet& b) {
    if (a.table_.get() != b.table_.get())
        throw ConsistencyError("jet arithmetic across different variable tables");
}

double Jet::partial(std::span<const int> exps) const {
    int idx = table_->rank(exps);
    int d = 0;
    for (int e : exps) d += e;
    if (idx < 0 || d > order_)
        throw CapabilityError("partial of total degree " + std::to_string(d) +
                              " exceeds jet order " + std::to_string(order_));
    return c_[static_cast<size_t>(idx)] * table_->factorial(idx);
}

Jet Jet::derivative(int var) const {
    if (order_ < 1) throw CapabilityError("derivative of an order-0 jet is undetermined");
    Jet out(table_, order_ - 1);
    const auto n = c_.size();
    for (const auto& t : table_->deriv_terms(var)) {
        if (static_cast<size_t>(t.src) >= n) continue;
        if (static_cast<size_t>(t.dst) >= out.c_.size()) continue;
        out.c_[static_cast<size_t>(t.dst)] = c_[static_cast<size_t>(t.src)] * t.factor;
    }
    return out;
}

Jet Jet::operator-() const {
    Jet out = *this;
    for (auto& v : out.c_) v = -v;
    return out;
}

Jet& Jet::operator+=(const Jet& o) {
    check_same_table(*this, o);
    if (o.order_ < order_) {
        order_ = o.order_;
        c_.resize(static_cast<size_t>(table_->count(order_)));
    }
    for (size_t i = 0; i < c_.size() && i < o.c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_same_table(*this, o);
    if (o.order_ < order_) {
        order_ = o.order_;
        c_.resize(static_cast<size_t>(table_->count(order_)));
    }
    for (size_t i = 0; i < c_.size() && i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Jet& Jet::operator+=(double s) {
    c_[0] += s;
    return *this;
}
Jet& Jet::operator-=(double s) {
    c_[0] -= s;
    return *this;
}
Jet& Jet::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    check_same_table(a, b);
    int r = std::min(a.order_, b.order_);
    Jet out(a.table_, r);
    const size_t na = a.c_.size(), nb = b.c_.size();
    for (const auto& t : a.table_->products(r)) {
        if (static_cast<size_t>(t.a) >= na || static_cast<size_t>(t.b) >= nb) continue;
        out.c_[static_cast<size_t>(t.out)] += a.c_[static_cast<size_t>(t.a)] * b.c_[static_cast<size_t>(t.b)];
    }
    return out;
}

Jet Jet::compose(std::span<const double> series) const {
    // Horner evaluation of sum_k series[k] * (this - value)^k
    Jet bar = *this;
    bar.c_[0] = 0.0;
    Jet acc = Jet::constant(table_, series[series.size() - 1], order_);
    for (int k = static_cast<int>(series.size()) - 2; k >= 0; --k) {
        acc = acc * bar;
        acc += series[static_cast<size_t>(k)];
    }
    return acc;
}

namespace {

Jet pow_series(const Jet& a, double p, const char* name) {
    double v = a.value();
    if (v <= 0.0) throw MathDomainError(std::string(name) + " of nonpositive value " + std::to_string(v));
    int r = a.order();
    std::vector<double> s(static_cast<size_t>(r) + 1);
    double binom = 1.0, powv = std::pow(v, p);
    for (int k = 0; k <= r; ++k) {
        s[static_cast<size_t>(k)] = binom * powv;
        binom *= (p - k) / (k + 1);
        powv /= v;
    }
    return a.compose(s);
}

} // namespace

Jet jet_sqrt(const Jet& a) { return pow_series(a, 0.5, "sqrt"); }

Jet jet_pow(const Jet& a, double p) { return pow_series(a, p, "pow"); }

Jet jet_exp(const Jet& a) {
    int r = a.order();
    std::vector<double> s(static_cast<size_t>(r) + 1);
    double e = std::exp(a.value());
    double f = 1.0;
    for (int k = 0; k <= r; ++k) {
        s[static_cast<size_t>(k)] = e / f;
        f *= (k + 1);
    }
    return a.compose(s);
}

Jet jet_log(const Jet& a) {
    double v = a.value();
    if (v <= 0.0) throw MathDomainError("log of nonpositive value " + std::to_string(v));
    int r = a.order();
    std::vector<double> s(static_cast<size_t>(r) + 1);
    s[0] = std::log(v);
    double powv = 1.0;
    for (int k = 1; k <= r; ++k) {
        powv /= v;
        s[static_cast<size_t>(k)] = (k % 2 ? 1.0 : -1.0) * powv / k;
    }
    return a.compose(s);
}

namespace {

Jet trig_series(const Jet& a, double c0, double c1) {
    // derivatives of sin/cos cycle with period 4: (c0, c1, -c0, -c1)
    int r = a.order();
    std::vector<double> s(static_cast<size_t>(r) + 1);
    double cyc[4] = {c0, c1, -c0, -c1};
    double f = 1.0;
    for (int k = 0; k <= r; ++k) {
        s[static_cast<size_t>(k)] = cyc[k % 4] / f;
        f *= (k + 1);
    }
    return a.compose(s);
}

} // namespace

Jet jet_sin(const Jet& a) { return trig_series(a, std::sin(a.value()), std::cos(a.value())); }
Jet jet_cos(const Jet& a) { return trig_series(a, std::cos(a.value()), -std::sin(a.value())); }

Jet jet_cosh(const Jet& a) {
    int r = a.order();
    std::vector<double> s(static_cast<size_t>(r) + 1);
    double ch = std::cosh(a.value()), sh = std::sinh(a.value());
    double f = 1.0;
    for (int k = 0; k <= r; ++k) {
        s[static_cast<size_t>(k)] = (k % 2 == 0 ? ch : sh) / f;
        f *= (k + 1);
    }
    return a.compose(s);
}

Jet jet_sinh(const Jet& a) {
    int r = a.order();
    std::vector<double> s(static_cast<size_t>(r) + 1);
    double ch = std::cosh(a.value()), sh = std::sinh(a.value());
    double f = 1.0;
    for (int k = 0; k <= r; ++k) {
        s[static_cast<size_t>(k)] = (k % 2 == 0 ? sh : ch) / f;
        f *= (k + 1);
    }
    return a.compose(s);
}

Jet jet_powi(const Jet& a, int k) {
    if (k < 0) return 1.0 / jet_powi(a, -k);
    Jet acc = Jet::constant(a.table(), 1.0, a.order());
    Jet base = a;
    int e = k;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

Jet operator/(const Jet& a, const Jet& b) {
    double v = b.value();
    if (v == 0.0) throw MathDomainError("division by a jet with zero value");
    int r = b.order();
    std::vector<double> s(static_cast<size_t>(r) + 1);
    double powv = 1.0 / v;
    for (int k = 0; k <= r; ++k) {
        s[static_cast<size_t>(k)] = (k % 2 ? -powv : powv);
        powv /= v;
    }
    return a * b.compose(s);
}

Jet operator/(double a, const Jet& b) {
    return Jet::constant(b.table(), a, b.order()) / b;
}

std::vector<Jet> lift(std::span<const double> coords, std::span<const int> seed_vars, int order,
                      const DiffConfig& cfg) {
    cfg.validate();
    if (order > cfg.jet_order)
        throw CapabilityError("requested jet order " + std::to_string(order) +
                              " exceeds configured maximum " + std::to_string(cfg.jet_order));
    if (seed_vars.empty()) throw ConfigError("lift requires a nonempty set of seed variables");
    auto t = JetTable::get(static_cast<int>(coords.size()), order);
    std::vector<bool> seeded(coords.size(), false);
    for (int v : seed_vars) {
        if (v < 0 || v >= static_cast<int>(coords.size())) throw ConfigError("seed variable out of range");
        seeded[static_cast<size_t>(v)] = true;
    }
    std::vector<Jet> out;
    out.reserve(coords.size());
    for (size_t v = 0; v < coords.size(); ++v)
        out.push_back(seeded[v] ? Jet::variable(t, static_cast<int>(v), coords[v])
                                : Jet::constant(t, coords[v]));
    return out;
}

} // namespace finsler
