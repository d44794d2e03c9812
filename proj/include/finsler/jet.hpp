#pragma once
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

enum class FdScheme { central_2, central_4_richardson };

struct DiffConfig {
    int jet_order = 4;
    double fd_step = 1e-4;
    FdScheme fd_scheme = FdScheme::central_4_richardson;

    void validate() const {
        if (jet_order < 2)
            throw ConfigError("jet_order must be >= 2, got " + std::to_string(jet_order));
        if (!(fd_step > 1e-8 && fd_step < 1e-1))
            throw ConfigError("fd_step must lie in (1e-8, 1e-1), got " + std::to_string(fd_step));
    }
};

// Shared immutable lookup tables for all jets in nvars variables truncated
// at a fixed total degree. Multi-indices are stored in graded order, so the
// coefficients of a lower-order jet are a prefix of a higher-order one.
class JetTable {
public:
    static std::shared_ptr<const JetTable> get(int nvars, int order);

    int nvars() const { return nvars_; }
    int max_order() const { return max_order_; }
    // Number of multi-indices of total degree <= order.
    int count(int order) const { return offsets_[static_cast<size_t>(order) + 1]; }
    int degree(int idx) const { return degree_[static_cast<size_t>(idx)]; }
    std::span<const uint8_t> exponents(int idx) const {
        return {exps_.data() + static_cast<size_t>(idx) * nvars_, static_cast<size_t>(nvars_)};
    }
    // Position of a multi-index, or -1 if its degree exceeds max_order.
    int rank(std::span<const int> exps) const;

    struct ProdTerm {
        int32_t a, b, out;
    };
    struct DerivTerm {
        int32_t src, dst;
        double factor;
    };

    // Ordered product pairs with deg(a)+deg(b) <= d, as a prefix of the table.
    std::span<const ProdTerm> products(int result_order) const {
        return {prod_.data(), static_cast<size_t>(prod_offsets_[static_cast<size_t>(result_order) + 1])};
    }
    std::span<const DerivTerm> deriv_terms(int var) const {
        return {deriv_[static_cast<size_t>(var)].data(), deriv_[static_cast<size_t>(var)].size()};
    }
    double factorial(int idx) const { return fact_[static_cast<size_t>(idx)]; }

private:
    JetTable(int nvars, int order);

    int nvars_, max_order_;
    std::vector<uint8_t> exps_;
    std::vector<int> degree_;
    std::vector<int> offsets_; // offsets_[d+1] = #indices of degree <= d
    std::vector<double> fact_;
    std::vector<ProdTerm> prod_;
    std::vector<int> prod_offsets_;
    std::vector<std::vector<DerivTerm>> deriv_;
    std::unordered_map<uint64_t, int> rank_;
};

// Truncated multivariate Taylor expansion around a point. Value semantics,
// immutable once built; all operations are pure.
class Jet {
public:
    Jet() = default;

    static Jet constant(const std::shared_ptr<const JetTable>& t, double value);
    static Jet variable(const std::shared_ptr<const JetTable>& t, int var, double value);
    // Same, but only trustworthy to the given total degree.
    static Jet constant(const std::shared_ptr<const JetTable>& t, double value, int order);

    int order() const { return order_; }
    int nvars() const { return table_ ? table_->nvars() : 0; }
    const std::shared_ptr<const JetTable>& table() const { return table_; }

    double value() const { return c_.empty() ? 0.0 : c_[0]; }
    // Mixed partial derivative value: coefficient times the multi-factorial.
    double partial(std::span<const int> exps) const;
    // Jet of the partial derivative with respect to one variable (order drops by 1).
    Jet derivative(int var) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator+=(double s);
    Jet& operator-=(double s);
    Jet& operator*=(double s);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double b) { return a += b; }
    friend Jet operator-(Jet a, double b) { return a -= b; }
    friend Jet operator+(double a, Jet b) { return b += a; }
    friend Jet operator-(double a, Jet b) { return (-b) += a; }
    friend Jet operator*(Jet a, double b) { return a *= b; }
    friend Jet operator*(double a, Jet b) { return b *= a; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator/(Jet a, double b) { return a *= 1.0 / b; }
    friend Jet operator/(double a, const Jet& b);

    // f applied through the truncated chain rule; series[k] = f^(k)(value)/k!.
    Jet compose(std::span<const double> series) const;

    std::span<const double> coefficients() const { return c_; }

private:
    Jet(std::shared_ptr<const JetTable> t, int order);

    std::shared_ptr<const JetTable> table_;
    int order_ = 0;
    std::vector<double> c_;

    friend void check_same_table(const Jet& a, const Jet& b);
};

Jet jet_sqrt(const Jet& a);
Jet jet_exp(const Jet& a);
Jet jet_log(const Jet& a);
Jet jet_sin(const Jet& a);
Jet jet_cos(const Jet& a);
Jet jet_cosh(const Jet& a);
Jet jet_sinh(const Jet& a);
Jet jet_pow(const Jet& a, double p);
// Integer power by repeated multiplication; valid for any base value.
Jet jet_powi(const Jet& a, int k);

inline double scalar_mag(double x) { return x < 0 ? -x : x; }
inline double scalar_mag(const Jet& x) { return scalar_mag(x.value()); }

// Seeds one jet per bundle coordinate (2n of them) at the given coordinates;
// coordinates listed in seed_vars carry a first-order perturbation, the rest
// are frozen constants.
std::vector<Jet> lift(std::span<const double> coords, std::span<const int> seed_vars, int order,
                      const DiffConfig& cfg = {});

} // namespace finsler
