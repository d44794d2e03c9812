#pragma once
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

using Vec = std::vector<double>;

// A point (x, y) of the slit tangent bundle in one chart, y != 0.
struct BundlePoint {
    Vec x, y;

    int dim() const { return static_cast<int>(x.size()); }
    // flattened bundle coordinate c in [0, 2n): x for c < n, y otherwise
    double coord(int c) const {
        int n = dim();
        return c < n ? x[static_cast<size_t>(c)] : y[static_cast<size_t>(c - n)];
    }
    BundlePoint shifted(int c, double h) const {
        BundlePoint p = *this;
        int n = dim();
        if (c < n)
            p.x[static_cast<size_t>(c)] += h;
        else
            p.y[static_cast<size_t>(c - n)] += h;
        return p;
    }
};

// Index signature of a tensor on the pulled-back bundle: p1 pullback-covariant
// slots, p2 horizontal slots, q contravariant slots.
struct Signature {
    int p1 = 0, p2 = 0, q = 0;
    int lower() const { return p1 + p2; }
    int total() const { return p1 + p2 + q; }
    bool operator==(const Signature&) const = default;
};

// Dense component array at a bundle point. Slots are ordered p1, p2, q and
// each has extent n; storage is row-major over that slot order.
class TensorValue {
public:
    TensorValue() = default;
    TensorValue(Signature sig, int dim, BundlePoint base)
        : sig_(sig), dim_(dim), base_(std::move(base)) {
        size_t sz = 1;
        for (int s = 0; s < sig.total(); ++s) sz *= static_cast<size_t>(dim);
        comp_.assign(sz, 0.0);
    }

    const Signature& sig() const { return sig_; }
    int dim() const { return dim_; }
    const BundlePoint& base() const { return base_; }
    std::span<const double> components() const { return comp_; }
    std::span<double> components() { return comp_; }

    size_t flat_index(std::span<const int> idx) const {
        size_t f = 0;
        for (int i : idx) f = f * static_cast<size_t>(dim_) + static_cast<size_t>(i);
        return f;
    }
    double at(std::span<const int> idx) const { return comp_[flat_index(idx)]; }
    double& at(std::span<const int> idx) { return comp_[flat_index(idx)]; }
    double at(std::initializer_list<int> idx) const { return at(std::span<const int>(idx.begin(), idx.size())); }
    double& at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }

    double max_abs() const {
        double m = 0;
        for (double v : comp_) m = std::max(m, std::fabs(v));
        return m;
    }

    // Natural contraction pairs one contravariant slot with one covariant slot.
    // Slot numbering follows storage order (p1 block, p2 block, q block).
    TensorValue contract(int lower_slot, int upper_slot) const;

    TensorValue& operator+=(const TensorValue& o);
    TensorValue& operator-=(const TensorValue& o);
    TensorValue& operator*=(double s);
    friend TensorValue operator+(TensorValue a, const TensorValue& b) { return a += b; }
    friend TensorValue operator-(TensorValue a, const TensorValue& b) { return a -= b; }
    friend TensorValue operator*(TensorValue a, double s) { return a *= s; }
    friend TensorValue operator*(double s, TensorValue a) { return a *= s; }

private:
    Signature sig_{};
    int dim_ = 0;
    BundlePoint base_{};
    std::vector<double> comp_;
};

// --- small dense helpers (row-major n x n) ---------------------------------

inline double& mat_at(Vec& m, int n, int i, int j) { return m[static_cast<size_t>(i) * n + j]; }
inline double mat_at(const Vec& m, int n, int i, int j) { return m[static_cast<size_t>(i) * n + j]; }

// LU inverse with partial pivoting; throws InvalidMetricError on singularity.
Vec mat_inverse(const Vec& m, int n, const std::string& what);

// Smallest eigenvalue of a symmetric matrix (cyclic Jacobi).
double sym_min_eigenvalue(const Vec& m, int n);

inline double max_abs(std::span<const double> v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

inline double inf_norm(const Vec& v) { return max_abs(v); }

inline double norm2(const Vec& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace finsler
