#include "finsler/types.hpp"

#include <algorithm>
#include <cmath>

namespace finsler {

TensorValue TensorValue::contract(int lower_slot, int upper_slot) const {
    int lo = sig_.lower();
    if (lower_slot < 0 || lower_slot >= lo || upper_slot < lo || upper_slot >= sig_.total())
        throw ConfigError("contraction must pair one lower slot with one upper slot");
    Signature out_sig = sig_;
    if (lower_slot < sig_.p1)
        out_sig.p1 -= 1;
    else
        out_sig.p2 -= 1;
    out_sig.q -= 1;
    TensorValue out(out_sig, dim_, base_);

    int r = sig_.total();
    std::vector<int> idx(static_cast<size_t>(r), 0);
    std::vector<int> oidx;
    for (;;) {
        if (idx[static_cast<size_t>(lower_slot)] == idx[static_cast<size_t>(upper_slot)]) {
            oidx.clear();
            for (int s = 0; s < r; ++s)
                if (s != lower_slot && s != upper_slot) oidx.push_back(idx[static_cast<size_t>(s)]);
            out.at(oidx) += at(idx);
        }
        int s = r - 1;
        while (s >= 0 && ++idx[static_cast<size_t>(s)] == dim_) idx[static_cast<size_t>(s--)] = 0;
        if (s < 0) break;
    }
    return out;
}

TensorValue& TensorValue::operator+=(const TensorValue& o) {
    if (!(sig_ == o.sig_) || dim_ != o.dim_) throw ConfigError("tensor shape mismatch in addition");
    for (size_t i = 0; i < comp_.size(); ++i) comp_[i] += o.comp_[i];
    return *this;
}

TensorValue& TensorValue::operator-=(const TensorValue& o) {
    if (!(sig_ == o.sig_) || dim_ != o.dim_) throw ConfigError("tensor shape mismatch in subtraction");
    for (size_t i = 0; i < comp_.size(); ++i) comp_[i] -= o.comp_[i];
    return *this;
}

TensorValue& TensorValue::operator*=(double s) {
    for (auto& v : comp_) v *= s;
    return *this;
}

Vec mat_inverse(const Vec& m, int n, const std::string& what) {
    Vec a = m;
    Vec inv(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) mat_at(inv, n, i, i) = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(mat_at(a, n, r, col)) > std::fabs(mat_at(a, n, piv, col))) piv = r;
        if (std::fabs(mat_at(a, n, piv, col)) < 1e-300)
            throw InvalidMetricError("singular matrix while inverting " + what);
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(mat_at(a, n, piv, j), mat_at(a, n, col, j));
                std::swap(mat_at(inv, n, piv, j), mat_at(inv, n, col, j));
            }
        double d = mat_at(a, n, col, col);
        for (int j = 0; j < n; ++j) {
            mat_at(a, n, col, j) /= d;
            mat_at(inv, n, col, j) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = mat_at(a, n, r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                mat_at(a, n, r, j) -= f * mat_at(a, n, col, j);
                mat_at(inv, n, r, j) -= f * mat_at(inv, n, col, j);
            }
        }
    }
    return inv;
}

double sym_min_eigenvalue(const Vec& m, int n) {
    Vec a = m;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += mat_at(a, n, i, j) * mat_at(a, n, i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = mat_at(a, n, p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double theta = (mat_at(a, n, q, q) - mat_at(a, n, p, p)) / (2 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
                double c = 1.0 / std::sqrt(t * t + 1), s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = mat_at(a, n, k, p), akq = mat_at(a, n, k, q);
                    mat_at(a, n, k, p) = c * akp - s * akq;
                    mat_at(a, n, k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = mat_at(a, n, p, k), aqk = mat_at(a, n, q, k);
                    mat_at(a, n, p, k) = c * apk - s * aqk;
                    mat_at(a, n, q, k) = s * apk + c * aqk;
                }
            }
    }
    double mn = mat_at(a, n, 0, 0);
    for (int i = 1; i < n; ++i) mn = std::min(mn, mat_at(a, n, i, i));
    return mn;
}

} // namespace finsler
