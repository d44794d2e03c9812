#pragma once
#include <functional>

#include "finsler/jet.hpp"
#include "finsler/types.hpp"

namespace finsler {

// Outer finite-difference layer for derivatives past the jet order.
// `coord` indexes the 2n bundle coordinates (x first, then y).
template <class Field>
auto outer_fd(const Field& field, const BundlePoint& p, int coord, const DiffConfig& cfg) {
    cfg.validate();
    const double h = cfg.fd_step;
    auto eval = [&](double off) {
        try {
            return field(p.shifted(coord, off));
        } catch (const FinslerError& e) {
            throw ConsistencyError("field evaluation failed inside FD stencil at coordinate " +
                                   std::to_string(coord) + " offset " + std::to_string(off) + ": " + e.what());
        }
    };
    if (cfg.fd_scheme == FdScheme::central_2) {
        auto a = eval(h);
        auto b = eval(-h);
        return (a - b) * (1.0 / (2 * h));
    }
    auto f1 = eval(h);
    auto f2 = eval(2 * h);
    auto m1 = eval(-h);
    auto m2 = eval(-2 * h);
    return (f1 - m1) * (8.0 / (12 * h)) - (f2 - m2) * (1.0 / (12 * h));
}

using ScalarField = std::function<double(const BundlePoint&)>;
using TensorField = std::function<TensorValue(const BundlePoint&)>;

inline double outer_fd_scalar(const ScalarField& field, const BundlePoint& p, int coord,
                              const DiffConfig& cfg) {
    return outer_fd(field, p, coord, cfg);
}
inline TensorValue outer_fd_tensor(const TensorField& field, const BundlePoint& p, int coord,
                                   const DiffConfig& cfg) {
    return outer_fd(field, p, coord, cfg);
}

} // namespace finsler
