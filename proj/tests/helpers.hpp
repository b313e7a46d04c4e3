#pragma once

// Shared fixtures for the test suites: closed-form Hamiltonians with exact
// gradients and small sampling grids.

#include "contactflow/flow.hpp"

namespace contactflow::testing {

inline TimeDependentHamiltonian coordinate_x(int dim) {
    return TimeDependentHamiltonian::from_value_grad(
        [](double, const Vec& x) { return x[0]; },
        [dim](double, const Vec&) {
            Vec g = Vec::Zero(dim);
            g[0] = 1.0;
            return g;
        });
}

inline TimeDependentHamiltonian coordinate_z(int dim) {
    return TimeDependentHamiltonian::from_value_grad(
        [dim](double, const Vec& x) { return x[dim - 1]; },
        [dim](double, const Vec&) {
            Vec g = Vec::Zero(dim);
            g[dim - 1] = 1.0;
            return g;
        });
}

// height * (1 - |x - c|^2 / r^2)^6 inside the ball, 0 outside; C^5 at the rim
inline TimeDependentHamiltonian bump(const Vec& center, double radius, double height) {
    const Vec c = center;
    const double r2 = radius * radius;
    const int dim = static_cast<int>(center.size());
    auto value = [c, r2, height](double, const Vec& x) {
        const double u = (x - c).squaredNorm() / r2;
        if (u >= 1.0) return 0.0;
        const double w = 1.0 - u;
        const double w3 = w * w * w;
        return height * w3 * w3;
    };
    auto grad = [c, r2, height, dim](double, const Vec& x) {
        const double u = (x - c).squaredNorm() / r2;
        if (u >= 1.0) return Vec(Vec::Zero(dim));
        const double w = 1.0 - u;
        const double w2 = w * w;
        return Vec(-height * 12.0 * w2 * w2 * w / r2 * (x - c));
    };
    Box support{c - Vec::Constant(dim, radius), c + Vec::Constant(dim, radius)};
    return TimeDependentHamiltonian::from_value_grad(value, grad).with_support(support);
}

// bump modulated by (a + b t)
inline TimeDependentHamiltonian bump_time(const Vec& center, double radius, double height,
                                          double a, double b) {
    const TimeDependentHamiltonian base = bump(center, radius, height);
    return TimeDependentHamiltonian::from_value_grad(
               [base, a, b](double t, const Vec& x) { return (a + b * t) * base.value(0.0, x); },
               [base, a, b](double t, const Vec& x) {
                   return Vec((a + b * t) * base.gradient(0.0, x));
               })
        .with_support(*base.support());
}

inline std::vector<Vec> cube_grid(int dim, double lo, double hi, int per_axis) {
    std::vector<Vec> pts;
    std::vector<int> idx(dim, 0);
    while (true) {
        Vec x(dim);
        for (int i = 0; i < dim; ++i)
            x[i] = per_axis == 1 ? 0.5 * (lo + hi)
                                 : lo + (hi - lo) * idx[i] / (per_axis - 1);
        pts.push_back(std::move(x));
        int i = 0;
        for (; i < dim; ++i) {
            if (++idx[i] < per_axis) break;
            idx[i] = 0;
        }
        if (i == dim) break;
    }
    return pts;
}

}  // namespace contactflow::testing
