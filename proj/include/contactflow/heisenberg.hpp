#pragma once

// Heisenberg group algebra on R^{2n+1} = C^n x R and the constructive
// mollification pipeline: right translations, their generating basic
// Hamiltonians, group convolution against a scaled kernel, and Riemann-sum
// approximations by translated copies.
//
// Points pair x = (x', x_{2n+1}) with x'_j = x_{2j-1} + i x_{2j}, and
//   x . y = (x' + y', x_{2n+1} + y_{2n+1} + Im<x', y'> / 2),
// <., .> the standard Hermitian inner product on C^n.

#include "contactflow/algebra.hpp"

#include <complex>

namespace contactflow {

struct HeisenbergPoint {
    std::vector<std::complex<double>> z;  // x'
    double w = 0.0;                       // x_{2n+1}

    static HeisenbergPoint from_coords(const Vec& x) {
        HeisenbergPoint p;
        const int n = (static_cast<int>(x.size()) - 1) / 2;
        p.z.reserve(n);
        for (int j = 0; j < n; ++j) p.z.emplace_back(x[2 * j], x[2 * j + 1]);
        p.w = x[x.size() - 1];
        return p;
    }

    Vec coords() const {
        Vec x(2 * z.size() + 1);
        for (std::size_t j = 0; j < z.size(); ++j) {
            x[2 * j] = z[j].real();
            x[2 * j + 1] = z[j].imag();
        }
        x[x.size() - 1] = w;
        return x;
    }
};

// Im<x', y'> on coordinate vectors.
inline double heis_twist(const Vec& x, const Vec& y) {
    const int n = (static_cast<int>(x.size()) - 1) / 2;
    double im = 0.0;
    for (int j = 0; j < n; ++j)
        im += x[2 * j + 1] * y[2 * j] - x[2 * j] * y[2 * j + 1];
    return im;
}

inline Vec heis_mul(const Vec& x, const Vec& y) {
    Vec r = x + y;
    r[r.size() - 1] = x[x.size() - 1] + y[y.size() - 1] + 0.5 * heis_twist(x, y);
    return r;
}

inline Vec heis_inv(const Vec& x) { return Vec(-x); }

inline HeisenbergPoint group_mul(const HeisenbergPoint& x, const HeisenbergPoint& y) {
    return HeisenbergPoint::from_coords(heis_mul(x.coords(), y.coords()));
}

inline HeisenbergPoint group_inv(const HeisenbergPoint& x) {
    return HeisenbergPoint::from_coords(heis_inv(x.coords()));
}

// R_tau(x) = x . tau^{-1}; strictly contact for alpha0, so g = 0.
inline ContactTransform right_translation(const Vec& tau) {
    const Vec tau_inv = heis_inv(tau);
    const Vec tau_copy = tau;
    return ContactTransform{
        [tau_inv](const Vec& x) { return heis_mul(x, tau_inv); },
        [tau_copy](const Vec& x) { return heis_mul(x, tau_copy); },
        [](const Vec&) { return 0.0; }};
}

// F^tau(x) = -tau_{2n+1} - Im<x', tau'>, the basic Hamiltonian generating
// { R_{t tau} }. Affine, with closed-form gradient.
inline TimeDependentHamiltonian translation_hamiltonian(const Vec& tau) {
    const Vec tau_copy = tau;
    const int dim = static_cast<int>(tau.size());
    const int n = (dim - 1) / 2;
    auto value = [tau_copy](double, const Vec& x) {
        return -tau_copy[tau_copy.size() - 1] - heis_twist(x, tau_copy);
    };
    auto grad = [tau_copy, dim, n](double, const Vec&) {
        Vec g = Vec::Zero(dim);
        for (int j = 0; j < n; ++j) {
            g[2 * j] = tau_copy[2 * j + 1];
            g[2 * j + 1] = -tau_copy[2 * j];
        }
        return g;
    };
    return TimeDependentHamiltonian::from_value_grad(value, grad);
}

// Unit-mass smooth kernel; the standard choice is c (1 - |x|^2)^4 on the
// unit ball, normalized in closed form via
//   int_{B_1} (1 - r^2)^4 dx = 24 pi^{d/2} / Gamma(d/2 + 5).
struct MollifierKernel {
    std::function<double(const Vec&)> value;
    double support_radius = 1.0;
    double total_integral = 1.0;
    int dim = 0;

    static MollifierKernel standard_bump(int dim) {
        const double mass = 24.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim + 5.0);
        const double c = 1.0 / mass;
        MollifierKernel k;
        k.dim = dim;
        k.value = [c](const Vec& x) {
            const double r2 = x.squaredNorm();
            if (r2 >= 1.0) return 0.0;
            const double u = 1.0 - r2;
            const double u2 = u * u;
            return c * u2 * u2;
        };
        return k;
    }

    // K_eps(x) = eps^{-d} K(x / eps)
    double scaled(double eps, const Vec& x) const {
        return std::pow(eps, -dim) * value(x / eps);
    }
};

// Group fattening of an axis box: { y . z : y in box, |z| <= eps }. The
// twist enlarges only the last coordinate, by eps (1 + max |y'| / 2).
inline Box heis_fattened_support(const Box& box, double eps) {
    const int dim = static_cast<int>(box.lo.size());
    double max_zpart = 0.0;
    for (int i = 0; i + 1 < dim; ++i)
        max_zpart += std::pow(std::max(std::abs(box.lo[i]), std::abs(box.hi[i])), 2);
    max_zpart = std::sqrt(max_zpart);
    Vec by = Vec::Constant(dim, eps);
    by[dim - 1] = eps * (1.0 + 0.5 * max_zpart);
    return box.fattened(by);
}

// Quadrature nodes (coefficient, translation) for the convolution against
// K_eps: tensor midpoint rule over [-eps, eps]^d, zero-weight nodes dropped.
inline std::vector<std::pair<double, Vec>> mollifier_nodes(const MollifierKernel& kernel,
                                                           double eps, int per_axis) {
    const int d = kernel.dim;
    const double cell = 2.0 * eps / per_axis;
    const double cell_volume = std::pow(cell, d);
    std::vector<std::pair<double, Vec>> nodes;
    std::vector<int> idx(d, 0);
    while (true) {
        Vec z(d);
        for (int i = 0; i < d; ++i) z[i] = -eps + (idx[i] + 0.5) * cell;
        const double k = kernel.scaled(eps, z);
        if (k != 0.0) nodes.emplace_back(k * cell_volume, z);
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < per_axis) break;
            idx[i] = 0;
        }
        if (i == d) break;
    }
    return nodes;
}

// x -> sum_j c_j F(x . tau_j^{-1}), the Riemann-sum form of the convolution.
inline std::function<double(const Vec&)> riemann_sum_translate(
    const std::function<double(const Vec&)>& f,
    const std::vector<std::pair<double, Vec>>& nodes) {
    std::vector<std::pair<double, Vec>> inv_nodes;
    inv_nodes.reserve(nodes.size());
    for (const auto& [c, tau] : nodes) inv_nodes.emplace_back(c, heis_inv(tau));
    return [f, inv_nodes](const Vec& x) {
        double s = 0.0;
        for (const auto& [c, tau_inv] : inv_nodes) s += c * f(heis_mul(x, tau_inv));
        return s;
    };
}

// F_eps(x) = int F(y) K_eps(y^{-1} . x) dnu0(y) = int_{|z|<eps} F(x . z^{-1}) K_eps(z) dz,
// by tensor midpoint quadrature (nu0 is Lebesgue measure, which the group
// operations preserve).
inline std::function<double(const Vec&)> mollify(const std::function<double(const Vec&)>& f,
                                                 const Box& f_support,
                                                 const MollifierKernel& kernel, double eps,
                                                 double window, int per_axis = 24) {
    const Box grown = heis_fattened_support(f_support, eps * kernel.support_radius);
    if (!Box::cube(kernel.dim, window).contains(grown.lo) ||
        !Box::cube(kernel.dim, window).contains(grown.hi))
        throw SupportOverflow("mollify: eps-fattened support exits the window");
    return riemann_sum_translate(f, mollifier_nodes(kernel, eps * kernel.support_radius, per_axis));
}

namespace detail {

// C2 smoothstep: 0 -> 1 over [0, 1].
inline double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

inline double smoothstep_prime(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return t * t * (30.0 + t * (-60.0 + 30.0 * t));
}

}  // namespace detail

// G = rho . F^tau with rho a smoothstep cutoff that equals 1 on the
// delta-fattened support of F and vanishes outside a further delta/2
// transition shell. Requires |tau| < delta so the translation orbit of
// supp(F) stays in the plateau; then the flow of G agrees with R_{t tau}
// there for all t in [0, 1].
inline TimeDependentHamiltonian cutoff_translation_hamiltonian(const Vec& tau,
                                                               const Box& f_support,
                                                               double delta, double window) {
    if (!(tau.norm() < delta))
        throw SupportOverflow("cutoff_translation_hamiltonian: need |tau| < delta");
    const Box plateau = heis_fattened_support(f_support, delta);
    const double width = 0.5 * delta;
    const int dim = static_cast<int>(tau.size());
    Box outer = plateau.fattened(Vec::Constant(dim, width));
    if (!Box::cube(dim, window).contains(outer.lo) || !Box::cube(dim, window).contains(outer.hi))
        throw SupportOverflow("cutoff_translation_hamiltonian: cutoff shell exits the window");

    auto rho_axis = [plateau, width](int i, double xi, double& value, double& slope) {
        if (xi < plateau.lo[i]) {
            const double t = 1.0 - (plateau.lo[i] - xi) / width;
            value = detail::smoothstep(t);
            slope = detail::smoothstep_prime(t) / width;
        } else if (xi > plateau.hi[i]) {
            const double t = 1.0 - (xi - plateau.hi[i]) / width;
            value = detail::smoothstep(t);
            slope = -detail::smoothstep_prime(t) / width;
        } else {
            value = 1.0;
            slope = 0.0;
        }
    };

    const TimeDependentHamiltonian f_tau = translation_hamiltonian(tau);
    auto value = [rho_axis, f_tau, dim](double t, const Vec& x) {
        double rho = 1.0;
        for (int i = 0; i < dim; ++i) {
            double v, s;
            rho_axis(i, x[i], v, s);
            rho *= v;
            if (rho == 0.0) return 0.0;
        }
        return rho * f_tau.value(t, x);
    };
    auto grad = [rho_axis, f_tau, dim](double t, const Vec& x) {
        Vec vals(dim), slopes(dim);
        for (int i = 0; i < dim; ++i) rho_axis(i, x[i], vals[i], slopes[i]);
        const double rho = vals.prod();
        Vec g = rho * f_tau.gradient(t, x);
        if (rho != 0.0) {
            const double fv = f_tau.value(t, x);
            for (int i = 0; i < dim; ++i) {
                if (slopes[i] == 0.0) continue;
                double partial = slopes[i];
                for (int j = 0; j < dim; ++j)
                    if (j != i) partial *= vals[j];
                g[i] += fv * partial;
            }
        }
        return g;
    };
    return TimeDependentHamiltonian::from_value_grad(value, grad).with_support(outer);
}

}  // namespace contactflow
