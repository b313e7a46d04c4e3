#pragma once

// Pointwise kernel: Reeb vector field, contact Hamiltonian vector field,
// basic-Hamiltonian predicate and pullback residuals.
//
// Both fields come from the stacked (dim+1) x dim linear system
//   [ dalpha^T(x) ]        [ mu a(x) - dH(t,x) ]
//   [ a^T(x)     ]  X  =   [ H(t,x)           ]
// with mu = dH . R. The system is consistent exactly when the contact
// condition holds; the residual is asserted, not assumed.

#include "contactflow/chart.hpp"
#include "contactflow/hamiltonian.hpp"

namespace contactflow {

namespace detail {

// Least squares via normal equations (the stack has full column rank for a
// contact form); falls back to column-pivoted QR when conditioning bites.
inline Vec solve_stacked(const Mat& a_stack, const Vec& b, double residual_tol,
                         const char* what) {
    const Mat gram = a_stack.transpose() * a_stack;
    Vec x = gram.ldlt().solve(a_stack.transpose() * b);
    double residual = (a_stack * x - b).lpNorm<Eigen::Infinity>();
    if (!(residual < residual_tol) || !x.allFinite()) {
        x = a_stack.colPivHouseholderQr().solve(b);
        residual = (a_stack * x - b).lpNorm<Eigen::Infinity>();
        if (!(residual < residual_tol) || !x.allFinite())
            throw DegenerateContactForm(std::string(what) +
                                        ": defining equations inconsistent, residual " +
                                        std::to_string(residual));
    }
    return x;
}

inline Mat stack_form(const ContactChart& chart, const Vec& x) {
    const int d = chart.dim();
    Mat a_stack(d + 1, d);
    a_stack.topRows(d) = chart.dalpha(x).transpose();
    a_stack.row(d) = chart.alpha(x).transpose();
    return a_stack;
}

}  // namespace detail

// Residual tolerance for the stacked solve: closed-form ingredients are held
// to 1e-9, finite-differenced ones to 1e-6.
inline double solver_tolerance(const ContactChart& chart, const TimeDependentHamiltonian* ham) {
    const bool closed = chart.closed_form_dalpha() && (!ham || ham->closed_form_gradient());
    return closed ? 1e-9 : 1e-6;
}

inline Vec reeb_field(const ContactChart& chart, const Vec& x) {
    const int d = chart.dim();
    Vec b = Vec::Zero(d + 1);
    b[d] = 1.0;
    return detail::solve_stacked(detail::stack_form(chart, x), b,
                                 solver_tolerance(chart, nullptr), "reeb_field");
}

// dH(t,x) . R(x)
inline double reeb_derivative(const ContactChart& chart, const TimeDependentHamiltonian& ham,
                              double t, const Vec& x) {
    return ham.gradient(t, x).dot(reeb_field(chart, x));
}

struct ContactField {
    Vec velocity;   // X_H(t, x)
    double mu;      // (R . H)(t, x), the conformal-factor rate
};

inline ContactField contact_vector_field_aug(const ContactChart& chart,
                                             const TimeDependentHamiltonian& ham,
                                             double t, const Vec& x) {
    const int d = chart.dim();
    const Mat a_stack = detail::stack_form(chart, x);
    const Vec alpha_x = a_stack.row(d).transpose();
    const double tol = solver_tolerance(chart, &ham);

    Vec b = Vec::Zero(d + 1);
    b[d] = 1.0;
    const Vec reeb = detail::solve_stacked(a_stack, b, tol, "reeb_field");

    const Vec grad = ham.gradient(t, x);
    const double mu = grad.dot(reeb);
    Vec rhs(d + 1);
    rhs.head(d) = mu * alpha_x - grad;
    rhs[d] = ham.value(t, x);
    return ContactField{detail::solve_stacked(a_stack, rhs, tol, "contact_vector_field"), mu};
}

inline Vec contact_vector_field(const ContactChart& chart, const TimeDependentHamiltonian& ham,
                                double t, const Vec& x) {
    return contact_vector_field_aug(chart, ham, t, x).velocity;
}

inline bool is_basic(const ContactChart& chart, const TimeDependentHamiltonian& ham,
                     const std::vector<Vec>& grid, const std::vector<double>& t_grid,
                     double tol) {
    for (double t : t_grid)
        for (const Vec& x : grid)
            if (std::abs(reeb_derivative(chart, ham, t, x)) >= tol) return false;
    return true;
}

// Jacobian of a chart map by central differences, with periodic wrap on the
// output differences.
inline Mat fd_map_jacobian(const ContactChart& chart, const std::function<Vec(const Vec&)>& map,
                           const Vec& x, double h) {
    const int d = chart.dim();
    Mat jac(d, d);
    Vec p = x;
    for (int j = 0; j < d; ++j) {
        const double xj = p[j];
        p[j] = xj + h;
        const Vec fp = map(p);
        p[j] = xj - h;
        const Vec fm = map(p);
        p[j] = xj;
        jac.col(j) = chart.wrap_diff(fp, fm) / (2.0 * h);
    }
    return jac;
}

// || (Dphi)^T alpha(phi(x)) - e^{g(x)} alpha(x) ||_inf for a fixed map phi
// with claimed conformal exponent g.
inline double map_pullback_residual(const ContactChart& chart,
                                    const std::function<Vec(const Vec&)>& map,
                                    double g_at_x, const Vec& x,
                                    double fd_step = kDefaultFdStep) {
    const Mat jac = fd_map_jacobian(chart, map, x, fd_step);
    const Vec pulled = jac.transpose() * chart.alpha(map(x));
    return (pulled - std::exp(g_at_x) * chart.alpha(x)).lpNorm<Eigen::Infinity>();
}

}  // namespace contactflow
