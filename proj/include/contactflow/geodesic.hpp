#pragma once

// Geodesic flows of metrics on the 2-torus, seen two ways:
//
//  * as contact flows on the unit cotangent bundle of the flat reference
//    metric, generated by H_m(q, theta) = sqrt(phat^T g_m^*(q) phat) with
//    phat = (cos theta, sin theta);
//  * directly, as the Christoffel ODE qddot^k + Gamma^k_ij qdot^i qdot^j = 0
//    on the tangent bundle (the independent route used for cross-checks).
//
// The rigidity and counterexample experiments compare the two flows of a
// metric family against the flat reference as the family tightens.

#include "contactflow/algebra.hpp"

#include <array>

namespace contactflow {

using Eigen::Matrix2d;
using Eigen::Vector2d;

struct RiemannianMetric2 {
    std::function<Matrix2d(const Vector2d&)> g;
    std::function<std::array<Matrix2d, 2>(const Vector2d&)> dg;  // d g / d q_i
    bool closed_form_dg = false;

    static RiemannianMetric2 from_g(std::function<Matrix2d(const Vector2d&)> g_fn,
                                    double fd_step = kDefaultFdStep) {
        RiemannianMetric2 m;
        m.g = g_fn;
        m.dg = [g_fn, fd_step](const Vector2d& q) {
            std::array<Matrix2d, 2> d;
            for (int i = 0; i < 2; ++i) {
                Vector2d qp = q, qm = q;
                qp[i] += fd_step;
                qm[i] -= fd_step;
                d[i] = (g_fn(qp) - g_fn(qm)) / (2.0 * fd_step);
            }
            return d;
        };
        return m;
    }
};

inline Matrix2d cometric(const RiemannianMetric2& m, const Vector2d& q) {
    const Matrix2d g = m.g(q);
    const double det = g.determinant();
    if (std::abs(det) < 1e-12) throw SingularMetric("cometric: metric is singular");
    Matrix2d inv;
    inv << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
    return inv / det;
}

// Legendre map v -> g(q) v and its inverse p -> g*(q) p.
inline Vector2d legendre_map(const RiemannianMetric2& m, const Vector2d& q, const Vector2d& v) {
    return m.g(q) * v;
}

inline Vector2d legendre_inverse(const RiemannianMetric2& m, const Vector2d& q, const Vector2d& p) {
    return cometric(m, q) * p;
}

// Flat metric and conformal families phi(q) I used by the experiments.
inline RiemannianMetric2 flat_metric() {
    RiemannianMetric2 m;
    m.g = [](const Vector2d&) { return Matrix2d::Identity(); };
    m.dg = [](const Vector2d&) { return std::array<Matrix2d, 2>{Matrix2d::Zero(), Matrix2d::Zero()}; };
    m.closed_form_dg = true;
    return m;
}

inline RiemannianMetric2 conformal_metric(std::function<double(const Vector2d&)> phi,
                                          std::function<Vector2d(const Vector2d&)> dphi) {
    RiemannianMetric2 m;
    m.g = [phi](const Vector2d& q) { return Matrix2d(phi(q) * Matrix2d::Identity()); };
    m.dg = [dphi](const Vector2d& q) {
        const Vector2d d = dphi(q);
        return std::array<Matrix2d, 2>{Matrix2d(d[0] * Matrix2d::Identity()),
                                       Matrix2d(d[1] * Matrix2d::Identity())};
    };
    m.closed_form_dg = true;
    return m;
}

// Smooth periodic bump on [0,1)^2, peaked at (1/2, 1/2) with height 1.
inline double torus_bump(const Vector2d& q) {
    const double c1 = 0.5 * (1.0 + std::cos(2.0 * M_PI * (q[0] - 0.5)));
    const double c2 = 0.5 * (1.0 + std::cos(2.0 * M_PI * (q[1] - 0.5)));
    return c1 * c1 * c2 * c2;
}

inline Vector2d torus_bump_gradient(const Vector2d& q) {
    const double c1 = 0.5 * (1.0 + std::cos(2.0 * M_PI * (q[0] - 0.5)));
    const double c2 = 0.5 * (1.0 + std::cos(2.0 * M_PI * (q[1] - 0.5)));
    const double d1 = -M_PI * std::sin(2.0 * M_PI * (q[0] - 0.5));
    const double d2 = -M_PI * std::sin(2.0 * M_PI * (q[1] - 0.5));
    return Vector2d(2.0 * c1 * d1 * c2 * c2, c1 * c1 * 2.0 * c2 * d2);
}

// (1 + height . bump) I
inline RiemannianMetric2 conformal_bump_metric(double height) {
    return conformal_metric(
        [height](const Vector2d& q) { return 1.0 + height * torus_bump(q); },
        [height](const Vector2d& q) { return Vector2d(height * torus_bump_gradient(q)); });
}

// (1 + a sin(2 pi b q1)) I; C0-small for small a, C1-large for large a b.
inline RiemannianMetric2 oscillatory_metric(double a, int b) {
    return conformal_metric(
        [a, b](const Vector2d& q) { return 1.0 + a * std::sin(2.0 * M_PI * b * q[0]); },
        [a, b](const Vector2d& q) {
            return Vector2d(2.0 * M_PI * a * b * std::cos(2.0 * M_PI * b * q[0]), 0.0);
        });
}

struct MetricSequence {
    std::function<RiemannianMetric2(int)> generator;
    RiemannianMetric2 limit;
};

inline MetricSequence rigidity_sequence(double bump_height) {
    MetricSequence seq;
    seq.limit = flat_metric();
    seq.generator = [bump_height](int k) {
        return conformal_metric(
            [bump_height, k](const Vector2d& q) { return 1.0 + bump_height * torus_bump(q) / k; },
            [bump_height, k](const Vector2d& q) {
                return Vector2d(bump_height / k * torus_bump_gradient(q));
            });
    };
    return seq;
}

// H_m(q, theta) = sqrt(phat^T g_m^*(q) phat) on the reference chart, with
// closed-form gradient assembled from dg via d g* = -g* (d g) g*.
inline TimeDependentHamiltonian geodesic_hamiltonian(const RiemannianMetric2& m) {
    auto value = [m](double, const Vec& x) {
        const Vector2d q(x[0], x[1]);
        const Vector2d p(std::cos(x[2]), std::sin(x[2]));
        const double s = p.dot(cometric(m, q) * p);
        if (!(s > 0.0)) throw SingularMetric("geodesic_hamiltonian: cometric not positive");
        return std::sqrt(s);
    };
    auto grad = [m, value](double t, const Vec& x) {
        const Vector2d q(x[0], x[1]);
        const Vector2d p(std::cos(x[2]), std::sin(x[2]));
        const Vector2d dp(-std::sin(x[2]), std::cos(x[2]));
        const Matrix2d gstar = cometric(m, q);
        const auto dg = m.dg(q);
        const double h = value(t, x);
        Vec out(3);
        for (int i = 0; i < 2; ++i) {
            const Matrix2d dgstar = -gstar * dg[i] * gstar;
            out[i] = p.dot(dgstar * p) / (2.0 * h);
        }
        out[2] = dp.dot(gstar * p) / h;
        return out;
    };
    return TimeDependentHamiltonian::from_value_grad(value, grad);
}

// The fiber rescaling that carries the flat-unit cotangent sphere onto the
// g_m-unit one. On the angle chart it fixes coordinates and rescales the
// covector by 1/H_m, so the conformal exponent is -ln H_m.
inline ContactTransform normalizer_map(const RiemannianMetric2& m) {
    const TimeDependentHamiltonian h = geodesic_hamiltonian(m);
    return ContactTransform{[](const Vec& x) { return x; },
                            [](const Vec& x) { return x; },
                            [h](const Vec& x) { return -std::log(h.value(0.0, x)); }};
}

// Embedding of the angle chart into T*T^2 coordinates (q1, q2, p1, p2) as
// the g_m-unit covector p = phat / H_m.
inline Eigen::Vector4d unit_covector_embedding(const RiemannianMetric2& m, const Vec& x) {
    const TimeDependentHamiltonian h = geodesic_hamiltonian(m);
    const double hv = h.value(0.0, x);
    Eigen::Vector4d e;
    e << x[0], x[1], std::cos(x[2]) / hv, std::sin(x[2]) / hv;
    return e;
}

// FD residual of Phi_m^* lambda = e^{-ln H_m} alpha, computed through the
// embedding so the relation between the two Liouville restrictions is
// checked and not assumed.
inline double normalizer_pullback_residual(const RiemannianMetric2& m, const Vec& x,
                                           double fd_step = kDefaultFdStep) {
    Eigen::Matrix<double, 4, 3> jac;
    Vec p = x;
    for (int j = 0; j < 3; ++j) {
        const double xj = p[j];
        p[j] = xj + fd_step;
        const Eigen::Vector4d fp = unit_covector_embedding(m, p);
        p[j] = xj - fd_step;
        const Eigen::Vector4d fm = unit_covector_embedding(m, p);
        p[j] = xj;
        jac.col(j) = (fp - fm) / (2.0 * fd_step);
    }
    const Eigen::Vector4d at = unit_covector_embedding(m, x);
    Eigen::Vector4d liouville;
    liouville << at[2], at[3], 0.0, 0.0;  // lambda = p dq
    const Vec pulled = jac.transpose() * liouville;
    const TimeDependentHamiltonian h = geodesic_hamiltonian(m);
    const Vec expected = flat_unit_cotangent_torus().alpha(x) / h.value(0.0, x);
    return (pulled - expected).lpNorm<Eigen::Infinity>();
}

// Gamma^k_ij = g^{kl} (d_i g_jl + d_j g_il - d_l g_ij) / 2
inline std::array<Matrix2d, 2> christoffel(const RiemannianMetric2& m, const Vector2d& q) {
    const Matrix2d gstar = cometric(m, q);
    const auto dg = m.dg(q);
    std::array<Matrix2d, 2> gamma;  // gamma[k](i, j)
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double sum = 0.0;
                for (int l = 0; l < 2; ++l)
                    sum += gstar(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                gamma[k](i, j) = 0.5 * sum;
            }
    return gamma;
}

struct TangentTrajectory {
    std::vector<double> times;
    std::vector<Eigen::Vector4d> states;  // (q1, q2, v1, v2)
};

inline TangentTrajectory geodesic_flow_direct(const RiemannianMetric2& m, const Vector2d& q0,
                                              const Vector2d& v0, double t_end,
                                              const IntegratorConfig& cfg) {
    if (v0.norm() == 0.0) throw ConfigError("geodesic_flow_direct: v0 must be nonzero");
    auto field = [&m](double, const Vec& y) {
        const Vector2d q(y[0], y[1]);
        const Vector2d v(y[2], y[3]);
        const auto gamma = christoffel(m, q);
        Vec dy(4);
        dy[0] = v[0];
        dy[1] = v[1];
        dy[2] = -v.dot(gamma[0] * v);
        dy[3] = -v.dot(gamma[1] * v);
        return dy;
    };
    Vec y(4);
    y << q0[0], q0[1], v0[0], v0[1];
    TangentTrajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(y);
    if (t_end == 0.0) return traj;
    detail::integrate_fixed(field, y, 0.0, t_end, detail::step_count(t_end, cfg.step), cfg.scheme,
                            [&](double t, const Vec& s) {
                                traj.times.push_back(t);
                                traj.states.push_back(Eigen::Vector4d(s));
                            });
    return traj;
}

// Chart point -> unit tangent vector of m (through the unit covector).
inline Eigen::Vector4d chart_to_tangent(const RiemannianMetric2& m, const Vec& x) {
    const Eigen::Vector4d e = unit_covector_embedding(m, x);
    const Vector2d q(e[0], e[1]);
    const Vector2d v = legendre_inverse(m, q, Vector2d(e[2], e[3]));
    Eigen::Vector4d out;
    out << q[0], q[1], v[0], v[1];
    return out;
}

inline Vec tangent_to_chart(const RiemannianMetric2& m, const Eigen::Vector4d& state) {
    const Vector2d q(state[0], state[1]);
    const Vector2d p = legendre_map(m, q, Vector2d(state[2], state[3]));
    Vec x(3);
    x << q[0], q[1], std::atan2(p[1], p[0]);
    return x;
}

// Max C0 gap between the contact-Hamiltonian route and the Christoffel ODE
// route over the given initial chart points and times.
inline double route_equivalence_gap(const RiemannianMetric2& m, const std::vector<Vec>& ics,
                                    const std::vector<double>& t_grid,
                                    const IntegratorConfig& cfg) {
    const ContactChart chart = flat_unit_cotangent_torus();
    const FlowMap contact_route(chart, geodesic_hamiltonian(m), cfg);
    std::vector<double> gaps(ics.size(), 0.0);
    parallel_for(ics.size(), [&](std::size_t i) {
        const auto chart_states = contact_route.evaluate_at(t_grid, ics[i]);
        const Eigen::Vector4d start = chart_to_tangent(m, ics[i]);
        double worst = 0.0;
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            const TangentTrajectory direct = geodesic_flow_direct(
                m, Vector2d(start[0], start[1]), Vector2d(start[2], start[3]), t_grid[j], cfg);
            const Vec mapped = tangent_to_chart(m, direct.states.back());
            worst = std::max(worst, chart.distance(chart_states[j].x, mapped));
        }
        gaps[i] = worst;
    });
    double result = 0.0;
    for (double g : gaps) result = std::max(result, g);
    return result;
}

struct GapRow {
    int k = 0;
    double sup_metric_gap = 0.0;
    double ham_gap = 0.0;
    double conf_gap = 0.0;
    double c0_flow_gap = 0.0;
};

struct ExperimentGrids {
    std::vector<double> t_grid;
    std::vector<Vec> x_grid;          // chart points (q1, q2, theta)
    std::vector<Vector2d> base_grid;  // metric sample points
};

namespace detail {

inline double metric_sup_gap(const RiemannianMetric2& a, const RiemannianMetric2& b,
                             const std::vector<Vector2d>& qs) {
    double gap = 0.0;
    for (const auto& q : qs)
        gap = std::max(gap, (a.g(q) - b.g(q)).cwiseAbs().maxCoeff());
    return gap;
}

inline GapRow gap_row(int k, const RiemannianMetric2& gk, const RiemannianMetric2& gref,
                      const ExperimentGrids& grids, const IntegratorConfig& cfg,
                      double sup_metric_gap) {
    const ContactChart chart = flat_unit_cotangent_torus();
    const TimeDependentHamiltonian hk = geodesic_hamiltonian(gk);
    const TimeDependentHamiltonian href = geodesic_hamiltonian(gref);
    GapRow row;
    row.k = k;
    row.sup_metric_gap = sup_metric_gap;
    for (const Vec& x : grids.x_grid)
        row.ham_gap = std::max(row.ham_gap, std::abs(hk.value(0.0, x) - href.value(0.0, x)));
    const FlowMap flow_k(chart, hk, cfg);
    const FlowMap flow_ref(chart, href, cfg);
    std::vector<double> conf(grids.x_grid.size(), 0.0);
    parallel_for(grids.x_grid.size(), [&](std::size_t i) {
        double worst = 0.0;
        for (const PointH& s : flow_k.evaluate_at(grids.t_grid, grids.x_grid[i]))
            worst = std::max(worst, std::abs(s.h));
        conf[i] = worst;
    });
    for (double c : conf) row.conf_gap = std::max(row.conf_gap, c);
    row.c0_flow_gap = c0_distance(flow_k, flow_ref, grids.t_grid, grids.x_grid);
    return row;
}

}  // namespace detail

inline std::vector<GapRow> rigidity_experiment(const MetricSequence& seq,
                                               const std::vector<int>& k_list,
                                               const ExperimentGrids& grids,
                                               const IntegratorConfig& cfg) {
    std::vector<GapRow> rows;
    for (int k : k_list) {
        const RiemannianMetric2 gk = seq.generator(k);
        rows.push_back(detail::gap_row(k, gk, seq.limit, grids, cfg,
                                       detail::metric_sup_gap(gk, seq.limit, grids.base_grid)));
    }
    return rows;
}

// g_k = (1 + a_k sin(2 pi b_k q1)) I with a_k = 1/k, b_k = k^2: the metric
// gap shrinks like 1/k while the flows keep a positive C0 gap.
inline std::vector<GapRow> counterexample_experiment(const std::vector<int>& k_list,
                                                     const ExperimentGrids& grids,
                                                     const IntegratorConfig& cfg) {
    const RiemannianMetric2 gref = flat_metric();
    std::vector<GapRow> rows;
    for (int k : k_list) {
        if (k < 2) throw ConfigError("counterexample_experiment: k starts at 2");
        const double a = 1.0 / k;
        const int b = k * k;
        if (cfg.step >= 1.0 / (10.0 * b))
            throw StepResolution("counterexample_experiment: step must be < 1/(10 b_k)");
        const RiemannianMetric2 gk = oscillatory_metric(a, b);
        // sample the oscillation at its peaks so the sup gap is hit exactly
        std::vector<Vector2d> aligned;
        for (int j = 0; j < 4 * b; ++j) aligned.emplace_back(static_cast<double>(j) / (4.0 * b), 0.0);
        rows.push_back(detail::gap_row(k, gk, gref, grids, cfg,
                                       detail::metric_sup_gap(gk, gref, aligned)));
    }
    return rows;
}

}  // namespace contactflow
