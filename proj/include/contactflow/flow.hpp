#pragma once

// Time integration of contact systems. The state is augmented with the
// conformal factor:
//
//   dx/dt = X_H(t, x)
//   dh/dt = (R . H_t)(x)
//
// so one pass yields both the isotopy and h_t(x0). Inverse time-t maps come
// from integrating the same field backwards from t to 0, which traces the
// same trajectory in reverse.

#include "contactflow/contact_core.hpp"
#include "contactflow/norms.hpp"

#include <cmath>
#include <utility>

namespace contactflow {

struct IntegratorConfig {
    double step = 1e-3;
    enum class Scheme { rk4, euler } scheme = Scheme::rk4;
    double fd_step = kDefaultFdStep;

    IntegratorConfig with_step(double s) const {
        IntegratorConfig c = *this;
        c.step = s;
        return c;
    }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ChartPoint> points;
    std::vector<double> h_values;

    const ChartPoint& back_point() const { return points.back(); }
    double back_h() const { return h_values.back(); }
};

struct PointH {
    Vec x;
    double h;
};

namespace detail {

struct AugmentedField {
    const ContactChart& chart;
    const TimeDependentHamiltonian& ham;

    // state y = (x, h); h does not feed back into the field
    Vec operator()(double t, const Vec& y) const {
        const int d = chart.dim();
        const ContactField f = contact_vector_field_aug(chart, ham, t, y.head(d));
        Vec dy(d + 1);
        dy.head(d) = f.velocity;
        dy[d] = f.mu;
        return dy;
    }
};

template <typename Field, typename OnStep>
void integrate_fixed(const Field& field, Vec& y, double t0, double t1, int nsteps,
                     IntegratorConfig::Scheme scheme, OnStep&& on_step) {
    const double dt = (t1 - t0) / nsteps;
    double t = t0;
    for (int i = 0; i < nsteps; ++i) {
        if (scheme == IntegratorConfig::Scheme::euler) {
            y += dt * field(t, y);
        } else {
            const Vec k1 = field(t, y);
            const Vec k2 = field(t + 0.5 * dt, y + (0.5 * dt) * k1);
            const Vec k3 = field(t + 0.5 * dt, y + (0.5 * dt) * k2);
            const Vec k4 = field(t + dt, y + dt * k3);
            y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        t = (i + 1 == nsteps) ? t1 : t0 + (i + 1) * dt;
        on_step(t, y);
    }
}

inline int step_count(double span, double step) {
    return std::max(1, static_cast<int>(std::ceil(std::abs(span) / step - 1e-12)));
}

inline void check_window(const ContactChart& chart, const Vec& x, const char* what) {
    if (!chart.in_window(x))
        throw WindowEscape(std::string(what) + ": trajectory left the chart window");
}

}  // namespace detail

// Integrate the augmented system from x0 to t_end, recording every step.
inline Trajectory integrate_system(const ContactChart& chart, const TimeDependentHamiltonian& ham,
                                   const Vec& x0, double t_end, const IntegratorConfig& cfg) {
    detail::check_window(chart, x0, "integrate_system");
    const int d = chart.dim();
    Vec y(d + 1);
    y.head(d) = x0;
    y[d] = 0.0;

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.points.push_back(chart.make_point(x0));
    traj.h_values.push_back(0.0);
    if (t_end == 0.0) return traj;

    detail::AugmentedField field{chart, ham};
    const int nsteps = detail::step_count(t_end, cfg.step);
    detail::integrate_fixed(field, y, 0.0, t_end, nsteps, cfg.scheme, [&](double t, const Vec& s) {
        detail::check_window(chart, s.head(d), "integrate_system");
        traj.times.push_back(t);
        traj.points.push_back(chart.make_point(s.head(d)));
        traj.h_values.push_back(s[d]);
    });
    return traj;
}

// On-demand flow evaluator. Pure: repeated calls with the same arguments run
// the same fixed-step schedule and return bit-identical results.
class FlowMap {
public:
    FlowMap() = default;
    FlowMap(ContactChart chart, TimeDependentHamiltonian ham, IntegratorConfig cfg)
        : chart_(std::move(chart)), ham_(std::move(ham)), cfg_(cfg) {}

    const ContactChart& chart() const { return chart_; }
    const TimeDependentHamiltonian& hamiltonian() const { return ham_; }
    const IntegratorConfig& config() const { return cfg_; }

    PointH evaluate(double t, const Vec& x0) const {
        if (t == 0.0) return PointH{x0, 0.0};
        detail::check_window(chart_, x0, "flow evaluate");
        Vec y = augmented(x0);
        detail::AugmentedField field{chart_, ham_};
        const int d = chart_.dim();
        detail::integrate_fixed(field, y, 0.0, t, detail::step_count(t, cfg_.step), cfg_.scheme,
                                [&](double, const Vec& s) { detail::check_window(chart_, s.head(d), "flow evaluate"); });
        return PointH{chart_.reduce(y.head(d)), y[d]};
    }

    // One pass recording the state at each requested time (sorted, >= 0).
    std::vector<PointH> evaluate_at(const std::vector<double>& ts, const Vec& x0) const {
        std::vector<PointH> out;
        out.reserve(ts.size());
        detail::check_window(chart_, x0, "flow evaluate");
        Vec y = augmented(x0);
        detail::AugmentedField field{chart_, ham_};
        const int d = chart_.dim();
        double t_prev = 0.0;
        for (double t : ts) {
            if (t > t_prev) {
                detail::integrate_fixed(field, y, t_prev, t, detail::step_count(t - t_prev, cfg_.step),
                                        cfg_.scheme, [&](double, const Vec& s) {
                                            detail::check_window(chart_, s.head(d), "flow evaluate");
                                        });
                t_prev = t;
            }
            out.push_back(PointH{chart_.reduce(y.head(d)), y[d]});
        }
        return out;
    }

    // Backward pass from t to 0: returns the preimage (phi_t)^{-1}(x) and the
    // forward conformal factor h_t evaluated there.
    PointH inverse_point_h(double t, const Vec& x) const {
        if (t == 0.0) return PointH{x, 0.0};
        detail::check_window(chart_, x, "inverse flow evaluate");
        Vec y = augmented(x);
        detail::AugmentedField field{chart_, ham_};
        const int d = chart_.dim();
        detail::integrate_fixed(field, y, t, 0.0, detail::step_count(t, cfg_.step), cfg_.scheme,
                                [&](double, const Vec& s) { detail::check_window(chart_, s.head(d), "inverse flow evaluate"); });
        return PointH{chart_.reduce(y.head(d)), -y[d]};
    }

    Vec inverse_point(double t, const Vec& x) const { return inverse_point_h(t, x).x; }

private:
    Vec augmented(const Vec& x0) const {
        Vec y(chart_.dim() + 1);
        y.head(chart_.dim()) = x0;
        y[chart_.dim()] = 0.0;
        return y;
    }

    ContactChart chart_;
    TimeDependentHamiltonian ham_;
    IntegratorConfig cfg_;
};

inline FlowMap flow_map(const ContactChart& chart, const TimeDependentHamiltonian& ham,
                        const IntegratorConfig& cfg) {
    return FlowMap(chart, ham, cfg);
}

// The triple (flow, Hamiltonian, conformal factor).
struct ContactSystem {
    ContactChart chart;
    TimeDependentHamiltonian hamiltonian;
    ConformalFactor conformal;
    FlowMap flow;
};

inline ContactSystem make_system(const ContactChart& chart, const TimeDependentHamiltonian& ham,
                                 const IntegratorConfig& cfg) {
    FlowMap flow(chart, ham, cfg);
    ConformalFactor conf{[flow](double t, const Vec& x) { return flow.evaluate(t, x).h; }};
    return ContactSystem{chart, ham, conf, flow};
}

// Group inverse: the system generated by
//   Hbar_t = -e^{-h_t} (H_t o phi_H^t),   hbar_t = -h_t o (phi_H^t)^{-1}.
// Hbar is a formula over the parent system and is re-integrated, so the
// group law stays a nontrivial numerical statement.
inline ContactSystem inverse_flow(const ContactSystem& sys, const IntegratorConfig& cfg) {
    const FlowMap parent = sys.flow;
    auto value = [parent](double t, const Vec& x) {
        const PointH fwd = parent.evaluate(t, x);
        return -std::exp(-fwd.h) * parent.hamiltonian().value(t, fwd.x);
    };
    TimeDependentHamiltonian hbar =
        TimeDependentHamiltonian::from_value(value, cfg.fd_step);
    ConformalFactor conf{[parent](double t, const Vec& x) {
        return -parent.inverse_point_h(t, x).h;
    }};
    return ContactSystem{sys.chart, hbar, conf, FlowMap(sys.chart, hbar, cfg)};
}

// Type-erased isotopy: enough surface for C0 comparisons. Wraps integrated
// flows, pointwise compositions and conjugations alike.
struct Isotopy {
    std::function<std::vector<Vec>(const std::vector<double>&, const Vec&)> forward_at;
    std::function<Vec(double, const Vec&)> inverse;

    static Isotopy from_flow(const FlowMap& flow) {
        return Isotopy{[flow](const std::vector<double>& ts, const Vec& x) {
                           std::vector<Vec> out;
                           for (const PointH& p : flow.evaluate_at(ts, x)) out.push_back(p.x);
                           return out;
                       },
                       [flow](double t, const Vec& x) { return flow.inverse_point(t, x); }};
    }

    // t -> phiA_t o phiB_t
    static Isotopy pointwise_composition(const FlowMap& a, const FlowMap& b) {
        return Isotopy{[a, b](const std::vector<double>& ts, const Vec& x) {
                           std::vector<Vec> out;
                           const auto inner = b.evaluate_at(ts, x);
                           for (std::size_t j = 0; j < ts.size(); ++j)
                               out.push_back(a.evaluate(ts[j], inner[j].x).x);
                           return out;
                       },
                       [a, b](double t, const Vec& x) {
                           return b.inverse_point(t, a.inverse_point(t, x));
                       }};
    }

    // t -> phi^{-1} o phi_t o phi for a fixed change of coordinates phi
    static Isotopy conjugation(const std::function<Vec(const Vec&)>& map,
                               const std::function<Vec(const Vec&)>& inverse_map,
                               const FlowMap& flow) {
        return Isotopy{[map, inverse_map, flow](const std::vector<double>& ts, const Vec& x) {
                           std::vector<Vec> out;
                           for (const PointH& p : flow.evaluate_at(ts, map(x)))
                               out.push_back(inverse_map(p.x));
                           return out;
                       },
                       [map, inverse_map, flow](double t, const Vec& x) {
                           return inverse_map(flow.inverse_point(t, map(x)));
                       }};
    }

    static Isotopy constant_identity() {
        return Isotopy{[](const std::vector<double>& ts, const Vec& x) {
                           return std::vector<Vec>(ts.size(), x);
                       },
                       [](double, const Vec& x) { return x; }};
    }
};

// Sup-over-grid realization of a metric for the C0 topology on isotopies:
//   max_t [ max_x d(phiA_t x, phiB_t x) + max_x d(phiA_t^{-1} x, phiB_t^{-1} x) ].
// The inverse legs are on by default and recorded in experiment metadata.
inline double c0_distance(const Isotopy& a, const Isotopy& b, const ContactChart& chart,
                          const std::vector<double>& t_grid, const std::vector<Vec>& x_grid,
                          bool include_inverses = true) {
    const std::size_t nx = x_grid.size();
    const std::size_t nt = t_grid.size();
    std::vector<double> fwd(nx * nt, 0.0), inv(nx * nt, 0.0);
    parallel_for(nx, [&](std::size_t i) {
        const auto pa = a.forward_at(t_grid, x_grid[i]);
        const auto pb = b.forward_at(t_grid, x_grid[i]);
        for (std::size_t j = 0; j < nt; ++j)
            fwd[i * nt + j] = chart.distance(pa[j], pb[j]);
        if (include_inverses) {
            for (std::size_t j = 0; j < nt; ++j) {
                const Vec qa = a.inverse(t_grid[j], x_grid[i]);
                const Vec qb = b.inverse(t_grid[j], x_grid[i]);
                inv[i * nt + j] = chart.distance(qa, qb);
            }
        }
    });
    double result = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
        double mf = 0.0, mi = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
            mf = std::max(mf, fwd[i * nt + j]);
            mi = std::max(mi, inv[i * nt + j]);
        }
        result = std::max(result, mf + mi);
    }
    return result;
}

inline double c0_distance(const FlowMap& a, const FlowMap& b,
                          const std::vector<double>& t_grid, const std::vector<Vec>& x_grid,
                          bool include_inverses = true) {
    return c0_distance(Isotopy::from_flow(a), Isotopy::from_flow(b), a.chart(), t_grid, x_grid,
                       include_inverses);
}

struct DistanceGrids {
    std::vector<double> t_grid;         // flow comparison times
    std::vector<Vec> x_grid;            // flow comparison points
    std::vector<double> norm_t_grid;    // time nodes for the contact norm
    WeightedGrid window;                // spatial quadrature for the contact norm
    bool include_inverses = true;
};

struct ContactDistanceReport {
    double c0 = 0.0;
    double conf = 0.0;
    double ham = 0.0;
    double total() const { return c0 + conf + ham; }
};

inline ContactDistanceReport contact_distance(const ContactSystem& a, const ContactSystem& b,
                                              const DistanceGrids& grids) {
    ContactDistanceReport r;
    r.c0 = c0_distance(a.flow, b.flow, grids.t_grid, grids.x_grid, grids.include_inverses);
    r.conf = uniform_norm([&](double t, const Vec& x) {
        return a.conformal.value(t, x) - b.conformal.value(t, x);
    }, grids.t_grid, grids.x_grid);
    r.ham = contact_norm(a.chart, [&](double t, const Vec& x) {
        return a.hamiltonian.value(t, x) - b.hamiltonian.value(t, x);
    }, grids.norm_t_grid, grids.window);
    return r;
}

// || (Dphi_t)^T alpha(phi_t x) - e^{h(t,x)} alpha(x) ||_inf with the flow
// Jacobian by central differences.
inline double pullback_residual(const ContactChart& chart, const FlowMap& flow,
                                const ConformalFactor& h, double t, const Vec& x,
                                double fd_step = kDefaultFdStep) {
    if (!chart.in_window(x, fd_step))
        throw WindowEscape("pullback_residual: differenced points leave the window");
    auto map = [&](const Vec& y) { return flow.evaluate(t, y).x; };
    return map_pullback_residual(chart, map, h.value(t, x), x, fd_step);
}

}  // namespace contactflow
