#pragma once

// Symplectization M x R with omega = -d(e^theta pi1^* alpha). A contact
// Hamiltonian H lifts to Hhat(t, x, theta) = e^theta H(t, x); the lifted
// Hamiltonian flow projects onto the contact flow while theta drops by the
// conformal factor:
//
//   phihat_t(x, theta) = (phi_H^t(x), theta - h_t(x)).
//
// The Hamiltonian vector field solves iota(Xhat) omega = s dHhat, with the
// global sign s fixed once by the H == 1 calibration.

#include "contactflow/flow.hpp"

namespace contactflow {

struct SymplectizationPoint {
    Vec base;
    double theta = 0.0;
};

constexpr double kDefaultThetaCap = 5.0;

// Recorded convention: with the assembly below, s = +1 reproduces the lift
// identity. verify_symplectization_sign() re-derives it at runtime.
constexpr int kSymplectizationSign = 1;

// omega as an antisymmetric (d+1) x (d+1) matrix at (x, theta), acting as
// omega(u, v) = u^T Omega v; coordinates ordered (x_1..x_d, theta).
inline Mat symplectic_form(const ContactChart& chart, const Vec& x, double theta) {
    const int d = chart.dim();
    const double scale = -std::exp(theta);
    Mat omega(d + 1, d + 1);
    omega.topLeftCorner(d, d) = scale * chart.dalpha(x);
    const Vec a = chart.alpha(x);
    omega.topRightCorner(d, 1) = -scale * a;
    omega.bottomLeftCorner(1, d) = scale * a.transpose();
    omega(d, d) = 0.0;
    return omega;
}

struct LiftedHamiltonian {
    const TimeDependentHamiltonian* ham;

    double value(double t, const Vec& x, double theta) const {
        return std::exp(theta) * ham->value(t, x);
    }

    // gradient in (x, theta); d/dtheta e^theta H = Hhat itself
    Vec gradient(double t, const Vec& x, double theta) const {
        const int d = static_cast<int>(x.size());
        Vec g(d + 1);
        g.head(d) = std::exp(theta) * ham->gradient(t, x);
        g[d] = value(t, x, theta);
        return g;
    }
};

inline LiftedHamiltonian lift_hamiltonian(const TimeDependentHamiltonian& ham) {
    return LiftedHamiltonian{&ham};
}

inline Vec symplectic_vector_field(const ContactChart& chart, const TimeDependentHamiltonian& ham,
                                   double t, const Vec& x, double theta,
                                   int sign = kSymplectizationSign) {
    const LiftedHamiltonian lifted{&ham};
    const Mat omega = symplectic_form(chart, x, theta);
    const Vec rhs = static_cast<double>(sign) * lifted.gradient(t, x, theta);
    Eigen::PartialPivLU<Mat> lu(omega.transpose());
    Vec field = lu.solve(rhs);
    if (!field.allFinite() ||
        (omega.transpose() * field - rhs).lpNorm<Eigen::Infinity>() > 1e-8 * (1.0 + rhs.norm()))
        throw DegenerateContactForm("symplectic_vector_field: omega is singular");
    return field;
}

struct SymplecticTrajectory {
    std::vector<double> times;
    std::vector<SymplectizationPoint> points;
};

inline SymplecticTrajectory symplectic_flow(const ContactChart& chart,
                                            const TimeDependentHamiltonian& ham,
                                            const SymplectizationPoint& start, double t_end,
                                            const IntegratorConfig& cfg,
                                            double theta_cap = kDefaultThetaCap) {
    const int d = chart.dim();
    auto field = [&](double t, const Vec& y) {
        return symplectic_vector_field(chart, ham, t, y.head(d), y[d]);
    };
    Vec y(d + 1);
    y.head(d) = start.base;
    y[d] = start.theta;

    SymplecticTrajectory traj;
    traj.times.push_back(0.0);
    traj.points.push_back(start);
    if (t_end == 0.0) return traj;

    auto guard = [&](const Vec& s) {
        detail::check_window(chart, s.head(d), "symplectic_flow");
        if (std::abs(s[d]) > theta_cap)
            throw ThetaCapExceeded("symplectic_flow: |theta| exceeded the configured cap");
    };
    guard(y);
    detail::integrate_fixed(field, y, 0.0, t_end, detail::step_count(t_end, cfg.step), cfg.scheme,
                            [&](double t, const Vec& s) {
                                guard(s);
                                traj.times.push_back(t);
                                traj.points.push_back(SymplectizationPoint{s.head(d), s[d]});
                            });
    return traj;
}

// Max over samples of the distance between the symplectic flow and the lift
// (phi_H^t(x), theta - h_t(x)) of the contact flow.
inline double verify_lift(const ContactSystem& sys,
                          const std::vector<SymplectizationPoint>& samples,
                          const std::vector<double>& t_grid, const IntegratorConfig& cfg) {
    const ContactChart& chart = sys.chart;
    std::vector<double> gaps(samples.size(), 0.0);
    parallel_for(samples.size(), [&](std::size_t i) {
        const auto lifted_states = sys.flow.evaluate_at(t_grid, samples[i].base);
        double worst = 0.0;
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            const auto traj = symplectic_flow(chart, sys.hamiltonian, samples[i], t_grid[j], cfg);
            const SymplectizationPoint& got = traj.points.back();
            const double base_gap = chart.distance(got.base, lifted_states[j].x);
            const double theta_gap =
                std::abs(got.theta - (samples[i].theta - lifted_states[j].h));
            worst = std::max(worst, base_gap + theta_gap);
        }
        gaps[i] = worst;
    });
    double result = 0.0;
    for (double g : gaps) result = std::max(result, g);
    return result;
}

// Runtime re-derivation of the sign convention: the H == 1 lift must keep
// theta frozen and push the base along the Reeb field.
inline int verify_symplectization_sign(const ContactChart& chart) {
    const TimeDependentHamiltonian one = TimeDependentHamiltonian::constant(1.0, chart.dim());
    Vec x = Vec::Zero(chart.dim());
    const Vec reeb = reeb_field(chart, x);
    for (int sign : {+1, -1}) {
        const Vec field = symplectic_vector_field(chart, one, 0.0, x, 0.0, sign);
        const double base_gap = (field.head(chart.dim()) - reeb).lpNorm<Eigen::Infinity>();
        if (base_gap < 1e-9 && std::abs(field[chart.dim()]) < 1e-9) return sign;
    }
    throw DegenerateContactForm("verify_symplectization_sign: no sign satisfies the lift identity");
}

// Hofer length int_0^1 (max - min) dt of a scalar field over sample points,
// trapezoid in time.
inline double hofer_length(const std::function<double(double, const Vec&)>& field,
                           const std::vector<double>& t_grid, const std::vector<Vec>& samples) {
    auto oscillation = [&](double t) {
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (const Vec& s : samples) {
            const double v = field(t, s);
            hi = std::max(hi, v);
            lo = std::min(lo, v);
        }
        return hi - lo;
    };
    double total = 0.0;
    double prev = oscillation(t_grid[0]);
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double cur = oscillation(t_grid[i]);
        total += 0.5 * (prev + cur) * (t_grid[i] - t_grid[i - 1]);
        prev = cur;
    }
    return total;
}

}  // namespace contactflow
