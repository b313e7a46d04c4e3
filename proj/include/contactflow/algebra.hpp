#pragma once

// Group algebra of contact systems: composition, inverse, transformation by
// contact diffeomorphisms and time reparameterization.
//
// Derived systems are represented by their formula-level Hamiltonians and
// re-integrated rather than by composing stored flows, so the group-law
// identities remain nontrivial numerical assertions.

#include "contactflow/flow.hpp"

namespace contactflow {

// A fixed contact diffeomorphism phi with phi^* alpha = e^g alpha.
struct ContactTransform {
    std::function<Vec(const Vec&)> map;
    std::function<Vec(const Vec&)> inverse_map;
    std::function<double(const Vec&)> conformal;  // the exponent g

    static ContactTransform identity() {
        return ContactTransform{[](const Vec& x) { return x; },
                                [](const Vec& x) { return x; },
                                [](const Vec&) { return 0.0; }};
    }
};

// (H # F)_t = H_t + (e^{h_t} F_t) o (phi_H^t)^{-1}
// (h # f)_t = f_t + h_t o phi_F^t
//
// The conformal formula follows from (phi_H^t o phi_F^t)^* alpha
//   = (phi_F^t)^* (e^{h_t} alpha) = e^{h_t o phi_F^t} e^{f_t} alpha.
inline ContactSystem compose(const ContactSystem& sys_a, const ContactSystem& sys_b,
                             const IntegratorConfig& cfg) {
    const FlowMap fa = sys_a.flow;
    const FlowMap fb = sys_b.flow;
    auto value = [fa, fb](double t, const Vec& x) {
        const PointH pre = fa.inverse_point_h(t, x);  // ((phi_H^t)^{-1} x, h_t there)
        return fa.hamiltonian().value(t, x) +
               std::exp(pre.h) * fb.hamiltonian().value(t, pre.x);
    };
    TimeDependentHamiltonian ham = TimeDependentHamiltonian::from_value(value, cfg.fd_step);
    const ConformalFactor conf_a = sys_a.conformal;
    const ConformalFactor conf_b = sys_b.conformal;
    ConformalFactor conf{[fb, conf_a, conf_b](double t, const Vec& x) {
        return conf_b.value(t, x) + conf_a.value(t, fb.evaluate(t, x).x);
    }};
    return ContactSystem{sys_a.chart, ham, conf, FlowMap(sys_a.chart, ham, cfg)};
}

inline ContactSystem invert(const ContactSystem& sys, const IntegratorConfig& cfg) {
    return inverse_flow(sys, cfg);
}

// (H^phi)_t = e^{-g} (H_t o phi)
// (h^phi)_t = h_t o phi + g - g o phi^{-1} o phi_H^t o phi
// The flow of H^phi tracks phi^{-1} o phi_H^t o phi.
inline ContactSystem transform(const ContactSystem& sys, const ContactTransform& phi,
                               const IntegratorConfig& cfg) {
    const ContactChart chart = sys.chart;
    auto mapped = [phi, chart](const Vec& x) {
        const Vec y = phi.map(x);
        if (!chart.in_window(y))
            throw DomainEscape("transform: conjugated point leaves the chart window");
        return y;
    };
    const TimeDependentHamiltonian parent = sys.hamiltonian;
    auto value = [phi, mapped, parent](double t, const Vec& x) {
        return std::exp(-phi.conformal(x)) * parent.value(t, mapped(x));
    };
    TimeDependentHamiltonian ham = TimeDependentHamiltonian::from_value(value, cfg.fd_step);
    const FlowMap parent_flow = sys.flow;
    const ConformalFactor parent_conf = sys.conformal;
    ConformalFactor conf{[phi, mapped, parent_flow, parent_conf, chart](double t, const Vec& x) {
        const Vec y = mapped(x);
        const Vec z = phi.inverse_map(parent_flow.evaluate(t, y).x);
        if (!chart.in_window(z))
            throw DomainEscape("transform: conjugated point leaves the chart window");
        return parent_conf.value(t, y) + phi.conformal(x) - phi.conformal(z);
    }};
    return ContactSystem{chart, ham, conf, FlowMap(chart, ham, cfg)};
}

// H^zeta(t, x) = zeta'(t) H(zeta(t), x), with conformal factor h_{zeta(t)}.
inline ContactSystem reparameterize(const ContactSystem& sys,
                                    const std::function<double(double)>& zeta,
                                    const std::function<double(double)>& zeta_prime,
                                    const IntegratorConfig& cfg) {
    const TimeDependentHamiltonian parent = sys.hamiltonian;
    auto value = [zeta, zeta_prime, parent](double t, const Vec& x) {
        return zeta_prime(t) * parent.value(zeta(t), x);
    };
    TimeDependentHamiltonian ham;
    if (parent.closed_form_gradient()) {
        ham = TimeDependentHamiltonian::from_value_grad(
            value, [zeta, zeta_prime, parent](double t, const Vec& x) {
                return Vec(zeta_prime(t) * parent.gradient(zeta(t), x));
            });
    } else {
        ham = TimeDependentHamiltonian::from_value(value, cfg.fd_step);
    }
    const ConformalFactor parent_conf = sys.conformal;
    ConformalFactor conf{[zeta, parent_conf](double t, const Vec& x) {
        return parent_conf.value(zeta(t), x);
    }};
    return ContactSystem{sys.chart, ham, conf, FlowMap(sys.chart, ham, cfg)};
}

// Residual of the transform's own pullback relation, FD Jacobian.
inline double transform_pullback_residual(const ContactChart& chart, const ContactTransform& phi,
                                          const Vec& x, double fd_step = kDefaultFdStep) {
    return map_pullback_residual(chart, phi.map, phi.conformal(x), x, fd_step);
}

}  // namespace contactflow
