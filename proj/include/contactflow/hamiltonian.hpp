#pragma once

// Time-dependent contact Hamiltonians H(t, x) with a gradient provider
// (closed form when available, central differences otherwise) and an
// optional compact support box.

#include "contactflow/core.hpp"

#include <optional>
#include <utility>

namespace contactflow {

struct Box {
    Vec lo, hi;

    bool contains(const Vec& x, double margin = 0.0) const {
        for (int i = 0; i < x.size(); ++i)
            if (x[i] < lo[i] - margin || x[i] > hi[i] + margin) return false;
        return true;
    }

    static Box cube(int dim, double radius) {
        return Box{Vec::Constant(dim, -radius), Vec::Constant(dim, radius)};
    }

    Box fattened(const Vec& by) const { return Box{lo - by, hi + by}; }
};

class TimeDependentHamiltonian {
public:
    using ValueFn = std::function<double(double, const Vec&)>;
    using GradFn = std::function<Vec(double, const Vec&)>;

    TimeDependentHamiltonian() = default;

    static TimeDependentHamiltonian from_value(ValueFn value, double fd_step = kDefaultFdStep) {
        TimeDependentHamiltonian h;
        h.value_ = std::move(value);
        h.fd_step_ = fd_step;
        h.closed_form_gradient_ = false;
        auto v = h.value_;
        h.grad_ = [v, fd_step](double t, const Vec& x) {
            return fd_gradient([&](const Vec& p) { return v(t, p); }, x, fd_step);
        };
        return h;
    }

    static TimeDependentHamiltonian from_value_grad(ValueFn value, GradFn grad) {
        TimeDependentHamiltonian h;
        h.value_ = std::move(value);
        h.grad_ = std::move(grad);
        h.closed_form_gradient_ = true;
        return h;
    }

    static TimeDependentHamiltonian constant(double c, int dim) {
        return from_value_grad([c](double, const Vec&) { return c; },
                               [dim](double, const Vec&) { return Vec::Zero(dim); });
    }

    TimeDependentHamiltonian with_support(Box support) const {
        TimeDependentHamiltonian h = *this;
        h.support_ = std::move(support);
        return h;
    }

    double value(double t, const Vec& x) const { return value_(t, x); }
    Vec gradient(double t, const Vec& x) const { return grad_(t, x); }
    bool closed_form_gradient() const { return closed_form_gradient_; }
    double fd_step() const { return fd_step_; }
    const std::optional<Box>& support() const { return support_; }

    bool valid() const { return static_cast<bool>(value_); }

private:
    ValueFn value_;
    GradFn grad_;
    bool closed_form_gradient_ = false;
    double fd_step_ = kDefaultFdStep;
    std::optional<Box> support_;
};

// Conformal factor h(t, x) of an isotopy, with h(0, .) = 0.
struct ConformalFactor {
    std::function<double(double, const Vec&)> value;

    static ConformalFactor zero() {
        return ConformalFactor{[](double, const Vec&) { return 0.0; }};
    }
};

}  // namespace contactflow
