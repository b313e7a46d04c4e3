#pragma once

// Named Hamiltonians, metrics and transforms used by the experiment runner
// and the test suites. Parameters arrive as a string map parsed from the
// config file.

#include "contactflow/geodesic.hpp"
#include "contactflow/heisenberg.hpp"

#include <map>
#include <sstream>

namespace contactflow {

using ParamMap = std::map<std::string, std::string>;

namespace detail {

inline double param_double(const ParamMap& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size())
        throw ConfigError("invalid number for parameter '" + key + "': " + it->second);
    return v;
}

inline Vec param_vec(const ParamMap& params, const std::string& key, const Vec& fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    std::vector<double> vals;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ','))
        vals.push_back(std::stod(item));
    Vec v(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
    return v;
}

}  // namespace detail

// height (1 - |x - c|^2 / r^2)^6 inside the ball of radius r around c
inline TimeDependentHamiltonian bump_hamiltonian(const Vec& center, double radius, double height) {
    if (!(radius > 0.0)) throw ConfigError("bump: radius must be positive");
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

// x1 faded out by a smoothstep shell so it is window-supported
inline TimeDependentHamiltonian coordinate_x_hamiltonian(int dim, double plateau, double width) {
    if (!(plateau > 0.0) || !(width > 0.0))
        throw ConfigError("coordinate-x: plateau and width must be positive");
    auto axis = [plateau, width](double xi, double& value, double& slope) {
        const double a = std::abs(xi);
        if (a <= plateau) {
            value = 1.0;
            slope = 0.0;
            return;
        }
        const double t = 1.0 - (a - plateau) / width;
        value = detail::smoothstep(t);
        slope = -detail::smoothstep_prime(t) / width * (xi >= 0 ? 1.0 : -1.0);
    };
    auto value = [axis, dim](double, const Vec& x) {
        double rho = 1.0;
        for (int i = 0; i < dim && rho != 0.0; ++i) {
            double v, s;
            axis(x[i], v, s);
            rho *= v;
        }
        return rho * x[0];
    };
    auto grad = [axis, dim](double, const Vec& x) {
        Vec vals(dim), slopes(dim);
        for (int i = 0; i < dim; ++i) axis(x[i], vals[i], slopes[i]);
        const double rho = vals.prod();
        Vec g = Vec::Zero(dim);
        g[0] = rho;
        for (int i = 0; i < dim; ++i) {
            if (slopes[i] == 0.0) continue;
            double partial = slopes[i];
            for (int j = 0; j < dim; ++j)
                if (j != i) partial *= vals[j];
            g[i] += x[0] * partial;
        }
        return g;
    };
    return TimeDependentHamiltonian::from_value_grad(value, grad)
        .with_support(Box::cube(dim, plateau + width));
}

inline RiemannianMetric2 make_metric(const std::string& name, const ParamMap& params);

inline TimeDependentHamiltonian make_hamiltonian(const std::string& name, const ParamMap& params,
                                                 const ContactChart& chart) {
    const int dim = chart.dim();
    if (name == "reeb") return TimeDependentHamiltonian::constant(1.0, dim);
    if (name == "constant")
        return TimeDependentHamiltonian::constant(detail::param_double(params, "value", 1.0), dim);
    if (name == "translation") {
        Vec tau = detail::param_vec(params, "tau", Vec::Zero(dim));
        if (tau.size() != dim) throw ConfigError("translation: tau must have chart dimension");
        return translation_hamiltonian(tau);
    }
    if (name == "bump") {
        const Vec center = detail::param_vec(params, "center", Vec::Zero(dim));
        if (center.size() != dim) throw ConfigError("bump: center must have chart dimension");
        return bump_hamiltonian(center, detail::param_double(params, "radius", 0.5 * chart.window()),
                                detail::param_double(params, "height", 1.0));
    }
    if (name == "coordinate-x") {
        const double plateau = detail::param_double(params, "plateau", 0.55 * chart.window());
        const double width = detail::param_double(params, "width", 0.2 * chart.window());
        if (plateau + width >= chart.window())
            throw ConfigError("coordinate-x: plateau + width must stay inside the window");
        return coordinate_x_hamiltonian(dim, plateau, width);
    }
    if (name == "geodesic") {
        // Hamiltonian of the configured metric on the torus chart
        return geodesic_hamiltonian(make_metric(params.count("metric") ? params.at("metric") : "flat",
                                                params));
    }
    throw ConfigError("unknown hamiltonian preset: " + name);
}

inline ContactTransform dilation_transform(double lambda, int n) {
    if (!(lambda > 0.0)) throw ConfigError("dilation: lambda must be positive");
    const int dim = 2 * n + 1;
    auto scale = [lambda, n, dim](const Vec& x, double l) {
        Vec y(dim);
        for (int j = 0; j < 2 * n; ++j) y[j] = l * x[j];
        y[dim - 1] = l * l * x[dim - 1];
        return y;
    };
    return ContactTransform{[scale, lambda](const Vec& x) { return scale(x, lambda); },
                            [scale, lambda](const Vec& x) { return scale(x, 1.0 / lambda); },
                            [lambda](const Vec&) { return 2.0 * std::log(lambda); }};
}

inline ContactTransform make_transform(const std::string& name, const ParamMap& params,
                                       const ContactChart& chart) {
    if (name == "identity") return ContactTransform::identity();
    if (name == "dilation")
        return dilation_transform(detail::param_double(params, "lambda", 2.0), chart.n());
    if (name == "right-translation") {
        Vec tau = detail::param_vec(params, "tau", Vec::Zero(chart.dim()));
        if (tau.size() != chart.dim())
            throw ConfigError("right-translation: tau must have chart dimension");
        return right_translation(tau);
    }
    throw ConfigError("unknown transform preset: " + name);
}

inline RiemannianMetric2 make_metric(const std::string& name, const ParamMap& params) {
    if (name == "flat") return flat_metric();
    if (name == "conformal-bump")
        return conformal_bump_metric(detail::param_double(params, "height", 0.4));
    if (name == "oscillatory")
        return oscillatory_metric(detail::param_double(params, "a", 0.5),
                                  static_cast<int>(detail::param_double(params, "b", 4)));
    throw ConfigError("unknown metric preset: " + name);
}

// One line per preset; translation instances describe their Hamiltonian.
inline std::string describe_translation(const Vec& tau) {
    bool central = true;
    for (int j = 0; j + 1 < tau.size(); ++j)
        if (tau[j] != 0.0) central = false;
    if (central) {
        std::ostringstream out;
        out << "constant " << -tau[tau.size() - 1];
        return out.str();
    }
    return "affine in (x', z)";
}

inline std::string preset_catalog() {
    std::ostringstream out;
    out << "hamiltonians:\n"
        << "  reeb                           H == 1 (Reeb flow)\n"
        << "  constant(value)                H == value\n"
        << "  translation(tau)               right-translation generator F^tau\n"
        << "  bump(center,radius,height)     compactly supported smooth bump\n"
        << "  coordinate-x(plateau,width)    x1 faded to zero inside the window\n"
        << "  geodesic(metric,...)           sqrt(g*(p,p)) on the torus chart\n"
        << "metrics:\n"
        << "  flat                           identity coefficients\n"
        << "  conformal-bump(height)         (1 + height.bump(q)) I\n"
        << "  oscillatory(a,b)               (1 + a sin(2 pi b q1)) I\n"
        << "transforms:\n"
        << "  identity\n"
        << "  dilation(lambda)               (x', z) -> (lambda x', lambda^2 z)\n"
        << "  right-translation(tau)         x -> x . tau^{-1}\n"
        << "examples:\n"
        << "  translation(tau=0,0,1)         Hamiltonian \"" << describe_translation([] {
               Vec t(3);
               t << 0, 0, 1;
               return t;
           }()) << "\"\n";
    return out.str();
}

}  // namespace contactflow
