#pragma once

// The two norms of the theory and the grids they are evaluated on.
//
//   contact norm  ||H|| = int_0^1 ( max_x H - min_x H + |int H dnu| / int dnu ) dt
//   uniform norm  |h|   = max over (t, x) of |h(t, x)|
//
// nu is the measure of |alpha ^ (dalpha)^n|. Time integrals use the
// trapezoid rule; spatial extrema and means use a dense window grid.

#include "contactflow/chart.hpp"
#include "contactflow/hamiltonian.hpp"

#include <cmath>

namespace contactflow {

struct WeightedGrid {
    std::vector<Vec> points;
    std::vector<double> weights;  // Lebesgue cell weights (no density)
};

// Tensor grid over the chart window: trapezoid nodes on windowed axes
// (endpoints included, so symmetric extrema are hit exactly) and uniform
// periodic nodes on periodic axes.
inline WeightedGrid window_grid(const ContactChart& chart, int per_axis) {
    const int d = chart.dim();
    std::vector<std::vector<double>> nodes(d), weights(d);
    for (int i = 0; i < d; ++i) {
        if (chart.periodic(i)) {
            const double p = chart.period(i);
            const double w = p / per_axis;
            for (int k = 0; k < per_axis; ++k) {
                nodes[i].push_back(k * w);
                weights[i].push_back(w);
            }
        } else {
            const double l = chart.window();
            const double w = 2.0 * l / (per_axis - 1);
            for (int k = 0; k < per_axis; ++k) {
                nodes[i].push_back(-l + k * w);
                weights[i].push_back((k == 0 || k == per_axis - 1) ? 0.5 * w : w);
            }
        }
    }
    WeightedGrid grid;
    std::vector<int> idx(d, 0);
    while (true) {
        Vec x(d);
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            x[i] = nodes[i][idx[i]];
            w *= weights[i][idx[i]];
        }
        grid.points.push_back(std::move(x));
        grid.weights.push_back(w);
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < static_cast<int>(nodes[i].size())) break;
            idx[i] = 0;
        }
        if (i == d) break;
    }
    return grid;
}

inline std::vector<double> uniform_time_grid(int count, double t0 = 0.0, double t1 = 1.0) {
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i) t[i] = t0 + (t1 - t0) * i / (count - 1);
    return t;
}

// Oscillation + normalized mean at one time slice.
inline double contact_norm_integrand(const ContactChart& chart,
                                     const std::function<double(double, const Vec&)>& value,
                                     double t, const WeightedGrid& grid) {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    double mass = 0.0, integral = 0.0;
    for (std::size_t k = 0; k < grid.points.size(); ++k) {
        const double v = value(t, grid.points[k]);
        hi = std::max(hi, v);
        lo = std::min(lo, v);
        const double cell = grid.weights[k] * volume_density(chart, grid.points[k]).value;
        mass += cell;
        integral += cell * v;
    }
    return (hi - lo) + std::abs(integral) / mass;
}

inline double contact_norm(const ContactChart& chart,
                           const std::function<double(double, const Vec&)>& value,
                           const std::vector<double>& t_grid, const WeightedGrid& grid) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
        const double fa = contact_norm_integrand(chart, value, t_grid[i], grid);
        const double fb = contact_norm_integrand(chart, value, t_grid[i + 1], grid);
        total += 0.5 * (fa + fb) * (t_grid[i + 1] - t_grid[i]);
    }
    return total;
}

inline double contact_norm(const ContactChart& chart, const TimeDependentHamiltonian& ham,
                           const std::vector<double>& t_grid, const WeightedGrid& grid) {
    return contact_norm(chart, [&](double t, const Vec& x) { return ham.value(t, x); },
                        t_grid, grid);
}

inline double uniform_norm(const std::function<double(double, const Vec&)>& value,
                           const std::vector<double>& t_grid, const std::vector<Vec>& x_grid) {
    double m = 0.0;
    for (double t : t_grid)
        for (const Vec& x : x_grid) m = std::max(m, std::abs(value(t, x)));
    return m;
}

}  // namespace contactflow
