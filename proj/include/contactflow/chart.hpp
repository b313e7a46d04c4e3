#pragma once

// Coordinate models of the contact manifolds everything else runs on:
// the Heisenberg space R^{2n+1} with its standard form, and the unit
// cotangent bundle of the flat 2-torus in (q1, q2, theta) coordinates.
//
// A chart stores the contact form alpha as a coefficient covector field,
// its exterior derivative dalpha as an antisymmetric matrix field with
//   dalpha(x)(i,j) = d_i a_j - d_j a_i,
// so that dalpha(X, Y) = X^T dalpha Y and iota(X) dalpha = dalpha^T X.

#include "contactflow/core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace contactflow {

struct ChartPoint {
    Vec coords;
};

// |density| of alpha ^ (dalpha)^n against coordinate Lebesgue measure plus
// the orientation sign, kept separate because the sign depends on the
// coordinate-ordering convention.
struct VolumeDensity {
    double value = 0.0;
    int orientation = 0;
};

class ContactChart {
public:
    ContactChart() = default;

    ContactChart(std::string name, int dim,
                 std::function<Vec(const Vec&)> alpha,
                 std::function<Mat(const Vec&)> dalpha,
                 bool closed_form_dalpha,
                 std::vector<double> periods, double window)
        : name_(std::move(name)),
          dim_(dim),
          alpha_(std::move(alpha)),
          dalpha_(std::move(dalpha)),
          closed_form_dalpha_(closed_form_dalpha),
          periods_(std::move(periods)),
          window_(window) {}

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    int n() const { return (dim_ - 1) / 2; }
    double window() const { return window_; }
    bool closed_form_dalpha() const { return closed_form_dalpha_; }

    Vec alpha(const Vec& x) const { return alpha_(x); }
    Mat dalpha(const Vec& x) const { return dalpha_(x); }

    bool periodic(int i) const { return periods_[i] > 0.0; }
    double period(int i) const { return periods_[i]; }
    bool fully_periodic() const {
        for (int i = 0; i < dim_; ++i)
            if (!periodic(i)) return false;
        return true;
    }

    // Reduce periodic coordinates to [0, P).
    Vec reduce(const Vec& x) const {
        Vec r = x;
        for (int i = 0; i < dim_; ++i) {
            if (!periodic(i)) continue;
            const double p = periods_[i];
            r[i] -= p * std::floor(r[i] / p);
            if (r[i] >= p) r[i] -= p;  // guard against floor rounding at p
        }
        return r;
    }

    ChartPoint make_point(const Vec& x) const { return ChartPoint{reduce(x)}; }

    bool in_window(const Vec& x, double margin = 0.0) const {
        for (int i = 0; i < dim_; ++i) {
            if (periodic(i)) continue;
            if (std::abs(x[i]) > window_ - margin) return false;
        }
        return true;
    }

    // Componentwise a - b with periodic coordinates wrapped to (-P/2, P/2].
    Vec wrap_diff(const Vec& a, const Vec& b) const {
        Vec d = a - b;
        for (int i = 0; i < dim_; ++i) {
            if (!periodic(i)) continue;
            const double p = periods_[i];
            d[i] -= p * std::round(d[i] / p);
        }
        return d;
    }

    // Euclidean on windowed coordinates, shortest arc on periodic ones.
    double distance(const Vec& a, const Vec& b) const {
        return wrap_diff(a, b).norm();
    }

private:
    std::string name_;
    int dim_ = 0;
    std::function<Vec(const Vec&)> alpha_;
    std::function<Mat(const Vec&)> dalpha_;
    bool closed_form_dalpha_ = false;
    std::vector<double> periods_;  // 0 marks a windowed coordinate
    double window_ = 0.0;
};

// Finite-difference dalpha assembled as J - J^T from the coefficient
// Jacobian; antisymmetric by construction.
inline Mat fd_dalpha(const std::function<Vec(const Vec&)>& alpha, const Vec& x, double h) {
    const int d = static_cast<int>(x.size());
    Mat jac(d, d);  // jac(i, j) = d_i a_j
    Vec p = x;
    for (int i = 0; i < d; ++i) {
        const double xi = p[i];
        p[i] = xi + h;
        const Vec ap = alpha(p);
        p[i] = xi - h;
        const Vec am = alpha(p);
        p[i] = xi;
        jac.row(i) = ((ap - am) / (2.0 * h)).transpose();
    }
    return jac - jac.transpose();
}

// Chart with a closed-form alpha and finite-differenced dalpha. Used for
// test charts such as rescaled forms e^f alpha.
inline ContactChart chart_from_alpha(std::string name, int dim,
                                     std::function<Vec(const Vec&)> alpha,
                                     std::vector<double> periods, double window,
                                     double fd_step = kDefaultFdStep) {
    auto alpha_copy = alpha;
    auto dalpha = [alpha_copy, fd_step](const Vec& x) { return fd_dalpha(alpha_copy, x, fd_step); };
    return ContactChart(std::move(name), dim, std::move(alpha), std::move(dalpha),
                        /*closed_form_dalpha=*/false, std::move(periods), window);
}

// alpha0 = dx_{2n+1} - 1/2 sum_j (x_{2j-1} dx_{2j} - x_{2j} dx_{2j-1}).
inline ContactChart standard_heisenberg(int n, double window) {
    if (n < 1) throw ConfigError("standard_heisenberg: n must be >= 1");
    if (!(window > 0.0)) throw ConfigError("standard_heisenberg: window must be positive");
    const int dim = 2 * n + 1;
    auto alpha = [n, dim](const Vec& x) {
        Vec a = Vec::Zero(dim);
        for (int j = 0; j < n; ++j) {
            a[2 * j] = 0.5 * x[2 * j + 1];
            a[2 * j + 1] = -0.5 * x[2 * j];
        }
        a[dim - 1] = 1.0;
        return a;
    };
    auto dalpha = [n, dim](const Vec&) {
        Mat m = Mat::Zero(dim, dim);
        for (int j = 0; j < n; ++j) {
            m(2 * j, 2 * j + 1) = -1.0;
            m(2 * j + 1, 2 * j) = 1.0;
        }
        return m;
    };
    return ContactChart("heisenberg", dim, alpha, dalpha, true,
                        std::vector<double>(dim, 0.0), window);
}

// Unit cotangent bundle of the flat torus: coordinates (q1, q2, theta),
// alpha = cos(theta) dq1 + sin(theta) dq2.
inline ContactChart flat_unit_cotangent_torus() {
    auto alpha = [](const Vec& x) {
        Vec a(3);
        a << std::cos(x[2]), std::sin(x[2]), 0.0;
        return a;
    };
    auto dalpha = [](const Vec& x) {
        const double s = std::sin(x[2]);
        const double c = std::cos(x[2]);
        Mat m = Mat::Zero(3, 3);
        m(0, 2) = s;
        m(2, 0) = -s;
        m(1, 2) = -c;
        m(2, 1) = c;
        return m;
    };
    const double two_pi = 2.0 * M_PI;
    return ContactChart("flat_unit_cotangent_torus", 3, alpha, dalpha, true,
                        std::vector<double>{1.0, 1.0, two_pi}, 1.0);
}

namespace detail {

// Signed density of alpha ^ (dalpha)^n on the standard basis, expanded
// combinatorially. Kept to n <= 2 where the permutation sum stays cheap.
inline double signed_volume_density(const Vec& a, const Mat& m) {
    const int dim = static_cast<int>(a.size());
    if (dim == 3) {
        return a[0] * m(1, 2) - a[1] * m(0, 2) + a[2] * m(0, 1);
    }
    if (dim == 5) {
        // (alpha ^ dalpha ^ dalpha)(e_1..e_5)
        //   = 1/(1! 2! 2!) sum_sigma sgn(sigma) a_{s1} M_{s2 s3} M_{s4 s5}
        int idx[5] = {0, 1, 2, 3, 4};
        double total = 0.0;
        std::sort(idx, idx + 5);
        do {
            int inv = 0;
            for (int i = 0; i < 5; ++i)
                for (int j = i + 1; j < 5; ++j)
                    if (idx[i] > idx[j]) ++inv;
            const double sgn = (inv % 2 == 0) ? 1.0 : -1.0;
            total += sgn * a[idx[0]] * m(idx[1], idx[2]) * m(idx[3], idx[4]);
        } while (std::next_permutation(idx, idx + 5));
        return total / 4.0;
    }
    throw ConfigError("volume density expansion limited to dim 3 and 5");
}

}  // namespace detail

inline VolumeDensity volume_density(const ContactChart& chart, const Vec& x) {
    const double signed_density = detail::signed_volume_density(chart.alpha(x), chart.dalpha(x));
    if (std::abs(signed_density) < 1e-12)
        throw DegenerateContactForm("volume density vanishes at sample point");
    return VolumeDensity{std::abs(signed_density), signed_density > 0 ? 1 : -1};
}

}  // namespace contactflow
