#include "contactflow/contact_core.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace contactflow;

namespace {

TimeDependentHamiltonian coordinate_x(int dim) {
    return TimeDependentHamiltonian::from_value_grad(
        [](double, const Vec& x) { return x[0]; },
        [dim](double, const Vec&) {
            Vec g = Vec::Zero(dim);
            g[0] = 1.0;
            return g;
        });
}

TimeDependentHamiltonian coordinate_z(int dim) {
    return TimeDependentHamiltonian::from_value_grad(
        [dim](double, const Vec& x) { return x[dim - 1]; },
        [dim](double, const Vec&) {
            Vec g = Vec::Zero(dim);
            g[dim - 1] = 1.0;
            return g;
        });
}

}  // namespace

TEST_CASE("Reeb field of the model charts") {
    Rng rng(31);
    for (int n : {1, 2}) {
        const ContactChart chart = standard_heisenberg(n, 2.0);
        for (int trial = 0; trial < 20; ++trial) {
            const Vec x = rng.uniform_vec(chart.dim(), -1.5, 1.5);
            const Vec reeb = reeb_field(chart, x);
            Vec expected = Vec::Zero(chart.dim());
            expected[chart.dim() - 1] = 1.0;
            CHECK((reeb - expected).lpNorm<Eigen::Infinity>() < 1e-10);
        }
    }
    const ContactChart torus = flat_unit_cotangent_torus();
    for (int trial = 0; trial < 20; ++trial) {
        const Vec x = rng.uniform_vec(3, 0.0, 1.0);
        const Vec reeb = reeb_field(torus, x);
        CHECK(reeb[0] == Catch::Approx(std::cos(x[2])).margin(1e-10));
        CHECK(reeb[1] == Catch::Approx(std::sin(x[2])).margin(1e-10));
        CHECK(std::abs(reeb[2]) < 1e-10);
        CHECK(torus.alpha(x).dot(reeb) == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("contact vector field reproduces hand-solved cases") {
    const ContactChart chart = standard_heisenberg(1, 3.0);

    SECTION("H == 1 is the Reeb flow") {
        const auto one = TimeDependentHamiltonian::constant(1.0, 3);
        Vec x(3);
        x << 0.4, -0.7, 0.2;
        const Vec field = contact_vector_field(chart, one, 0.0, x);
        CHECK((field - reeb_field(chart, x)).lpNorm<Eigen::Infinity>() < 1e-10);
    }

    SECTION("H = x gives (0, -1, x/2)") {
        const auto ham = coordinate_x(3);
        Rng rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            const Vec x = rng.uniform_vec(3, -2.0, 2.0);
            const Vec field = contact_vector_field(chart, ham, 0.0, x);
            CHECK(field[0] == Catch::Approx(0.0).margin(1e-10));
            CHECK(field[1] == Catch::Approx(-1.0).margin(1e-10));
            CHECK(field[2] == Catch::Approx(0.5 * x[0]).margin(1e-10));
        }
    }

    SECTION("constant H on the torus scales the Reeb field") {
        const ContactChart torus = flat_unit_cotangent_torus();
        const auto ham = TimeDependentHamiltonian::constant(-1.7, 3);
        Vec x(3);
        x << 0.2, 0.9, 1.3;
        const Vec field = contact_vector_field(torus, ham, 0.0, x);
        CHECK((field + 1.7 * reeb_field(torus, x)).lpNorm<Eigen::Infinity>() < 1e-9);
    }
}

TEST_CASE("Reeb derivative and the basic predicate") {
    const ContactChart chart = standard_heisenberg(1, 2.0);
    Vec x(3);
    x << 0.3, 0.1, -0.4;

    CHECK(reeb_derivative(chart, TimeDependentHamiltonian::constant(4.2, 3), 0.0, x) == 0.0);
    CHECK(reeb_derivative(chart, coordinate_z(3), 0.0, x) == Catch::Approx(1.0).margin(1e-10));
    CHECK(reeb_derivative(chart, coordinate_x(3), 0.0, x) == Catch::Approx(0.0).margin(1e-10));

    Rng rng(3);
    std::vector<Vec> grid;
    for (int i = 0; i < 30; ++i) grid.push_back(rng.uniform_vec(3, -1.5, 1.5));
    const std::vector<double> times{0.0, 0.5, 1.0};
    CHECK(is_basic(chart, coordinate_x(3), grid, times, 1e-9));
    CHECK_FALSE(is_basic(chart, coordinate_z(3), grid, times, 1e-9));
    CHECK(is_basic(chart, TimeDependentHamiltonian::constant(0.0, 3), grid, times, 1e-9));
}

TEST_CASE("defining equations hold independently of the solver") {
    Rng rng(41);
    const std::vector<ContactChart> charts{standard_heisenberg(1, 2.0), standard_heisenberg(2, 2.0),
                                           flat_unit_cotangent_torus()};
    for (const ContactChart& chart : charts) {
        const int d = chart.dim();
        auto ham = TimeDependentHamiltonian::from_value_grad(
            [](double t, const Vec& x) {
                return std::sin(x[0]) + 0.5 * x[1] * x[1] + t * x[x.size() - 1];
            },
            [d](double t, const Vec& x) {
                Vec g = Vec::Zero(d);
                g[0] = std::cos(x[0]);
                g[1] = x[1];
                g[d - 1] += t;
                return g;
            });
        for (int trial = 0; trial < 30; ++trial) {
            const Vec x = rng.uniform_vec(d, -1.2, 1.2);
            const double t = rng.uniform();
            const ContactField f = contact_vector_field_aug(chart, ham, t, x);
            const Vec a = chart.alpha(x);
            const Mat m = chart.dalpha(x);
            const double eq1 = std::abs(a.dot(f.velocity) - ham.value(t, x));
            const Vec eq2 = m.transpose() * f.velocity + ham.gradient(t, x) - f.mu * a;
            CHECK(eq1 < 1e-9);
            CHECK(eq2.lpNorm<Eigen::Infinity>() < 1e-9);
        }
    }
}

TEST_CASE("the defining system is linear in H") {
    const ContactChart chart = standard_heisenberg(1, 2.0);
    const auto ham_a = coordinate_x(3);
    const auto ham_b = coordinate_z(3);
    auto combo = TimeDependentHamiltonian::from_value_grad(
        [](double, const Vec& x) { return 2.0 * x[0] - 3.0 * x[2]; },
        [](double, const Vec&) {
            Vec g(3);
            g << 2.0, 0.0, -3.0;
            return g;
        });
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec x = rng.uniform_vec(3, -1.5, 1.5);
        const Vec lhs = contact_vector_field(chart, combo, 0.0, x);
        const Vec rhs = 2.0 * contact_vector_field(chart, ham_a, 0.0, x) -
                        3.0 * contact_vector_field(chart, ham_b, 0.0, x);
        CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-9);
    }
}

TEST_CASE("inconsistent systems raise the degenerate-form error") {
    const ContactChart bad = chart_from_alpha(
        "degenerate", 3,
        [](const Vec&) {
            Vec a(3);
            a << 0.0, 0.0, 1.0;
            return a;
        },
        std::vector<double>(3, 0.0), 1.0);
    CHECK_THROWS_AS(contact_vector_field(bad, coordinate_x(3), 0.0, Vec::Zero(3)),
                    DegenerateContactForm);
}

TEST_CASE("pullback residual of fixed maps") {
    const ContactChart chart = standard_heisenberg(1, 3.0);

    SECTION("identity with zero exponent") {
        const double r = map_pullback_residual(chart, [](const Vec& x) { return x; }, 0.0,
                                               Vec::Zero(3));
        CHECK(r < 1e-12);
    }

    SECTION("dilation (x, y, z) -> (l x, l y, l^2 z) has exponent 2 ln l") {
        const double lambda = 1.7;
        auto dilation = [lambda](const Vec& x) {
            Vec y(3);
            y << lambda * x[0], lambda * x[1], lambda * lambda * x[2];
            return y;
        };
        Rng rng(19);
        for (int trial = 0; trial < 10; ++trial) {
            const Vec x = rng.uniform_vec(3, -1.0, 1.0);
            CHECK(map_pullback_residual(chart, dilation, 2.0 * std::log(lambda), x) < 1e-8);
        }
    }
}
