#include "contactflow/geodesic.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace contactflow;
using namespace contactflow::testing;

namespace {

// e^{2f} I with f = s cos(2 pi q1) sin(2 pi q2), C-infinity and periodic;
// kept gentle so 10 step^2 covers the FD truncation of dg
RiemannianMetric2 exp_conformal_metric(double scale = 0.05) {
    auto f = [scale](const Vector2d& q) {
        return scale * std::cos(2.0 * M_PI * q[0]) * std::sin(2.0 * M_PI * q[1]);
    };
    auto df = [scale](const Vector2d& q) {
        return Vector2d(-2.0 * M_PI * scale * std::sin(2.0 * M_PI * q[0]) * std::sin(2.0 * M_PI * q[1]),
                        2.0 * M_PI * scale * std::cos(2.0 * M_PI * q[0]) * std::cos(2.0 * M_PI * q[1]));
    };
    return conformal_metric([f](const Vector2d& q) { return std::exp(2.0 * f(q)); },
                            [f, df](const Vector2d& q) {
                                return Vector2d(2.0 * std::exp(2.0 * f(q)) * df(q));
                            });
}

std::vector<Vec> chart_ics(int per_q, int per_theta) {
    std::vector<Vec> ics;
    for (int i = 0; i < per_q; ++i)
        for (int j = 0; j < per_q; ++j)
            for (int k = 0; k < per_theta; ++k) {
                Vec x(3);
                x << (i + 0.5) / per_q, (j + 0.5) / per_q, 2.0 * M_PI * k / per_theta;
                ics.push_back(x);
            }
    return ics;
}

}  // namespace

TEST_CASE("cometric") {
    const RiemannianMetric2 flat = flat_metric();
    CHECK(cometric(flat, Vector2d(0.3, 0.7)).isApprox(Matrix2d::Identity(), 1e-14));

    const RiemannianMetric2 conf = exp_conformal_metric();
    Rng rng(401);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector2d q(rng.uniform(), rng.uniform());
        const Matrix2d prod = conf.g(q) * cometric(conf, q);
        CHECK((prod - Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    }

    const RiemannianMetric2 bad = RiemannianMetric2::from_g([](const Vector2d&) {
        return Matrix2d::Zero();
    });
    CHECK_THROWS_AS(cometric(bad, Vector2d(0, 0)), SingularMetric);
}

TEST_CASE("finite-difference metric derivatives match closed forms") {
    const RiemannianMetric2 conf = exp_conformal_metric();
    const RiemannianMetric2 fd = RiemannianMetric2::from_g(conf.g);
    Rng rng(403);
    const double step = kDefaultFdStep;
    for (int trial = 0; trial < 20; ++trial) {
        const Vector2d q(rng.uniform(), rng.uniform());
        const auto closed = conf.dg(q);
        const auto approx = fd.dg(q);
        for (int i = 0; i < 2; ++i)
            CHECK((closed[i] - approx[i]).cwiseAbs().maxCoeff() < 10.0 * step * step);
    }
}

TEST_CASE("Legendre map") {
    const RiemannianMetric2 flat = flat_metric();
    const Vector2d q(0.2, 0.8);
    const Vector2d v(0.6, -0.8);
    CHECK((legendre_map(flat, q, v) - v).norm() == 0.0);

    const RiemannianMetric2 conf = exp_conformal_metric();
    Rng rng(409);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector2d qq(rng.uniform(), rng.uniform());
        const Vector2d vv(rng.uniform(-2, 2), rng.uniform(-2, 2));
        const Vector2d p = legendre_map(conf, qq, vv);
        CHECK((legendre_inverse(conf, qq, p) - vv).norm() < 1e-12);

        // g(v, v) = 1 iff g*(p, p) = 1
        const double gv = vv.dot(conf.g(qq) * vv);
        const double gp = p.dot(cometric(conf, qq) * p);
        CHECK(gv == Catch::Approx(gp).margin(1e-12));
    }
}

TEST_CASE("geodesic Hamiltonian") {
    SECTION("flat metric gives the Reeb Hamiltonian") {
        const TimeDependentHamiltonian h = geodesic_hamiltonian(flat_metric());
        Rng rng(419);
        for (int trial = 0; trial < 10; ++trial) {
            Vec x(3);
            x << rng.uniform(), rng.uniform(), rng.uniform(0, 2 * M_PI);
            CHECK(h.value(0.0, x) == Catch::Approx(1.0).margin(1e-14));
        }
    }

    SECTION("conformal e^{2f} I gives e^{-f}") {
        const double scale = 0.15;
        const RiemannianMetric2 conf = exp_conformal_metric(scale);
        const TimeDependentHamiltonian h = geodesic_hamiltonian(conf);
        Rng rng(421);
        for (int trial = 0; trial < 10; ++trial) {
            Vec x(3);
            x << rng.uniform(), rng.uniform(), rng.uniform(0, 2 * M_PI);
            const double f = scale * std::cos(2.0 * M_PI * x[0]) * std::sin(2.0 * M_PI * x[1]);
            CHECK(h.value(0.0, x) == Catch::Approx(std::exp(-f)).margin(1e-12));
            CHECK(h.value(0.0, x) > 0.0);
        }
    }

    SECTION("closed-form gradient matches finite differences") {
        const TimeDependentHamiltonian h = geodesic_hamiltonian(exp_conformal_metric());
        Rng rng(431);
        const double step = kDefaultFdStep;
        for (int trial = 0; trial < 10; ++trial) {
            Vec x(3);
            x << rng.uniform(), rng.uniform(), rng.uniform(0, 2 * M_PI);
            const Vec closed = h.gradient(0.0, x);
            const Vec fd = fd_gradient([&](const Vec& p) { return h.value(0.0, p); }, x, step);
            CHECK((closed - fd).lpNorm<Eigen::Infinity>() < 10.0 * step * step);
        }
    }
}

TEST_CASE("normalizer map") {
    SECTION("flat metric normalizes to the identity with zero exponent") {
        const ContactTransform phi = normalizer_map(flat_metric());
        Vec x(3);
        x << 0.3, 0.6, 1.1;
        CHECK((phi.map(x) - x).norm() == 0.0);
        CHECK(phi.conformal(x) == Catch::Approx(0.0).margin(1e-14));
    }

    SECTION("conformal e^{2f} I rescales covectors by e^f") {
        const double scale = 0.15;
        const ContactTransform phi = normalizer_map(exp_conformal_metric(scale));
        Vec x(3);
        x << 0.25, 0.4, 0.9;
        const double f = scale * std::cos(2.0 * M_PI * x[0]) * std::sin(2.0 * M_PI * x[1]);
        CHECK(phi.conformal(x) == Catch::Approx(f).margin(1e-12));
    }

    SECTION("pullback relation through the cotangent embedding") {
        const RiemannianMetric2 conf = exp_conformal_metric();
        Rng rng(433);
        for (int trial = 0; trial < 10; ++trial) {
            Vec x(3);
            x << rng.uniform(), rng.uniform(), rng.uniform(0, 2 * M_PI);
            CHECK(normalizer_pullback_residual(conf, x) < 1e-6);
        }
    }
}

TEST_CASE("direct geodesic integration") {
    const IntegratorConfig cfg;

    SECTION("flat geodesics are straight lines") {
        const TangentTrajectory traj = geodesic_flow_direct(
            flat_metric(), Vector2d(0.1, 0.9), Vector2d(0.6, 0.8), 1.0, cfg);
        const Eigen::Vector4d end = traj.states.back();
        CHECK(end[0] == Catch::Approx(0.7).margin(1e-12));
        CHECK(end[1] == Catch::Approx(1.7).margin(1e-12));
        CHECK(end[2] == Catch::Approx(0.6).margin(1e-12));
        CHECK(end[3] == Catch::Approx(0.8).margin(1e-12));
    }

    SECTION("speed is conserved along conformal-bump geodesics") {
        const RiemannianMetric2 m = conformal_bump_metric(0.4);
        const Vector2d q0(0.15, 0.35);
        Vector2d v0(1.0, 0.3);
        v0 /= std::sqrt(v0.dot(m.g(q0) * v0));
        const TangentTrajectory traj = geodesic_flow_direct(m, q0, v0, 1.0, cfg);
        const double speed0 = 1.0;
        for (std::size_t i = 0; i < traj.states.size(); i += 200) {
            const Vector2d q(traj.states[i][0], traj.states[i][1]);
            const Vector2d v(traj.states[i][2], traj.states[i][3]);
            CHECK(std::abs(v.dot(m.g(q) * v) - speed0) < 1e-7);
        }
    }

    SECTION("no initial acceleration at a critical point of the factor") {
        const RiemannianMetric2 m = conformal_bump_metric(0.5);
        // the bump peaks at (1/2, 1/2): gradient vanishes, so Gamma = 0 there
        const auto gamma = christoffel(m, Vector2d(0.5, 0.5));
        CHECK(gamma[0].cwiseAbs().maxCoeff() < 1e-12);
        CHECK(gamma[1].cwiseAbs().maxCoeff() < 1e-12);
        CHECK_THROWS_AS(geodesic_flow_direct(m, Vector2d(0.5, 0.5), Vector2d::Zero(), 1.0, cfg),
                        ConfigError);
    }
}

TEST_CASE("flat Reeb flow is exactly straight-line motion") {
    const ContactChart chart = flat_unit_cotangent_torus();
    const FlowMap flow(chart, geodesic_hamiltonian(flat_metric()), IntegratorConfig{});
    Rng rng(439);
    for (int trial = 0; trial < 5; ++trial) {
        Vec x(3);
        x << rng.uniform(), rng.uniform(), rng.uniform(0, 2 * M_PI);
        const double t = rng.uniform(0.2, 1.0);
        const PointH p = flow.evaluate(t, x);
        Vec expected(3);
        expected << x[0] + t * std::cos(x[2]), x[1] + t * std::sin(x[2]), x[2];
        CHECK(chart.distance(p.x, chart.reduce(expected)) < 1e-8);
    }
}

TEST_CASE("two routes to the geodesic flow agree") {
    const IntegratorConfig cfg{2e-3};
    const std::vector<double> t_grid{0.5, 1.0};
    const std::vector<Vec> ics = chart_ics(2, 4);

    CHECK(route_equivalence_gap(flat_metric(), ics, t_grid, cfg) < 1e-8);
    CHECK(route_equivalence_gap(conformal_bump_metric(0.5), ics, t_grid, cfg) < 1e-4);
}

TEST_CASE("energy identity along geodesic contact flows") {
    const ContactChart chart = flat_unit_cotangent_torus();
    const RiemannianMetric2 m = conformal_bump_metric(0.5);
    const TimeDependentHamiltonian h = geodesic_hamiltonian(m);
    const FlowMap flow(chart, h, IntegratorConfig{});
    Rng rng(443);
    for (int trial = 0; trial < 5; ++trial) {
        Vec x(3);
        x << rng.uniform(), rng.uniform(), rng.uniform(0, 2 * M_PI);
        const PointH p = flow.evaluate(1.0, x);
        CHECK(std::abs(h.value(0.0, p.x) - std::exp(p.h) * h.value(0.0, x)) < 1e-6);
    }
}

TEST_CASE("chart points map to unit tangent vectors") {
    const RiemannianMetric2 m = conformal_bump_metric(0.3);
    Rng rng(449);
    for (int trial = 0; trial < 10; ++trial) {
        Vec x(3);
        x << rng.uniform(), rng.uniform(), rng.uniform(0, 2 * M_PI);
        const Eigen::Vector4d state = chart_to_tangent(m, x);
        const Vector2d q(state[0], state[1]);
        const Vector2d v(state[2], state[3]);
        CHECK(v.dot(m.g(q) * v) == Catch::Approx(1.0).margin(1e-12));
        // round trip through the Legendre map restores the chart point
        const Vec back = tangent_to_chart(m, state);
        CHECK(flat_unit_cotangent_torus().distance(back, x) < 1e-12);
    }
}

TEST_CASE("rigidity experiment rows") {
    ExperimentGrids grids;
    grids.t_grid = {0.5, 1.0};
    grids.x_grid = chart_ics(2, 4);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) grids.base_grid.emplace_back(i / 5.0, j / 5.0);
    const IntegratorConfig cfg{2e-3};

    SECTION("the constant sequence reports gaps at the integrator floor") {
        MetricSequence constant;
        constant.limit = flat_metric();
        constant.generator = [](int) { return flat_metric(); };
        const auto rows = rigidity_experiment(constant, {2, 4}, grids, cfg);
        for (const GapRow& row : rows) {
            CHECK(row.sup_metric_gap == 0.0);
            CHECK(row.ham_gap == 0.0);
            CHECK(row.conf_gap < 1e-9);
            CHECK(row.c0_flow_gap < 1e-9);
        }
    }

    SECTION("bump sequences tighten at rate 1/k") {
        grids.x_grid = chart_ics(3, 4);  // includes the bump peak q = (1/2, 1/2)
        const auto rows = rigidity_experiment(rigidity_sequence(0.4), {2, 4}, grids, cfg);
        REQUIRE(rows.size() == 2);
        CHECK(rows[1].ham_gap < rows[0].ham_gap);
        CHECK(rows[1].c0_flow_gap < rows[0].c0_flow_gap);
        CHECK(rows[0].ham_gap == Catch::Approx(0.4 / 2.0 / 2.0).epsilon(0.15));
    }
}

TEST_CASE("counterexample experiment") {
    ExperimentGrids grids;
    grids.t_grid = {0.5, 1.0};
    grids.x_grid = chart_ics(2, 4);
    const IntegratorConfig coarse{0.05};
    CHECK_THROWS_AS(counterexample_experiment({2}, grids, coarse), StepResolution);
    CHECK_THROWS_AS(counterexample_experiment({1}, grids, IntegratorConfig{}), ConfigError);

    const auto rows = counterexample_experiment({2}, grids, IntegratorConfig{});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].sup_metric_gap == Catch::Approx(0.5).margin(1e-12));
    CHECK(rows[0].c0_flow_gap > 0.05);
}
