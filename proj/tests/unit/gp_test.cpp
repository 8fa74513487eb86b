#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "latentgp/errors.hpp"
#include "latentgp/gp_bundle.hpp"
#include "latentgp/gp_model.hpp"
#include "latentgp/rng.hpp"

using namespace latentgp;

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

Eigen::MatrixXd oracle_kernel_matrix(const Eigen::MatrixXd& x, const GpHyperparams& hp) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double a = std::sqrt(5.0) * (x.row(i) - x.row(j)).norm() / hp.length_scale;
            K(i, j) = hp.signal_variance * (1.0 + a + a * a / 3.0) * std::exp(-a);
        }
    return K;
}

// Explicit-inverse evaluation of the log marginal likelihood; the
// numerically naive but independent reference for the Cholesky path.
double oracle_lml(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                  const GpHyperparams& hp) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd Ky = oracle_kernel_matrix(x, hp) +
                         hp.noise_variance * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd Kinv = Ky.inverse();
    return -0.5 * y.dot(Kinv * y) - 0.5 * std::log(Ky.determinant()) -
           0.5 * static_cast<double>(n) * kLog2Pi;
}

void oracle_predict(const Eigen::MatrixXd& x, const Eigen::VectorXd& y_raw,
                    const GpHyperparams& hp, const Standardizer& st,
                    const Eigen::RowVectorXd& q, double& mean, double& var) {
    const Eigen::Index n = x.rows();
    Eigen::VectorXd y_std(n);
    for (Eigen::Index i = 0; i < n; ++i)
        y_std[i] = st.apply(y_raw[i]);
    Eigen::MatrixXd Ky = oracle_kernel_matrix(x, hp) +
                         hp.noise_variance * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd Kinv = Ky.inverse();
    Eigen::VectorXd ks(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double a = std::sqrt(5.0) * (x.row(i) - q).norm() / hp.length_scale;
        ks[i] = hp.signal_variance * (1.0 + a + a * a / 3.0) * std::exp(-a);
    }
    mean = st.invert(ks.dot(Kinv * y_std));
    var = (hp.signal_variance - ks.dot(Kinv * ks)) * st.stddev * st.stddev;
}

struct RandomProblem {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    GpHyperparams hp;
};

RandomProblem make_problem(KeyedStream& rng) {
    RandomProblem p;
    int n = 2 + static_cast<int>(rng.bounded(9));  // 2..10
    int d = 1 + static_cast<int>(rng.bounded(3));  // 1..3
    p.x.resize(n, d);
    p.y.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j)
            p.x(i, j) = rng.uniform(-2.0, 2.0);
        p.y[i] = std::sin(1.3 * p.x.row(i).sum()) + 0.1 * rng.normal();
    }
    p.hp.signal_variance = rng.uniform(0.3, 3.0);
    p.hp.length_scale = rng.uniform(0.3, 3.0);
    p.hp.noise_variance = rng.uniform(0.05, 0.5);
    return p;
}

}  // namespace

TEST_SUITE("gp") {

TEST_CASE("single-observation likelihood matches the hand-derived value") {
    Eigen::MatrixXd x(1, 1);
    x << 0.0;
    Eigen::VectorXd y(1);
    y << 0.7;
    GpHyperparams hp{1.3, 1.0, 0.2};
    LmlResult r = gp_lml(x, y, hp);
    // -y^2 / (2(sv+nv)) - log(sv+nv)/2 - log(2 pi)/2, high-precision.
    CHECK(r.value == doctest::Approx(-1.285004420592088266).epsilon(1e-14));
    CHECK(r.jitter_used == 0.0);
}

TEST_CASE("zero targets reduce the likelihood to its determinant terms") {
    KeyedStream rng{77};
    RandomProblem p = make_problem(rng);
    p.y.setZero();
    LmlResult r = gp_lml(p.x, p.y, p.hp);
    CHECK(r.value == doctest::Approx(oracle_lml(p.x, p.y, p.hp)).epsilon(1e-10));
}

TEST_CASE("likelihood matches the dense explicit-inverse oracle") {
    KeyedStream rng{78};
    for (int t = 0; t < 20; ++t) {
        RandomProblem p = make_problem(rng);
        LmlResult r = gp_lml(p.x, p.y, p.hp);
        double ref = oracle_lml(p.x, p.y, p.hp);
        CHECK(std::abs(r.value - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("likelihood gradient matches central finite differences") {
    KeyedStream rng{79};
    const double h = 1e-5;
    for (int t = 0; t < 10; ++t) {
        RandomProblem p = make_problem(rng);
        LmlResult r = gp_lml(p.x, p.y, p.hp);
        for (int comp = 0; comp < 3; ++comp) {
            auto shifted = [&](double delta) {
                GpHyperparams hp = p.hp;
                double* fields[] = {&hp.signal_variance, &hp.length_scale,
                                    &hp.noise_variance};
                *fields[comp] *= std::exp(delta);
                return gp_lml(p.x, p.y, hp).value;
            };
            double fd = (shifted(h) - shifted(-h)) / (2.0 * h);
            CHECK(r.gradient[comp] == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("non-finite inputs exhaust the jitter ladder") {
    Eigen::MatrixXd x(2, 1);
    x << 0.0, std::numeric_limits<double>::quiet_NaN();
    Eigen::VectorXd y(2);
    y << 1.0, -1.0;
    CHECK_THROWS_AS(gp_lml(x, y, GpHyperparams{}), OptimizationFailureError);
}

TEST_CASE("duplicate inputs survive via the noise term or jitter") {
    Eigen::MatrixXd x(3, 1);
    x << 0.4, 0.4, 1.0;
    Eigen::VectorXd y(3);
    y << 0.2, 0.25, -0.1;
    GpHyperparams hp{1.0, 1.0, 1e-9};
    LmlResult r = gp_lml(x, y, hp);
    CHECK(std::isfinite(r.value));
}

TEST_CASE("standardizer round-trips to machine precision") {
    Standardizer st{2.5, 3.1};
    for (double v : {-7.2, 0.0, 0.3, 1e6}) {
        CHECK(st.invert(st.apply(v)) == doctest::Approx(v).epsilon(1e-12));
        CHECK(st.apply(st.invert(v)) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("restored models reproduce the dense prediction oracle") {
    KeyedStream rng{80};
    for (int t = 0; t < 20; ++t) {
        RandomProblem p = make_problem(rng);
        Standardizer st{0.2, 1.7};
        GpModel m = GpModel::from_state(p.x, p.y, p.hp, st, false);
        for (int q = 0; q < 3; ++q) {
            Eigen::RowVectorXd query(p.x.cols());
            for (int j = 0; j < p.x.cols(); ++j)
                query[j] = rng.uniform(-2.5, 2.5);
            auto [mean, var] = m.predict(query);
            double ref_mean = 0.0, ref_var = 0.0;
            oracle_predict(p.x, p.y, p.hp, st, query, ref_mean, ref_var);
            CHECK(std::abs(mean - ref_mean) <= 1e-8 * std::max(1.0, std::abs(ref_mean)));
            CHECK(std::abs(var - ref_var) <= 1e-8 * std::max(1.0, std::abs(ref_var)));
            // Posterior variance never exceeds the prior variance.
            CHECK(var <= p.hp.signal_variance * st.stddev * st.stddev + 1e-10);
            CHECK(var >= 0.0);
        }
    }
}

TEST_CASE("far queries revert to the prior") {
    Eigen::MatrixXd x(4, 1);
    x << 0.0, 0.5, 1.0, 1.5;
    Eigen::VectorXd y(4);
    y << 1.0, 2.0, 3.0, 2.0;
    Standardizer st{2.0, 0.7071067811865476};
    GpHyperparams hp{1.2, 0.8, 0.01};
    GpModel m = GpModel::from_state(x, y, hp, st, false);
    Eigen::RowVectorXd far(1);
    far << 1e4;
    auto [mean, var] = m.predict(far);
    CHECK(mean == doctest::Approx(st.mean).epsilon(1e-10));
    CHECK(var == doctest::Approx(hp.signal_variance * st.stddev * st.stddev).epsilon(1e-10));
}

TEST_CASE("adding an observation cannot raise the posterior variance") {
    KeyedStream rng{81};
    for (int t = 0; t < 10; ++t) {
        Eigen::MatrixXd x(5, 1);
        Eigen::VectorXd y(5);
        for (int i = 0; i < 5; ++i) {
            x(i, 0) = rng.uniform(-2.0, 2.0);
            y[i] = rng.normal();
        }
        GpHyperparams hp{1.0, 1.0, 0.1};
        Standardizer st{0.0, 1.0};
        GpModel small = GpModel::from_state(x.topRows(4), y.head(4), hp, st, false);
        GpModel big = GpModel::from_state(x, y, hp, st, false);
        Eigen::RowVectorXd q(1);
        q << rng.uniform(-2.0, 2.0);
        CHECK(big.predict(q).second <= small.predict(q).second + 1e-10);
    }
}

TEST_CASE("fitting a smooth 1D signal lands in the expected basin") {
    const int n = 30;
    Eigen::MatrixXd x(n, 1);
    Eigen::VectorXd y(n);
    KeyedStream rng{82};
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 4.0 * 3.141592653589793 * i / (n - 1);
        y[i] = std::sin(x(i, 0)) + 0.05 * rng.normal();
    }
    GpFitOptions options;
    options.seed = 12;
    GpModel m = GpModel::fit(x, y, options);
    CHECK_FALSE(m.degenerate());
    CHECK(m.hyperparams().noise_variance >= options.noise_floor);

    // The optimum must beat the unperturbed starting point.
    Standardizer st = m.standardizer();
    Eigen::VectorXd y_std(n);
    for (int i = 0; i < n; ++i)
        y_std[i] = st.apply(y[i]);
    GpHyperparams init{1.0, median_pairwise_distance(x), options.initial_noise};
    CHECK(m.log_marginal_likelihood() >= gp_lml(x, y_std, init).value);

    // Length scale within a factor of 5 of wavelength / (2 pi) = 1.
    CHECK(m.hyperparams().length_scale > 0.2);
    CHECK(m.hyperparams().length_scale < 5.0);

    // Interpolation quality at the training points.
    for (int i = 0; i < n; i += 7) {
        auto [mean, var] = m.predict(x.row(i));
        CHECK(std::abs(mean - y[i]) < 0.2);
        CHECK(var >= 0.0);
    }
}

TEST_CASE("fit is deterministic for a fixed seed") {
    Eigen::MatrixXd x(8, 2);
    Eigen::VectorXd y(8);
    KeyedStream rng{83};
    for (int i = 0; i < 8; ++i) {
        x(i, 0) = rng.uniform(-1.0, 1.0);
        x(i, 1) = rng.uniform(-1.0, 1.0);
        y[i] = x(i, 0) * x(i, 1) + 0.1 * rng.normal();
    }
    GpFitOptions options;
    options.seed = 4;
    GpModel a = GpModel::fit(x, y, options);
    GpModel b = GpModel::fit(x, y, options);
    CHECK(a.hyperparams().signal_variance == b.hyperparams().signal_variance);
    CHECK(a.hyperparams().length_scale == b.hyperparams().length_scale);
    CHECK(a.hyperparams().noise_variance == b.hyperparams().noise_variance);
    CHECK(a.log_marginal_likelihood() == b.log_marginal_likelihood());
}

TEST_CASE("constant targets produce a flagged degenerate model") {
    Eigen::MatrixXd x(5, 1);
    x << 0, 1, 2, 3, 4;
    Eigen::VectorXd y = Eigen::VectorXd::Constant(5, 3.7);
    GpFitOptions options;
    GpModel m = GpModel::fit(x, y, options);
    CHECK(m.degenerate());
    Eigen::RowVectorXd q(1);
    q << 1.7;
    auto [mean, var] = m.predict(q);
    CHECK(mean == 3.7);
    CHECK(var == doctest::Approx(options.noise_floor).epsilon(1e-12));
}

TEST_CASE("query dimension mismatches raise ShapeError") {
    Eigen::MatrixXd x(3, 2);
    x.setZero();
    Eigen::VectorXd y(3);
    y << 1, 2, 3;
    GpModel m = GpModel::from_state(x, y, GpHyperparams{}, Standardizer{2.0, 1.0}, false);
    Eigen::RowVectorXd q(3);
    q.setZero();
    CHECK_THROWS_AS(m.predict(q), ShapeError);
}

TEST_CASE("bundle fits components independently and in order") {
    const int n = 12;
    LatentDataset data;
    data.kind = LoadKind::PointLoad;
    data.forces.resize(n, 2);
    data.latents.resize(n, 3);
    KeyedStream rng{84};
    for (int i = 0; i < n; ++i) {
        data.forces(i, 0) = rng.uniform(-1.0, 1.0);
        data.forces(i, 1) = rng.uniform(-1.0, 1.0);
        data.latents(i, 0) = std::sin(data.forces(i, 0)) + 0.05 * rng.normal();
        data.latents(i, 1) = data.forces(i, 1) + 0.05 * rng.normal();
        data.latents(i, 2) = 2.5;  // constant component
    }
    GpFitOptions options;
    options.seed = 9;
    LatentGpBundle bundle = LatentGpBundle::fit(data, options, 2);
    CHECK(bundle.latent_dim() == 3);
    CHECK(bundle.input_dim() == 2);
    CHECK_FALSE(bundle.component(0).degenerate());
    CHECK(bundle.component(2).degenerate());

    // Bundle prediction agrees with the per-component models.
    Eigen::RowVectorXd q(2);
    q << 0.3, -0.2;
    Eigen::VectorXd means, vars;
    bundle.predict(q, means, vars);
    REQUIRE(means.size() == 3);
    for (int l = 0; l < 3; ++l) {
        auto [m, v] = bundle.component(l).predict(q);
        CHECK(means[l] == m);
        CHECK(vars[l] == v);
    }
    CHECK(means[2] == 2.5);

    // Thread count does not change the fit.
    LatentGpBundle serial = LatentGpBundle::fit(data, options, 1);
    for (int l = 0; l < 3; ++l) {
        CHECK(serial.component(l).hyperparams().length_scale ==
              bundle.component(l).hyperparams().length_scale);
    }
}

}  // TEST_SUITE
