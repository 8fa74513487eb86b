#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "latentgp/ae_training.hpp"
#include "latentgp/assembly.hpp"
#include "latentgp/autoencoder.hpp"
#include "latentgp/gp_model.hpp"
#include "latentgp/material.hpp"
#include "latentgp/mesh.hpp"
#include "latentgp/rng.hpp"
#include "latentgp/solver.hpp"
#include "latentgp/surrogate.hpp"

using namespace latentgp;

namespace {

MaterialParams beam_material() {
    return MaterialParams::from_engineering(500.0, 0.4, 1000.0);
}

Eigen::VectorXd random_vector(Eigen::Index n, double scale, std::uint64_t seed) {
    KeyedStream rng{seed};
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = scale * rng.uniform(-1.0, 1.0);
    return v;
}

void bm_element_force_stiffness(benchmark::State& state) {
    Eigen::Matrix<double, 4, 2> coords;
    coords << 0.0, 0.0, 0.125, 0.0, 0.125, 0.125, 0.0, 0.125;
    Eigen::Matrix<double, 8, 1> u = random_vector(8, 0.01, 1);
    MaterialParams mat = beam_material();
    Eigen::Matrix<double, 8, 1> f;
    Eigen::Matrix<double, 8, 8> k;
    for (auto _ : state) {
        element_force_stiffness(coords, u, mat, f, k);
        benchmark::DoNotOptimize(k.data());
    }
}
BENCHMARK(bm_element_force_stiffness);

void bm_assemble_raw(benchmark::State& state) {
    Mesh2D mesh = MeshSpec{}.build();
    MaterialParams mat = beam_material();
    Eigen::VectorXd u = random_vector(mesh.n_dofs(), 0.005, 2);
    Eigen::VectorXd f;
    Eigen::MatrixXd tangent;
    for (auto _ : state) {
        assemble_raw(mesh, mat, u, f, tangent);
        benchmark::DoNotOptimize(tangent.data());
    }
}
BENCHMARK(bm_assemble_raw);

void bm_solve_static(benchmark::State& state) {
    MeshSpec ms;
    ms.nx = 8;
    ms.ny = 2;
    Mesh2D mesh = ms.build();
    MaterialParams mat = beam_material();
    LoadSpec load = LoadSpec::point(0.0, -1.5, 2.0);
    for (auto _ : state) {
        Eigen::VectorXd u = solve_static(mesh, mat, load);
        benchmark::DoNotOptimize(u.data());
    }
}
BENCHMARK(bm_solve_static)->Unit(benchmark::kMillisecond);

GpModel fitted_gp() {
    KeyedStream rng{3};
    const int n = 40;
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) {
            x(i, j) = rng.uniform(-2.0, 2.0);
            s += x(i, j);
        }
        y[i] = std::sin(s) + 0.05 * rng.normal();
    }
    GpFitOptions opt;
    opt.restarts = 2;
    opt.seed = 3;
    return GpModel::fit(x, y, opt);
}

void bm_gp_fit(benchmark::State& state) {
    KeyedStream rng{3};
    const int n = 40;
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) {
            x(i, j) = rng.uniform(-2.0, 2.0);
            s += x(i, j);
        }
        y[i] = std::sin(s) + 0.05 * rng.normal();
    }
    GpFitOptions opt;
    opt.restarts = 2;
    opt.seed = 3;
    for (auto _ : state) {
        GpModel m = GpModel::fit(x, y, opt);
        benchmark::DoNotOptimize(&m);
    }
}
BENCHMARK(bm_gp_fit)->Unit(benchmark::kMillisecond);

void bm_gp_predict(benchmark::State& state) {
    GpModel model = fitted_gp();
    Eigen::RowVectorXd q(3);
    q << 0.3, -1.1, 0.7;
    for (auto _ : state) {
        auto [mean, var] = model.predict(q);
        benchmark::DoNotOptimize(mean);
        benchmark::DoNotOptimize(var);
    }
}
BENCHMARK(bm_gp_predict);

AutoencoderModel desk_autoencoder() {
    AutoencoderSpec spec;
    spec.input_dim = 170;
    spec.encoder_widths = {256, 128, 64, 32};
    spec.latent_dim = 4;
    return AutoencoderModel::init_glorot(spec, Normalizer{0.1, 0.0}, 5);
}

Eigen::MatrixXd desk_batch(int rows) {
    KeyedStream rng{6};
    Eigen::MatrixXd u(rows, 170);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < 170; ++j)
            u(i, j) = 0.05 * rng.uniform(-1.0, 1.0);
    return u;
}

void bm_autoencoder_forward(benchmark::State& state) {
    AutoencoderModel model = desk_autoencoder();
    Eigen::MatrixXd batch = desk_batch(16);
    for (auto _ : state) {
        double loss = mse_loss(model, batch);
        benchmark::DoNotOptimize(loss);
    }
}
BENCHMARK(bm_autoencoder_forward);

void bm_autoencoder_backward(benchmark::State& state) {
    AutoencoderModel model = desk_autoencoder();
    Eigen::MatrixXd batch = desk_batch(16);
    for (auto _ : state) {
        Eigen::VectorXd grad = backprop(model, batch);
        benchmark::DoNotOptimize(grad.data());
    }
}
BENCHMARK(bm_autoencoder_backward);

void bm_mc_decode(benchmark::State& state) {
    AutoencoderModel model = desk_autoencoder();
    Eigen::VectorXd mu = random_vector(4, 0.5, 7);
    Eigen::VectorXd var = random_vector(4, 0.0, 8).array() + 0.04;
    std::uint64_t case_index = 0;
    for (auto _ : state) {
        PredictionField pf = mc_decode(model, mu, var, 300, 9, case_index++);
        benchmark::DoNotOptimize(pf.mean.data());
    }
}
BENCHMARK(bm_mc_decode)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
