#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "latentgp/errors.hpp"
#include "latentgp/experiment.hpp"
#include "latentgp/fem_dataset.hpp"
#include "latentgp/material.hpp"
#include "latentgp/mesh.hpp"
#include "latentgp/metrics.hpp"
#include "latentgp/rng.hpp"
#include "latentgp/surrogate.hpp"

using namespace latentgp;

namespace {

const LayerInfo& find_layer(const AutoencoderModel& m, const std::string& name) {
    for (const LayerInfo& info : m.layout())
        if (info.name == name)
            return info;
    throw std::runtime_error("no layer named " + name);
}

void set_layer(Eigen::VectorXd& params, const LayerInfo& info, const Eigen::MatrixXd& w,
               const Eigen::VectorXd& b) {
    Eigen::Map<Eigen::MatrixXd>(params.data() + info.w_offset, info.rows, info.cols) = w;
    Eigen::Map<Eigen::VectorXd>(params.data() + info.b_offset, info.rows) = b;
}

AutoencoderModel identity_affine(int dim) {
    AutoencoderSpec spec;
    spec.input_dim = dim;
    spec.latent_dim = dim;
    AutoencoderModel m(spec, Normalizer{1.0, 0.0});
    Eigen::VectorXd p = Eigen::VectorXd::Zero(m.param_count());
    set_layer(p, find_layer(m, "latent"), Eigen::MatrixXd::Identity(dim, dim),
              Eigen::VectorXd::Zero(dim));
    set_layer(p, find_layer(m, "output"), Eigen::MatrixXd::Identity(dim, dim),
              Eigen::VectorXd::Zero(dim));
    m.set_params(p);
    return m;
}

// Affine model with a prescribed decoder; the encoder maps to zero.
AutoencoderModel decoder_model(const Eigen::MatrixXd& wd, const Eigen::VectorXd& bd) {
    AutoencoderSpec spec;
    spec.input_dim = static_cast<int>(wd.rows());
    spec.latent_dim = static_cast<int>(wd.cols());
    AutoencoderModel m(spec, Normalizer{1.0, 0.0});
    Eigen::VectorXd p = Eigen::VectorXd::Zero(m.param_count());
    set_layer(p, find_layer(m, "output"), wd, bd);
    m.set_params(p);
    return m;
}

// Degenerate component: predicts (c, 0) for every query.
GpModel exact_gp(double c, int input_dim) {
    return GpModel::from_state(Eigen::MatrixXd::Zero(1, input_dim),
                               Eigen::VectorXd::Zero(1), GpHyperparams{1.0, 1.0, 0.0},
                               Standardizer{c, 1.0}, true);
}

SurrogateModel exact_surrogate(AutoencoderModel am, const Eigen::VectorXd& latent_const,
                               int input_dim) {
    std::vector<GpModel> models;
    for (Eigen::Index l = 0; l < latent_const.size(); ++l)
        models.push_back(exact_gp(latent_const[l], input_dim));
    SurrogateModel model;
    model.autoencoder = std::move(am);
    model.bundle = LatentGpBundle::from_models(std::move(models));
    model.sample_count = 1;  // single draw keeps the reduction exact
    model.mc_seed = 17;
    return model;
}

}  // namespace

TEST_SUITE("surrogate") {

TEST_CASE("zero latent variance collapses sampling onto the decoded mean") {
    Eigen::MatrixXd wd(3, 2);
    wd << 0.4, -1.2, 0.7, 0.3, -0.5, 0.9;
    Eigen::VectorXd bd(3);
    bd << 0.1, -0.2, 0.05;
    AutoencoderModel m = decoder_model(wd, bd);

    Eigen::VectorXd mu(2), var(2);
    mu << 0.6, -0.9;
    var.setZero();

    PredictionField one = mc_decode(m, mu, var, 1, 11, 3);
    CHECK(one.mean.cwiseEqual(m.decode(mu)).all());
    CHECK(one.std.cwiseEqual(Eigen::VectorXd::Zero(3)).all());

    PredictionField many = mc_decode(m, mu, var, 300, 11, 3);
    CHECK((many.mean - m.decode(mu)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(many.std.maxCoeff() < 1e-13);
    CHECK(many.latent_means.cwiseEqual(mu).all());
    CHECK(many.latent_vars.cwiseEqual(var).all());
}

TEST_CASE("draws follow the documented per-sample stream keying") {
    AutoencoderModel m = identity_affine(2);
    Eigen::VectorXd mu(2), var(2);
    mu << 0.3, -1.1;
    var << 0.25, 0.0;
    const int s_count = 4;
    PredictionField pf = mc_decode(m, mu, var, s_count, 9, 7);

    // Identity decode leaves draws untouched, so the reported moments
    // must match an externally regenerated draw table.
    Eigen::MatrixXd draws(s_count, 2);
    for (int s = 0; s < s_count; ++s) {
        KeyedStream rng{9, kTagMonteCarlo, 7, static_cast<std::uint64_t>(s)};
        for (int l = 0; l < 2; ++l)
            draws(s, l) = mu[l] + std::sqrt(var[l]) * rng.normal();
    }
    for (int l = 0; l < 2; ++l) {
        double mean = 0.0;
        for (int s = 0; s < s_count; ++s)
            mean += draws(s, l);
        mean /= s_count;
        double ss = 0.0;
        for (int s = 0; s < s_count; ++s)
            ss += (draws(s, l) - mean) * (draws(s, l) - mean);
        double sd = std::sqrt(ss / (s_count - 1));
        CHECK(pf.mean[l] == doctest::Approx(mean).epsilon(1e-14));
        CHECK(pf.std[l] == doctest::Approx(sd).epsilon(1e-13));
    }
    // The zero-variance component contributes identical draws.
    CHECK(pf.std[1] < 1e-13);
    CHECK(pf.mean[1] == doctest::Approx(-1.1).epsilon(1e-14));
}

TEST_CASE("sampling is reproducible and keyed by case and seed") {
    AutoencoderModel m = identity_affine(2);
    Eigen::VectorXd mu(2), var(2);
    mu << 0.0, 0.5;
    var << 1.0, 0.3;
    PredictionField a = mc_decode(m, mu, var, 64, 21, 5);
    PredictionField b = mc_decode(m, mu, var, 64, 21, 5);
    CHECK(a.mean.cwiseEqual(b.mean).all());
    CHECK(a.std.cwiseEqual(b.std).all());

    PredictionField other_case = mc_decode(m, mu, var, 64, 21, 6);
    CHECK_FALSE(a.mean.cwiseEqual(other_case.mean).all());
    PredictionField other_seed = mc_decode(m, mu, var, 64, 22, 5);
    CHECK_FALSE(a.mean.cwiseEqual(other_seed.mean).all());
}

TEST_CASE("sample moments approach the latent distribution") {
    AutoencoderModel m = identity_affine(1);
    Eigen::VectorXd mu(1), var(1);
    mu << 0.7;
    var << 0.04;
    PredictionField pf = mc_decode(m, mu, var, 300, 11, 0);
    CHECK(std::abs(pf.mean[0] - 0.7) < 5.0 * 0.2 / std::sqrt(300.0));
    CHECK(std::abs(pf.std[0] - 0.2) < 0.05);
}

TEST_CASE("malformed sampling requests are rejected") {
    AutoencoderModel m = identity_affine(2);
    Eigen::VectorXd mu(2), var(1);
    mu.setZero();
    var.setZero();
    CHECK_THROWS_AS(mc_decode(m, mu, var, 10, 0, 0), ShapeError);
    Eigen::VectorXd mu3 = Eigen::VectorXd::Zero(3);
    Eigen::VectorXd var3 = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(mc_decode(m, mu3, var3, 10, 0, 0), ShapeError);
    Eigen::VectorXd var2 = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(mc_decode(m, mu, var2, 0, 0, 0), ConfigError);
}

TEST_CASE("prediction threads latent distributions through the decoder") {
    Eigen::MatrixXd wd(4, 2);
    wd << 1.0, 0.0, 0.0, 1.0, 0.5, -0.5, 0.25, 0.75;
    Eigen::VectorXd bd(4);
    bd << 0.0, 0.1, -0.1, 0.2;
    Eigen::VectorXd c(2);
    c << 0.2, -0.4;
    SurrogateModel model = exact_surrogate(decoder_model(wd, bd), c, 3);

    PredictionField pf = predict_full(model, Eigen::VectorXd::Zero(3), 12);
    CHECK(pf.latent_means.cwiseEqual(c).all());
    CHECK(pf.latent_vars.cwiseEqual(Eigen::VectorXd::Zero(2)).all());
    CHECK(pf.mean.cwiseEqual(model.autoencoder.decode(c)).all());
    CHECK(pf.std.cwiseEqual(Eigen::VectorXd::Zero(4)).all());
}

TEST_CASE("reconstruction is the autoencoder round trip") {
    AutoencoderModel am = identity_affine(3);
    SurrogateModel model = exact_surrogate(am, Eigen::VectorXd::Zero(3), 2);
    Eigen::VectorXd u(3);
    u << 0.4, -0.2, 0.9;
    CHECK(reconstruct(model, u)
              .cwiseEqual(model.autoencoder.decode(model.autoencoder.encode(u)))
              .all());
}

TEST_CASE("error decomposition reports the three absolute gaps") {
    Eigen::VectorXd pred(1), truth(1), rt(1);
    pred << 1.2;
    truth << 0.9;
    rt << 1.0;
    ErrorReport r = error_decompose(pred, truth, rt);
    CHECK(r.framework[0] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(r.reconstruction[0] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(r.gp_component[0] == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("the error split obeys the triangle inequality entrywise") {
    KeyedStream rng{31};
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd pred(6), truth(6), rt(6);
        for (int i = 0; i < 6; ++i) {
            pred[i] = rng.uniform(-2.0, 2.0);
            truth[i] = rng.uniform(-2.0, 2.0);
            rt[i] = rng.uniform(-2.0, 2.0);
        }
        ErrorReport r = error_decompose(pred, truth, rt);
        for (int i = 0; i < 6; ++i)
            CHECK(r.framework[i] <= r.reconstruction[i] + r.gp_component[i] + 1e-15);
    }
}

TEST_CASE("a perfect latent stage leaves only reconstruction error") {
    Eigen::VectorXd pred(4), truth(4);
    pred << 0.3, -0.7, 0.0, 1.4;
    truth << 0.1, -0.5, 0.2, 1.0;
    ErrorReport r = error_decompose(pred, truth, pred);
    CHECK(r.gp_component.cwiseEqual(Eigen::VectorXd::Zero(4)).all());
    CHECK(r.framework.cwiseEqual(r.reconstruction).all());
}

TEST_CASE("latent health uses an inclusive two-sigma band") {
    Eigen::VectorXd mu(2), var(2), truth(2);
    mu << 0.0, 1.0;
    var << 1.0, 0.5;
    truth << 0.0, 1.0;
    LatentHealth h = classify_latent_health(mu, var, truth);
    CHECK(h.correct);
    CHECK(h.healthy[0] == 1);
    CHECK(h.healthy[1] == 1);

    // Exactly on the boundary counts as healthy.
    truth << 2.0, 1.0;
    h = classify_latent_health(mu, var, truth);
    CHECK(h.correct);

    // Just beyond it fails that component and the case.
    truth << 2.01, 1.0;
    h = classify_latent_health(mu, var, truth);
    CHECK_FALSE(h.correct);
    CHECK(h.healthy[0] == 0);
    CHECK(h.healthy[1] == 1);
}

TEST_CASE("latent health is invariant under z-score rescaling") {
    Eigen::VectorXd mu(1), var(1), truth(1);
    for (double scale : {0.01, 1.0, 250.0}) {
        mu << 3.0;
        var << 0.09 * scale * scale;
        truth << 3.0 + 1.9 * 0.3 * scale;
        CHECK(classify_latent_health(mu, var, truth).correct);
        truth << 3.0 + 2.1 * 0.3 * scale;
        CHECK_FALSE(classify_latent_health(mu, var, truth).correct);
    }
}

TEST_CASE("negative latent variance is a contract violation") {
    Eigen::VectorXd mu(1), var(1), truth(1);
    mu << 0.0;
    var << -1e-12;
    truth << 0.0;
    CHECK_THROWS_AS(classify_latent_health(mu, var, truth), ShapeError);
}

TEST_CASE("a perfectly predicting surrogate evaluates to exact zeros") {
    Eigen::VectorXd u0(4);
    u0 << 0.25, -0.5, 0.125, 0.75;
    SurrogateModel model = exact_surrogate(identity_affine(4), u0, 3);

    Dataset test;
    test.kind = LoadKind::PointLoad;
    test.forces = Eigen::MatrixXd::Zero(3, 3);
    test.displacements = u0.transpose().replicate(3, 1);

    EvaluationResult ev = evaluate_testset(model, test);
    CHECK(ev.metrics.mean_error == 0.0);
    CHECK(ev.metrics.error_std == 0.0);
    CHECK(ev.metrics.max_error == 0.0);
    CHECK(ev.metrics.per_case_mean_error.cwiseEqual(Eigen::VectorXd::Zero(3)).all());
    CHECK(ev.healthy_percent == 100.0);
    CHECK(ev.correct_percent == 100.0);
    CHECK(ev.error_framework.cwiseEqual(ev.error_reconstruction).all());
    CHECK(ev.error_gp.cwiseEqual(Eigen::MatrixXd::Zero(3, 4)).all());
    CHECK(ev.latent_truth.row(0).transpose().cwiseEqual(u0).all());
    CHECK(ev.metrics.max_nodal_displacement ==
          doctest::Approx(std::hypot(0.125, 0.75)).epsilon(1e-14));
}

TEST_CASE("aggregate metrics follow their definitions on two cases") {
    // Constant-zero predictor against hand-picked truths.
    SurrogateModel model = exact_surrogate(identity_affine(2), Eigen::VectorXd::Zero(2), 3);
    Dataset test;
    test.kind = LoadKind::PointLoad;
    test.forces = Eigen::MatrixXd::Zero(2, 3);
    test.displacements.resize(2, 2);
    test.displacements << 0.1, 0.1, 0.3, 0.3;

    EvaluationResult ev = evaluate_testset(model, test);
    CHECK(ev.metrics.per_case_mean_error[0] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(ev.metrics.per_case_mean_error[1] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(ev.metrics.mean_error == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(ev.metrics.error_std == doctest::Approx(0.14142135623730951).epsilon(1e-12));
    CHECK(ev.metrics.max_error == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(ev.metrics.max_nodal_displacement ==
          doctest::Approx(std::hypot(0.3, 0.3)).epsilon(1e-12));
    // Zero predictive variance and nonzero deviation: never healthy.
    CHECK(ev.healthy_percent == 0.0);
    CHECK(ev.correct_percent == 0.0);
}

TEST_CASE("evaluation is invariant to case order and thread count") {
    Eigen::VectorXd c(2);
    c << 0.3, -0.2;
    SurrogateModel model = exact_surrogate(identity_affine(2), c, 3);

    Dataset fwd;
    fwd.kind = LoadKind::PointLoad;
    fwd.forces.resize(3, 3);
    fwd.forces << 1, 0, 2, 0, 1, 2, 1, 1, 2;
    fwd.displacements.resize(3, 2);
    fwd.displacements << 0.1, 0.2, -0.3, 0.4, 0.5, -0.6;

    Dataset rev = fwd;
    rev.forces = fwd.forces.colwise().reverse().eval();
    rev.displacements = fwd.displacements.colwise().reverse().eval();

    EvaluationResult ef = evaluate_testset(model, fwd);
    EvaluationResult er = evaluate_testset(model, rev);
    CHECK(ef.metrics.per_case_mean_error.reverse()
              .cwiseEqual(er.metrics.per_case_mean_error)
              .all());
    CHECK(ef.metrics.max_error == er.metrics.max_error);
    CHECK(ef.metrics.mean_error == doctest::Approx(er.metrics.mean_error).epsilon(1e-15));

    EvaluationResult et = evaluate_testset(model, fwd, 3);
    CHECK(ef.metrics.per_case_mean_error.cwiseEqual(et.metrics.per_case_mean_error).all());
    CHECK(ef.predictions_mean.cwiseEqual(et.predictions_mean).all());
    CHECK(ef.predictions_std.cwiseEqual(et.predictions_std).all());
}

TEST_CASE("masking removes exactly the low-magnitude loads and probes groups") {
    MeshSpec ms;
    ms.nx = 4;
    ms.ny = 1;
    Mesh2D mesh = ms.build();
    MaterialParams mat = MaterialParams::from_engineering(500.0, 0.4, 1000.0);
    SolveSettings solve;
    Dataset train =
        generate_dataset(mesh, mat, LoadKind::PointLoad, 2.0, 40, 77, solve);
    REQUIRE(train.n() == 40);

    PipelineConfig pc;
    pc.ae_spec.input_dim = train.field_dim();
    pc.ae_spec.encoder_widths = {8};
    pc.ae_spec.latent_dim = 2;
    pc.ae_train.epochs = 60;
    pc.ae_train.batch_size = 8;
    pc.ae_train.lr_start = 2e-3;
    pc.ae_train.lr_end = 1e-4;
    pc.ae_train.seed = 90;
    pc.gp.restarts = 2;
    pc.gp.max_iterations = 40;
    pc.gp.seed = 91;
    pc.sample_count = 40;
    pc.mc_seed = 92;

    MissingRegionConfig mrc;
    mrc.mask_radius = 0.8;
    mrc.force_range = 2.0;
    mrc.pipeline = pc;
    mrc.sweep_extension = 1.25;
    mrc.sweep_points = 9;
    mrc.scatter_count = 40;
    mrc.scatter_seed = 21;

    MissingRegionResult res = missing_region_experiment(train, mesh, mat, solve, mrc);

    int inside = 0;
    for (int i = 0; i < train.n(); ++i)
        if (std::hypot(train.forces(i, 0), train.forces(i, 1)) < 0.8)
            ++inside;
    CHECK(res.removed == inside);
    CHECK(res.removed >= 1);
    CHECK(res.kept + res.removed == train.n());
    CHECK(res.mask_radius == 0.8);
    CHECK(res.force_range == 2.0);

    REQUIRE(res.sweep.size() == 9);
    for (std::size_t i = 0; i < res.sweep.size(); ++i) {
        const SweepPoint& pt = res.sweep[i];
        double expect = -2.5 + 5.0 * static_cast<double>(i) / 8.0;
        CHECK(pt.force == doctest::Approx(expect).epsilon(1e-12));
        ForceGroup g = std::abs(pt.force) < 0.8 ? ForceGroup::Masked
                       : std::abs(pt.force) <= 2.0 ? ForceGroup::Supported
                                                   : ForceGroup::Extrapolated;
        CHECK(pt.group == g);
        REQUIRE(pt.std_raw.size() == 2);
        CHECK(pt.std_raw.minCoeff() >= 0.0);
        CHECK(pt.fem_ok);
        REQUIRE(pt.abs_err_raw.size() == 2);
        CHECK(pt.abs_err_raw.minCoeff() >= 0.0);
    }

    REQUIRE(res.scatter.size() == 40);
    Eigen::Vector3i counts = Eigen::Vector3i::Zero();
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(3, 2);
    for (const ScatterPoint& pt : res.scatter) {
        CHECK(std::abs(pt.fx) <= 2.5);
        CHECK(std::abs(pt.fy) <= 2.5);
        double mag = std::hypot(pt.fx, pt.fy);
        ForceGroup g = mag < 0.8 ? ForceGroup::Masked
                       : mag <= 2.0 ? ForceGroup::Supported
                                    : ForceGroup::Extrapolated;
        CHECK(pt.group == g);
        counts[static_cast<int>(g)] += 1;
        sums.row(static_cast<int>(g)) += pt.std_raw.transpose();
    }
    CHECK(res.group_counts.cwiseEqual(counts).all());
    CHECK(counts.sum() == 40);
    for (int g = 0; g < 3; ++g) {
        if (counts[g] == 0)
            continue;
        Eigen::RowVector2d mean = sums.row(g) / counts[g];
        CHECK((res.group_mean_std_raw.row(g) - mean).cwiseAbs().maxCoeff() < 1e-12);
    }

    CHECK(res.pipeline_report.gp_hyperparams.size() == 2);
    CHECK(res.model.autoencoder.spec().input_dim == train.field_dim());
}

TEST_CASE("zero mask radius reduces to plain pipeline training") {
    MeshSpec ms;
    ms.nx = 4;
    ms.ny = 1;
    Mesh2D mesh = ms.build();
    MaterialParams mat = MaterialParams::from_engineering(500.0, 0.4, 1000.0);
    SolveSettings solve;
    Dataset train =
        generate_dataset(mesh, mat, LoadKind::PointLoad, 2.0, 12, 78, solve);

    PipelineConfig pc;
    pc.ae_spec.input_dim = train.field_dim();
    pc.ae_spec.latent_dim = 2;
    pc.ae_train.epochs = 30;
    pc.ae_train.batch_size = 4;
    pc.ae_train.lr_start = 1e-3;
    pc.ae_train.lr_end = 1e-4;
    pc.ae_train.seed = 50;
    pc.gp.restarts = 1;
    pc.gp.max_iterations = 25;
    pc.gp.seed = 51;
    pc.sample_count = 10;
    pc.mc_seed = 52;

    MissingRegionConfig mrc;
    mrc.mask_radius = 0.0;
    mrc.force_range = 2.0;
    mrc.pipeline = pc;
    mrc.sweep_points = 3;
    mrc.scatter_count = 4;
    mrc.scatter_seed = 1;

    MissingRegionResult res = missing_region_experiment(train, mesh, mat, solve, mrc);
    CHECK(res.removed == 0);
    CHECK(res.kept == train.n());

    SurrogateModel plain = train_pipeline(train, pc);
    CHECK(res.model.autoencoder.params().cwiseEqual(plain.autoencoder.params()).all());
    for (int l = 0; l < 2; ++l) {
        CHECK(res.model.bundle.component(l).hyperparams().length_scale ==
              plain.bundle.component(l).hyperparams().length_scale);
        CHECK(res.model.bundle.component(l).hyperparams().signal_variance ==
              plain.bundle.component(l).hyperparams().signal_variance);
    }

    mrc.mask_radius = -0.5;
    CHECK_THROWS_AS(missing_region_experiment(train, mesh, mat, solve, mrc), ConfigError);
    mrc.mask_radius = 10.0;  // swallows every sample
    CHECK_THROWS_AS(missing_region_experiment(train, mesh, mat, solve, mrc), ConfigError);
}

TEST_CASE("force groups have distinct names") {
    CHECK(std::string(force_group_name(ForceGroup::Masked)) !=
          force_group_name(ForceGroup::Supported));
    CHECK(std::string(force_group_name(ForceGroup::Supported)) !=
          force_group_name(ForceGroup::Extrapolated));
}

}  // TEST_SUITE
