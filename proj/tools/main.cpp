// Command-line front end: dataset generation, training, inference,
// evaluation, and the masked-region uncertainty experiment.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "latentgp/dataset_io.hpp"
#include "latentgp/errors.hpp"
#include "latentgp/experiment.hpp"
#include "latentgp/metrics.hpp"
#include "latentgp/model_io.hpp"
#include "latentgp/report_io.hpp"
#include "latentgp/run_config.hpp"
#include "latentgp/text.hpp"

namespace {

using namespace latentgp;

int exit_code_for(const std::string& category) {
    if (category == "ConfigError" || category == "IncompressibleMaterial")
        return 2;
    if (category == "DataError" || category == "ShapeError" ||
        category == "ChecksumMismatch" || category == "VersionMismatch" ||
        category == "TruncatedBlob")
        return 3;
    if (category == "NonConvergence" || category == "TooManyFailures" ||
        category == "InvertedElement")
        return 4;
    if (category == "Divergence" || category == "OptimizationFailure")
        return 5;
    return 1;
}

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON run configuration file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", opts.seed, "Override the configured seed");
    cmd->add_option("--threads", opts.threads, "Override the configured worker count");
}

RunConfig load_config(const CommonOpts& opts) {
    RunConfig config = opts.config_path.empty() ? RunConfig{}
                                                : RunConfig::from_file(opts.config_path);
    if (opts.seed)
        config.seed = *opts.seed;
    if (opts.threads)
        config.threads = *opts.threads;
    config.validate();
    return config;
}

// Point-load inference inputs; d < 0 means "farthest loadable node".
struct LoadArgs {
    double fx = 0.0;
    double fy = 0.0;
    double d = -1.0;
    double bx = 0.0;
    double by = 0.0;
    bool has_point = false;
    bool has_body = false;
};

void add_load_args(CLI::App* cmd, LoadArgs& args) {
    auto* fx = cmd->add_option("--fx", args.fx, "Point-load x component [N]");
    auto* fy = cmd->add_option("--fy", args.fy, "Point-load y component [N]");
    cmd->add_option("--d", args.d,
                    "Attachment distance from the fixed edge (default: farthest node)");
    auto* bx = cmd->add_option("--bx", args.bx, "Body-force x component [N/kg]");
    auto* by = cmd->add_option("--by", args.by, "Body-force y component [N/kg]");
    cmd->callback([&args, fx, fy, bx, by] {
        args.has_point = fx->count() > 0 || fy->count() > 0;
        args.has_body = bx->count() > 0 || by->count() > 0;
    });
}

LoadSpec resolve_load(const LoadArgs& args, LoadKind kind, const Mesh2D& mesh) {
    if (args.has_point && args.has_body)
        throw ConfigError("give either --fx/--fy or --bx/--by, not both");
    if (kind == LoadKind::PointLoad) {
        if (args.has_body)
            throw ConfigError("this configuration expects a point load (--fx/--fy)");
        double d = args.d;
        if (d < 0.0)
            d = mesh.loadable_distance.empty() ? 0.0 : mesh.loadable_distance.back();
        return LoadSpec::point(args.fx, args.fy, d);
    }
    if (args.has_point)
        throw ConfigError("this configuration expects a body force (--bx/--by)");
    return LoadSpec::body(args.bx, args.by);
}

std::string fmt(double x) {
    return format_double(x);
}

// ---------------------------------------------------------------------------

int run_gen_data(const CommonOpts& common, const std::string& out_dir) {
    RunConfig config = load_config(common);
    Mesh2D mesh = config.mesh.build();
    MaterialParams material = config.material_params();

    Dataset train = generate_dataset(mesh, material, config.dataset.load_kind,
                                     config.dataset.force_range, config.dataset.n_train,
                                     config.seed, config.solver, config.threads, 0);
    Dataset test = generate_dataset(mesh, material, config.dataset.load_kind,
                                    config.dataset.force_range, config.dataset.n_test,
                                    config.seed, config.solver, config.threads,
                                    config.dataset.n_train);

    std::string echo = config.to_json_text();
    write_dataset(std::filesystem::path(out_dir) / "train", train, config.mesh, material,
                  config.dataset.force_range, config.seed, echo);
    write_dataset(std::filesystem::path(out_dir) / "test", test, config.mesh, material,
                  config.dataset.force_range, config.seed, echo);

    std::cout << "train: " << train.n() << " samples (" << train.generation_failures
              << " resamples), field dim " << train.field_dim() << "\n";
    std::cout << "test: " << test.n() << " samples (" << test.generation_failures
              << " resamples)\n";
    std::cout << "wrote " << out_dir << "/train and " << out_dir << "/test\n";
    return 0;
}

int run_train(const CommonOpts& common, const std::string& data_dir,
              const std::string& out_dir, const std::string& stage,
              const std::string& model_dir) {
    RunConfig config = load_config(common);
    StoredDataset stored = read_dataset(data_dir);

    ModelArchive archive;
    archive.kind = stored.data.kind;
    archive.mesh = stored.mesh;
    archive.material = stored.material;
    archive.force_range = stored.force_range;
    archive.sample_count = config.surrogate.sample_count;
    archive.mc_seed = config.seed;

    PipelineReport report;
    std::string echo = config.to_json_text();

    if (stage == "both") {
        SurrogateModel model =
            train_pipeline(stored.data, config.pipeline_config(), &report, config.threads);
        archive.autoencoder = std::move(model.autoencoder);
        archive.bundle = std::move(model.bundle);
    } else if (stage == "auto") {
        PipelineConfig pipeline = config.pipeline_config();
        AutoencoderSpec spec = pipeline.ae_spec;
        spec.input_dim = stored.data.field_dim();
        TrainResult ae;
        try {
            ae = train_autoencoder(stored.data.displacements, spec, pipeline.ae_train);
        } catch (Error& e) {
            e.add_context("autoencoder stage");
            throw;
        }
        report.ae_history = std::move(ae.history);
        report.ae_final_mse = ae.final_mse;
        report.ae_reconstruction_rel_l2 = ae.reconstruction_rel_l2;
        archive.autoencoder = std::move(ae.model);
    } else {  // gp: attach a bundle to an existing autoencoder
        if (model_dir.empty())
            throw ConfigError("--stage gp requires --model with a trained autoencoder");
        ModelArchive base = read_model(model_dir);
        if (base.autoencoder.spec().input_dim != stored.data.field_dim())
            throw ShapeError("model and dataset field dimensions disagree");
        archive.autoencoder = std::move(base.autoencoder);
        LatentDataset latents = encode_dataset(archive.autoencoder, stored.data);
        try {
            archive.bundle = LatentGpBundle::fit(latents, config.gp_options(), config.threads);
        } catch (Error& e) {
            e.add_context("gp stage");
            throw;
        }
    }

    write_model(out_dir, archive, &report, echo);

    if (!report.ae_history.empty()) {
        std::cout << "autoencoder: final mse " << fmt(report.ae_final_mse)
                  << ", reconstruction rel l2 " << fmt(report.ae_reconstruction_rel_l2)
                  << "\n";
    }
    if (archive.bundle) {
        for (int l = 0; l < archive.bundle->latent_dim(); ++l) {
            const GpModel& gp = archive.bundle->component(l);
            std::cout << "gp[" << l << "]: sv " << fmt(gp.hyperparams().signal_variance)
                      << ", ls " << fmt(gp.hyperparams().length_scale) << ", nv "
                      << fmt(gp.hyperparams().noise_variance) << ", lml "
                      << fmt(gp.log_marginal_likelihood())
                      << (gp.degenerate() ? " (degenerate)" : "") << "\n";
        }
    }
    std::cout << "wrote model to " << out_dir << "\n";
    return 0;
}

int run_predict(const std::string& model_dir, const LoadArgs& load_args,
                const std::string& out_dir) {
    ModelArchive archive = read_model(model_dir);
    SurrogateModel model = to_surrogate(archive);
    Mesh2D mesh = archive.mesh.build();

    LoadSpec load = resolve_load(load_args, archive.kind, mesh);
    PredictionField pred = predict_full(model, load.to_vector(), 0);

    for (Eigen::Index l = 0; l < pred.latent_means.size(); ++l)
        std::cout << "latent[" << l << "]: mean " << fmt(pred.latent_means[l]) << ", std "
                  << fmt(std::sqrt(std::max(0.0, pred.latent_vars[l]))) << "\n";
    Eigen::Index peak_dof = 0;
    pred.mean.cwiseAbs().maxCoeff(&peak_dof);
    std::cout << "peak dof " << peak_dof << ": mean " << fmt(pred.mean[peak_dof]) << ", std "
              << fmt(pred.std[peak_dof]) << "\n";

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::vector<std::vector<std::string>> field_rows;
        for (int n = 0; n < mesh.n_nodes(); ++n)
            field_rows.push_back({format_int(n), fmt(mesh.node_coords(n, 0)),
                                  fmt(mesh.node_coords(n, 1)), fmt(pred.mean[2 * n]),
                                  fmt(pred.mean[2 * n + 1]), fmt(pred.std[2 * n]),
                                  fmt(pred.std[2 * n + 1])});
        write_csv(std::filesystem::path(out_dir) / "field.csv",
                  {"node", "x", "y", "mean_ux", "mean_uy", "std_ux", "std_uy"}, field_rows);

        std::vector<std::vector<std::string>> latent_rows;
        for (Eigen::Index l = 0; l < pred.latent_means.size(); ++l)
            latent_rows.push_back({format_int(l), fmt(pred.latent_means[l]),
                                   fmt(pred.latent_vars[l])});
        write_csv(std::filesystem::path(out_dir) / "latent.csv",
                  {"component", "gp_mean", "gp_variance"}, latent_rows);
        std::cout << "wrote " << out_dir << "/field.csv and " << out_dir << "/latent.csv\n";
    }
    return 0;
}

int run_evaluate(const CommonOpts& common, const std::string& model_dir,
                 const std::string& data_dir, const std::string& out_dir) {
    RunConfig config = load_config(common);
    ModelArchive archive = read_model(model_dir);
    SurrogateModel model = to_surrogate(archive);
    StoredDataset stored = read_dataset(data_dir);

    EvaluationResult result = evaluate_testset(model, stored.data, config.threads);

    std::cout << "cases: " << stored.data.n() << "\n";
    std::cout << "mean abs error: " << fmt(result.metrics.mean_error) << "\n";
    std::cout << "error std: " << fmt(result.metrics.error_std) << "\n";
    std::cout << "max abs error: " << fmt(result.metrics.max_error) << "\n";
    std::cout << "max nodal displacement: " << fmt(result.metrics.max_nodal_displacement)
              << "\n";
    std::cout << "healthy latents: " << fmt(result.healthy_percent) << "%\n";
    std::cout << "correct cases: " << fmt(result.correct_percent) << "%\n";

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const auto out = std::filesystem::path(out_dir);

        write_csv(out / "metrics.csv", {"metric", "value"},
                  {{"n_cases", format_int(stored.data.n())},
                   {"mean_abs_error", fmt(result.metrics.mean_error)},
                   {"error_std", fmt(result.metrics.error_std)},
                   {"max_abs_error", fmt(result.metrics.max_error)},
                   {"max_nodal_displacement", fmt(result.metrics.max_nodal_displacement)},
                   {"healthy_percent", fmt(result.healthy_percent)},
                   {"correct_percent", fmt(result.correct_percent)}});

        std::vector<std::vector<std::string>> case_rows;
        for (int i = 0; i < stored.data.n(); ++i)
            case_rows.push_back(
                {format_int(i), fmt(result.metrics.per_case_mean_error[i]),
                 fmt(result.error_framework.row(i).maxCoeff()),
                 result.health[static_cast<std::size_t>(i)].correct ? "1" : "0"});
        write_csv(out / "cases.csv", {"case", "mean_abs_error", "max_abs_error", "correct"},
                  case_rows);

        std::vector<std::vector<std::string>> latent_rows;
        for (int i = 0; i < stored.data.n(); ++i)
            for (Eigen::Index l = 0; l < result.latent_means.cols(); ++l)
                latent_rows.push_back(
                    {format_int(i), format_int(l), fmt(result.latent_means(i, l)),
                     fmt(result.latent_vars(i, l)), fmt(result.latent_truth(i, l)),
                     result.health[static_cast<std::size_t>(i)]
                             .healthy[static_cast<std::size_t>(l)]
                         ? "1"
                         : "0"});
        write_csv(out / "latent_health.csv",
                  {"case", "component", "gp_mean", "gp_variance", "encoded_truth", "healthy"},
                  latent_rows);
        std::cout << "wrote reports to " << out_dir << "\n";
    }
    return 0;
}

int run_experiment(const CommonOpts& common, const std::string& data_dir,
                   const std::string& out_dir) {
    RunConfig config = load_config(common);
    StoredDataset stored = read_dataset(data_dir);
    Mesh2D mesh = stored.mesh.build();

    MissingRegionConfig exp_config = config.experiment_config();
    exp_config.force_range = stored.force_range;
    exp_config.mask_radius = config.experiment.mask_ratio * stored.force_range;

    MissingRegionResult result = missing_region_experiment(stored.data, mesh, stored.material,
                                                           config.solver, exp_config);

    const int latent_dim = result.model.bundle.latent_dim();
    std::cout << "removed " << result.removed << " of " << stored.data.n()
              << " samples inside radius " << fmt(result.mask_radius) << "\n";
    for (int l = 0; l < latent_dim; ++l) {
        double masked = result.group_mean_std_standardized(0, l);
        double supported = result.group_mean_std_standardized(1, l);
        std::cout << "latent[" << l << "] mean std (standardized): masked " << fmt(masked)
                  << ", supported " << fmt(supported) << ", ratio "
                  << fmt(masked / supported) << "\n";
    }

    std::filesystem::create_directories(out_dir);
    const auto out = std::filesystem::path(out_dir);
    std::string echo = config.to_json_text();

    ModelArchive archive;
    archive.autoencoder = result.model.autoencoder;
    archive.bundle = result.model.bundle;
    archive.sample_count = result.model.sample_count;
    archive.mc_seed = result.model.mc_seed;
    archive.kind = stored.data.kind;
    archive.mesh = stored.mesh;
    archive.material = stored.material;
    archive.force_range = stored.force_range;
    write_model(out / "model", archive, &result.pipeline_report, echo);

    auto latent_headers = [&](std::vector<std::string> head,
                              const std::vector<std::string>& stems) {
        for (const auto& stem : stems)
            for (int l = 0; l < latent_dim; ++l)
                head.push_back(stem + "_" + format_int(l));
        return head;
    };

    std::vector<std::vector<std::string>> sweep_rows;
    for (const SweepPoint& pt : result.sweep) {
        std::vector<std::string> row{fmt(pt.force), force_group_name(pt.group),
                                     pt.fem_ok ? "1" : "0"};
        for (Eigen::Index l = 0; l < pt.std_raw.size(); ++l)
            row.push_back(fmt(pt.std_raw[l]));
        for (Eigen::Index l = 0; l < pt.std_standardized.size(); ++l)
            row.push_back(fmt(pt.std_standardized[l]));
        for (Eigen::Index l = 0; l < pt.abs_err_raw.size(); ++l)
            row.push_back(fmt(pt.abs_err_raw[l]));
        for (Eigen::Index l = 0; l < pt.abs_err_standardized.size(); ++l)
            row.push_back(fmt(pt.abs_err_standardized[l]));
        sweep_rows.push_back(std::move(row));
    }
    write_csv(out / "sweep.csv",
              latent_headers({"force", "group", "fem_ok"},
                             {"std_raw", "std_standardized", "abs_err_raw",
                              "abs_err_standardized"}),
              sweep_rows);

    std::vector<std::vector<std::string>> scatter_rows;
    for (const ScatterPoint& pt : result.scatter) {
        std::vector<std::string> row{fmt(pt.fx), fmt(pt.fy), force_group_name(pt.group)};
        for (Eigen::Index l = 0; l < pt.std_raw.size(); ++l)
            row.push_back(fmt(pt.std_raw[l]));
        for (Eigen::Index l = 0; l < pt.std_standardized.size(); ++l)
            row.push_back(fmt(pt.std_standardized[l]));
        scatter_rows.push_back(std::move(row));
    }
    write_csv(out / "scatter.csv",
              latent_headers({"fx", "fy", "group"}, {"std_raw", "std_standardized"}),
              scatter_rows);

    std::vector<std::vector<std::string>> group_rows;
    for (int g = 0; g < 3; ++g) {
        std::vector<std::string> row{force_group_name(static_cast<ForceGroup>(g)),
                                     format_int(result.group_counts[g])};
        for (int l = 0; l < latent_dim; ++l)
            row.push_back(fmt(result.group_mean_std_raw(g, l)));
        for (int l = 0; l < latent_dim; ++l)
            row.push_back(fmt(result.group_mean_std_standardized(g, l)));
        group_rows.push_back(std::move(row));
    }
    write_csv(out / "groups.csv",
              latent_headers({"group", "count"},
                             {"mean_std_raw", "mean_std_standardized"}),
              group_rows);

    std::cout << "wrote experiment outputs to " << out_dir << "\n";
    return 0;
}

int run_fem_solve(const CommonOpts& common, const LoadArgs& load_args,
                  const std::string& out_file) {
    RunConfig config = load_config(common);
    Mesh2D mesh = config.mesh.build();
    MaterialParams material = config.material_params();

    LoadSpec load = resolve_load(load_args, config.dataset.load_kind, mesh);
    SolveReport report;
    Eigen::VectorXd u = solve_static(mesh, material, load, config.solver, &report);

    double max_nodal = 0.0;
    int max_node = 0;
    for (int n = 0; n < mesh.n_nodes(); ++n) {
        double mag = std::hypot(u[2 * n], u[2 * n + 1]);
        if (mag > max_nodal) {
            max_nodal = mag;
            max_node = n;
        }
    }
    std::cout << "newton iterations: " << report.newton_iterations << " over "
              << report.increments << " increments (" << report.step_halvings
              << " halvings)\n";
    std::cout << "max nodal displacement " << fmt(max_nodal) << " at node " << max_node
              << " (" << fmt(mesh.node_coords(max_node, 0)) << ", "
              << fmt(mesh.node_coords(max_node, 1)) << ")\n";

    if (!out_file.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (int n = 0; n < mesh.n_nodes(); ++n)
            rows.push_back({format_int(n), fmt(mesh.node_coords(n, 0)),
                            fmt(mesh.node_coords(n, 1)), fmt(u[2 * n]), fmt(u[2 * n + 1])});
        write_csv(out_file, {"node", "x", "y", "ux", "uy"}, rows);
        std::cout << "wrote " << out_file << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latent Gaussian-process surrogate toolkit for 2D hyperelastic fields"};
    app.require_subcommand(1);

    CommonOpts gen_common;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen-data", "Generate train/test datasets with the solver");
    add_common(gen, gen_common);
    gen->add_option("--out", gen_out, "Output directory")->required();

    CommonOpts train_common;
    std::string train_data, train_out, train_stage = "both", train_model;
    auto* train = app.add_subcommand("train", "Train the surrogate on a stored dataset");
    add_common(train, train_common);
    train->add_option("--data", train_data, "Training dataset directory")->required();
    train->add_option("--out", train_out, "Model output directory")->required();
    train->add_option("--stage", train_stage, "Pipeline stage: both, auto, or gp")
        ->check(CLI::IsMember({"both", "auto", "gp"}));
    train->add_option("--model", train_model,
                      "Existing model directory (required for --stage gp)");

    std::string predict_model, predict_out;
    LoadArgs predict_load;
    auto* predict = app.add_subcommand("predict", "Predict one displacement field");
    predict->add_option("--model", predict_model, "Model directory")->required();
    add_load_args(predict, predict_load);
    predict->add_option("--out", predict_out, "Report output directory");

    CommonOpts eval_common;
    std::string eval_model, eval_data, eval_out;
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a model against a dataset");
    add_common(evaluate, eval_common);
    evaluate->add_option("--model", eval_model, "Model directory")->required();
    evaluate->add_option("--data", eval_data, "Test dataset directory")->required();
    evaluate->add_option("--out", eval_out, "Report output directory");

    CommonOpts exp_common;
    std::string exp_data, exp_out;
    auto* experiment = app.add_subcommand(
        "experiment-missing", "Mask a load region, retrain, and probe uncertainty");
    add_common(experiment, exp_common);
    experiment->add_option("--data", exp_data, "Training dataset directory")->required();
    experiment->add_option("--out", exp_out, "Output directory")->required();

    CommonOpts fem_common;
    LoadArgs fem_load;
    std::string fem_out;
    auto* fem = app.add_subcommand("fem-solve", "Solve a single case with the FEM engine");
    add_common(fem, fem_common);
    add_load_args(fem, fem_load);
    fem->add_option("--out", fem_out, "Displacement CSV output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed())
            return run_gen_data(gen_common, gen_out);
        if (train->parsed())
            return run_train(train_common, train_data, train_out, train_stage, train_model);
        if (predict->parsed())
            return run_predict(predict_model, predict_load, predict_out);
        if (evaluate->parsed())
            return run_evaluate(eval_common, eval_model, eval_data, eval_out);
        if (experiment->parsed())
            return run_experiment(exp_common, exp_data, exp_out);
        if (fem->parsed())
            return run_fem_solve(fem_common, fem_load, fem_out);
    } catch (const latentgp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
