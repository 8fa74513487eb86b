#include "latentgp/model_io.hpp"

#include "manifest_util.hpp"

namespace latentgp {

using detail::json;

SurrogateModel to_surrogate(const ModelArchive& archive) {
    if (!archive.bundle)
        throw DataError("model archive has no gp bundle; train the gp stage first");
    return SurrogateModel{archive.autoencoder, *archive.bundle, archive.sample_count,
                          archive.mc_seed};
}

void write_model(const std::filesystem::path& dir, const ModelArchive& archive,
                 const PipelineReport* report, const std::optional<std::string>& config_echo) {
    std::filesystem::create_directories(dir);

    const AutoencoderModel& ae = archive.autoencoder;
    write_matrix_blob(dir / "weights.bin", ae.params());

    json manifest;
    manifest["format_version"] = kFormatVersion;
    manifest["kind"] = "model";
    manifest["load_kind"] = load_kind_name(archive.kind);
    manifest["mesh"] = detail::mesh_to_json(archive.mesh);
    manifest["material"] = detail::material_to_json(archive.material);
    manifest["force_range"] = archive.force_range;
    manifest["sample_count"] = archive.sample_count;
    manifest["mc_seed"] = archive.mc_seed;

    json ae_info;
    ae_info["input_dim"] = ae.spec().input_dim;
    ae_info["encoder_widths"] = ae.spec().encoder_widths;
    ae_info["latent_dim"] = ae.spec().latent_dim;
    ae_info["normalizer"] = json{{"scale", ae.normalizer().scale},
                                 {"offset", ae.normalizer().offset}};
    ae_info["param_count"] = ae.param_count();
    manifest["autoencoder"] = ae_info;

    json blobs = json::array();
    blobs.push_back(detail::blob_entry("weights.bin", ae.param_count(), 1));
    std::vector<std::filesystem::path> blob_files{dir / "weights.bin"};

    if (archive.bundle) {
        const LatentGpBundle& bundle = *archive.bundle;
        const int latent_dim = bundle.latent_dim();
        if (latent_dim != ae.spec().latent_dim)
            throw ShapeError("gp bundle latent dimension disagrees with the autoencoder");

        const Eigen::MatrixXd& inputs = bundle.component(0).train_inputs();
        Eigen::MatrixXd targets(inputs.rows(), latent_dim);
        json components = json::array();
        for (int l = 0; l < latent_dim; ++l) {
            const GpModel& gp = bundle.component(l);
            bool same_inputs = gp.train_inputs().rows() == inputs.rows() &&
                               gp.train_inputs().cols() == inputs.cols() &&
                               gp.train_inputs().cwiseEqual(inputs).all();
            if (!same_inputs)
                throw ShapeError("gp bundle components must share training inputs");
            targets.col(l) = gp.train_targets();
            components.push_back(json{
                {"signal_variance", gp.hyperparams().signal_variance},
                {"length_scale", gp.hyperparams().length_scale},
                {"noise_variance", gp.hyperparams().noise_variance},
                {"standardizer_mean", gp.standardizer().mean},
                {"standardizer_stddev", gp.standardizer().stddev},
                {"degenerate", gp.degenerate()},
                {"log_marginal_likelihood", gp.log_marginal_likelihood()},
                {"jitter", gp.jitter()},
            });
        }
        write_matrix_blob(dir / "gp_inputs.bin", inputs);
        write_matrix_blob(dir / "gp_targets.bin", targets);
        blobs.push_back(detail::blob_entry("gp_inputs.bin", inputs.rows(), inputs.cols()));
        blobs.push_back(detail::blob_entry("gp_targets.bin", targets.rows(), targets.cols()));
        blob_files.push_back(dir / "gp_inputs.bin");
        blob_files.push_back(dir / "gp_targets.bin");

        json gp_info;
        gp_info["n_train"] = inputs.rows();
        gp_info["input_dim"] = inputs.cols();
        gp_info["latent_dim"] = latent_dim;
        gp_info["components"] = components;
        manifest["gp"] = gp_info;
    }

    manifest["blobs"] = blobs;
    manifest["checksum"] = files_sha256(blob_files);

    if (report) {
        json training;
        training["ae_final_mse"] = report->ae_final_mse;
        training["ae_reconstruction_rel_l2"] = report->ae_reconstruction_rel_l2;
        training["epochs_run"] = report->ae_history.size();
        if (!report->ae_history.empty())
            training["ae_last_epoch_mse"] = report->ae_history.back().mse;
        manifest["training_report"] = training;
    }
    detail::embed_config_echo(manifest, config_echo);

    detail::write_json_file(dir / "manifest.json", manifest);
}

ModelArchive read_model(const std::filesystem::path& dir) {
    json manifest = detail::read_json_file(dir / "manifest.json", "model manifest");
    detail::check_format_version(manifest);
    if (detail::require<std::string>(manifest, "kind") != "model")
        throw DataError("archive at '" + dir.string() + "' is not a model");

    detail::validate_archive_blobs(dir, manifest);

    ModelArchive archive;
    archive.kind = load_kind_from_name(detail::require<std::string>(manifest, "load_kind"));
    archive.mesh = detail::mesh_from_json(manifest.at("mesh"));
    archive.material = detail::material_from_json(manifest.at("material"));
    archive.force_range = detail::require<double>(manifest, "force_range");
    archive.sample_count = detail::require<int>(manifest, "sample_count");
    archive.mc_seed = detail::require<std::uint64_t>(manifest, "mc_seed");

    const json& ae_info = manifest.at("autoencoder");
    AutoencoderSpec spec;
    spec.input_dim = detail::require<int>(ae_info, "input_dim");
    spec.encoder_widths = detail::require<std::vector<int>>(ae_info, "encoder_widths");
    spec.latent_dim = detail::require<int>(ae_info, "latent_dim");
    Normalizer norm;
    norm.scale = detail::require<double>(ae_info.at("normalizer"), "scale");
    norm.offset = detail::require<double>(ae_info.at("normalizer"), "offset");

    archive.autoencoder = AutoencoderModel(spec, norm);
    Eigen::MatrixXd weights = detail::load_blob(dir, manifest, "weights.bin");
    if (weights.rows() != archive.autoencoder.param_count())
        throw DataError("weights.bin holds " + format_int(weights.rows()) +
                        " parameters, network expects " +
                        format_int(archive.autoencoder.param_count()));
    archive.autoencoder.set_params(weights.col(0));

    if (manifest.contains("gp")) {
        const json& gp_info = manifest.at("gp");
        const int latent_dim = detail::require<int>(gp_info, "latent_dim");
        Eigen::MatrixXd inputs = detail::load_blob(dir, manifest, "gp_inputs.bin");
        Eigen::MatrixXd targets = detail::load_blob(dir, manifest, "gp_targets.bin");
        if (targets.cols() != latent_dim || targets.rows() != inputs.rows())
            throw DataError("gp blob shapes disagree with manifest header");

        const json& components = gp_info.at("components");
        if (static_cast<int>(components.size()) != latent_dim)
            throw DataError("gp component list length disagrees with latent_dim");

        std::vector<GpModel> models;
        models.reserve(static_cast<std::size_t>(latent_dim));
        for (int l = 0; l < latent_dim; ++l) {
            const json& c = components.at(static_cast<std::size_t>(l));
            GpHyperparams hp;
            hp.signal_variance = detail::require<double>(c, "signal_variance");
            hp.length_scale = detail::require<double>(c, "length_scale");
            hp.noise_variance = detail::require<double>(c, "noise_variance");
            Standardizer st;
            st.mean = detail::require<double>(c, "standardizer_mean");
            st.stddev = detail::require<double>(c, "standardizer_stddev");
            models.push_back(GpModel::from_state(inputs, targets.col(l), hp, st,
                                                 detail::require<bool>(c, "degenerate")));
        }
        archive.bundle = LatentGpBundle::from_models(std::move(models));
    }
    return archive;
}

}  // namespace latentgp
