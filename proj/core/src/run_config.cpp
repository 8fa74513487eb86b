#include "latentgp/run_config.hpp"

#include <functional>
#include <set>

#include "manifest_util.hpp"

namespace latentgp {

using detail::json;

namespace {

// Strict section parser: every key must be known, every present key
// must have the right type. Absent keys keep their defaults.
class SectionReader {
public:
    SectionReader(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object())
            throw ConfigError("config section '" + name_ + "' must be an object");
    }

    template <typename T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key))
            return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("config key '" + name_ + "." + key + "' has the wrong type");
        }
    }

    void finish() const {
        for (const auto& [key, value] : j_.items())
            if (!seen_.count(key))
                throw ConfigError("unknown config key '" + name_ + "." + key + "'");
    }

private:
    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

void parse_section(const json& parent, const char* key,
                   const std::function<void(SectionReader&)>& body) {
    if (!parent.contains(key))
        return;
    SectionReader reader(parent.at(key), key);
    body(reader);
    reader.finish();
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config root must be a JSON object");

    RunConfig c;
    SectionReader root(j, "root");
    root.read("seed", c.seed);
    root.read("threads", c.threads);

    std::set<std::string> sections = {"mesh",        "material",  "solver",
                                      "dataset",     "autoencoder", "gp",
                                      "surrogate",   "experiment"};
    for (const auto& [key, value] : j.items()) {
        if (key == "seed" || key == "threads")
            continue;
        if (!sections.count(key))
            throw ConfigError("unknown config key '" + key + "'");
    }

    parse_section(j, "mesh", [&](SectionReader& s) {
        s.read("length", c.mesh.length);
        s.read("height", c.mesh.height);
        s.read("nx", c.mesh.nx);
        s.read("ny", c.mesh.ny);
    });
    parse_section(j, "material", [&](SectionReader& s) {
        s.read("youngs_modulus", c.material.youngs_modulus);
        s.read("poisson_ratio", c.material.poisson_ratio);
        s.read("density", c.material.density);
    });
    parse_section(j, "solver", [&](SectionReader& s) {
        s.read("load_increments", c.solver.load_increments);
        s.read("tolerance", c.solver.tolerance);
        s.read("max_newton_iterations", c.solver.max_newton_iterations);
        s.read("max_step_halvings", c.solver.max_step_halvings);
        s.read("allow_step_growth", c.solver.allow_step_growth);
    });
    parse_section(j, "dataset", [&](SectionReader& s) {
        std::string kind = load_kind_name(c.dataset.load_kind);
        s.read("load_kind", kind);
        c.dataset.load_kind = load_kind_from_name(kind);
        s.read("force_range", c.dataset.force_range);
        s.read("n_train", c.dataset.n_train);
        s.read("n_test", c.dataset.n_test);
    });
    parse_section(j, "autoencoder", [&](SectionReader& s) {
        s.read("widths", c.autoencoder.widths);
        s.read("latent_dim", c.autoencoder.latent_dim);
        s.read("epochs", c.autoencoder.epochs);
        s.read("batch_size", c.autoencoder.batch_size);
        s.read("lr_start", c.autoencoder.lr_start);
        s.read("lr_end", c.autoencoder.lr_end);
        s.read("adam_beta1", c.autoencoder.adam_beta1);
        s.read("adam_beta2", c.autoencoder.adam_beta2);
        s.read("adam_epsilon", c.autoencoder.adam_epsilon);
    });
    parse_section(j, "gp", [&](SectionReader& s) {
        s.read("restarts", c.gp.restarts);
        s.read("max_iterations", c.gp.max_iterations);
        s.read("gradient_tolerance", c.gp.gradient_tolerance);
        s.read("noise_floor", c.gp.noise_floor);
        s.read("initial_noise", c.gp.initial_noise);
    });
    parse_section(j, "surrogate", [&](SectionReader& s) {
        s.read("sample_count", c.surrogate.sample_count);
    });
    parse_section(j, "experiment", [&](SectionReader& s) {
        s.read("mask_ratio", c.experiment.mask_ratio);
        s.read("sweep_extension", c.experiment.sweep_extension);
        s.read("sweep_points", c.experiment.sweep_points);
        s.read("scatter_count", c.experiment.scatter_count);
        s.read("attach_distance", c.experiment.attach_distance);
    });

    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw ConfigError("cannot open config file '" + file.string() + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

std::string RunConfig::to_json_text() const {
    json j;
    j["seed"] = seed;
    j["threads"] = threads;
    j["mesh"] = detail::mesh_to_json(mesh);
    j["material"] = json{{"youngs_modulus", material.youngs_modulus},
                         {"poisson_ratio", material.poisson_ratio},
                         {"density", material.density}};
    j["solver"] = json{{"load_increments", solver.load_increments},
                       {"tolerance", solver.tolerance},
                       {"max_newton_iterations", solver.max_newton_iterations},
                       {"max_step_halvings", solver.max_step_halvings},
                       {"allow_step_growth", solver.allow_step_growth}};
    j["dataset"] = json{{"load_kind", load_kind_name(dataset.load_kind)},
                        {"force_range", dataset.force_range},
                        {"n_train", dataset.n_train},
                        {"n_test", dataset.n_test}};
    j["autoencoder"] = json{{"widths", autoencoder.widths},
                            {"latent_dim", autoencoder.latent_dim},
                            {"epochs", autoencoder.epochs},
                            {"batch_size", autoencoder.batch_size},
                            {"lr_start", autoencoder.lr_start},
                            {"lr_end", autoencoder.lr_end},
                            {"adam_beta1", autoencoder.adam_beta1},
                            {"adam_beta2", autoencoder.adam_beta2},
                            {"adam_epsilon", autoencoder.adam_epsilon}};
    j["gp"] = json{{"restarts", gp.restarts},
                   {"max_iterations", gp.max_iterations},
                   {"gradient_tolerance", gp.gradient_tolerance},
                   {"noise_floor", gp.noise_floor},
                   {"initial_noise", gp.initial_noise}};
    j["surrogate"] = json{{"sample_count", surrogate.sample_count}};
    j["experiment"] = json{{"mask_ratio", experiment.mask_ratio},
                           {"sweep_extension", experiment.sweep_extension},
                           {"sweep_points", experiment.sweep_points},
                           {"scatter_count", experiment.scatter_count},
                           {"attach_distance", experiment.attach_distance}};
    return j.dump(2);
}

void RunConfig::validate() const {
    if (threads < 1)
        throw ConfigError("threads must be >= 1");
    if (!(mesh.length > 0.0) || !(mesh.height > 0.0) || mesh.nx < 1 || mesh.ny < 1)
        throw ConfigError("mesh dimensions must be positive");
    material_params();  // validates the Poisson ratio
    if (!(dataset.force_range > 0.0))
        throw ConfigError("dataset.force_range must be positive");
    if (dataset.n_train < 1 || dataset.n_test < 1)
        throw ConfigError("dataset sizes must be >= 1");
    if (dataset.load_kind == LoadKind::BodyForce && !(material.density > 0.0))
        throw ConfigError("body-force runs require positive material density");

    AutoencoderSpec spec;
    spec.input_dim = 2;  // placeholder; real value inferred from data
    spec.encoder_widths = autoencoder.widths;
    spec.latent_dim = autoencoder.latent_dim;
    spec.validate();
    ae_train_config().validate();

    if (gp.restarts < 1 || gp.max_iterations < 1)
        throw ConfigError("gp.restarts and gp.max_iterations must be >= 1");
    if (!(gp.gradient_tolerance > 0.0) || !(gp.noise_floor > 0.0) ||
        !(gp.initial_noise > 0.0))
        throw ConfigError("gp tolerances must be positive");
    if (surrogate.sample_count < 1)
        throw ConfigError("surrogate.sample_count must be >= 1");
    if (!(experiment.mask_ratio >= 0.0))
        throw ConfigError("experiment.mask_ratio must be >= 0");
    if (!(experiment.sweep_extension > 0.0))
        throw ConfigError("experiment.sweep_extension must be positive");
    if (experiment.sweep_points < 2 || experiment.scatter_count < 1)
        throw ConfigError("experiment sweep/scatter sizes are too small");

    SolveSettings s = solver;  // constructor-level checks live in the solver
    if (s.load_increments < 1 || s.max_newton_iterations < 1 || s.max_step_halvings < 0 ||
        !(s.tolerance > 0.0))
        throw ConfigError("solver settings out of range");
}

MaterialParams RunConfig::material_params() const {
    return MaterialParams::from_engineering(material.youngs_modulus, material.poisson_ratio,
                                            material.density);
}

TrainConfig RunConfig::ae_train_config() const {
    TrainConfig t;
    t.epochs = autoencoder.epochs;
    t.batch_size = autoencoder.batch_size;
    t.lr_start = autoencoder.lr_start;
    t.lr_end = autoencoder.lr_end;
    t.adam_beta1 = autoencoder.adam_beta1;
    t.adam_beta2 = autoencoder.adam_beta2;
    t.adam_epsilon = autoencoder.adam_epsilon;
    t.seed = seed;
    return t;
}

GpFitOptions RunConfig::gp_options() const {
    GpFitOptions g;
    g.restarts = gp.restarts;
    g.max_iterations = gp.max_iterations;
    g.gradient_tolerance = gp.gradient_tolerance;
    g.noise_floor = gp.noise_floor;
    g.initial_noise = gp.initial_noise;
    g.seed = seed;
    return g;
}

PipelineConfig RunConfig::pipeline_config() const {
    PipelineConfig p;
    p.ae_spec.input_dim = 0;  // inferred from the dataset by train_pipeline
    p.ae_spec.encoder_widths = autoencoder.widths;
    p.ae_spec.latent_dim = autoencoder.latent_dim;
    p.ae_train = ae_train_config();
    p.gp = gp_options();
    p.sample_count = surrogate.sample_count;
    p.mc_seed = seed;
    return p;
}

MissingRegionConfig RunConfig::experiment_config() const {
    MissingRegionConfig m;
    m.mask_radius = experiment.mask_ratio * dataset.force_range;
    m.force_range = dataset.force_range;
    m.pipeline = pipeline_config();
    m.sweep_extension = experiment.sweep_extension;
    m.sweep_points = experiment.sweep_points;
    m.scatter_count = experiment.scatter_count;
    m.scatter_seed = seed;
    m.attach_distance = experiment.attach_distance;
    m.threads = threads;
    return m;
}

}  // namespace latentgp
