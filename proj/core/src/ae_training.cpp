#include "latentgp/ae_training.hpp"

#include <cmath>
#include <numeric>

#include "latentgp/errors.hpp"
#include "latentgp/rng.hpp"
#include "latentgp/text.hpp"

namespace latentgp {

void TrainConfig::validate() const {
    if (epochs < 1)
        throw ConfigError("training epochs must be >= 1");
    if (batch_size < 1)
        throw ConfigError("batch_size must be >= 1");
    if (!(lr_start > 0.0) || !(lr_end > 0.0))
        throw ConfigError("learning rates must be positive");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0))
        throw ConfigError("adam betas must lie in [0, 1)");
    if (!(adam_epsilon > 0.0))
        throw ConfigError("adam epsilon must be positive");
}

AdamOptimizer::AdamOptimizer(Eigen::Index dim, double beta1, double beta2, double epsilon)
    : m_(Eigen::VectorXd::Zero(dim)), v_(Eigen::VectorXd::Zero(dim)), beta1_(beta1),
      beta2_(beta2), epsilon_(epsilon) {}

void AdamOptimizer::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double lr) {
    if (params.size() != m_.size() || grad.size() != m_.size())
        throw ShapeError("adam step dimension mismatch");
    ++t_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
    v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
    double c1 = 1.0 - std::pow(beta1_, t_);
    double c2 = 1.0 - std::pow(beta2_, t_);
    params.array() -= lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + epsilon_);
}

double linear_lr(int t, int total_steps, double lr_start, double lr_end) {
    if (total_steps <= 1 || t <= 1)
        return lr_start;
    if (t >= total_steps)  // interpolation would land a rounding error off lr_end
        return lr_end;
    double frac = static_cast<double>(t - 1) / static_cast<double>(total_steps - 1);
    return lr_start + (lr_end - lr_start) * frac;
}

TrainResult train_autoencoder(const Eigen::MatrixXd& displacements,
                              const AutoencoderSpec& spec, const TrainConfig& config) {
    spec.validate();
    config.validate();
    const auto n = static_cast<int>(displacements.rows());
    if (n < 1)
        throw ShapeError("training set is empty");
    if (displacements.cols() != spec.input_dim)
        throw ShapeError("training fields have dimension " + format_int(displacements.cols()) +
                         ", spec expects " + format_int(spec.input_dim));

    Normalizer norm = Normalizer::fit(displacements);
    AutoencoderModel model = AutoencoderModel::init_glorot(spec, norm, config.seed);

    const int batches_per_epoch = (n + config.batch_size - 1) / config.batch_size;
    const int total_steps = config.epochs * batches_per_epoch;

    AdamOptimizer adam(model.param_count(), config.adam_beta1, config.adam_beta2,
                       config.adam_epsilon);
    Eigen::VectorXd params = model.params();
    Eigen::VectorXd grad(model.param_count());

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    TrainResult result{std::move(model), {}, 0.0, 0.0};
    result.history.reserve(static_cast<std::size_t>(config.epochs));

    int step = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        KeyedStream shuffle_rng{config.seed, kTagShuffle, static_cast<std::uint64_t>(epoch)};
        shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        double lr = config.lr_start;
        for (int b = 0; b < batches_per_epoch; ++b) {
            const int begin = b * config.batch_size;
            const int count = std::min(config.batch_size, n - begin);
            Eigen::MatrixXd batch(count, displacements.cols());
            for (int r = 0; r < count; ++r)
                batch.row(r) = displacements.row(order[static_cast<std::size_t>(begin + r)]);

            result.model.set_params(params);
            double loss = result.model.reconstruction_loss(batch, &grad);
            if (!std::isfinite(loss))
                throw TrainingDivergenceError("non-finite loss at epoch " +
                                              format_int(epoch) + ", step " +
                                              format_int(step + 1));
            ++step;
            lr = linear_lr(step, total_steps, config.lr_start, config.lr_end);
            adam.step(params, grad, lr);
            epoch_loss += loss * count;
        }
        result.history.push_back({epoch, epoch_loss / n, lr});
    }

    result.model.set_params(params);
    result.final_mse = mse_loss(result.model, displacements);

    Eigen::MatrixXd recon =
        result.model.decode_batch(result.model.encode_batch(displacements));
    double denom = displacements.norm();
    result.reconstruction_rel_l2 =
        denom > 0.0 ? (recon - displacements).norm() / denom : 0.0;
    return result;
}

LatentDataset encode_dataset(const AutoencoderModel& model, const Dataset& data) {
    LatentDataset out;
    out.kind = data.kind;
    out.forces = data.forces;
    out.latents = model.encode_batch(data.displacements);
    return out;
}

}  // namespace latentgp
