#include "latentgp/autoencoder.hpp"

#include <cmath>

#include "latentgp/errors.hpp"
#include "latentgp/rng.hpp"
#include "latentgp/text.hpp"

namespace latentgp {
namespace {

std::vector<LayerInfo> build_layout(const AutoencoderSpec& spec, Eigen::Index& total) {
    std::vector<LayerInfo> layout;
    std::ptrdiff_t cursor = 0;
    auto push = [&](const std::string& name, int rows, int cols) {
        LayerInfo info;
        info.name = name;
        info.rows = rows;
        info.cols = cols;
        info.w_offset = cursor;
        cursor += static_cast<std::ptrdiff_t>(rows) * cols;
        info.b_offset = cursor;
        cursor += rows;
        layout.push_back(info);
    };

    int prev = spec.input_dim;
    for (std::size_t i = 0; i < spec.encoder_widths.size(); ++i) {
        int w = spec.encoder_widths[i];
        push("enc" + format_int(static_cast<long long>(i)) + "a", w, prev);
        push("enc" + format_int(static_cast<long long>(i)) + "b", w, w);
        prev = w;
    }
    push("latent", spec.latent_dim, prev);
    prev = spec.latent_dim;
    for (std::size_t j = 0; j < spec.encoder_widths.size(); ++j) {
        int w = spec.encoder_widths[spec.encoder_widths.size() - 1 - j];
        push("dec" + format_int(static_cast<long long>(j)) + "a", w, prev);
        push("dec" + format_int(static_cast<long long>(j)) + "b", w, w);
        prev = w;
    }
    push("output", spec.input_dim, prev);

    total = cursor;
    return layout;
}

}  // namespace

void AutoencoderSpec::validate() const {
    if (input_dim < 1)
        throw ConfigError("autoencoder input_dim must be >= 1");
    if (latent_dim < 1)
        throw ConfigError("autoencoder latent_dim must be >= 1");
    for (int w : encoder_widths)
        if (w < 1)
            throw ConfigError("autoencoder layer widths must be >= 1");
}

Normalizer Normalizer::fit(const Eigen::MatrixXd& displacements) {
    Normalizer n;
    n.offset = 0.0;
    double peak = displacements.size() ? displacements.cwiseAbs().maxCoeff() : 0.0;
    n.scale = peak > 0.0 ? peak : 1.0;
    return n;
}

AutoencoderModel::AutoencoderModel(AutoencoderSpec spec, Normalizer norm)
    : spec_(std::move(spec)), norm_(norm) {
    spec_.validate();
    Eigen::Index total = 0;
    layout_ = build_layout(spec_, total);
    params_ = Eigen::VectorXd::Zero(total);
}

AutoencoderModel AutoencoderModel::init_glorot(const AutoencoderSpec& spec,
                                               const Normalizer& norm, std::uint64_t seed) {
    AutoencoderModel model(spec, norm);
    KeyedStream rng{seed, kTagAeInit};
    for (const LayerInfo& info : model.layout_) {
        double limit = std::sqrt(6.0 / (info.rows + info.cols));
        double* w = model.params_.data() + info.w_offset;
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(info.rows) * info.cols; ++i)
            w[i] = rng.uniform(-limit, limit);
        // biases stay zero
    }
    return model;
}

void AutoencoderModel::set_params(const Eigen::VectorXd& p) {
    if (p.size() != params_.size())
        throw ShapeError("parameter vector has length " + format_int(p.size()) +
                         ", model expects " + format_int(params_.size()));
    params_ = p;
}

// ---------------------------------------------------------------------------
// Forward and reverse passes. The network is a flat list of ops; a block
// op consumes two consecutive linear pieces, a linear op consumes one.

struct NetworkPass {
    struct Op {
        bool is_block = false;
        std::size_t layer0 = 0;
    };

    struct Cache {
        Eigen::MatrixXd x_in;
        Eigen::MatrixXd pre_a;  // blocks only
        Eigen::MatrixXd act_a;
        Eigen::MatrixXd pre_b;
    };

    static std::vector<Op> ops(const AutoencoderModel& m) {
        const std::size_t k = m.spec_.encoder_widths.size();
        std::vector<Op> list;
        for (std::size_t i = 0; i < k; ++i)
            list.push_back({true, 2 * i});
        list.push_back({false, 2 * k});
        for (std::size_t j = 0; j < k; ++j)
            list.push_back({true, 2 * k + 1 + 2 * j});
        list.push_back({false, 4 * k + 1});
        return list;
    }

    // Number of leading ops that make up the encoder.
    static std::size_t encoder_ops(const AutoencoderModel& m) {
        return m.spec_.encoder_widths.size() + 1;
    }

    static Eigen::Map<const Eigen::MatrixXd> weight(const AutoencoderModel& m, std::size_t l) {
        const LayerInfo& info = m.layout_[l];
        return {m.params_.data() + info.w_offset, info.rows, info.cols};
    }
    static Eigen::Map<const Eigen::VectorXd> bias(const AutoencoderModel& m, std::size_t l) {
        const LayerInfo& info = m.layout_[l];
        return {m.params_.data() + info.b_offset, info.rows};
    }

    static Eigen::MatrixXd run(const AutoencoderModel& m, Eigen::MatrixXd x,
                               std::size_t op_begin, std::size_t op_end,
                               std::vector<Cache>* caches) {
        auto op_list = ops(m);
        for (std::size_t o = op_begin; o < op_end; ++o) {
            const Op& op = op_list[o];
            Cache cache;
            if (caches)
                cache.x_in = x;
            if (op.is_block) {
                auto wa = weight(m, op.layer0);
                auto ba = bias(m, op.layer0);
                auto wb = weight(m, op.layer0 + 1);
                auto bb = bias(m, op.layer0 + 1);
                Eigen::MatrixXd pre_a = (wa * x).colwise() + ba;
                Eigen::MatrixXd act_a = pre_a.cwiseMax(0.0);
                Eigen::MatrixXd pre_b = (wb * act_a).colwise() + bb;
                x = act_a + pre_b.cwiseMax(0.0);
                if (caches) {
                    cache.pre_a = std::move(pre_a);
                    cache.act_a = std::move(act_a);
                    cache.pre_b = std::move(pre_b);
                }
            } else {
                x = (weight(m, op.layer0) * x).colwise() + bias(m, op.layer0);
            }
            if (caches)
                caches->push_back(std::move(cache));
        }
        return x;
    }

    // Backward through ops [op_begin, op_end), caches aligned to that
    // range. d_out is the loss gradient at the output; returns the
    // gradient at the input and accumulates parameter gradients.
    static Eigen::MatrixXd backward(const AutoencoderModel& m, std::size_t op_begin,
                                    std::size_t op_end, const std::vector<Cache>& caches,
                                    Eigen::MatrixXd d_out, Eigen::VectorXd& grad) {
        auto op_list = ops(m);
        auto grad_w = [&](std::size_t l) {
            const LayerInfo& info = m.layout_[l];
            return Eigen::Map<Eigen::MatrixXd>(grad.data() + info.w_offset, info.rows,
                                               info.cols);
        };
        auto grad_b = [&](std::size_t l) {
            const LayerInfo& info = m.layout_[l];
            return Eigen::Map<Eigen::VectorXd>(grad.data() + info.b_offset, info.rows);
        };

        for (std::size_t o = op_end; o-- > op_begin;) {
            const Op& op = op_list[o];
            const Cache& cache = caches[o - op_begin];
            if (op.is_block) {
                auto wa = weight(m, op.layer0);
                auto wb = weight(m, op.layer0 + 1);
                Eigen::MatrixXd d_pre_b =
                    (cache.pre_b.array() > 0.0).select(d_out, 0.0);
                grad_w(op.layer0 + 1) += d_pre_b * cache.act_a.transpose();
                grad_b(op.layer0 + 1) += d_pre_b.rowwise().sum();
                Eigen::MatrixXd d_act_a = d_out + wb.transpose() * d_pre_b;
                Eigen::MatrixXd d_pre_a =
                    (cache.pre_a.array() > 0.0).select(d_act_a, 0.0);
                grad_w(op.layer0) += d_pre_a * cache.x_in.transpose();
                grad_b(op.layer0) += d_pre_a.rowwise().sum();
                d_out = wa.transpose() * d_pre_a;
            } else {
                auto w = weight(m, op.layer0);
                grad_w(op.layer0) += d_out * cache.x_in.transpose();
                grad_b(op.layer0) += d_out.rowwise().sum();
                d_out = w.transpose() * d_out;
            }
        }
        return d_out;
    }
};

Eigen::MatrixXd AutoencoderModel::encode_cols(const Eigen::MatrixXd& x) const {
    return NetworkPass::run(*this, x, 0, NetworkPass::encoder_ops(*this), nullptr);
}

Eigen::MatrixXd AutoencoderModel::decode_cols(const Eigen::MatrixXd& z) const {
    auto op_list = NetworkPass::ops(*this);
    return NetworkPass::run(*this, z, NetworkPass::encoder_ops(*this), op_list.size(),
                            nullptr);
}

Eigen::VectorXd AutoencoderModel::encode(const Eigen::VectorXd& u) const {
    if (u.size() != spec_.input_dim)
        throw ShapeError("encode input has length " + format_int(u.size()) + ", expected " +
                         format_int(spec_.input_dim));
    Eigen::MatrixXd x = (u.array() - norm_.offset).matrix() / norm_.scale;
    return encode_cols(x).col(0);
}

Eigen::VectorXd AutoencoderModel::decode(const Eigen::VectorXd& z) const {
    if (z.size() != spec_.latent_dim)
        throw ShapeError("decode input has length " + format_int(z.size()) + ", expected " +
                         format_int(spec_.latent_dim));
    Eigen::MatrixXd u_n = decode_cols(z);
    return (u_n.array() * norm_.scale + norm_.offset).matrix().col(0);
}

Eigen::MatrixXd AutoencoderModel::encode_batch(const Eigen::MatrixXd& u_rows) const {
    if (u_rows.cols() != spec_.input_dim)
        throw ShapeError("encode batch has " + format_int(u_rows.cols()) +
                         " columns, expected " + format_int(spec_.input_dim));
    Eigen::MatrixXd x = ((u_rows.transpose().array() - norm_.offset) / norm_.scale).matrix();
    return encode_cols(x).transpose();
}

Eigen::MatrixXd AutoencoderModel::decode_batch(const Eigen::MatrixXd& z_rows) const {
    if (z_rows.cols() != spec_.latent_dim)
        throw ShapeError("decode batch has " + format_int(z_rows.cols()) +
                         " columns, expected " + format_int(spec_.latent_dim));
    Eigen::MatrixXd u_n = decode_cols(z_rows.transpose());
    return (u_n.array() * norm_.scale + norm_.offset).matrix().transpose();
}

double AutoencoderModel::reconstruction_loss(const Eigen::MatrixXd& u_rows,
                                             Eigen::VectorXd* grad) const {
    if (u_rows.cols() != spec_.input_dim)
        throw ShapeError("loss batch has " + format_int(u_rows.cols()) +
                         " columns, expected " + format_int(spec_.input_dim));
    if (u_rows.rows() < 1)
        throw ShapeError("loss batch is empty");

    const double batch = static_cast<double>(u_rows.rows());
    Eigen::MatrixXd x = ((u_rows.transpose().array() - norm_.offset) / norm_.scale).matrix();

    auto op_list = NetworkPass::ops(*this);
    std::vector<NetworkPass::Cache> caches;
    std::vector<NetworkPass::Cache>* cache_ptr = grad ? &caches : nullptr;
    Eigen::MatrixXd recon = NetworkPass::run(*this, x, 0, op_list.size(), cache_ptr);

    Eigen::MatrixXd diff = recon - x;
    double loss = diff.squaredNorm() / batch;

    if (grad) {
        grad->setZero(params_.size());
        Eigen::MatrixXd d_out = (2.0 / batch) * diff;
        NetworkPass::backward(*this, 0, op_list.size(), caches, std::move(d_out), *grad);
    }
    return loss;
}

double mse_loss(const AutoencoderModel& model, const Eigen::MatrixXd& u_rows) {
    return model.reconstruction_loss(u_rows, nullptr);
}

Eigen::VectorXd backprop(const AutoencoderModel& model, const Eigen::MatrixXd& u_rows) {
    Eigen::VectorXd grad;
    model.reconstruction_loss(u_rows, &grad);
    return grad;
}

}  // namespace latentgp
