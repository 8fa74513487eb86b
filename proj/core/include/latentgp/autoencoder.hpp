#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace latentgp {

// Network shape. The encoder applies one residual block per entry of
// `encoder_widths` followed by a linear map to `latent_dim`; the
// decoder mirrors the widths in reverse and finishes with a linear map
// back to `input_dim`. A block computes
//   a = relu(Wa x + ba);  y = a + relu(Wb a + bb)
// with Wb square. Empty `encoder_widths` gives a purely affine
// encoder/decoder pair, which is useful for analytically checkable
// models.
struct AutoencoderSpec {
    int input_dim = 0;
    std::vector<int> encoder_widths;
    int latent_dim = 0;

    void validate() const;  // throws ConfigError
};

// Global affine field normalization u_n = (u - offset) / scale. Fitted
// as offset 0, scale max|u| over the training set, so normalized fields
// live in [-1, 1].
struct Normalizer {
    double scale = 1.0;
    double offset = 0.0;

    static Normalizer fit(const Eigen::MatrixXd& displacements);
};

// One linear piece of the network inside the flat parameter vector.
// The weight slice stores a rows x cols matrix column-major at
// w_offset; the bias (length rows) follows at b_offset.
struct LayerInfo {
    std::string name;
    int rows = 0;
    int cols = 0;
    std::ptrdiff_t w_offset = 0;
    std::ptrdiff_t b_offset = 0;
};

// Fully connected residual autoencoder over one flat parameter vector.
// All parameters live in a single VectorXd so the optimizer, the
// serializer, and finite-difference checks see the same storage.
class AutoencoderModel {
public:
    // Empty placeholder model; assign a real one before use.
    AutoencoderModel() = default;

    AutoencoderModel(AutoencoderSpec spec, Normalizer norm);

    // Glorot-uniform weights, zero biases, drawn in layout order.
    static AutoencoderModel init_glorot(const AutoencoderSpec& spec, const Normalizer& norm,
                                        std::uint64_t seed);

    const AutoencoderSpec& spec() const { return spec_; }
    const Normalizer& normalizer() const { return norm_; }
    const std::vector<LayerInfo>& layout() const { return layout_; }

    Eigen::Index param_count() const { return params_.size(); }
    const Eigen::VectorXd& params() const { return params_; }
    void set_params(const Eigen::VectorXd& p);

    // Raw-unit single-field interfaces.
    Eigen::VectorXd encode(const Eigen::VectorXd& u) const;
    Eigen::VectorXd decode(const Eigen::VectorXd& z) const;

    // Batch interfaces, one sample per row, raw units.
    Eigen::MatrixXd encode_batch(const Eigen::MatrixXd& u_rows) const;
    Eigen::MatrixXd decode_batch(const Eigen::MatrixXd& z_rows) const;

    // Mean over the batch of the squared reconstruction error in
    // normalized units; `grad`, when non-null, receives d loss /
    // d params for the same batch.
    double reconstruction_loss(const Eigen::MatrixXd& u_rows, Eigen::VectorXd* grad) const;

private:
    // Column-batch internals (samples as columns, normalized units).
    Eigen::MatrixXd encode_cols(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd decode_cols(const Eigen::MatrixXd& z) const;

    AutoencoderSpec spec_;
    Normalizer norm_;
    std::vector<LayerInfo> layout_;
    Eigen::VectorXd params_;

    friend struct NetworkPass;
};

double mse_loss(const AutoencoderModel& model, const Eigen::MatrixXd& u_rows);
Eigen::VectorXd backprop(const AutoencoderModel& model, const Eigen::MatrixXd& u_rows);

}  // namespace latentgp
