#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlos/nn.hpp"

namespace nlos::nn {

struct EncoderOutput {
  std::vector<double> mu;
  std::vector<double> log_var;
};

// Mirrored convolutional VAE; the decoder half is the generator. Parameters
// live in one flat vector laid out [encoder | mu head | logvar head | decoder].
class VaeModel {
 public:
  // input_shape is [1,H,W] with H,W divisible by 4 (8 preferred: three
  // stride-2 stages). depth_scale converts between meters and the decoder's
  // [0,1] output range.
  static VaeModel build(const std::vector<int>& input_shape, int latent,
                        double depth_scale, int base_channels, std::uint64_t seed);

  EncoderOutput encode(const Tensor& x) const;
  Tensor decode(const std::vector<double>& z) const;

  const std::vector<int>& input_shape() const { return input_shape_; }
  int latent() const { return latent_; }
  double depth_scale() const { return depth_scale_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  Sequential encoder, mu_head, logvar_head, decoder;

  std::vector<int> input_shape_;
  int latent_ = 0;
  double depth_scale_ = 1.0;
  std::vector<double> params_;
};

// z = mu + exp(log_var / 2) * eps, elementwise.
std::vector<double> reparameterize(const EncoderOutput& out,
                                   const std::vector<double>& eps);

// KL(q(z|x) || N(0,I)) closed form: 0.5 * sum(mu^2 + e^lv - 1 - lv).
double kl_divergence(const EncoderOutput& out);

// Mean squared error over all elements.
double reconstruction_loss(const Tensor& x, const Tensor& x_prime);

struct TrainConfig {
  int epochs = 200;
  int batch_size = 16;
  double lr = 0.05;
  double momentum = 0.9;
  double beta = 0.5;  // KL weight; unused for compressor training
  std::uint64_t seed = 1;
  int threads = 0;
};

struct LossRow {
  int epoch = 0;
  double recon = 0.0;
  double kl = 0.0;
  double total = 0.0;
};

// Loss (recon + beta*kl) and, when grads is non-null, its full parameter
// gradient for one sample with a fixed reparameterization draw. grads must be
// zeroed by the caller (contributions are accumulated).
struct VaeSampleLoss {
  double recon = 0.0;
  double kl = 0.0;
};
VaeSampleLoss vae_loss_grad(const VaeModel& model, const Tensor& x,
                            const std::vector<double>& eps, double beta,
                            double* grads);

// Mini-batch SGD with momentum on recon + beta*kl. Deterministic given the
// seed and thread-count invariant (per-sample gradients are reduced in sample
// order). Throws NumericError on a non-finite loss.
std::vector<LossRow> train_vae(VaeModel* model, const std::vector<Tensor>& train_set,
                               const TrainConfig& cfg);

void write_loss_csv(const std::string& path, const std::vector<LossRow>& history);

// Parameter files: magic "NLOSNN01", architecture JSON block, float32 weights.
void save_vae(const std::string& path, const VaeModel& model);
VaeModel load_vae(const std::string& path);

}  // namespace nlos::nn
