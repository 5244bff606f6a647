#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlos/vae.hpp"

namespace nlos::nn {

// Convolutional regressor from the 4-channel stacked input to a latent code.
class CompressorModel {
 public:
  // input_shape is [4,H,halfW].
  static CompressorModel build(const std::vector<int>& input_shape, int latent,
                               int base_channels, std::uint64_t seed);

  std::vector<double> compress(const Tensor& y) const;

  const std::vector<int>& input_shape() const { return input_shape_; }
  int latent() const { return latent_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  Sequential body;
  std::vector<int> input_shape_;
  int latent_ = 0;
  std::vector<double> params_;
};

// Loss (mean squared error over latent dims) and gradient for one sample.
VaeSampleLoss compressor_loss_grad(const CompressorModel& model, const Tensor& y,
                                   const std::vector<double>& target_z, double* grads);

// Mini-batch SGD toward per-sample target latents. Same determinism contract
// as train_vae. The kl column of the returned history is 0.
std::vector<LossRow> train_compressor(CompressorModel* model,
                                      const std::vector<Tensor>& inputs,
                                      const std::vector<std::vector<double>>& targets,
                                      const TrainConfig& cfg);

void save_compressor(const std::string& path, const CompressorModel& model);
CompressorModel load_compressor(const std::string& path);

}  // namespace nlos::nn
