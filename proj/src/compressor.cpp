#include "nlos/compressor.hpp"

#include <algorithm>
#include <cmath>

#include "nlos/binio.hpp"
#include "sgd_driver.hpp"

namespace nlos::nn {

using nlohmann::json;

CompressorModel CompressorModel::build(const std::vector<int>& input_shape, int latent,
                                       int base_channels, std::uint64_t seed) {
  require(input_shape.size() == 3 && input_shape[0] == 4,
          "CompressorModel: input shape must be [4,H,W]");
  require(latent >= 1 && base_channels >= 1, "CompressorModel: bad configuration");
  int h = input_shape[1];
  int w = input_shape[2];

  CompressorModel m;
  m.input_shape_ = input_shape;
  m.latent_ = latent;

  int in_ch = 4;
  int stage = 0;
  while (stage < 3 && h % 2 == 0 && w % 2 == 0 && h / 2 >= 2 && w / 2 >= 2) {
    const int out_ch = std::min(64, base_channels << stage);
    m.body.add(LayerSpec::conv(in_ch, out_ch, 3, 2, 1));
    m.body.add(LayerSpec::relu());
    in_ch = out_ch;
    h /= 2;
    w /= 2;
    ++stage;
  }
  require(stage >= 1, "CompressorModel: input resolution too small");
  const int flat = in_ch * h * w;
  m.body.add(LayerSpec::reshape({flat}));
  m.body.add(LayerSpec::linear(flat, latent));
  m.body.finalize(input_shape, 0);

  m.params_.assign(m.body.param_count(), 0.0);
  Rng rng(mix_seed(seed, 0xC03Dull));
  m.body.init_params(m.params_.data(), rng);
  return m;
}

std::vector<double> CompressorModel::compress(const Tensor& y) const {
  require(y.shape == input_shape_, "compress: input shape mismatch");
  return body.forward(y, params_.data()).v;
}

VaeSampleLoss compressor_loss_grad(const CompressorModel& model, const Tensor& y,
                                   const std::vector<double>& target_z, double* grads) {
  require(static_cast<int>(target_z.size()) == model.latent(),
          "compressor_loss_grad: target dimension mismatch");
  const double* p = model.params().data();
  std::vector<Tensor> trace;
  const Tensor z = model.body.forward(y, p, grads ? &trace : nullptr);

  const double inv_d = 1.0 / static_cast<double>(z.v.size());
  double acc = 0.0;
  Tensor dz(z.shape);
  for (std::size_t d = 0; d < z.v.size(); ++d) {
    const double diff = z.v[d] - target_z[d];
    acc += diff * diff;
    dz.v[d] = 2.0 * diff * inv_d;
  }
  if (grads) model.body.backward(dz, p, trace, grads);
  return {acc * inv_d, 0.0};
}

std::vector<LossRow> train_compressor(CompressorModel* model,
                                      const std::vector<Tensor>& inputs,
                                      const std::vector<std::vector<double>>& targets,
                                      const TrainConfig& cfg) {
  require(inputs.size() == targets.size(), "train_compressor: inputs/targets mismatch");
  for (const Tensor& t : inputs) {
    require(t.shape == model->input_shape(), "train_compressor: sample shape mismatch");
  }
  return detail::sgd_train(&model->params(), inputs.size(), cfg, "train_compressor",
                           [&](std::size_t idx, int /*epoch*/, double* g) {
                             return compressor_loss_grad(*model, inputs[idx],
                                                         targets[idx], g);
                           });
}

void save_compressor(const std::string& path, const CompressorModel& model) {
  json arch;
  arch["format"] = 1;
  arch["kind"] = "compressor";
  arch["input"] = model.input_shape();
  arch["latent"] = model.latent();
  arch["body"] = json::array();
  for (const LayerSpec& s : model.body.specs()) arch["body"].push_back(s.to_json());
  const std::string blob = arch.dump();

  BinWriter w(path);
  w.magic("NLOSNN01");
  w.u32(static_cast<std::uint32_t>(blob.size()));
  w.bytes(blob);
  w.u32(static_cast<std::uint32_t>(model.params().size()));
  w.f32_array(model.params());
  w.close();
}

CompressorModel load_compressor(const std::string& path) {
  BinReader r(path);
  r.expect_magic("NLOSNN01");
  json arch;
  try {
    arch = json::parse(r.bytes(r.u32()));
  } catch (const json::parse_error& e) {
    throw ContractError(path + ": bad architecture block: " + e.what());
  }
  if (arch.value("kind", "") != "compressor") {
    throw ContractError(path + ": not a compressor parameter file");
  }
  CompressorModel m;
  m.input_shape_ = arch.at("input").get<std::vector<int>>();
  m.latent_ = arch.at("latent").get<int>();
  for (const auto& j : arch.at("body")) m.body.add(LayerSpec::from_json(j));
  m.body.finalize(m.input_shape_, 0);
  require(m.body.out_shape() == std::vector<int>{m.latent_},
          path + ": body output does not match latent size");
  const std::size_t stored = r.u32();
  require(stored == m.body.param_count(),
          path + ": weight count does not match architecture");
  m.params_ = r.f32_array(m.body.param_count());
  return m;
}

}  // namespace nlos::nn
