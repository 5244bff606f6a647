#include "nlos/vae.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "nlos/binio.hpp"
#include "sgd_driver.hpp"

namespace nlos::nn {

using nlohmann::json;

namespace {

// Stride-2 stage count: as many as the resolution cleanly supports, up to 3.
int stage_count(int h, int w) {
  int s = 0;
  while (s < 3 && h % 2 == 0 && w % 2 == 0 && h / 2 >= 2 && w / 2 >= 2) {
    h /= 2;
    w /= 2;
    ++s;
  }
  require(s >= 1, "VaeModel: input resolution too small");
  return s;
}

json specs_to_json(const Sequential& seq) {
  json arr = json::array();
  for (const LayerSpec& s : seq.specs()) arr.push_back(s.to_json());
  return arr;
}

void specs_from_json(const json& arr, Sequential* seq) {
  for (const auto& j : arr) seq->add(LayerSpec::from_json(j));
}

}  // namespace

VaeModel VaeModel::build(const std::vector<int>& input_shape, int latent,
                         double depth_scale, int base_channels, std::uint64_t seed) {
  require(input_shape.size() == 3 && input_shape[0] == 1,
          "VaeModel: input shape must be [1,H,W]");
  require(latent >= 1 && base_channels >= 1 && depth_scale > 0.0,
          "VaeModel: bad configuration");
  const int H = input_shape[1];
  const int W = input_shape[2];
  const int stages = stage_count(H, W);

  VaeModel m;
  m.input_shape_ = input_shape;
  m.latent_ = latent;
  m.depth_scale_ = depth_scale;

  std::vector<int> chans{1};
  for (int s = 0; s < stages; ++s) {
    chans.push_back(std::min(64, base_channels << s));
  }
  for (int s = 0; s < stages; ++s) {
    m.encoder.add(LayerSpec::conv(chans[s], chans[s + 1], 3, 2, 1));
    m.encoder.add(LayerSpec::relu());
  }
  m.encoder.finalize(input_shape, 0);

  const std::vector<int> body = m.encoder.out_shape();
  const int flat = static_cast<int>(Tensor::numel_of(body));
  m.mu_head.add(LayerSpec::reshape({flat}));
  m.mu_head.add(LayerSpec::linear(flat, latent));
  m.mu_head.finalize(body, m.encoder.param_count());
  m.logvar_head.add(LayerSpec::reshape({flat}));
  m.logvar_head.add(LayerSpec::linear(flat, latent));
  m.logvar_head.finalize(body, m.mu_head.base_offset() + m.mu_head.param_count());

  m.decoder.add(LayerSpec::linear(latent, flat));
  m.decoder.add(LayerSpec::relu());
  m.decoder.add(LayerSpec::reshape(body));
  for (int s = stages; s >= 1; --s) {
    m.decoder.add(LayerSpec::deconv(chans[s], chans[s - 1], 4, 2, 1));
    if (s > 1) m.decoder.add(LayerSpec::relu());
  }
  m.decoder.add(LayerSpec::sigmoid());
  m.decoder.finalize({latent}, m.logvar_head.base_offset() + m.logvar_head.param_count());
  require(m.decoder.out_shape() == input_shape, "VaeModel: decoder does not mirror input");

  m.params_.assign(m.decoder.base_offset() + m.decoder.param_count(), 0.0);
  Rng rng(mix_seed(seed, 0x1A17ull));
  m.encoder.init_params(m.params_.data(), rng);
  m.mu_head.init_params(m.params_.data(), rng);
  m.logvar_head.init_params(m.params_.data(), rng);
  m.decoder.init_params(m.params_.data(), rng);
  return m;
}

EncoderOutput VaeModel::encode(const Tensor& x) const {
  require(x.shape == input_shape_, "encode: input shape mismatch");
  const Tensor body = encoder.forward(x, params_.data());
  EncoderOutput out;
  out.mu = mu_head.forward(body, params_.data()).v;
  out.log_var = logvar_head.forward(body, params_.data()).v;
  return out;
}

Tensor VaeModel::decode(const std::vector<double>& z) const {
  require(static_cast<int>(z.size()) == latent_, "decode: latent size mismatch");
  return decoder.forward(Tensor({latent_}, z), params_.data());
}

std::vector<double> reparameterize(const EncoderOutput& out,
                                   const std::vector<double>& eps) {
  require(out.mu.size() == out.log_var.size() && out.mu.size() == eps.size(),
          "reparameterize: dimension mismatch");
  std::vector<double> z(out.mu.size());
  for (std::size_t d = 0; d < z.size(); ++d) {
    z[d] = out.mu[d] + std::exp(0.5 * out.log_var[d]) * eps[d];
  }
  return z;
}

double kl_divergence(const EncoderOutput& out) {
  require(out.mu.size() == out.log_var.size(), "kl_divergence: dimension mismatch");
  double acc = 0.0;
  for (std::size_t d = 0; d < out.mu.size(); ++d) {
    acc += out.mu[d] * out.mu[d] + std::exp(out.log_var[d]) - 1.0 - out.log_var[d];
  }
  return 0.5 * acc;
}

double reconstruction_loss(const Tensor& x, const Tensor& x_prime) {
  require(x.same_shape(x_prime), "reconstruction_loss: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    const double d = x_prime.v[i] - x.v[i];
    acc += d * d;
  }
  return acc / static_cast<double>(x.v.size());
}

VaeSampleLoss vae_loss_grad(const VaeModel& model, const Tensor& x,
                            const std::vector<double>& eps, double beta,
                            double* grads) {
  const double* p = model.params().data();
  std::vector<Tensor> tr_enc, tr_mu, tr_lv, tr_dec;
  const Tensor body = model.encoder.forward(x, p, grads ? &tr_enc : nullptr);
  const Tensor mu_t = model.mu_head.forward(body, p, grads ? &tr_mu : nullptr);
  const Tensor lv_t = model.logvar_head.forward(body, p, grads ? &tr_lv : nullptr);

  const int D = model.latent();
  Tensor z({D});
  for (int d = 0; d < D; ++d) {
    z.v[d] = mu_t.v[d] + std::exp(0.5 * lv_t.v[d]) * eps[d];
  }
  const Tensor xp = model.decoder.forward(z, p, grads ? &tr_dec : nullptr);

  VaeSampleLoss loss;
  loss.recon = reconstruction_loss(x, xp);
  loss.kl = kl_divergence({mu_t.v, lv_t.v});

  if (grads) {
    const double inv_n = 1.0 / static_cast<double>(x.v.size());
    Tensor dxp(xp.shape);
    for (std::size_t i = 0; i < xp.v.size(); ++i) {
      dxp.v[i] = 2.0 * (xp.v[i] - x.v[i]) * inv_n;
    }
    const Tensor dz = model.decoder.backward(dxp, p, tr_dec, grads);
    Tensor dmu({D}), dlv({D});
    for (int d = 0; d < D; ++d) {
      dmu.v[d] = dz.v[d] + beta * mu_t.v[d];
      dlv.v[d] = dz.v[d] * eps[d] * 0.5 * std::exp(0.5 * lv_t.v[d]) +
                 beta * 0.5 * (std::exp(lv_t.v[d]) - 1.0);
    }
    Tensor dbody = model.mu_head.backward(dmu, p, tr_mu, grads);
    const Tensor dbody2 = model.logvar_head.backward(dlv, p, tr_lv, grads);
    for (std::size_t i = 0; i < dbody.v.size(); ++i) dbody.v[i] += dbody2.v[i];
    model.encoder.backward(dbody, p, tr_enc, grads);
  }
  return loss;
}

std::vector<LossRow> train_vae(VaeModel* model, const std::vector<Tensor>& train_set,
                               const TrainConfig& cfg) {
  for (const Tensor& t : train_set) {
    require(t.shape == model->input_shape(), "train_vae: sample shape mismatch");
  }
  const int D = model->latent();
  return detail::sgd_train(&model->params(), train_set.size(), cfg, "train_vae",
                           [&](std::size_t idx, int epoch, double* g) {
                             Rng eps_rng(mix_seed(cfg.seed, 0xE9ull,
                                                  static_cast<std::uint64_t>(epoch) *
                                                          train_set.size() +
                                                      idx));
                             std::vector<double> eps(D);
                             for (int d = 0; d < D; ++d) eps[d] = eps_rng.normal();
                             return vae_loss_grad(*model, train_set[idx], eps,
                                                  cfg.beta, g);
                           });
}

void write_loss_csv(const std::string& path, const std::vector<LossRow>& history) {
  std::ofstream out(path);
  if (!out) throw ContractError("cannot open for writing: " + path);
  out << "epoch,reconstruction,kl,total\n";
  char line[128];
  for (const LossRow& row : history) {
    std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%.12g\n", row.epoch, row.recon,
                  row.kl, row.total);
    out << line;
  }
}

void save_vae(const std::string& path, const VaeModel& model) {
  json arch;
  arch["format"] = 1;
  arch["kind"] = "vae";
  arch["input"] = model.input_shape();
  arch["latent"] = model.latent();
  arch["depth_scale"] = model.depth_scale();
  arch["encoder"] = specs_to_json(model.encoder);
  arch["mu"] = specs_to_json(model.mu_head);
  arch["logvar"] = specs_to_json(model.logvar_head);
  arch["decoder"] = specs_to_json(model.decoder);
  const std::string blob = arch.dump();

  BinWriter w(path);
  w.magic("NLOSNN01");
  w.u32(static_cast<std::uint32_t>(blob.size()));
  w.bytes(blob);
  w.u32(static_cast<std::uint32_t>(model.params().size()));
  w.f32_array(model.params());
  w.close();
}

VaeModel load_vae(const std::string& path) {
  BinReader r(path);
  r.expect_magic("NLOSNN01");
  json arch;
  try {
    arch = json::parse(r.bytes(r.u32()));
  } catch (const json::parse_error& e) {
    throw ContractError(path + ": bad architecture block: " + e.what());
  }
  if (arch.value("kind", "") != "vae") {
    throw ContractError(path + ": not a vae parameter file");
  }

  VaeModel m;
  m.input_shape_ = arch.at("input").get<std::vector<int>>();
  m.latent_ = arch.at("latent").get<int>();
  m.depth_scale_ = arch.at("depth_scale").get<double>();
  specs_from_json(arch.at("encoder"), &m.encoder);
  specs_from_json(arch.at("mu"), &m.mu_head);
  specs_from_json(arch.at("logvar"), &m.logvar_head);
  specs_from_json(arch.at("decoder"), &m.decoder);

  m.encoder.finalize(m.input_shape_, 0);
  m.mu_head.finalize(m.encoder.out_shape(), m.encoder.param_count());
  m.logvar_head.finalize(m.encoder.out_shape(),
                         m.mu_head.base_offset() + m.mu_head.param_count());
  m.decoder.finalize({m.latent_},
                     m.logvar_head.base_offset() + m.logvar_head.param_count());
  require(m.decoder.out_shape() == m.input_shape_,
          path + ": decoder output does not match input shape");
  require(static_cast<int>(m.mu_head.out_shape()[0]) == m.latent_,
          path + ": latent dimension mismatch");

  const std::size_t expected = m.decoder.base_offset() + m.decoder.param_count();
  const std::size_t stored = r.u32();
  require(stored == expected, path + ": weight count does not match architecture");
  m.params_ = r.f32_array(expected);
  return m;
}

}  // namespace nlos::nn
