#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nlos/errors.hpp"
#include "nlos/parallel.hpp"
#include "nlos/rng.hpp"
#include "nlos/vae.hpp"

namespace nlos::nn::detail {

// Mini-batch SGD with momentum. sample_fn(index, epoch, grad_out) computes one
// sample's loss and accumulates its gradient into grad_out (pre-zeroed).
// Samples of a batch run in parallel; gradients are reduced in sample order so
// the result is thread-count invariant.
template <typename SampleFn>
std::vector<LossRow> sgd_train(std::vector<double>* params, std::size_t n_samples,
                               const TrainConfig& cfg, const char* what,
                               SampleFn&& sample_fn) {
  require(n_samples > 0, std::string(what) + ": empty training set");
  require(cfg.epochs >= 1 && cfg.batch_size >= 1 && cfg.lr > 0.0,
          std::string(what) + ": bad train config");

  const std::size_t np = params->size();
  std::vector<double> velocity(np, 0.0);
  std::vector<double> grad(np, 0.0);
  const std::size_t batch = std::min<std::size_t>(cfg.batch_size, n_samples);
  std::vector<std::vector<double>> gbuf(batch, std::vector<double>(np, 0.0));
  std::vector<VaeSampleLoss> losses(batch);

  std::vector<std::size_t> order(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) order[i] = i;
  Rng shuffle_rng(mix_seed(cfg.seed, 0x5F0Full));

  std::vector<LossRow> history;
  history.reserve(cfg.epochs);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = n_samples; i > 1; --i) {
      const auto j = static_cast<std::size_t>(
          shuffle_rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(order[i - 1], order[j]);
    }
    double ep_recon = 0.0, ep_kl = 0.0;
    for (std::size_t b0 = 0; b0 < n_samples; b0 += batch) {
      const std::size_t bn = std::min(batch, n_samples - b0);
      parallel_for(bn, cfg.threads, [&](std::size_t s) {
        std::fill(gbuf[s].begin(), gbuf[s].end(), 0.0);
        losses[s] = sample_fn(order[b0 + s], epoch, gbuf[s].data());
      });
      std::fill(grad.begin(), grad.end(), 0.0);
      const double inv_b = 1.0 / static_cast<double>(bn);
      for (std::size_t s = 0; s < bn; ++s) {
        const double* g = gbuf[s].data();
        for (std::size_t i = 0; i < np; ++i) grad[i] += g[i];
        ep_recon += losses[s].recon;
        ep_kl += losses[s].kl;
        if (!std::isfinite(losses[s].recon) || !std::isfinite(losses[s].kl)) {
          throw NumericError(std::string(what) + ": non-finite loss at epoch " +
                             std::to_string(epoch) + ", batch " +
                             std::to_string(b0 / batch));
        }
      }
      double* pv = params->data();
      for (std::size_t i = 0; i < np; ++i) {
        velocity[i] = cfg.momentum * velocity[i] + grad[i] * inv_b;
        pv[i] -= cfg.lr * velocity[i];
      }
    }
    const double inv_n = 1.0 / static_cast<double>(n_samples);
    history.push_back({epoch, ep_recon * inv_n, ep_kl * inv_n,
                       (ep_recon + cfg.beta * ep_kl) * inv_n});
  }
  return history;
}

}  // namespace nlos::nn::detail
