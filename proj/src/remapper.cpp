#include "nlos/remapper.hpp"

#include "nlos/binio.hpp"
#include "nlos/errors.hpp"

namespace nlos {

nn::Tensor tensor_from_target(const NlosDepthMap& map, double depth_scale) {
  require(depth_scale > 0.0, "tensor_from_target: depth_scale must be > 0");
  nn::Tensor t({1, map.height, map.width});
  for (std::size_t i = 0; i < map.depth.size(); ++i) {
    t.v[i] = map.depth[i] / depth_scale;
  }
  return t;
}

NlosDepthMap target_from_tensor(const nn::Tensor& t, double depth_scale) {
  require(t.shape.size() == 3 && t.shape[0] == 1, "target_from_tensor: expected [1,H,W]");
  NlosDepthMap map;
  map.height = t.shape[1];
  map.width = t.shape[2];
  map.depth.resize(t.v.size());
  for (std::size_t i = 0; i < t.v.size(); ++i) {
    map.depth[i] = t.v[i] * depth_scale;
  }
  return map;
}

nn::Tensor tensor_from_input(const StackedInput& input) {
  nn::Tensor t({4, input.height, input.half_width});
  const std::size_t plane = input.plane_size();
  for (int c = 0; c < 4; ++c) {
    std::copy(input.channels[c].begin(), input.channels[c].end(),
              t.v.begin() + static_cast<std::ptrdiff_t>(c * plane));
  }
  return t;
}

LatentRegistry build_latent_registry(const nn::VaeModel& vae,
                                     const std::vector<DatasetRecord>& train_records) {
  LatentRegistry registry;
  for (const DatasetRecord& record : train_records) {
    const nn::Tensor x = tensor_from_target(record.target, vae.depth_scale());
    registry[record.scene_id] = vae.encode(x).mu;
  }
  return registry;
}

void save_registry(const std::string& path, const LatentRegistry& registry) {
  require(!registry.empty(), "save_registry: empty registry");
  const std::size_t dim = registry.begin()->second.size();
  BinWriter w(path);
  w.magic("NLOSLR01");
  w.u32(static_cast<std::uint32_t>(registry.size()));
  w.u32(static_cast<std::uint32_t>(dim));
  for (const auto& [id, z] : registry) {
    require(z.size() == dim, "save_registry: inconsistent latent dimension");
    w.u32(static_cast<std::uint32_t>(id.size()));
    w.bytes(id);
    w.f32_array(z);
  }
  w.close();
}

LatentRegistry load_registry(const std::string& path) {
  BinReader r(path);
  r.expect_magic("NLOSLR01");
  const std::uint32_t count = r.u32();
  const std::uint32_t dim = r.u32();
  LatentRegistry registry;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string id = r.bytes(r.u32());
    registry[std::move(id)] = r.f32_array(dim);
  }
  return registry;
}

void check_model_pair(const nn::VaeModel& vae, const nn::CompressorModel& compressor) {
  require(vae.latent() == compressor.latent(),
          "model pair: latent dimension mismatch (vae " + std::to_string(vae.latent()) +
              ", compressor " + std::to_string(compressor.latent()) + ")");
}

ReconstructResult reconstruct(const nn::VaeModel& vae,
                              const nn::CompressorModel& compressor,
                              const StackedInput& input) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> z = compressor.compress(tensor_from_input(input));
  const nn::Tensor out = vae.decode(z);
  ReconstructResult result;
  result.map = target_from_tensor(out, vae.depth_scale());
  result.millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

}  // namespace nlos
