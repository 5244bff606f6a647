#include "nlos/dataset_io.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "nlos/binio.hpp"
#include "nlos/digest.hpp"
#include "nlos/errors.hpp"

namespace nlos {

namespace fs = std::filesystem;
using nlohmann::json;

void save_record(const std::string& path, const DatasetRecord& record) {
  BinWriter w(path);
  w.magic("NLOSRC01");
  w.u32(static_cast<std::uint32_t>(record.scene_id.size()));
  w.bytes(record.scene_id);
  w.f32(static_cast<float>(record.placement.altitude));
  w.f32(static_cast<float>(record.placement.yaw_deg));
  w.f32(static_cast<float>(record.placement.distance));
  w.u32(record.empty_scene ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(record.input.height));
  w.u32(static_cast<std::uint32_t>(record.input.half_width));
  for (int c = 0; c < 4; ++c) {
    w.f32(static_cast<float>(record.input.norm[c].offset));
    w.f32(static_cast<float>(record.input.norm[c].scale));
    w.f32_array(record.input.channels[c]);
  }
  w.u32(static_cast<std::uint32_t>(record.target.width));
  w.u32(static_cast<std::uint32_t>(record.target.height));
  w.f32_array(record.target.depth);
  w.close();
}

DatasetRecord load_record(const std::string& path) {
  BinReader r(path);
  r.expect_magic("NLOSRC01");
  DatasetRecord record;
  record.scene_id = r.bytes(r.u32());
  record.placement.altitude = r.f32();
  record.placement.yaw_deg = r.f32();
  record.placement.distance = r.f32();
  record.empty_scene = r.u32() != 0;
  record.input.height = static_cast<int>(r.u32());
  record.input.half_width = static_cast<int>(r.u32());
  require(record.input.height >= 1 && record.input.half_width >= 1,
          path + ": bad input dimensions");
  for (int c = 0; c < 4; ++c) {
    record.input.norm[c].offset = r.f32();
    record.input.norm[c].scale = r.f32();
    record.input.channels[c] = r.f32_array(record.input.plane_size());
  }
  record.target.width = static_cast<int>(r.u32());
  record.target.height = static_cast<int>(r.u32());
  require(record.target.width >= 1 && record.target.height >= 1,
          path + ": bad target dimensions");
  record.target.depth =
      r.f32_array(static_cast<std::size_t>(record.target.width) * record.target.height);
  return record;
}

std::uint64_t write_dataset(const std::string& dir,
                            const std::vector<DatasetRecord>& records,
                            const SplitIndices& split, std::uint64_t seed,
                            const DatasetConfig& cfg, double split_fraction,
                            const std::vector<GenerationFailure>& failures) {
  fs::create_directories(fs::path(dir) / "records");
  std::vector<std::string> split_of(records.size(), "train");
  for (std::size_t idx : split.test) {
    require(idx < records.size(), "write_dataset: split index out of range");
    split_of[idx] = "test";
  }

  json j;
  j["schema"] = "nlos-dataset-v1";
  j["seed"] = seed;
  j["noise_sigma"] = cfg.noise_sigma;
  j["target"] = {cfg.target_w, cfg.target_h};
  j["window"] = {cfg.window.center_u, cfg.window.center_v, cfg.window.width,
                 cfg.window.height};
  j["split_fraction"] = split_fraction;
  j["counts"] = {{"total", records.size()},
                 {"train", split.train.size()},
                 {"test", split.test.size()},
                 {"failed", failures.size()}};
  json entries = json::array();
  char name[64];
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::snprintf(name, sizeof(name), "records/%06zu.nlosrc", i);
    const std::string path = (fs::path(dir) / name).string();
    save_record(path, records[i]);
    entries.push_back({{"index", i},
                       {"id", records[i].scene_id},
                       {"path", name},
                       {"digest", to_hex(digest_file(path))},
                       {"split", split_of[i]},
                       {"placement",
                        {records[i].placement.altitude, records[i].placement.yaw_deg,
                         records[i].placement.distance}},
                       {"empty", records[i].empty_scene}});
  }
  j["records"] = std::move(entries);
  json fail = json::array();
  for (const auto& f : failures) {
    fail.push_back({{"index", f.index}, {"id", f.scene_id}, {"error", f.error}});
  }
  j["failures"] = std::move(fail);

  const std::string manifest_path = (fs::path(dir) / "dataset.json").string();
  std::ofstream out(manifest_path);
  if (!out) throw ContractError("cannot open for writing: " + manifest_path);
  out << j.dump(1) << "\n";
  out.close();
  return digest_file(manifest_path);
}

DatasetManifest read_manifest(const std::string& dir) {
  const std::string manifest_path = (fs::path(dir) / "dataset.json").string();
  std::ifstream in(manifest_path);
  if (!in) throw ContractError("cannot open: " + manifest_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ContractError(manifest_path + ": " + e.what());
  }
  if (j.value("schema", "") != "nlos-dataset-v1") {
    throw ContractError(manifest_path + ": unknown schema");
  }
  DatasetManifest m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.noise_sigma = j.at("noise_sigma").get<double>();
  m.target_w = j.at("target").at(0).get<int>();
  m.target_h = j.at("target").at(1).get<int>();
  m.split_fraction = j.value("split_fraction", 0.0);
  for (const auto& e : j.at("records")) {
    ManifestEntry entry;
    entry.index = e.at("index").get<std::size_t>();
    entry.scene_id = e.at("id").get<std::string>();
    entry.path = e.at("path").get<std::string>();
    entry.digest_hex = e.at("digest").get<std::string>();
    entry.split = e.at("split").get<std::string>();
    entry.placement.altitude = e.at("placement").at(0).get<double>();
    entry.placement.yaw_deg = e.at("placement").at(1).get<double>();
    entry.placement.distance = e.at("placement").at(2).get<double>();
    entry.empty_scene = e.value("empty", false);
    m.entries.push_back(std::move(entry));
  }
  if (j.contains("failures")) {
    for (const auto& f : j["failures"]) {
      m.failures.push_back({f.at("index").get<std::size_t>(),
                            f.at("id").get<std::string>(),
                            f.at("error").get<std::string>()});
    }
  }
  return m;
}

LoadedDataset load_dataset(const std::string& dir) {
  LoadedDataset out;
  out.manifest = read_manifest(dir);
  for (const auto& entry : out.manifest.entries) {
    const std::string path = (fs::path(dir) / entry.path).string();
    DatasetRecord record = load_record(path);
    if (entry.split == "test") {
      out.test.push_back(std::move(record));
    } else {
      out.train.push_back(std::move(record));
    }
  }
  return out;
}

}  // namespace nlos
