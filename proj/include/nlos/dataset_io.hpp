#pragma once

#include <string>
#include <vector>

#include "nlos/dataset.hpp"

namespace nlos {

// Record files: magic "NLOSRC01", scene id, placement, stacked input
// (float32 planes + norm stats) and target depth plane (float32).
void save_record(const std::string& path, const DatasetRecord& record);
DatasetRecord load_record(const std::string& path);

struct ManifestEntry {
  std::size_t index = 0;
  std::string scene_id;
  std::string path;  // relative to the dataset directory
  std::string digest_hex;
  std::string split;  // "train" | "test"
  Placement placement;
  bool empty_scene = false;
};

struct DatasetManifest {
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
  int target_w = 0;
  int target_h = 0;
  double split_fraction = 0.0;
  std::vector<ManifestEntry> entries;
  std::vector<GenerationFailure> failures;
};

// Writes records/*.nlosrc plus dataset.json into dir and returns the manifest
// file digest. Entries are written in index order.
std::uint64_t write_dataset(const std::string& dir,
                            const std::vector<DatasetRecord>& records,
                            const SplitIndices& split, std::uint64_t seed,
                            const DatasetConfig& cfg, double split_fraction,
                            const std::vector<GenerationFailure>& failures);

DatasetManifest read_manifest(const std::string& dir);

struct LoadedDataset {
  DatasetManifest manifest;
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> test;
};

LoadedDataset load_dataset(const std::string& dir);

}  // namespace nlos
