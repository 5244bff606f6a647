#pragma once

#include <string>
#include <vector>

#include "nlos/remapper.hpp"

namespace nlos {

struct RmseResult {
  double mm = 0.0;
  std::size_t mask_pixels = 0;  // 0 flags an empty ground-truth mask
};

// Root mean square depth error over the foreground of the ground truth
// (gt > 0), reported in millimeters. Empty mask -> 0 mm with mask_pixels 0.
RmseResult rmse_depth(const NlosDepthMap& pred, const NlosDepthMap& gt);

// 100 * (1 - rmse / depth_range), clamped to [0, 100]. The metric definition
// is local to this project; reports label it accordingly.
double depth_accuracy(const NlosDepthMap& pred, const NlosDepthMap& gt,
                      double depth_range_mm);

// True (flagged as false positive) iff the fraction of pixels with
// pred > depth_floor strictly exceeds area_threshold.
bool false_positive_check(const NlosDepthMap& pred, double area_threshold,
                          double depth_floor_mm);

struct EvalThresholds {
  double depth_range_mm = 500.0;
  double fp_area_threshold = 0.02;
  double fp_depth_floor_mm = 10.0;
};

struct RecordEval {
  std::string scene_id;
  bool ok = false;
  std::string error;
  bool gt_empty = false;
  double rmse_mm = 0.0;
  double accuracy_percent = 0.0;
  double foreground_fraction = 0.0;
  bool false_positive = false;
  std::size_t mask_pixels = 0;
  double millis = 0.0;
};

struct EvalReport {
  std::vector<RecordEval> records;
  double aggregate_rmse_mm = 0.0;  // pooled: weighted by masked pixel counts
  double mean_accuracy_percent = 0.0;
  double worst_rmse_mm = 0.0;
  std::string worst_scene_id;
  std::size_t false_positive_count = 0;
  std::size_t failure_count = 0;
  double mean_millis = 0.0;
};

EvalReport evaluate(const std::vector<DatasetRecord>& test_records,
                    const nn::VaeModel& vae, const nn::CompressorModel& compressor,
                    const EvalThresholds& thresholds, int threads = 0);

// report.csv (one row per record) and summary.json, both versioned.
void write_report(const std::string& dir, const EvalReport& report,
                  const EvalThresholds& thresholds);

}  // namespace nlos
