#include "nlos/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "nlos/errors.hpp"
#include "nlos/parallel.hpp"

namespace nlos {

RmseResult rmse_depth(const NlosDepthMap& pred, const NlosDepthMap& gt) {
  require(pred.width == gt.width && pred.height == gt.height,
          "rmse_depth: shape mismatch");
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < gt.depth.size(); ++i) {
    if (gt.depth[i] > 0.0) {
      const double d = pred.depth[i] - gt.depth[i];
      acc += d * d;
      ++count;
    }
  }
  if (count == 0) return {0.0, 0};
  return {std::sqrt(acc / static_cast<double>(count)) * 1000.0, count};
}

double depth_accuracy(const NlosDepthMap& pred, const NlosDepthMap& gt,
                      double depth_range_mm) {
  require(depth_range_mm > 0.0, "depth_accuracy: depth_range must be > 0");
  const RmseResult r = rmse_depth(pred, gt);
  return std::clamp(100.0 * (1.0 - r.mm / depth_range_mm), 0.0, 100.0);
}

bool false_positive_check(const NlosDepthMap& pred, double area_threshold,
                          double depth_floor_mm) {
  require(area_threshold > 0.0 && depth_floor_mm > 0.0,
          "false_positive_check: thresholds must be positive");
  const double floor_m = depth_floor_mm / 1000.0;
  std::size_t above = 0;
  for (double v : pred.depth) above += v > floor_m;
  const double fraction = static_cast<double>(above) / static_cast<double>(pred.depth.size());
  return fraction > area_threshold;
}

EvalReport evaluate(const std::vector<DatasetRecord>& test_records,
                    const nn::VaeModel& vae, const nn::CompressorModel& compressor,
                    const EvalThresholds& thresholds, int threads) {
  require(!test_records.empty(), "evaluate: empty test set");
  check_model_pair(vae, compressor);

  EvalReport report;
  report.records.resize(test_records.size());
  parallel_for(test_records.size(), threads, [&](std::size_t i) {
    const DatasetRecord& record = test_records[i];
    RecordEval& eval = report.records[i];
    eval.scene_id = record.scene_id;
    try {
      const ReconstructResult result = reconstruct(vae, compressor, record.input);
      eval.millis = result.millis;
      const RmseResult rmse = rmse_depth(result.map, record.target);
      eval.rmse_mm = rmse.mm;
      eval.mask_pixels = rmse.mask_pixels;
      eval.gt_empty = rmse.mask_pixels == 0;
      eval.accuracy_percent =
          depth_accuracy(result.map, record.target, thresholds.depth_range_mm);
      const double floor_m = thresholds.fp_depth_floor_mm / 1000.0;
      std::size_t above = 0;
      for (double v : result.map.depth) above += v > floor_m;
      eval.foreground_fraction =
          static_cast<double>(above) / static_cast<double>(result.map.depth.size());
      eval.false_positive =
          eval.gt_empty && false_positive_check(result.map, thresholds.fp_area_threshold,
                                                thresholds.fp_depth_floor_mm);
      eval.ok = true;
    } catch (const std::exception& e) {
      eval.error = e.what();
    }
  });

  double sq_sum = 0.0;
  std::size_t pixel_sum = 0;
  double acc_sum = 0.0;
  std::size_t acc_count = 0;
  double ms_sum = 0.0;
  for (const RecordEval& eval : report.records) {
    if (!eval.ok) {
      ++report.failure_count;
      continue;
    }
    ms_sum += eval.millis;
    if (eval.false_positive) ++report.false_positive_count;
    if (eval.mask_pixels > 0) {
      sq_sum += (eval.rmse_mm * eval.rmse_mm) * static_cast<double>(eval.mask_pixels);
      pixel_sum += eval.mask_pixels;
      acc_sum += eval.accuracy_percent;
      ++acc_count;
      if (eval.rmse_mm > report.worst_rmse_mm) {
        report.worst_rmse_mm = eval.rmse_mm;
        report.worst_scene_id = eval.scene_id;
      }
    }
  }
  const std::size_t ok_count = report.records.size() - report.failure_count;
  report.aggregate_rmse_mm =
      pixel_sum > 0 ? std::sqrt(sq_sum / static_cast<double>(pixel_sum)) : 0.0;
  report.mean_accuracy_percent = acc_count > 0 ? acc_sum / static_cast<double>(acc_count) : 0.0;
  report.mean_millis = ok_count > 0 ? ms_sum / static_cast<double>(ok_count) : 0.0;
  return report;
}

void write_report(const std::string& dir, const EvalReport& report,
                  const EvalThresholds& thresholds) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  const std::string csv_path = (fs::path(dir) / "report.csv").string();
  std::ofstream csv(csv_path);
  if (!csv) throw ContractError("cannot open for writing: " + csv_path);
  csv << "schema=nlos-report-v1\n";
  csv << "scene_id,ok,gt_empty,rmse_mm,accuracy_percent,foreground_fraction,"
         "false_positive,mask_pixels,millis,error\n";
  char line[256];
  for (const RecordEval& e : report.records) {
    std::snprintf(line, sizeof(line), "%s,%d,%d,%.6g,%.6g,%.6g,%d,%zu,%.4g,%s\n",
                  e.scene_id.c_str(), e.ok ? 1 : 0, e.gt_empty ? 1 : 0, e.rmse_mm,
                  e.accuracy_percent, e.foreground_fraction, e.false_positive ? 1 : 0,
                  e.mask_pixels, e.millis, e.error.c_str());
    csv << line;
  }

  nlohmann::json j;
  j["schema"] = "nlos-report-v1";
  j["accuracy_definition"] =
      "100*(1 - rmse/depth_range), local definition, clamped to [0,100]";
  j["thresholds"] = {{"depth_range_mm", thresholds.depth_range_mm},
                     {"fp_area_threshold", thresholds.fp_area_threshold},
                     {"fp_depth_floor_mm", thresholds.fp_depth_floor_mm}};
  j["records"] = report.records.size();
  j["failures"] = report.failure_count;
  j["aggregate_rmse_mm"] = report.aggregate_rmse_mm;
  j["mean_accuracy_percent"] = report.mean_accuracy_percent;
  j["worst_rmse_mm"] = report.worst_rmse_mm;
  j["worst_scene_id"] = report.worst_scene_id;
  j["false_positives"] = report.false_positive_count;
  j["mean_millis"] = report.mean_millis;

  const std::string json_path = (fs::path(dir) / "summary.json").string();
  std::ofstream out(json_path);
  if (!out) throw ContractError("cannot open for writing: " + json_path);
  out << j.dump(1) << "\n";
}

}  // namespace nlos
