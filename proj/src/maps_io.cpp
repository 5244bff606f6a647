#include "nlos/maps_io.hpp"

#include <algorithm>
#include <fstream>

#include "nlos/binio.hpp"
#include "nlos/errors.hpp"

namespace nlos {

void save_detection_maps(const std::string& path, const DetectionMaps& maps) {
  BinWriter w(path);
  w.magic("NLOSDM01");
  w.u32(static_cast<std::uint32_t>(maps.width));
  w.u32(static_cast<std::uint32_t>(maps.height));
  w.f32_array(maps.depth);
  w.f32_array(maps.intensity);
  w.u8_array(maps.artifact);
  w.close();
}

DetectionMaps load_detection_maps(const std::string& path) {
  BinReader r(path);
  r.expect_magic("NLOSDM01");
  DetectionMaps maps;
  maps.width = static_cast<int>(r.u32());
  maps.height = static_cast<int>(r.u32());
  require(maps.width >= 1 && maps.height >= 1, path + ": bad dimensions");
  const std::size_t n = static_cast<std::size_t>(maps.width) * maps.height;
  maps.depth = r.f32_array(n);
  maps.intensity = r.f32_array(n);
  maps.artifact = r.u8_array(n);
  return maps;
}

void save_depth_map(const std::string& path, const NlosDepthMap& map) {
  BinWriter w(path);
  w.magic("NLOSDT01");
  w.u32(static_cast<std::uint32_t>(map.width));
  w.u32(static_cast<std::uint32_t>(map.height));
  w.f32_array(map.depth);
  w.close();
}

NlosDepthMap load_depth_map(const std::string& path) {
  BinReader r(path);
  r.expect_magic("NLOSDT01");
  NlosDepthMap map;
  map.width = static_cast<int>(r.u32());
  map.height = static_cast<int>(r.u32());
  require(map.width >= 1 && map.height >= 1, path + ": bad dimensions");
  map.depth = r.f32_array(static_cast<std::size_t>(map.width) * map.height);
  return map;
}

void save_pgm16(const std::string& path, int width, int height,
                const std::vector<double>& values) {
  require(values.size() == static_cast<std::size_t>(width) * height,
          "save_pgm16: size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("cannot open for writing: " + path);
  out << "P5\n" << width << " " << height << "\n65535\n";
  const double peak = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  for (double v : values) {
    const double t = peak > 0.0 ? std::clamp(v / peak, 0.0, 1.0) : 0.0;
    const auto s = static_cast<std::uint16_t>(t * 65535.0 + 0.5);
    // PGM 16-bit samples are most-significant byte first.
    const char bytes[2] = {static_cast<char>(s >> 8), static_cast<char>(s & 0xff)};
    out.write(bytes, 2);
  }
  if (!out) throw ContractError("write failed: " + path);
}

}  // namespace nlos
