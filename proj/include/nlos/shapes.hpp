#pragma once

#include <string>
#include <vector>

#include "nlos/render.hpp"
#include "nlos/scene.hpp"

namespace nlos {

// Desk-scale scanning geometry: a wall tilted 60 degrees about the vertical so
// the right-hand side of the FOV strikes it very obliquely (78-88 degrees),
// which is where three-bounce returns can beat the weak direct return.
SceneConfig make_desk_scene();

// Rasterization window on make_desk_scene()'s wall covering the hidden-object
// placement band.
WallWindow desk_target_window();

enum class PlateShape { Rectangle, Ellipse };

// Flat plate sampled as surfels in the wall's (u, v) plane, facing the wall.
// The centroid sits at wall.point + u_anchor * u + 1m * normal; placement is
// expected to follow via place_object.
NlosObject make_plate(const WallPlane& wall, PlateShape shape, double width,
                      double height, double spacing, double albedo, double u_anchor);

// Fig. 2b-style scene: the plate's center "offset_from_spot" meters away from
// the wall point illuminated by pixel (spot_i, spot_j). The offset is split
// between the wall normal and the in-plane horizontal so proximity to the
// wall is kept while honoring the stated spot distance.
SceneConfig make_artifact_scene(double offset_from_spot, int spot_i = 16, int spot_j = 26);

// Same scene with the plate moved far from the wall (no artifact regime).
SceneConfig make_artifact_scene_far(double distance_to_wall);

struct ToyFamily {
  struct Source {
    std::string id;
    NlosObject cloud;
  };
  struct Placement {
    double altitude = 0.0;
    double yaw_deg = 0.0;
    double distance = 0.08;
  };
  std::vector<Source> sources;        // shape plates, crossed with placements
  std::vector<Placement> placements;
  int sentinel_count = 0;             // extra empty-scene records
};

// Procedural rectangle/ellipse family over the desk scene: shape x size x
// u-anchor sources and an altitude/yaw/distance placement grid (30 x 20), plus
// empty-scene sentinel records.
ToyFamily make_toy_family(int sentinel_count);

}  // namespace nlos
