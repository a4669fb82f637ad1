#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "plcalib/camera.hpp"
#include "plcalib/scene.hpp"

namespace plcalib {

enum class Method { kPl, kZhang, kBoth };

std::string method_name(Method m);
Method parse_method(const std::string& name);  // ParseError on anything else

// Flat key = value experiment description. Defaults reproduce the reference
// desk-scale setup; every field maps to exactly one config key of the same
// name (see parse_config for the full list).
struct ExperimentConfig {
  // camera
  double focal = 1600.0;
  double pp_u = 960.0;
  double pp_v = 540.0;
  int image_width = 1920;
  int image_height = 1080;
  double k1 = -0.1;
  double k2 = -0.02;
  // board
  int board_rows = 9;
  int board_cols = 6;
  double square_size = 160.0;
  // base pose
  double depth = 2600.0;
  double dihedral_deg = 45.0;
  double rotation_center_x = 0.0;
  double rotation_center_y = 0.0;
  double tx = 0.0;
  double ty = 0.0;
  // pose ring
  int ring_count = 8;
  double alpha_step_deg = 45.0;
  // translation sweep grid
  double sweep_min = 0.0;
  double sweep_max = 200.0;
  double sweep_step = 25.0;
  // skip protocol
  int skip_max_n = 5;
  int trials = 1;
  // noise and reproducibility
  double noise_sigma = 0.5;
  std::uint64_t seed = 1;
  // method selection
  Method method = Method::kBoth;
  // principal-line estimation knobs
  double outlier_threshold_px = 25.0;
  double min_separation_deg = 1.0;
  int max_reject_rounds = 8;
  // baseline knobs
  bool zhang_refine = true;
  // pair evaluation
  std::vector<double> pair_alphas = {0.0, 45.0, 90.0, 135.0};
  // output
  std::string out_dir = ".";
};

// Parses the flat text format: one `key = value` per line, `#` starts a
// comment, blank lines ignored. Unknown keys, duplicate keys, and malformed
// values are ParseError with the offending line number. The result is
// validated (camera, board, pose ranges) before being returned.
ExperimentConfig parse_config(const std::string& text);

// parse_config on the file's contents; IoError when unreadable.
ExperimentConfig load_config(const std::string& path);

// Throws if the configured camera, distortion, board, or base pose violate
// their own invariants. parse_config calls this; call it again after mutating
// a config by hand.
void validate_config(const ExperimentConfig& config);

// The full key set with the resolved values, sorted by key — embedded into
// reports so every artifact records the experiment that produced it.
std::vector<std::pair<std::string, std::string>> resolved_entries(const ExperimentConfig& c);

// Conveniences shared by the experiment runners.
CameraIntrinsics config_camera(const ExperimentConfig& c);
RadialDistortion config_distortion(const ExperimentConfig& c);
Checkerboard config_board(const ExperimentConfig& c);
// Base recipe at the configured translation; pose_id encodes the translation
// so noise streams stay distinct across grid cells.
PoseRecipe config_base_recipe(const ExperimentConfig& c);

}  // namespace plcalib
