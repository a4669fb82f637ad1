#include "plcalib/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "plcalib/errors.hpp"

namespace plcalib {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ParseError("config line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& v, int line) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + v + "'");
  }
  if (used != v.size()) fail(line, "trailing characters after number in '" + v + "'");
  return out;
}

long long to_int(const std::string& v, int line) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    fail(line, "expected an integer, got '" + v + "'");
  }
  if (used != v.size()) fail(line, "trailing characters after integer in '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(line, "expected true/false, got '" + v + "'");
}

std::vector<double> to_double_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(line, "empty entry in list '" + v + "'");
    out.push_back(to_double(item, line));
  }
  if (out.empty()) fail(line, "expected a comma-separated list, got '" + v + "'");
  return out;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x + 0.0);  // + 0.0 folds away -0
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += fmt_double(xs[i]);
  }
  return out;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::kPl: return "pl";
    case Method::kZhang: return "zhang";
    case Method::kBoth: return "both";
  }
  return "both";
}

Method parse_method(const std::string& name) {
  if (name == "pl") return Method::kPl;
  if (name == "zhang") return Method::kZhang;
  if (name == "both") return Method::kBoth;
  throw ParseError("unknown method '" + name + "' (expected pl, zhang, or both)");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;

  // One setter per key keeps the key list, the struct, and the dump in sync.
  const std::map<std::string, std::function<void(const std::string&, int)>> setters = {
      {"focal", [&](const std::string& v, int l) { c.focal = to_double(v, l); }},
      {"pp_u", [&](const std::string& v, int l) { c.pp_u = to_double(v, l); }},
      {"pp_v", [&](const std::string& v, int l) { c.pp_v = to_double(v, l); }},
      {"image_width", [&](const std::string& v, int l) { c.image_width = static_cast<int>(to_int(v, l)); }},
      {"image_height", [&](const std::string& v, int l) { c.image_height = static_cast<int>(to_int(v, l)); }},
      {"k1", [&](const std::string& v, int l) { c.k1 = to_double(v, l); }},
      {"k2", [&](const std::string& v, int l) { c.k2 = to_double(v, l); }},
      {"board_rows", [&](const std::string& v, int l) { c.board_rows = static_cast<int>(to_int(v, l)); }},
      {"board_cols", [&](const std::string& v, int l) { c.board_cols = static_cast<int>(to_int(v, l)); }},
      {"square_size", [&](const std::string& v, int l) { c.square_size = to_double(v, l); }},
      {"depth", [&](const std::string& v, int l) { c.depth = to_double(v, l); }},
      {"dihedral_deg", [&](const std::string& v, int l) { c.dihedral_deg = to_double(v, l); }},
      {"rotation_center_x", [&](const std::string& v, int l) { c.rotation_center_x = to_double(v, l); }},
      {"rotation_center_y", [&](const std::string& v, int l) { c.rotation_center_y = to_double(v, l); }},
      {"tx", [&](const std::string& v, int l) { c.tx = to_double(v, l); }},
      {"ty", [&](const std::string& v, int l) { c.ty = to_double(v, l); }},
      {"ring_count", [&](const std::string& v, int l) { c.ring_count = static_cast<int>(to_int(v, l)); }},
      {"alpha_step_deg", [&](const std::string& v, int l) { c.alpha_step_deg = to_double(v, l); }},
      {"sweep_min", [&](const std::string& v, int l) { c.sweep_min = to_double(v, l); }},
      {"sweep_max", [&](const std::string& v, int l) { c.sweep_max = to_double(v, l); }},
      {"sweep_step", [&](const std::string& v, int l) { c.sweep_step = to_double(v, l); }},
      {"skip_max_n", [&](const std::string& v, int l) { c.skip_max_n = static_cast<int>(to_int(v, l)); }},
      {"trials", [&](const std::string& v, int l) { c.trials = static_cast<int>(to_int(v, l)); }},
      {"noise_sigma", [&](const std::string& v, int l) { c.noise_sigma = to_double(v, l); }},
      {"seed", [&](const std::string& v, int l) {
         const long long s = to_int(v, l);
         if (s < 0) fail(l, "seed must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"method", [&](const std::string& v, int l) {
         try {
           c.method = parse_method(v);
         } catch (const ParseError& e) {
           fail(l, e.what());
         }
       }},
      {"outlier_threshold_px", [&](const std::string& v, int l) { c.outlier_threshold_px = to_double(v, l); }},
      {"min_separation_deg", [&](const std::string& v, int l) { c.min_separation_deg = to_double(v, l); }},
      {"max_reject_rounds", [&](const std::string& v, int l) { c.max_reject_rounds = static_cast<int>(to_int(v, l)); }},
      {"zhang_refine", [&](const std::string& v, int l) { c.zhang_refine = to_bool(v, l); }},
      {"pair_alphas", [&](const std::string& v, int l) { c.pair_alphas = to_double_list(v, l); }},
      {"out_dir", [&](const std::string& v, int l) {
         if (v.empty()) fail(l, "out_dir must not be empty");
         c.out_dir = v;
       }},
  };

  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;

    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(line, "missing key before '='");
    if (value.empty()) fail(line, "missing value for key '" + key + "'");

    const auto it = setters.find(key);
    if (it == setters.end()) fail(line, "unknown key '" + key + "'");
    if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");
    it->second(value, line);
  }

  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& c) {
  // Constructing the domain objects runs every module invariant.
  const CameraIntrinsics cam = config_camera(c);
  (void)make_distortion(c.k1, c.k2, working_radius(cam));
  (void)config_board(c);
  (void)realize_pose(config_base_recipe(c));
  if (c.ring_count < 2) throw Error("ring_count must be at least 2");
  if (c.skip_max_n < 0) throw Error("skip_max_n must be nonnegative");
  if (c.skip_max_n > c.ring_count - 3) {
    throw Error("skip_max_n leaves fewer than 3 poses in the ring");
  }
  if (c.trials < 1) throw Error("trials must be at least 1");
  if (c.noise_sigma < 0.0) throw Error("noise_sigma must be nonnegative");
  if (c.sweep_step <= 0.0) throw Error("sweep_step must be positive");
  if (c.sweep_max < c.sweep_min) throw Error("sweep_max must be >= sweep_min");
  if (c.pair_alphas.size() < 2) throw Error("pair_alphas needs at least 2 entries");
  if (c.outlier_threshold_px <= 0.0) throw Error("outlier_threshold_px must be positive");
  if (c.min_separation_deg <= 0.0 || c.min_separation_deg >= 90.0) {
    throw Error("min_separation_deg must lie in (0, 90)");
  }
  if (c.max_reject_rounds < 0) throw Error("max_reject_rounds must be nonnegative");
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("alpha_step_deg", fmt_double(c.alpha_step_deg));
  e.emplace_back("board_cols", std::to_string(c.board_cols));
  e.emplace_back("board_rows", std::to_string(c.board_rows));
  e.emplace_back("depth", fmt_double(c.depth));
  e.emplace_back("dihedral_deg", fmt_double(c.dihedral_deg));
  e.emplace_back("focal", fmt_double(c.focal));
  e.emplace_back("image_height", std::to_string(c.image_height));
  e.emplace_back("image_width", std::to_string(c.image_width));
  e.emplace_back("k1", fmt_double(c.k1));
  e.emplace_back("k2", fmt_double(c.k2));
  e.emplace_back("max_reject_rounds", std::to_string(c.max_reject_rounds));
  e.emplace_back("method", method_name(c.method));
  e.emplace_back("min_separation_deg", fmt_double(c.min_separation_deg));
  e.emplace_back("noise_sigma", fmt_double(c.noise_sigma));
  e.emplace_back("out_dir", c.out_dir);
  e.emplace_back("outlier_threshold_px", fmt_double(c.outlier_threshold_px));
  e.emplace_back("pair_alphas", fmt_list(c.pair_alphas));
  e.emplace_back("pp_u", fmt_double(c.pp_u));
  e.emplace_back("pp_v", fmt_double(c.pp_v));
  e.emplace_back("ring_count", std::to_string(c.ring_count));
  e.emplace_back("rotation_center_x", fmt_double(c.rotation_center_x));
  e.emplace_back("rotation_center_y", fmt_double(c.rotation_center_y));
  e.emplace_back("seed", std::to_string(c.seed));
  e.emplace_back("skip_max_n", std::to_string(c.skip_max_n));
  e.emplace_back("square_size", fmt_double(c.square_size));
  e.emplace_back("sweep_max", fmt_double(c.sweep_max));
  e.emplace_back("sweep_min", fmt_double(c.sweep_min));
  e.emplace_back("sweep_step", fmt_double(c.sweep_step));
  e.emplace_back("trials", std::to_string(c.trials));
  e.emplace_back("tx", fmt_double(c.tx));
  e.emplace_back("ty", fmt_double(c.ty));
  e.emplace_back("zhang_refine", c.zhang_refine ? "true" : "false");
  return e;  // already alphabetical by construction
}

CameraIntrinsics config_camera(const ExperimentConfig& c) {
  return make_intrinsics(c.focal, c.pp_u, c.pp_v, c.image_width, c.image_height);
}

RadialDistortion config_distortion(const ExperimentConfig& c) {
  return make_distortion(c.k1, c.k2, working_radius(config_camera(c)));
}

Checkerboard config_board(const ExperimentConfig& c) {
  return make_checkerboard(c.board_rows, c.board_cols, c.square_size);
}

PoseRecipe config_base_recipe(const ExperimentConfig& c) {
  PoseRecipe recipe;
  recipe.dihedral_deg = c.dihedral_deg;
  recipe.alpha_deg = 0.0;
  recipe.rotation_center = Eigen::Vector2d(c.rotation_center_x, c.rotation_center_y);
  recipe.translation = Eigen::Vector2d(c.tx, c.ty);
  recipe.depth = c.depth;
  recipe.pose_id = "t" + fmt_double(c.tx) + "_" + fmt_double(c.ty);
  return recipe;
}

}  // namespace plcalib
