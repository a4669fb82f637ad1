#include "plcalib/corner_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include "plcalib/errors.hpp"

namespace plcalib {

namespace {

constexpr const char* kHeader = "pose_id,corner_row,corner_col,board_x,board_y,u,v";

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::string fmt_exact(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x + 0.0);
  return buf;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ParseError("corner file line " + std::to_string(line) + ": " + what);
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

struct CornerRecord {
  int row = 0;
  int col = 0;
  Eigen::Vector2d board = Eigen::Vector2d::Zero();
  Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
};

}  // namespace

std::string render_corner_csv(const std::vector<ObservationSet>& sets,
                              const Checkerboard& board) {
  std::string out(kHeader);
  out += "\n";
  for (const auto& set : sets) {
    const std::size_t expected =
        static_cast<std::size_t>(board.inner_rows) * static_cast<std::size_t>(board.inner_cols);
    if (set.correspondences.size() != expected) {
      throw Error("observation set '" + set.pose_id +
                  "' does not hold a full corner grid, cannot infer corner ids");
    }
    for (std::size_t i = 0; i < set.correspondences.size(); ++i) {
      const auto& c = set.correspondences[i];
      const int row = static_cast<int>(i) / board.inner_cols;
      const int col = static_cast<int>(i) % board.inner_cols;
      out += set.pose_id;
      out += "," + std::to_string(row) + "," + std::to_string(col);
      out += "," + fmt_exact(c.board.x()) + "," + fmt_exact(c.board.y());
      out += "," + fmt_exact(c.pixel.x()) + "," + fmt_exact(c.pixel.y());
      out += "\n";
    }
  }
  return out;
}

void write_corner_file(const std::string& path, const std::vector<ObservationSet>& sets,
                       const Checkerboard& board) {
  const std::string text = render_corner_csv(sets, board);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<ObservationSet> parse_corner_csv(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;

  if (!std::getline(in, raw)) throw ParseError("corner file line 1: empty file");
  ++line;
  if (trim(raw) != kHeader) {
    fail(line, std::string("expected header '") + kHeader + "'");
  }

  // pose order and per-pose corner order both follow the file
  std::vector<std::string> pose_order;
  std::map<std::string, std::vector<CornerRecord>> by_pose;

  while (std::getline(in, raw)) {
    ++line;
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;

    std::vector<std::string> fields;
    std::stringstream ss(stripped);
    std::string item;
    while (std::getline(ss, item, ',')) fields.push_back(trim(item));
    if (fields.size() != 7) {
      fail(line, "expected 7 comma-separated fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) fail(line, "empty pose_id");

    CornerRecord rec;
    rec.row = static_cast<int>(to_int(fields[1], line));
    rec.col = static_cast<int>(to_int(fields[2], line));
    rec.board = {to_double(fields[3], line), to_double(fields[4], line)};
    rec.pixel = {to_double(fields[5], line), to_double(fields[6], line)};
    if (rec.row < 0 || rec.col < 0) fail(line, "corner indices must be nonnegative");

    auto& bucket = by_pose[fields[0]];
    if (bucket.empty()) pose_order.push_back(fields[0]);
    for (const auto& existing : bucket) {
      if (existing.row == rec.row && existing.col == rec.col) {
        fail(line, "duplicate corner (" + std::to_string(rec.row) + "," +
                       std::to_string(rec.col) + ") in pose '" + fields[0] + "'");
      }
    }
    bucket.push_back(rec);
  }

  if (pose_order.empty()) throw ParseError("corner file has no corner rows");

  for (const auto& id : pose_order) {
    if (by_pose[id].size() < 4) {
      throw ParseError("pose '" + id + "' has only " + std::to_string(by_pose[id].size()) +
                       " corners; at least 4 are required");
    }
  }

  // Every pose must agree on the corner grid and where it sits on the board.
  std::map<std::pair<int, int>, Eigen::Vector2d> reference;
  for (const auto& rec : by_pose[pose_order.front()]) {
    reference[{rec.row, rec.col}] = rec.board;
  }
  for (const auto& id : pose_order) {
    const auto& bucket = by_pose[id];
    if (bucket.size() != reference.size()) {
      throw InconsistentBoard("pose '" + id + "' has " + std::to_string(bucket.size()) +
                              " corners but pose '" + pose_order.front() + "' has " +
                              std::to_string(reference.size()));
    }
    for (const auto& rec : bucket) {
      const auto it = reference.find({rec.row, rec.col});
      if (it == reference.end()) {
        throw InconsistentBoard("pose '" + id + "' contains corner (" +
                                std::to_string(rec.row) + "," + std::to_string(rec.col) +
                                ") that pose '" + pose_order.front() + "' lacks");
      }
      if (it->second.x() != rec.board.x() || it->second.y() != rec.board.y()) {
        throw InconsistentBoard("corner (" + std::to_string(rec.row) + "," +
                                std::to_string(rec.col) + ") of pose '" + id +
                                "' sits at a different board position than in pose '" +
                                pose_order.front() + "'");
      }
    }
  }

  std::vector<ObservationSet> sets;
  sets.reserve(pose_order.size());
  for (const auto& id : pose_order) {
    auto& bucket = by_pose[id];
    std::sort(bucket.begin(), bucket.end(), [](const CornerRecord& a, const CornerRecord& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    ObservationSet set;
    set.pose_id = id;
    set.noise_sigma = std::numeric_limits<double>::quiet_NaN();
    set.seed = 0;
    set.correspondences.reserve(bucket.size());
    for (const auto& rec : bucket) set.correspondences.push_back({rec.board, rec.pixel});
    sets.push_back(std::move(set));
  }
  return sets;
}

std::vector<ObservationSet> ingest_corner_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read corner file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corner_csv(buf.str());
}

}  // namespace plcalib
