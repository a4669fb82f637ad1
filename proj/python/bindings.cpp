// _plcalib: python bindings for the calibration toolkit. The surface mirrors
// what the CLI exposes — config, experiment runners, report/SVG rendering,
// corner-file exchange — plus the core estimation entry points so external
// observations can be pushed through the pipeline from python.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>

#include "plcalib/camera.hpp"
#include "plcalib/config.hpp"
#include "plcalib/corner_io.hpp"
#include "plcalib/errors.hpp"
#include "plcalib/experiments.hpp"
#include "plcalib/homography.hpp"
#include "plcalib/image_line.hpp"
#include "plcalib/principal_line.hpp"
#include "plcalib/scene.hpp"
#include "plcalib/svg.hpp"
#include "plcalib/zhang.hpp"

namespace py = pybind11;
using namespace plcalib;

namespace {

PlotKind plot_kind_from_name(const std::string& name) {
  if (name == "skip") return PlotKind::kSkipScatter;
  if (name == "sweep") return PlotKind::kSweepCurves;
  if (name == "pairs") return PlotKind::kPairsScatter;
  throw std::invalid_argument("plot kind must be 'skip', 'sweep', or 'pairs'");
}

ObservationSet observation_set_from_arrays(const std::string& pose_id,
                                           const Eigen::MatrixX2d& board_points,
                                           const Eigen::MatrixX2d& pixels) {
  if (board_points.rows() != pixels.rows())
    throw std::invalid_argument("board_points and pixels must have the same length");
  ObservationSet set;
  set.pose_id = pose_id;
  set.noise_sigma = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index i = 0; i < board_points.rows(); ++i)
    set.correspondences.push_back(
        {board_points.row(i).transpose(), pixels.row(i).transpose()});
  return set;
}

Eigen::MatrixX2d set_board_points(const ObservationSet& set) {
  Eigen::MatrixX2d out(static_cast<Eigen::Index>(set.correspondences.size()), 2);
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    out.row(i) = set.correspondences[static_cast<std::size_t>(i)].board.transpose();
  return out;
}

Eigen::MatrixX2d set_pixels(const ObservationSet& set) {
  Eigen::MatrixX2d out(static_cast<Eigen::Index>(set.correspondences.size()), 2);
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    out.row(i) = set.correspondences[static_cast<std::size_t>(i)].pixel.transpose();
  return out;
}

}  // namespace

PYBIND11_MODULE(_plcalib, m) {
  m.doc() = "principal-line camera calibration toolkit";

  py::register_exception<Error>(m, "Error");

  // --- configuration ---------------------------------------------------
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("focal", &ExperimentConfig::focal)
      .def_readwrite("pp_u", &ExperimentConfig::pp_u)
      .def_readwrite("pp_v", &ExperimentConfig::pp_v)
      .def_readwrite("image_width", &ExperimentConfig::image_width)
      .def_readwrite("image_height", &ExperimentConfig::image_height)
      .def_readwrite("k1", &ExperimentConfig::k1)
      .def_readwrite("k2", &ExperimentConfig::k2)
      .def_readwrite("board_rows", &ExperimentConfig::board_rows)
      .def_readwrite("board_cols", &ExperimentConfig::board_cols)
      .def_readwrite("square_size", &ExperimentConfig::square_size)
      .def_readwrite("depth", &ExperimentConfig::depth)
      .def_readwrite("dihedral_deg", &ExperimentConfig::dihedral_deg)
      .def_readwrite("rotation_center_x", &ExperimentConfig::rotation_center_x)
      .def_readwrite("rotation_center_y", &ExperimentConfig::rotation_center_y)
      .def_readwrite("tx", &ExperimentConfig::tx)
      .def_readwrite("ty", &ExperimentConfig::ty)
      .def_readwrite("ring_count", &ExperimentConfig::ring_count)
      .def_readwrite("alpha_step_deg", &ExperimentConfig::alpha_step_deg)
      .def_readwrite("sweep_min", &ExperimentConfig::sweep_min)
      .def_readwrite("sweep_max", &ExperimentConfig::sweep_max)
      .def_readwrite("sweep_step", &ExperimentConfig::sweep_step)
      .def_readwrite("skip_max_n", &ExperimentConfig::skip_max_n)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("noise_sigma", &ExperimentConfig::noise_sigma)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_property(
          "method", [](const ExperimentConfig& c) { return method_name(c.method); },
          [](ExperimentConfig& c, const std::string& name) { c.method = parse_method(name); })
      .def_readwrite("outlier_threshold_px", &ExperimentConfig::outlier_threshold_px)
      .def_readwrite("min_separation_deg", &ExperimentConfig::min_separation_deg)
      .def_readwrite("max_reject_rounds", &ExperimentConfig::max_reject_rounds)
      .def_readwrite("zhang_refine", &ExperimentConfig::zhang_refine)
      .def_readwrite("pair_alphas", &ExperimentConfig::pair_alphas)
      .def_readwrite("out_dir", &ExperimentConfig::out_dir);

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("validate_config", &validate_config, py::arg("config"));
  m.def("resolved_entries", &resolved_entries, py::arg("config"));

  // --- reports -----------------------------------------------------------
  py::class_<ReportRow>(m, "ReportRow")
      .def_readonly("experiment", &ReportRow::experiment)
      .def_readonly("kind", &ReportRow::kind)
      .def_readonly("method", &ReportRow::method)
      .def_readonly("seed", &ReportRow::seed)
      .def_readonly("n", &ReportRow::n)
      .def_readonly("skip_start", &ReportRow::skip_start)
      .def_readonly("tx", &ReportRow::tx)
      .def_readonly("ty", &ReportRow::ty)
      .def_readonly("alpha_deg", &ReportRow::alpha_deg)
      .def_readonly("pose_id", &ReportRow::pose_id)
      .def_readonly("u", &ReportRow::u)
      .def_readonly("v", &ReportRow::v)
      .def_readonly("rms_px", &ReportRow::rms_px)
      .def_readonly("angle_deg", &ReportRow::angle_deg)
      .def_readonly("offset_px", &ReportRow::offset_px)
      .def_readonly("std_u", &ReportRow::std_u)
      .def_readonly("std_v", &ReportRow::std_v)
      .def_readonly("status", &ReportRow::status);

  py::class_<ExperimentReport>(m, "ExperimentReport")
      .def_readonly("experiment", &ExperimentReport::experiment)
      .def_readonly("config_entries", &ExperimentReport::config_entries)
      .def_readonly("notes", &ExperimentReport::notes)
      .def_readonly("rows", &ExperimentReport::rows);

  m.def("render_report_csv", &render_report_csv, py::arg("report"));
  m.def("write_report_csv", &write_report_csv, py::arg("report"), py::arg("path"));
  m.def(
      "render_svg",
      [](const ExperimentReport& report, const std::string& kind) {
        return render_svg(report, plot_kind_from_name(kind));
      },
      py::arg("report"), py::arg("kind"));
  m.def(
      "write_svg",
      [](const ExperimentReport& report, const std::string& kind, const std::string& path) {
        write_svg(report, plot_kind_from_name(kind), path);
      },
      py::arg("report"), py::arg("kind"), py::arg("path"));

  // --- experiment runners --------------------------------------------------
  m.def("run_translation_sweep", &run_translation_sweep, py::arg("config"));
  m.def("run_skip_experiment",
        py::overload_cast<const ExperimentConfig&>(&run_skip_experiment), py::arg("config"));
  m.def("run_skip_experiment",
        py::overload_cast<const ExperimentConfig&, const std::vector<ObservationSet>&>(
            &run_skip_experiment),
        py::arg("config"), py::arg("ring"));
  m.def("run_pair_evaluation", &run_pair_evaluation, py::arg("config"));
  m.def("run_calibration", py::overload_cast<const ExperimentConfig&>(&run_calibration),
        py::arg("config"));
  m.def("run_calibration",
        py::overload_cast<const ExperimentConfig&, const std::vector<ObservationSet>&>(
            &run_calibration),
        py::arg("config"), py::arg("observations"));

  // --- observations and corner files ----------------------------------------
  py::class_<ObservationSet>(m, "ObservationSet")
      .def(py::init(&observation_set_from_arrays), py::arg("pose_id"),
           py::arg("board_points"), py::arg("pixels"))
      .def_readonly("pose_id", &ObservationSet::pose_id)
      .def_readonly("noise_sigma", &ObservationSet::noise_sigma)
      .def_readonly("seed", &ObservationSet::seed)
      .def_readonly("out_of_frame", &ObservationSet::out_of_frame)
      .def_property_readonly("board_points", &set_board_points)
      .def_property_readonly("pixels", &set_pixels)
      .def("__len__",
           [](const ObservationSet& set) { return set.correspondences.size(); });

  py::class_<Checkerboard>(m, "Checkerboard")
      .def(py::init([](int inner_rows, int inner_cols, double square_size) {
             return make_checkerboard(inner_rows, inner_cols, square_size);
           }),
           py::arg("inner_rows"), py::arg("inner_cols"), py::arg("square_size"))
      .def_readonly("inner_rows", &Checkerboard::inner_rows)
      .def_readonly("inner_cols", &Checkerboard::inner_cols)
      .def_readonly("square_size", &Checkerboard::square_size);

  m.def("render_config_ring", &render_config_ring, py::arg("config"), py::arg("seed"));
  m.def("ingest_corner_file", &ingest_corner_file, py::arg("path"));
  m.def("write_corner_file", &write_corner_file, py::arg("path"), py::arg("sets"),
        py::arg("board"));

  // --- core estimation ----------------------------------------------------
  py::class_<ImageLine>(m, "ImageLine")
      .def(py::init(
               [](double a, double b, double c) { return make_line(a, b, c); }),
           py::arg("a"), py::arg("b"), py::arg("c"))
      .def_readonly("a", &ImageLine::a)
      .def_readonly("b", &ImageLine::b)
      .def_readonly("c", &ImageLine::c);

  py::class_<PrincipalPointEstimate>(m, "PrincipalPointEstimate")
      .def_readonly("pp", &PrincipalPointEstimate::pp)
      .def_readonly("per_line_distance", &PrincipalPointEstimate::per_line_distance)
      .def_readonly("rms_distance", &PrincipalPointEstimate::rms_distance)
      .def_readonly("lines_used", &PrincipalPointEstimate::lines_used);

  m.def("estimate_homography", &estimate_homography, py::arg("observations"));
  m.def("principal_line_from_homography", &principal_line_from_homography,
        py::arg("homography"));
  m.def("principal_point_from_lines", &principal_point_from_lines, py::arg("lines"),
        py::arg("ids") = std::vector<std::string>{}, py::arg("min_separation_deg") = 1.0,
        py::arg("weights") = std::vector<double>{});

  py::class_<CameraIntrinsics>(m, "CameraIntrinsics")
      .def_readonly("f", &CameraIntrinsics::f)
      .def_readonly("u0", &CameraIntrinsics::u0)
      .def_readonly("v0", &CameraIntrinsics::v0)
      .def_readonly("image_width", &CameraIntrinsics::image_width)
      .def_readonly("image_height", &CameraIntrinsics::image_height);

  py::class_<RadialDistortion>(m, "RadialDistortion")
      .def_readonly("k1", &RadialDistortion::k1)
      .def_readonly("k2", &RadialDistortion::k2);

  py::class_<ZhangOptions>(m, "ZhangOptions")
      .def(py::init<>())
      .def_readwrite("refine", &ZhangOptions::refine)
      .def_readwrite("estimate_distortion", &ZhangOptions::estimate_distortion)
      .def_readwrite("max_alternation_rounds", &ZhangOptions::max_alternation_rounds)
      .def_readwrite("rms_tolerance", &ZhangOptions::rms_tolerance)
      .def_readwrite("image_width", &ZhangOptions::image_width)
      .def_readwrite("image_height", &ZhangOptions::image_height);

  py::class_<CalibrationResult>(m, "CalibrationResult")
      .def_readonly("intrinsics", &CalibrationResult::intrinsics)
      .def_readonly("distortion", &CalibrationResult::distortion)
      .def_readonly("rms_reprojection", &CalibrationResult::rms_reprojection)
      .def_readonly("iterations", &CalibrationResult::iterations);

  m.def("calibrate_zhang", &calibrate_zhang, py::arg("observations"),
        py::arg("options") = ZhangOptions{});
}
