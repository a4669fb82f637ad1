import numpy as np
import pytest

import plcalib


def clean_config(**overrides):
    cfg = plcalib.ExperimentConfig()
    cfg.noise_sigma = 0.0
    for key, value in overrides.items():
        setattr(cfg, key, value)
    return cfg


def test_config_parse_and_defaults():
    cfg = plcalib.parse_config("tx = 50\nnoise_sigma = 0  # quiet\n")
    assert cfg.tx == 50.0
    assert cfg.noise_sigma == 0.0
    assert cfg.focal == 1600.0  # untouched keys keep their defaults
    assert cfg.method == "both"
    with pytest.raises(plcalib.Error):
        plcalib.parse_config("no_such_key = 1\n")


def test_principal_point_pipeline_without_distortion():
    cfg = clean_config(k1=0.0, k2=0.0)
    ring = plcalib.render_config_ring(cfg, seed=1)
    lines = [
        plcalib.principal_line_from_homography(plcalib.estimate_homography(s))
        for s in ring
    ]
    est = plcalib.principal_point_from_lines(lines)
    assert est.pp == pytest.approx([960.0, 540.0], abs=1e-6)
    assert len(est.lines_used) == len(ring)


def test_calibrate_zhang_recovers_camera():
    ring = plcalib.render_config_ring(clean_config(), seed=1)
    result = plcalib.calibrate_zhang(ring)
    assert result.intrinsics.f == pytest.approx(1600.0, abs=1e-3)
    assert result.intrinsics.u0 == pytest.approx(960.0, abs=1e-3)
    assert result.intrinsics.v0 == pytest.approx(540.0, abs=1e-3)
    assert result.distortion.k1 == pytest.approx(-0.1, abs=1e-6)
    assert result.rms_reprojection < 1e-6


def test_skip_experiment_report():
    cfg = plcalib.ExperimentConfig()  # noisy defaults
    cfg.tx = 50.0
    report = plcalib.run_skip_experiment(cfg)
    kinds = {row.kind for row in report.rows}
    assert kinds == {"pp", "centroid", "summary", "ratio"}
    ratio = [row for row in report.rows if row.kind == "ratio"]
    assert len(ratio) == 1 and ratio[0].status == "ok"
    csv = plcalib.render_report_csv(report)
    assert csv.startswith("# ")
    assert "experiment,kind,method,seed" in csv
    svg = plcalib.render_svg(report, "skip")
    assert svg.startswith("<svg") and svg == plcalib.render_svg(report, "skip")


def test_corner_file_roundtrip(tmp_path):
    cfg = plcalib.ExperimentConfig()
    ring = plcalib.render_config_ring(cfg, seed=3)
    board = plcalib.Checkerboard(cfg.board_rows, cfg.board_cols, cfg.square_size)
    path = str(tmp_path / "corners.csv")
    plcalib.write_corner_file(path, ring, board)
    back = plcalib.ingest_corner_file(path)
    assert [s.pose_id for s in back] == [s.pose_id for s in ring]
    for a, b in zip(ring, back):
        assert np.array_equal(a.pixels, b.pixels)
        assert np.array_equal(a.board_points, b.board_points)


def test_observation_set_from_arrays():
    ring = plcalib.render_config_ring(clean_config(), seed=1)
    rebuilt = [
        plcalib.ObservationSet(s.pose_id, s.board_points, s.pixels) for s in ring
    ]
    h_orig = plcalib.estimate_homography(ring[0])
    h_back = plcalib.estimate_homography(rebuilt[0])
    assert np.allclose(h_orig, h_back)
    report = plcalib.run_calibration(clean_config(), rebuilt)
    pl_rows = [r for r in report.rows if r.method == "pl"]
    assert pl_rows and pl_rows[0].status == "ok"


def test_bad_plot_kind_raises():
    report = plcalib.run_pair_evaluation(clean_config())
    with pytest.raises(ValueError):
        plcalib.render_svg(report, "histogram")
