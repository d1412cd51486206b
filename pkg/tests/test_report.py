import json
import math

import pytest

from wavemark.attacks import AttackKind, AttackSpec, default_attack_matrix
from wavemark.embedder import EmbedParams
from wavemark.errors import AttackEvaluationError, WavemarkError
from wavemark.fixtures import primary_logo, pseudo_lena, secondary_logo
from wavemark.report import (
    CSV_HEADER,
    Band,
    EvaluationReport,
    ReportRow,
    build_report,
    check_band_pattern,
)


@pytest.fixture
def report(cover, primary, secondary, params):
    matrix = [AttackSpec(AttackKind.IDENTITY), *default_attack_matrix(seed=7)]
    return build_report(cover, primary, secondary, params, matrix)


def make_row(attack, sr_ll, sr_hh, psnr_db=30.0):
    return ReportRow(attack=attack, params="", seed=None, psnr_db=psnr_db, sr_ll=sr_ll, sr_hh=sr_hh, sr_secondary=1.0)


def test_rows_follow_matrix_order(report):
    assert [row.attack for row in report.rows] == ["identity"] + [spec.name for spec in default_attack_matrix()]


def test_identity_row_matches_embedding_fidelity(report):
    identity = report.rows[0]
    assert identity.psnr_db == pytest.approx(report.fidelity.psnr2)
    assert identity.sr_ll == 1.0
    assert identity.sr_hh == 1.0
    assert identity.sr_secondary == 1.0


def test_fidelity_block(report):
    fidelity = report.fidelity
    assert fidelity.capacity_bits == 512
    assert fidelity.psnr2 > 40.0
    assert fidelity.mse2 == pytest.approx(fidelity.predicted_mse2, rel=1e-9)
    assert fidelity.psnr1 < math.inf


def test_parallel_matches_sequential(cover, primary, secondary, params):
    matrix = default_attack_matrix(seed=3)
    sequential = build_report(cover, primary, secondary, params, matrix)
    parallel = build_report(cover, primary, secondary, params, matrix, parallel=True, max_workers=4)
    assert parallel.to_dict() == sequential.to_dict()


def test_same_seed_gives_same_report(cover, primary, secondary, params):
    first = build_report(cover, primary, secondary, params, default_attack_matrix(seed=1))
    second = build_report(cover, primary, secondary, params, default_attack_matrix(seed=1))
    assert first.to_csv() == second.to_csv()


def test_csv_layout(report):
    lines = report.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1 + len(report.rows)
    assert lines[2].startswith("intensity_adjust,gamma=1.5,")


def test_literal_divisor_columns(cover, primary, secondary, params):
    report = build_report(
        cover, primary, secondary, params, [AttackSpec(AttackKind.IDENTITY)], paper_literal_alphas=True
    )
    header = report.to_csv().splitlines()[0]
    assert header.endswith("sr_ll_paperalpha,sr_hh_paperalpha")
    assert report.rows[0].sr_ll_paperalpha is not None


def test_json_round_trip(report):
    restored = EvaluationReport.from_dict(json.loads(report.to_json()))
    assert restored.to_dict() == report.to_dict()
    assert restored.config["sr_mode"] == "binary"


def test_infinite_psnr_is_written_as_inf(report):
    rows = [make_row("identity", 1.0, 1.0, psnr_db=math.inf)]
    inf_report = EvaluationReport(rows=rows, fidelity=report.fidelity, config={})
    assert json.loads(inf_report.to_json())["rows"][0]["psnr_db"] == "inf"
    assert inf_report.to_csv().splitlines()[1].split(",")[2] == "inf"
    assert math.isinf(EvaluationReport.from_dict(inf_report.to_dict()).rows[0].psnr_db)


def test_unknown_schema_rejected(report):
    data = {**report.to_dict(), "schema": "something-else/9"}
    with pytest.raises(WavemarkError):
        EvaluationReport.from_dict(data)


def test_markdown_tables(report):
    text = report.to_markdown()
    assert "| PSNR1 | MSE1 | PSNR2 | MSE2 | Capacity (bits) |" in text
    assert "| JPEG Compression |" in text
    assert "| Histogram Equalization |" in text


def test_best_band_ties_go_to_ll():
    assert make_row("jpeg", 0.8, 0.8).best_band is Band.LL
    assert make_row("jpeg", 0.6, 0.8).best_band is Band.HH
    assert make_row("jpeg", 0.6, 0.8).best_sr == 0.8


def test_band_pattern_deviations(report, caplog):
    rows = [make_row("hist_eq", 0.9, 0.7), make_row("jpeg", 0.9, 0.7), make_row("identity", 0.1, 0.9)]
    deviations = check_band_pattern(EvaluationReport(rows=rows, fidelity=report.fidelity, config={}))
    assert len(deviations) == 1
    assert deviations[0].startswith("hist_eq")
    assert "published result favours HH" in caplog.text


def test_failed_attack_is_wrapped(cover, primary, secondary, params):
    matrix = [AttackSpec(AttackKind.JPEG, {"quality": 0})]
    with pytest.raises(AttackEvaluationError, match="jpeg"):
        build_report(cover, primary, secondary, params, matrix)


@pytest.mark.slow
def test_full_size_robustness():
    """On the 512x512 cover every attack leaves at least one band readable."""
    report = build_report(
        pseudo_lena(), primary_logo(), secondary_logo(), EmbedParams(alpha_nest=0.5), default_attack_matrix(seed=0)
    )
    assert report.fidelity.psnr2 > 40.0
    assert report.fidelity.capacity_bits == 8192
    for row in report.rows:
        assert row.best_sr >= 0.6, f"{row.attack}: SR LL {row.sr_ll:.3f}, HH {row.sr_hh:.3f}"


def test_empty_matrix_has_fidelity_only(cover, primary, secondary, params):
    report = build_report(cover, primary, secondary, params, [], parallel=True)
    assert report.rows == []
    assert report.fidelity.capacity_bits == 512
    assert report.to_csv() == ",".join(CSV_HEADER) + "\n"


def test_sr_values_are_ratios(report):
    for row in report.rows:
        assert 0.0 <= row.sr_ll <= 1.0
        assert 0.0 <= row.sr_hh <= 1.0
        assert math.isfinite(row.psnr_db) or row.attack == "identity"
