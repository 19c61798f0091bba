import json

import pytest

from twinsieve._exceptions import DomainError, SieveLimitError
from twinsieve.config import ModelConfig
from twinsieve.experiment import (
    constants_report,
    load_rows_json,
    render_records,
    render_table,
    run_table,
    series_profile,
    sieving_limit_sweep,
    truncation_sweep,
)
from twinsieve.model import correction_exact


EXPECTED_ROWS = [
    # x, z, pi2_true, hl_pred, tw_pred
    (10**4, 10, 205, 214, 161),
    (10**5, 17, 1224, 1249, 1087),
    (10**6, 31, 8169, 8248, 11978),
    (10**7, 56, 58980, 58754, 163740),
]


def test_default_table(default_rows):
    assert [
        (row.x, row.z_used, row.pi2_true, row.hl_prediction, row.this_work_prediction)
        for row in default_rows
    ] == EXPECTED_ROWS


def test_relative_errors(default_rows):
    first = default_rows[0]
    assert first.rel_err_hl == pytest.approx(100 * 9 / 205)
    assert first.rel_err_this_work == pytest.approx(-100 * 44 / 205)
    assert first.csv_record()["hl_rel_err_pct"] == "+4.4"
    assert first.csv_record()["tw_rel_err_pct"] == "-21.5"


def test_only_the_million_row_disagrees_with_published_values(default_rows):
    flagged = {row.x: row.flags for row in default_rows if row.flags}
    assert list(flagged) == [10**6]
    hl_flag, d_flag = flagged[10**6]
    assert hl_flag == "hl_pred 8248 != published 8167"
    assert d_flag.startswith("d_approx 2.28") and d_flag.endswith("quoted 1.91")


def test_small_row():
    (row,) = run_table(ModelConfig(x_values="100"))
    assert (row.z_used, row.pi2_true) == (3, 8)
    assert row.d_approx_value == 1.5
    assert row.flags == []


def test_rows_are_sorted_when_built_concurrently():
    config = ModelConfig(x_values="1e5,1e3,1e4", workers=3)
    assert [row.x for row in run_table(config)] == [10**3, 10**4, 10**5]


def test_table_domain():
    with pytest.raises(DomainError):
        run_table(ModelConfig(x_values="5,100"))


def test_resource_limit_names_the_row():
    with pytest.raises(SieveLimitError) as info:
        run_table(ModelConfig(x_values="1e3,1e5", sieve_cap=10**4))
    assert "while building the row for x=100000" in info.value.__notes__


def test_truncation_sweep_reaches_the_exact_product():
    points = truncation_sweep(10**4, range(4), ModelConfig())
    assert [point.t_max for point in points] == [0, 1, 2, 3]
    assert points[0].d_approx == 2
    assert points[-1].d_approx == points[-1].d_exact == float(correction_exact(10).value)
    assert {point.z for point in points} == {10}


def test_truncation_sweep_at_a_million():
    points = truncation_sweep(10**6, range(11), ModelConfig())
    assert points[4].prediction == 11978
    assert points[10].d_approx == float(correction_exact(31).value)
    assert len({point.d_approx for point in points}) == len(points)


def test_truncation_sweep_domain():
    with pytest.raises(DomainError):
        truncation_sweep(10**4, range(0), ModelConfig())


def test_sieving_limit_sweep():
    points = sieving_limit_sweep(10**6, [0.1, 0.25, 0.5], ModelConfig())
    assert [(point.z, point.odd_primes) for point in points] == [(3, 1), (31, 10), (1000, 167)]
    assert points[1].prediction == 11978
    with pytest.raises(DomainError):
        sieving_limit_sweep(10**6, [0.25, 1.0], ModelConfig())


def test_series_profile():
    profile = series_profile(31, 10)
    assert [term.t for term in profile.terms] == list(range(11))
    assert profile.terms[0].leading_order == 1
    last = profile.terms[-1]
    assert last.numerator_partial == profile.exact_numerator
    assert last.denominator_partial == profile.exact_denominator
    assert profile.exact_value == float(correction_exact(31).value)
    assert series_profile(2, 3).terms[1].leading_order is None


def test_constants_report():
    report = constants_report(10**7)
    assert report["2C2 partial product (p <= 10000000)"] == pytest.approx(
        report["2C2 reference"], abs=1e-7
    )
    assert report["M - 1/2 (odd primes)"] == pytest.approx(-0.2385, abs=1e-4)
    assert report["M - 1/3"] == pytest.approx(-0.0718, abs=1e-4)
    assert report["P_odd(2)"] == pytest.approx(0.2022474200, abs=1e-10)
    assert [key for key in report if key.startswith("P_odd")] == [
        f"P_odd({k})" for k in range(2, 7)
    ]


def test_csv_layout(default_rows, default_config):
    lines = render_table(default_rows, default_config, "csv").splitlines()
    assert lines[0] == "x,z,pi2_true,hl_pred,hl_rel_err_pct,tw_pred,tw_rel_err_pct,d_approx"
    assert lines[1].startswith("10000,10,205,214,+4.4,161,-21.5,1.367")
    assert len(lines) == 5


def test_json_carries_the_config(default_rows, default_config):
    document = json.loads(render_table(default_rows, default_config, "json"))
    assert document["config"] == default_config.snapshot()
    assert [row["x"] for row in document["rows"]] == [10**4, 10**5, 10**6, 10**7]


def test_json_table_re_renders_identically(default_rows, default_config):
    config, rows = load_rows_json(render_table(default_rows, default_config, "json"))
    assert config == default_config
    assert rows == default_rows
    assert render_table(rows, config, "csv") == render_table(default_rows, default_config, "csv")


def test_pretty_table_shows_flags(default_rows, default_config):
    text = render_table(default_rows, default_config, "pretty-table")
    assert "flags" in text.splitlines()[0]
    assert "hl_pred 8248 != published 8167" in text


def test_render_records():
    points = truncation_sweep(10**4, range(2), ModelConfig())
    csv = render_records(points, None, "csv")
    assert csv.splitlines()[0] == "t_max,z,d_approx,d_exact,prediction"
    document = json.loads(render_records({"a": 1.0}, {"z": 3}, "json"))
    assert document == {"config": {"z": 3}, "rows": [{"name": "a", "value": 1.0}]}
