# SPDX-License-Identifier: Apache-2.0
import json
import os
import pathlib

import pytest

import smr

FIXTURES = pathlib.Path(
    os.environ.get("SMR_FIXTURES", pathlib.Path(__file__).parent.parent / "fixtures")
)


def read(name):
    return (FIXTURES / name).read_text()


@pytest.fixture
def dot():
    return smr.Matcher(read("dot.pat"))


def test_parse_and_print_round_trip():
    m = smr.parse_module(read("nested_if.ir"))
    assert m.functions == ["sum"]
    again = smr.parse_module(str(m))
    assert again == m
    assert str(again) == str(m)
    assert m.violations() == []


def test_match_counts_and_funnel(dot):
    r = dot.match(read("dot_e2e.ir"))
    assert dot.patterns == ["dot"]
    assert r.total == 2
    assert r.funnel == {"rdos": 4, "cdg_candidates": 3, "ddg_accepted": 2, "ddg_matches": 2}
    report = dot.report(r, timings=False)
    assert report["matches"] == {"dot": 2}
    assert [s["root"] for s in report["patterns"][0]["sites"]] == ["2", "7"]
    assert "timings_ms" not in report


def test_rewrite_preserves_results(dot):
    src = smr.parse_module(read("dot_e2e.ir"))
    out, report = dot.rewrite(src)
    assert out.functions == ["kernel", "dot_repl"]
    assert report["rewrite"]["selected"] == 2
    assert "core.call" in str(out)
    assert dot.match(out).total == 0

    args = [3, [1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [1, 1, 1], [0.0], [0.0], [0.0], [3]]
    before = smr.run(src, "kernel", args)
    after = smr.run(out, "kernel", args)
    assert before == after
    assert before[3] == [32.0]
    assert before[6] == [1]


def test_errors_carry_kind_and_position():
    with pytest.raises(smr.Error) as info:
        smr.Matcher(read("seq_rdos.pat"))
    assert info.value.kind == "SequentialRdos"
    assert (info.value.line, info.value.column) == (4, 1)

    with pytest.raises(smr.Error) as info:
        smr.parse_module('func @f() {\n  "core.return"(%x) : (i64) -> ()\n}')
    assert info.value.kind == "UndefinedValue"

    with pytest.raises(smr.Error) as info:
        smr.run(read("nested_if.ir"), "sum", [[1], [0]], fuel=2)
    assert info.value.kind == "FuelExhausted"


def test_custom_config(dot):
    cfg = json.dumps({"rdo_ops": ["core.for"], "terminator_ops": ["core.yield", "core.return"]})
    r = smr.Matcher(read("dot.pat"), config=cfg).match(read("dot_e2e.ir"))
    assert r.funnel["rdos"] == 3
    assert r.total == 2
