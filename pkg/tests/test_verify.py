import json
import math

import pytest

from redbundle.config import build_config
from redbundle.verify import SUITES, Check, run_verification


@pytest.mark.parametrize("model", ["oscillator", "heavytop"])
def test_all_suites_pass(model):
    rep = run_verification(build_config({"model": model, "samples": "15", "t1": "1"}))
    assert rep.passed, [c.as_dict() for c in rep.failures()]
    names = [c.name for c in rep.checks]
    assert len(names) == len(set(names))
    assert "negative_control_time_translation_basic_form" in names


def test_heavy_top_magnetic_suite_at_half():
    rep = run_verification(build_config({"model": "heavytop", "nu": "0.5", "samples": "20"}), "magnetic")
    assert rep.passed
    assert {"sphere_magnetic_bracket_formula", "magnetic_bracket_formula"} <= {c.name for c in rep.checks}


def test_suites_are_independent_of_each_other():
    cfg = build_config({"samples": "5", "t1": "0.5"})
    alone = run_verification(cfg, "magnetic")
    together = run_verification(cfg, "all")
    by_name = {c.name: c.value for c in together.checks}
    for c in alone.checks:
        assert by_name[c.name] == c.value


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_verification(build_config({}), "everything")
    assert "bracket" in SUITES


def test_check_relations():
    assert Check("x", 1e-12, 1e-10, "").passed
    assert not Check("x", math.nan, 1e-10, "").passed
    assert Check("x", 1.0, 0.99, "", ">=").passed
    d = Check("x", 2.0, 1.0, "id").as_dict()
    assert d["passed"] is False
    json.dumps(d)
