import json
from fractions import Fraction

import pytest

from mvproj.builders import build_case_ii
from mvproj.errors import InputError
from mvproj.projectivity import SubstitutionPair
from mvproj.pwl1 import Pwl1
from mvproj.pwl2 import Pwl2
from mvproj.wire import (
    complex_to_json,
    fan_spec_from_json,
    function_from_json,
    pair_from_json,
    pair_to_json,
    pwl1_from_json,
    pwl1_to_json,
    pwl2_from_json,
    pwl2_to_json,
    rect_spec_from_json,
)

F = Fraction

EX15_F_JSON = [["0", "0"], ["1/6", "1"], ["1/4", "0"], ["1/3", "1"], ["1", "1"]]


class TestPwl1:
    def test_documented_example_round_trip(self):
        f = pwl1_from_json(EX15_F_JSON)
        assert f(F(1, 6)) == 1
        assert pwl1_to_json(f) == EX15_F_JSON

    def test_validation_on_load(self):
        with pytest.raises(InputError, match="slope"):
            pwl1_from_json([["0", "0"], ["1/2", "1/3"], ["1", "1"]])
        # same data loads with validation off
        f = pwl1_from_json([["0", "0"], ["1/2", "1/3"], ["1", "1"]], validate=False)
        assert f(F(1, 2)) == F(1, 3)

    def test_shape_errors(self):
        with pytest.raises(InputError):
            pwl1_from_json({"nodes": []})
        with pytest.raises(InputError):
            pwl1_from_json([["0", "0"], ["bad"], ["1", "1"]])


class TestPwl2:
    def test_round_trip(self):
        f = Pwl2.coordinate(1)
        data = pwl2_to_json(f)
        assert pwl2_from_json(data) == f

    def test_integer_forms_serialized_as_ints(self):
        data = pwl2_to_json(Pwl2.coordinate(2))
        assert all(all(isinstance(c, int) for c in rec["form"]) for rec in data)

    def test_validation_on_load(self):
        data = pwl2_to_json(Pwl2.coordinate(1))
        data[0]["form"] = [1, 1, 1]  # breaks continuity and range
        with pytest.raises(InputError):
            pwl2_from_json(data)

    def test_detection(self):
        assert isinstance(function_from_json(EX15_F_JSON), Pwl1)
        assert isinstance(function_from_json(pwl2_to_json(Pwl2.constant(0))), Pwl2)


class TestPair:
    def test_round_trip(self):
        pair = SubstitutionPair.identity()
        assert pair_from_json(pair_to_json(pair)) == pair

    def test_builder_output_round_trips(self):
        pair = build_case_ii(1, 2, 1, 2).pair
        again = pair_from_json(json.loads(json.dumps(pair_to_json(pair))))
        assert again == pair

    def test_missing_keys(self):
        with pytest.raises(InputError):
            pair_from_json({"d1": []})


class TestSpecs:
    def test_rect_spec(self):
        flat = [["0", "0"], ["1", "0"]]
        top = [["0", "1"], ["1", "1"]]
        spec = rect_spec_from_json({"f1": flat, "f2": top, "g1": flat, "g2": top})
        assert spec.f1 == Pwl1.constant(0)

    def test_fan_spec(self):
        spec = fan_spec_from_json({"triangles": [
            {"oa": [1, -1], "ob": [2, -1], "ab": [-1, -1, 1], "l": -2, "m": -3}]})
        assert spec.triangles[0].l == -2
        with pytest.raises(InputError):
            fan_spec_from_json({"triangles": [{"oa": [1, -1]}]})


def test_complex_serialization():
    pair = SubstitutionPair.identity()
    from mvproj.projectivity import equalizer
    data = complex_to_json(equalizer(pair))
    assert all(rec["kind"] in ("point", "segment", "polygon") for rec in data)
    assert all(isinstance(v, list) and len(v) == 2 for rec in data for v in rec["vertices"])
