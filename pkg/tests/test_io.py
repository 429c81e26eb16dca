import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from specradius.errors import InvalidStructure, ParseError, UnsupportedField
from specradius.io import (
    abscissa_to_dict,
    delta_from_triplets,
    delta_to_triplets,
    dumps,
    gen_circulant,
    gen_companion,
    parse_structure,
    read_matrix_market,
    read_structure,
    structure_to_dict,
    write_matrix_market,
    write_structure,
)
from specradius.abscissa import worst_case_perturbation
from specradius.perturbation import PerturbationStructure, SparsePerturbation

from systems import diag12, single_edge


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestMatrixMarket:
    def test_coordinate(self, tmp_path):
        p = write(tmp_path, "a.mtx", "%%MatrixMarket matrix coordinate real general\n% c\n2 2 2\n1 1 -1\n2 2 -2\n")
        assert np.array_equal(read_matrix_market(p), np.diag([-1.0, -2.0]))

    def test_symmetric_expansion(self, tmp_path):
        p = write(tmp_path, "s.mtx", "%%MatrixMarket matrix coordinate real symmetric\n3 3 3\n1 1 4\n3 1 2.5\n3 2 -1\n")
        A = read_matrix_market(p)
        assert np.array_equal(A, A.T) and A[0, 2] == 2.5 and A[1, 2] == -1

    def test_skew_symmetric(self, tmp_path):
        p = write(tmp_path, "k.mtx", "%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 3\n")
        assert np.array_equal(read_matrix_market(p), [[0, -3], [3, 0]])

    def test_array_symmetric(self, tmp_path):
        p = write(tmp_path, "as.mtx", "%%MatrixMarket matrix array integer symmetric\n2 2\n1\n2\n3\n")
        assert np.array_equal(read_matrix_market(p), [[1, 2], [2, 3]])

    @pytest.mark.parametrize("field", ["complex", "pattern"])
    def test_unsupported(self, tmp_path, field):
        p = write(tmp_path, "c.mtx", f"%%MatrixMarket matrix coordinate {field} general\n1 1 1\n1 1 1 0\n")
        with pytest.raises(UnsupportedField, match="line 1"):
            read_matrix_market(p)

    @pytest.mark.parametrize(
        "body, line",
        [
            ("2 2 2\n1 1 1\n3 1 2\n", 4),
            ("2 2 2\n1 1 x\n2 2 1\n", 3),
            ("2 2 3\n1 1 1\n2 2 1\n", 4),
            ("2 x 1\n", 2),
        ],
    )
    def test_errors_carry_line(self, tmp_path, body, line):
        p = write(tmp_path, "e.mtx", "%%MatrixMarket matrix coordinate real general\n" + body)
        with pytest.raises(ParseError) as info:
            read_matrix_market(p)
        assert info.value.line == line

    def test_bad_header(self, tmp_path):
        with pytest.raises(ParseError):
            read_matrix_market(write(tmp_path, "h.mtx", "hello\n"))

    @given(st.integers(0, 2**32 - 1), st.integers(1, 6))
    def test_round_trip_exact(self, tmp_path_factory, seed, n):
        A = np.random.default_rng(seed).standard_normal((n, n)) * 10.0 ** np.random.default_rng(seed).integers(-5, 5)
        p = tmp_path_factory.mktemp("mm") / "r.mtx"
        write_matrix_market(p, A)
        assert np.array_equal(read_matrix_market(p), A)


class TestStructureJson:
    def test_single_edge(self):
        H = parse_structure({"n": 2, "edges": [{"i": 1, "j": 1, "lo": None, "hi": None}]})
        assert H == PerturbationStructure(2, [(1, 1)])

    def test_rows_shorthand(self):
        H = parse_structure({"rows": [19, 36], "hi": 0.5}, n=90)
        assert len(H) == 18 * 90 and H.edges[0] == (19, 1) and H.edges[-1] == (36, 90)
        assert set(H.upper) == {0.5}

    def test_positive_lower(self):
        with pytest.raises(InvalidStructure):
            parse_structure({"n": 2, "edges": [{"i": 1, "j": 1, "lo": 0.5, "hi": None}]})

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidStructure):
            parse_structure({"n": 3, "edges": []}, n=2)

    @pytest.mark.parametrize(
        "doc",
        [[], {"edges": []}, {"n": 2}, {"n": 2, "edges": [{"i": 1}]}, {"n": 2, "edges": [{"i": 1, "j": "a"}]},
         {"n": 2, "edges": [{"i": 1, "j": 1, "hi": "big"}]}, {"n": 4, "rows": [1]}],
    )
    def test_malformed(self, doc):
        with pytest.raises(ParseError):
            parse_structure(doc)

    def test_file_round_trip(self, tmp_path):
        H = PerturbationStructure(3, [(1, 2), (3, 3)], [None, -0.25], [1.5, None])
        write_structure(tmp_path / "h.json", H)
        assert read_structure(tmp_path / "h.json") == H
        assert json.loads((tmp_path / "h.json").read_text()) == structure_to_dict(H)

    def test_bad_json_reports_line(self, tmp_path):
        p = write(tmp_path, "b.json", '{\n  "n": 2,\n  "edges": [\n}\n')
        with pytest.raises(ParseError, match="line 4"):
            read_structure(p)


class TestGenerators:
    def test_companion(self):
        A = gen_companion([13, 69, 187, 260, 150])
        assert np.array_equal(A[-1], [-150, -260, -187, -69, -13])
        assert np.array_equal(A[:-1, 1:], np.eye(4))
        ev = np.linalg.eigvals(A)
        for z in [-2 + 1j, -2 - 1j, -3, -3 + 1j, -3 - 1j]:
            assert np.min(np.abs(ev - z)) < 1e-8

    def test_companion_scalar(self):
        assert np.array_equal(gen_companion([1]), [[-1.0]])
        with pytest.raises(ValueError):
            gen_companion([])

    def test_circulant(self):
        C = gen_circulant(10, -0.1, 1.0, -1.0)
        assert C[0, 9] == -1 and C[9, 0] == 1 and C[0, 1] == 1 and C[1, 0] == -1
        ev = np.linalg.eigvals(C)
        assert np.allclose(ev.real, -0.1, atol=1e-12)
        expect = np.sort(2 * np.sin(2 * np.pi * np.arange(10) / 10))
        assert np.allclose(np.sort(ev.imag), expect, atol=1e-12)

    def test_circulant_two_adds_bands(self):
        assert np.array_equal(gen_circulant(2, -1.0, 2.0, 3.0), [[-1, 5], [5, -1]])
        with pytest.raises(ValueError):
            gen_circulant(1, 0, 0, 0)


class TestSerialization:
    @given(st.lists(st.floats(-1e300, 1e300, allow_nan=False, allow_infinity=False), min_size=3, max_size=3))
    def test_delta_round_trip_exact(self, vals):
        H = PerturbationStructure(2, [(1, 1), (1, 2), (2, 1)])
        d = SparsePerturbation(H, vals)
        text = dumps({"delta": delta_to_triplets(d)})
        back = delta_from_triplets(H, json.loads(text)["delta"])
        assert np.array_equal(back.values, d.values)

    def test_unknown_edge(self):
        with pytest.raises(InvalidStructure):
            delta_from_triplets(single_edge(), [{"i": 2, "j": 2, "value": 1.0}])

    def test_non_finite_become_null(self):
        assert dumps({"x": float("inf"), "y": [np.float64("nan"), np.int64(3)]}) == (
            '{\n  "x": null,\n  "y": [\n    null,\n    3\n  ]\n}\n'
        )

    def test_result_document(self):
        res = worst_case_perturbation(diag12(), 0.5, single_edge())
        doc = json.loads(dumps(abscissa_to_dict(res, 0.5)))
        assert doc["alpha"] == res.alpha
        assert doc["delta"] == [{"i": 1, "j": 1, "value": 0.5}]
        assert set(doc["diagnostics"]) >= {"r_over_ell", "iterations", "converged"}
