"""File formats, example-system generators and result serialization.

Matrices are read from Matrix Market files (``coordinate`` or ``array``;
``real``/``integer``; ``general``/``symmetric``/``skew-symmetric``).
Perturbation structures use a small JSON document::

    {"n": 5, "edges": [{"i": 5, "j": 1, "lo": null, "hi": 0.0}, ...]}

or the row-block shorthand ``{"n": 90, "rows": [19, 36], "lo": ..., "hi": ...}``
which makes every entry of rows 19 through 36 perturbable. Indices are 1-based
and ``null`` means unbounded.

JSON output writes floats with Python's shortest round-trip representation,
so every double survives a write/read cycle unchanged. Non-finite values are
written as ``null``.
"""
from io import BytesIO
import json
import math
import os

import numpy as np
import scipy.io

from .errors import InvalidStructure, ParseError, UnsupportedField
from .perturbation import PerturbationStructure, SparsePerturbation

__all__ = [
    "read_matrix_market",
    "format_matrix_market",
    "write_matrix_market",
    "read_structure",
    "parse_structure",
    "structure_to_dict",
    "write_structure",
    "gen_companion",
    "gen_circulant",
    "delta_to_triplets",
    "delta_from_triplets",
    "abscissa_to_dict",
    "radius_to_dict",
    "dumps",
]

_FIELDS = ("real", "integer", "double")
_SYMMETRIES = ("general", "symmetric", "skew-symmetric")


def _data_lines(lines, start):
    for no, line in enumerate(lines[start:], start=start + 1):
        s = line.strip()
        if s and not s.startswith("%"):
            yield no, s.split()


def read_matrix_market(path):
    """Dense ``float`` array from a Matrix Market file.

    Raises
    ------
    ParseError
        Malformed header, size line or entry; the message carries the line number.
    UnsupportedField
        ``complex`` or ``pattern`` data, or an unknown symmetry.
    """
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    head = lines[0].split()
    if len(head) != 5 or head[0].lower() != "%%matrixmarket" or head[1].lower() != "matrix":
        raise ParseError("expected '%%MatrixMarket matrix <format> <field> <symmetry>'", 1)
    fmt, fld, sym = (h.lower() for h in head[2:])
    if fmt not in ("coordinate", "array"):
        raise ParseError(f"unknown format {fmt!r}", 1)
    if fld not in _FIELDS:
        raise UnsupportedField(f"field {fld!r} is not supported", 1)
    if sym not in _SYMMETRIES:
        raise UnsupportedField(f"symmetry {sym!r} is not supported", 1)

    rows = _data_lines(lines, 1)
    try:
        no, size = next(rows)
    except StopIteration:
        raise ParseError("missing size line", len(lines)) from None
    want = 3 if fmt == "coordinate" else 2
    if len(size) != want:
        raise ParseError(f"size line needs {want} integers", no)
    try:
        dims = [int(t) for t in size]
    except ValueError:
        raise ParseError("size line needs integers", no) from None
    nr, nc = dims[:2]
    if nr < 1 or nc < 1:
        raise ParseError("dimensions must be positive", no)
    if sym != "general" and nr != nc:
        raise ParseError(f"{sym} matrix must be square", no)

    A = np.zeros((nr, nc))
    if fmt == "coordinate":
        nnz = dims[2]
        count = 0
        for no, tok in rows:
            if len(tok) != 3:
                raise ParseError("entry needs 'i j value'", no)
            try:
                i, j, v = int(tok[0]), int(tok[1]), float(tok[2])
            except ValueError:
                raise ParseError(f"bad entry {' '.join(tok)!r}", no) from None
            if not (1 <= i <= nr and 1 <= j <= nc):
                raise ParseError(f"index ({i}, {j}) outside {nr}x{nc}", no)
            A[i - 1, j - 1] += v
            if sym != "general" and i != j:
                A[j - 1, i - 1] += v if sym == "symmetric" else -v
            count += 1
        if count != nnz:
            raise ParseError(f"expected {nnz} entries, found {count}", len(lines))
        return A

    # array format: column-major; symmetric variants store the lower triangle only
    if sym == "general":
        slots = [(i, j) for j in range(nc) for i in range(nr)]
    elif sym == "symmetric":
        slots = [(i, j) for j in range(nc) for i in range(j, nr)]
    else:
        slots = [(i, j) for j in range(nc) for i in range(j + 1, nr)]
    k = 0
    for no, tok in rows:
        if len(tok) != 1:
            raise ParseError("array entry needs one value", no)
        if k >= len(slots):
            raise ParseError(f"more than {len(slots)} values", no)
        try:
            v = float(tok[0])
        except ValueError:
            raise ParseError(f"bad value {tok[0]!r}", no) from None
        i, j = slots[k]
        A[i, j] = v
        if sym == "symmetric":
            A[j, i] = v
        elif sym == "skew-symmetric":
            A[j, i] = -v
        k += 1
    if k != len(slots):
        raise ParseError(f"expected {len(slots)} values, found {k}", len(lines))
    return A


def format_matrix_market(A):
    """Matrix Market text for ``A``: a real general ``array`` with 17 significant digits."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("A must be two-dimensional")
    buf = BytesIO()
    scipy.io.mmwrite(buf, A, precision=17)
    return buf.getvalue().decode("ascii")


def write_matrix_market(path, A):
    text = format_matrix_market(A)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def _bound(value, where):
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: bound must be a number or null, got {value!r}")
    return float(value)


def _index(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: index must be an integer, got {value!r}")
    return value


def parse_structure(doc, n=None):
    """:class:`PerturbationStructure` from a decoded JSON document.

    ``n`` fills in the dimension when the document omits it (and must agree
    with it otherwise).
    """
    if not isinstance(doc, dict):
        raise ParseError("structure document must be a JSON object")
    dim = doc.get("n", n)
    if dim is None:
        raise ParseError("structure needs 'n' (or a matrix to take it from)")
    dim = _index(dim, "n")
    if n is not None and dim != n:
        raise InvalidStructure(f"structure has n={dim} but the matrix is {n}x{n}")
    if "rows" in doc:
        rows = doc["rows"]
        if not (isinstance(rows, list) and len(rows) == 2):
            raise ParseError("'rows' must be a two-element list [first, last]")
        first, last = (_index(r, "rows") for r in rows)
        if first > last:
            raise InvalidStructure(f"row range [{first}, {last}] is empty")
        return PerturbationStructure.rows(
            dim,
            range(first, last + 1),
            _bound(doc.get("lo"), "lo"),
            _bound(doc.get("hi"), "hi"),
        )
    edges = doc.get("edges")
    if not isinstance(edges, list):
        raise ParseError("structure needs an 'edges' list or a 'rows' range")
    pos, lo, hi = [], [], []
    for k, e in enumerate(edges):
        if not isinstance(e, dict) or "i" not in e or "j" not in e:
            raise ParseError(f"edge #{k} must be an object with 'i' and 'j'")
        pos.append((_index(e["i"], f"edge #{k}"), _index(e["j"], f"edge #{k}")))
        lo.append(_bound(e.get("lo"), f"edge #{k}"))
        hi.append(_bound(e.get("hi"), f"edge #{k}"))
    return PerturbationStructure(dim, pos, lo, hi)


def read_structure(path, n=None):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno) from None
    return parse_structure(doc, n)


def structure_to_dict(structure):
    return {
        "n": structure.n,
        "edges": [
            {"i": i, "j": j, "lo": lo, "hi": hi}
            for (i, j), lo, hi in zip(structure.edges, structure.lower, structure.upper)
        ],
    }


def write_structure(path, structure):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(structure_to_dict(structure)))


def gen_companion(coeffs):
    """Controllable canonical form of ``s^n + a_1 s^{n-1} + ... + a_n``.

    Ones on the superdiagonal; the last row is ``-(a_n, ..., a_1)``.
    """
    a = np.asarray(coeffs, dtype=float).reshape(-1)
    if a.size == 0:
        raise ValueError("need at least one coefficient")
    n = a.size
    A = np.eye(n, k=1)
    A[-1, :] = -a[::-1]
    return A


def gen_circulant(n, diag, sup, sub):
    """Circulant matrix with constant diagonal, super- and sub-diagonal bands.

    The bands wrap around: ``A[n-1, 0] = sup`` and ``A[0, n-1] = sub``. The
    three bands are added, so for ``n = 2`` the super and sub bands land on
    the same entries and sum.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    A = np.zeros((n, n))
    k = np.arange(n)
    np.add.at(A, (k, k), diag)
    np.add.at(A, (k, (k + 1) % n), sup)
    np.add.at(A, (k, (k - 1) % n), sub)
    return A


def delta_to_triplets(delta):
    return [
        {"i": i, "j": j, "value": float(v)}
        for (i, j), v in zip(delta.structure.edges, delta.values)
    ]


def delta_from_triplets(structure, triplets):
    """Inverse of :func:`delta_to_triplets`; edges missing from ``triplets`` are zero."""
    pos = {e: k for k, e in enumerate(structure.edges)}
    values = np.zeros(len(structure))
    for t in triplets:
        key = (int(t["i"]), int(t["j"]))
        if key not in pos:
            raise InvalidStructure(f"({key[0]}, {key[1]}) is not an edge")
        values[pos[key]] = float(t["value"])
    return SparsePerturbation(structure, values)


def _finite(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _triple_dict(triple):
    return {"re": float(triple.lam.real), "im": float(triple.lam.imag), "inner": triple.inner}


def abscissa_to_dict(res, rate=None):
    return {
        "alpha": res.alpha,
        "epsilon": res.epsilon,
        "eigenvalue": _triple_dict(res.triple),
        "theta": _finite(res.theta),
        "trace": [{"step": s.step, "alpha": s.alpha} for s in res.trace],
        "delta": delta_to_triplets(res.delta),
        "diagnostics": {
            "r_over_ell": None if rate is None else _finite(rate),
            "iterations": res.iterations,
            "converged": res.converged,
            "fully_saturated": res.fully_saturated,
            "warnings": list(res.warnings),
        },
    }


def radius_to_dict(res, rate=None):
    final = res.final
    return {
        "radius": res.radius,
        "alpha": final.alpha,
        "eigenvalue": _triple_dict(final.triple),
        "trace": [
            {"eps": s.eps, "alpha": s.alpha, "derivative": _finite(s.derivative)} for s in res.trace
        ],
        "delta": delta_to_triplets(final.delta),
        "diagnostics": {
            "r_over_ell": None if rate is None else _finite(rate),
            "iterations": res.iterations,
            "converged": res.converged,
            "restarts_used": res.restarts_used,
            "warnings": list(res.warnings),
        },
    }


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return _finite(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj):
    """Deterministic JSON text (fixed key order, two-space indent, trailing newline)."""
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def data_dir():
    """Directory named by ``SPECRADIUS_DATA_DIR``, or ``None`` when unset."""
    d = os.environ.get("SPECRADIUS_DATA_DIR")
    return d or None
