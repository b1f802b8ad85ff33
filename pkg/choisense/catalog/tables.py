"""
Product tables and symbolic displays for Kraus families.

Everything here renders in the matrix-unit notation used when these maps
are written out by hand: ``√2E25+√3E44`` for a matrix, ``x11+2x22`` for
an entry of Φ(X). Indices are 1-based in all rendered text.
"""

from __future__ import annotations

import re
from collections import OrderedDict
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from choisense.algebra.linalg import DenseMatrix, adjoint, matmul, matrix_unit
from choisense.algebra.scalar import IMAG, ONE, ZERO, RadScalar, parse_scalar
from choisense.maps.cpmap import KrausFamily, apply

LinearForm = Dict[Tuple[int, int], RadScalar]
LinearForms = List[List[LinearForm]]


# ============================================================
# Coefficients
# ============================================================
def _coefficient_text(v: RadScalar) -> str:
    """Text placed in front of a unit or variable; "" for 1 and "-" for −1."""
    if v == ONE:
        return ""
    if v == -ONE:
        return "-"
    text = str(v)
    if len(list(v.terms())) > 1:
        return f"({text})"
    return text


def _join(pieces: Sequence[str]) -> str:
    if not pieces:
        return "0"
    out = pieces[0]
    for p in pieces[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def _index(i: int, j: int, wide: bool) -> str:
    return f"{i},{j}" if wide else f"{i}{j}"


# ============================================================
# Matrix-unit expansions
# ============================================================
def render_units(m: DenseMatrix) -> str:
    """
    Matrix-unit expansion of ``m`` in row-major order, e.g. ``-√3iE22+2E33``.

    Indices above 9 are written with a comma (``E10,3``).
    """
    wide = max(m.rows, m.cols) > 9
    return _join([f"{_coefficient_text(v)}E{_index(i + 1, j + 1, wide)}" for i, j, v in m.nonzero()])


_INDEX = re.compile(r"(\d+),(\d+)|(\d)(\d)")


def _split_signed(text: str) -> List[Tuple[int, str]]:
    """Split at + and - outside parentheses; returns (offset, piece) pairs."""
    pieces: List[Tuple[int, str]] = []
    depth = 0
    start = 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and k > start:
            pieces.append((start, text[start:k]))
            start = k
    pieces.append((start, text[start:]))
    return pieces


def _parse_coefficient(text: str) -> RadScalar:
    if not text:
        return ONE
    try:
        return parse_scalar(text)
    except ValueError:
        # multi-term coefficients are rendered inside parentheses
        if text.startswith("(") and text.endswith(")"):
            return parse_scalar(text[1:-1])
        raise


def parse_units(text: str, rows: int, cols: Optional[int] = None) -> DenseMatrix:
    """
    Inverse of :func:`render_units`, parenthesized multi-term coefficients
    such as ``(1+√3)E11`` included.

    :raises ValueError: If the text is not a matrix-unit expansion.
    """
    cols = rows if cols is None else cols
    compact = text.replace(" ", "")
    if compact == "0":
        return DenseMatrix.zeros(rows, cols)
    values: Dict[Tuple[int, int], RadScalar] = {}
    for offset, piece in _split_signed(compact):
        sign, body = (piece[0], piece[1:]) if piece[:1] in ("+", "-") else ("+", piece)
        cut = body.rfind("E")
        index = _INDEX.fullmatch(body[cut + 1 :]) if cut >= 0 else None
        if index is None:
            raise ValueError(f"cannot parse matrix-unit expansion {text!r} at offset {offset}")
        try:
            coeff = _parse_coefficient(body[:cut])
        except ValueError:
            raise ValueError(f"cannot parse matrix-unit expansion {text!r} at offset {offset}") from None
        wi, wj, ni, nj = index.groups()
        i, j = (int(wi), int(wj)) if wi else (int(ni), int(nj))
        key = (i - 1, j - 1)
        values[key] = values.get(key, ZERO) + (-coeff if sign == "-" else coeff)
    return DenseMatrix.from_sparse(rows, cols, values)


def product_table(family: KrausFamily, kind: str = "gram") -> "OrderedDict[str, DenseMatrix]":
    """
    Every product V_a*V_b (``kind="gram"``, labels ``W3*W7``) or V_aV_b*
    (``kind="dual"``, labels ``W1W2*``), a outer and b inner, 1-based.

    :raises ValueError: If ``kind`` is neither "gram" nor "dual".
    """
    if kind not in ("gram", "dual"):
        raise ValueError(f"kind must be 'gram' or 'dual', got {kind!r}")
    adj = [adjoint(v) for v in family.ops]
    table: "OrderedDict[str, DenseMatrix]" = OrderedDict()
    for a in range(family.size):
        for b in range(family.size):
            if kind == "gram":
                table[f"W{a + 1}*W{b + 1}"] = matmul(adj[a], family.ops[b])
            else:
                table[f"W{a + 1}W{b + 1}*"] = matmul(family.ops[a], adj[b])
    return table


# ============================================================
# Symbolic Φ(X)
# ============================================================
def symbolic_apply(family: KrausFamily) -> LinearForms:
    """
    Φ(X) as linear forms: ``forms[a][b][(k, l)]`` is the coefficient of
    x_kl in Φ(X)[a, b], scale included, all indices 0-based.
    """
    d_in, d_out = family.d_in, family.d_out
    forms: LinearForms = [[{} for _ in range(d_out)] for _ in range(d_out)]
    for k in range(d_in):
        for l in range(d_in):
            image = apply(family, matrix_unit(k, l, d_in))
            for a, b, v in image.nonzero():
                forms[a][b][(k, l)] = v
    return forms


def render_linear_forms(
    family: KrausFamily, multiplier: Optional[Fraction] = None, forms: Optional[LinearForms] = None
) -> List[List[str]]:
    """
    Display strings for Φ(X), each entry times ``multiplier``.

    The default multiplier is 1/scale, so the result is the bracket of
    ``scale·[…]``. Variables are ordered row-major, e.g. ``x11+2x22+x33``.
    """
    factor = RadScalar.from_rational(Fraction(1) / family.scale if multiplier is None else Fraction(multiplier))
    forms = symbolic_apply(family) if forms is None else forms
    wide = family.d_in > 9
    rows: List[List[str]] = []
    for row in forms:
        cells = []
        for form in row:
            pieces = [
                f"{_coefficient_text(v * factor)}x{_index(k + 1, l + 1, wide)}"
                for (k, l), v in sorted(form.items())
                if v
            ]
            cells.append(_join(pieces))
        rows.append(cells)
    return rows


# ============================================================
# Diagonal coefficient systems
# ============================================================
def diagonal_system(family: KrausFamily, pairs: Sequence[Tuple[int, int]]) -> DenseMatrix:
    """
    Coefficients of the diagonals of Σ a_ij V_i*V_j (d_out rows) followed by
    those of Σ a_ij V_jV_i* (d_in rows), one column per 1-based pair (i, j).
    """
    adj = [adjoint(v) for v in family.ops]
    columns = []
    for i, j in pairs:
        gram = matmul(adj[i - 1], family.ops[j - 1])
        dual = matmul(family.ops[j - 1], adj[i - 1])
        columns.append([gram[r, r] for r in range(family.d_out)] + [dual[r, r] for r in range(family.d_in)])
    height = family.d_out + family.d_in
    return DenseMatrix(height, len(pairs), [columns[c][r] for r in range(height) for c in range(len(pairs))])


def diagonal_pairs(n: int) -> List[Tuple[int, int]]:
    return [(i, i) for i in range(1, n + 1)]


_S3I = RadScalar.sqrt(3) * IMAG

_APPENDIX: Dict[str, List[List[object]]] = {
    # columns a11..a66
    "rank6": [
        [0, 0, 0, 0, 1, 2],
        [1, 0, 0, 1, 0, 1],
        [1, 1, 0, 0, 1, 0],
        [0, 1, 1, 1, 0, 0],
        [0, 0, 2, 0, 1, 0],
        [1, 0, 0, 1, 1, 0],
        [0, 1, 0, 0, 0, 2],
        [1, 0, 2, 0, 0, 0],
        [0, 1, 0, 1, 1, 0],
        [0, 0, 1, 0, 1, 1],
    ],
    # columns a11..a77, a17, a71
    "rank7": [
        [2, 1, 0, 0, 1, 0, 2, 2, 2],
        [2, 0, 0, 1, 1, 0, 2, 2, 2],
        [1, 0, 0, 1, 0, 1, 3, _S3I, -_S3I],
        [1, 0, 2, 0, 0, 0, 3, _S3I, -_S3I],
        [1, 1, 3, 1, 0, 0, 0, 0, 0],
        [1, 0, 3, 0, 1, 1, 0, 0, 0],
        [0, 1, 0, 1, 4, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 2, 3, 0, 0],
        [0, 0, 2, 0, 1, 0, 3, 0, 0],
        [0, 0, 0, 0, 4, 2, 0, 0, 0],
    ],
}

APPENDIX_PAIRS: Dict[str, List[Tuple[int, int]]] = {
    "rank6": diagonal_pairs(6),
    "rank7": diagonal_pairs(7) + [(1, 7), (7, 1)],
}


def appendix_matrix(name: str) -> DenseMatrix:
    """
    The printed diagonal coefficient matrices, ``"rank6"`` (10×6) and ``"rank7"`` (10×9).

    :raises KeyError: If ``name`` is not one of them.
    """
    if name not in _APPENDIX:
        raise KeyError(f"no appendix matrix named {name!r}; choose from {sorted(_APPENDIX)}")
    return DenseMatrix.from_rows(_APPENDIX[name])
