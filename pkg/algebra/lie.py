"""
Exact model of sl_n: basis labels, sparse elements, bracket, invariant form,
roots and ad h weight decompositions
"""

from fractions import Fraction
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from loguru import logger

from algebra import linalg
from algebra.errors import DimensionError, NonSemisimpleError

OFFDIAG = 0
CARTAN = 1


class BasisLabel(NamedTuple):
    """E(i,j) for i != j, or H(i) = E_ii - E_{i+1,i+1}; tuple order is the canonical label order"""

    kind: int
    i: int
    j: int = 0

    def __str__(self) -> str:
        if self.kind == OFFDIAG:
            return f"E({self.i},{self.j})"
        return f"H({self.i})"

    @classmethod
    def parse(cls, text: str) -> "BasisLabel":
        text = text.strip().replace(" ", "")
        if text.startswith("E(") and text.endswith(")"):
            i, j = (int(x) for x in text[2:-1].split(","))
            return offdiag(i, j)
        if text.startswith("H(") and text.endswith(")"):
            return cartan(int(text[2:-1]))
        raise ValueError(f"unknown basis label {text!r}")


def offdiag(i: int, j: int) -> BasisLabel:
    if i == j:
        raise ValueError(f"E({i},{j}) is diagonal")
    return BasisLabel(OFFDIAG, i, j)


def cartan(i: int) -> BasisLabel:
    if i < 1:
        raise ValueError(f"H({i}) out of range")
    return BasisLabel(CARTAN, i, 0)


def all_labels(n: int) -> List[BasisLabel]:
    """The n^2 - 1 labels of sl_n in canonical order"""
    labels = [offdiag(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    labels += [cartan(i) for i in range(1, n)]
    return labels


def _check_label(n: int, label: BasisLabel) -> None:
    if label.kind == OFFDIAG:
        ok = 1 <= label.i <= n and 1 <= label.j <= n and label.i != label.j
    else:
        ok = 1 <= label.i <= n - 1
    if not ok:
        raise DimensionError(f"{label} is not a basis label of sl_{n}")


class LieElement:
    """Immutable sparse element of sl_n with exact rational coefficients"""

    __slots__ = ("n", "_coeffs", "_matrix")

    def __init__(self, n: int, coeffs: Optional[Mapping[BasisLabel, object]] = None):
        if n < 2:
            raise DimensionError(f"sl_{n} is not defined")
        self.n = n
        clean: Dict[BasisLabel, Fraction] = {}
        for label, value in (coeffs or {}).items():
            _check_label(n, label)
            value = Fraction(value)
            if value:
                clean[label] = value
        self._coeffs = clean
        self._matrix: Optional[Dict[Tuple[int, int], Fraction]] = None

    # construction helpers

    @classmethod
    def zero(cls, n: int) -> "LieElement":
        return cls(n)

    @classmethod
    def from_matrix(cls, n: int, entries: Mapping[Tuple[int, int], object]) -> "LieElement":
        """Build from a sparse traceless matrix {(row, col): value}, 1-based"""
        coeffs: Dict[BasisLabel, Fraction] = {}
        diag = [Fraction(0)] * (n + 1)
        for (r, c), value in entries.items():
            value = Fraction(value)
            if not value:
                continue
            if r == c:
                diag[r] += value
            else:
                coeffs[offdiag(r, c)] = value
        if sum(diag) != 0:
            raise DimensionError("matrix is not traceless")
        running = Fraction(0)
        for a in range(1, n):
            running += diag[a]
            if running:
                coeffs[cartan(a)] = running
        return cls(n, coeffs)

    @classmethod
    def from_diagonal(cls, diagonal: Sequence[object]) -> "LieElement":
        n = len(diagonal)
        return cls.from_matrix(n, {(a + 1, a + 1): d for a, d in enumerate(diagonal)})

    @classmethod
    def from_vector(cls, n: int, labels: Sequence[BasisLabel], vector: Sequence[Fraction]) -> "LieElement":
        return cls(n, {label: value for label, value in zip(labels, vector) if value})

    @classmethod
    def from_json(cls, n: int, data: Mapping[str, str]) -> "LieElement":
        return cls(n, {BasisLabel.parse(k): Fraction(v) for k, v in data.items()})

    # views

    @property
    def coeffs(self) -> Dict[BasisLabel, Fraction]:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def labels(self) -> List[BasisLabel]:
        return sorted(self._coeffs)

    def coefficient(self, label: BasisLabel) -> Fraction:
        return self._coeffs.get(label, Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_diagonal(self) -> bool:
        return all(label.kind == CARTAN for label in self._coeffs)

    def to_matrix(self) -> Dict[Tuple[int, int], Fraction]:
        """Sparse matrix {(row, col): value}"""
        if self._matrix is None:
            entries: Dict[Tuple[int, int], Fraction] = {}
            for label, value in self._coeffs.items():
                if label.kind == OFFDIAG:
                    entries[(label.i, label.j)] = value
                else:
                    a = label.i
                    entries[(a, a)] = entries.get((a, a), Fraction(0)) + value
                    entries[(a + 1, a + 1)] = entries.get((a + 1, a + 1), Fraction(0)) - value
            self._matrix = {key: v for key, v in entries.items() if v}
        return self._matrix

    def diagonal(self) -> List[Fraction]:
        entries = self.to_matrix()
        return [entries.get((a, a), Fraction(0)) for a in range(1, self.n + 1)]

    def vector(self, labels: Sequence[BasisLabel]) -> List[Fraction]:
        return [self.coefficient(label) for label in labels]

    def to_json(self) -> Dict[str, str]:
        return {str(label): _fraction_text(self._coeffs[label]) for label in sorted(self._coeffs)}

    # arithmetic

    def _same_space(self, other: "LieElement") -> None:
        if not isinstance(other, LieElement):
            raise TypeError(f"expected LieElement, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionError(f"sl_{self.n} and sl_{other.n} elements cannot be combined")

    def __add__(self, other: "LieElement") -> "LieElement":
        self._same_space(other)
        out = dict(self._coeffs)
        for label, value in other._coeffs.items():
            out[label] = out.get(label, Fraction(0)) + value
        return LieElement(self.n, out)

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def __neg__(self) -> "LieElement":
        return LieElement(self.n, {label: -value for label, value in self._coeffs.items()})

    def scale(self, factor) -> "LieElement":
        factor = Fraction(factor)
        return LieElement(self.n, {label: factor * value for label, value in self._coeffs.items()})

    def __mul__(self, factor) -> "LieElement":
        return self.scale(factor)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, LieElement) and self.n == other.n and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        return f"LieElement({self.n}, {format_element(self)})"


def _fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def format_element(x: LieElement) -> str:
    """Human readable form, e.g. 2*H(1) - E(1,2)"""
    if x.is_zero():
        return "0"
    parts = []
    for label in x.labels():
        value = x.coefficient(label)
        sign = "-" if value < 0 else "+"
        mag = abs(value)
        text = str(label) if mag == 1 else f"{mag}*{label}"
        parts.append((sign, text))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


def E(n: int, i: int, j: int) -> LieElement:
    return LieElement(n, {offdiag(i, j): 1})


def H(n: int, i: int) -> LieElement:
    return LieElement(n, {cartan(i): 1})


def _matmul(a: Dict[Tuple[int, int], Fraction], b: Dict[Tuple[int, int], Fraction]) -> Dict[Tuple[int, int], Fraction]:
    by_row: Dict[int, List[Tuple[int, Fraction]]] = {}
    for (r, c), value in b.items():
        by_row.setdefault(r, []).append((c, value))
    out: Dict[Tuple[int, int], Fraction] = {}
    for (r, c), value in a.items():
        for c2, value2 in by_row.get(c, ()):
            out[(r, c2)] = out.get((r, c2), Fraction(0)) + value * value2
    return out


def bracket(x: LieElement, y: LieElement) -> LieElement:
    """[x, y] = xy - yx"""
    if x.n != y.n:
        raise DimensionError(f"bracket of sl_{x.n} and sl_{y.n} elements")
    xy = _matmul(x.to_matrix(), y.to_matrix())
    for key, value in _matmul(y.to_matrix(), x.to_matrix()).items():
        xy[key] = xy.get(key, Fraction(0)) - value
    return LieElement.from_matrix(x.n, xy)


def pairing(x: LieElement, y: LieElement, scale: Fraction = Fraction(1)) -> Fraction:
    """
    Invariant form scale * tr(xy)

    Args:
        x, y: elements of the same sl_n
        scale: 1 for the trace form, 2n for the Killing form
    """
    if x.n != y.n:
        raise DimensionError(f"pairing of sl_{x.n} and sl_{y.n} elements")
    ym = y.to_matrix()
    total = Fraction(0)
    for (r, c), value in x.to_matrix().items():
        other = ym.get((c, r))
        if other:
            total += value * other
    return scale * total


def label_weight(label: BasisLabel, diagonal: Sequence[Fraction]) -> Fraction:
    """Eigenvalue of ad h on a basis label, h = diag(diagonal)"""
    if label.kind == CARTAN:
        return Fraction(0)
    return diagonal[label.i - 1] - diagonal[label.j - 1]


def weight_of(x: LieElement, h: LieElement) -> Optional[int]:
    """ad h eigenvalue of x when x is a nonzero weight vector, else None"""
    if x.is_zero():
        return None
    diagonal = h.diagonal()
    weights = {label_weight(label, diagonal) for label, _ in x.items()}
    if len(weights) != 1:
        return None
    value = weights.pop()
    return int(value) if value.denominator == 1 else None


class Root(NamedTuple):
    """The root eps_i - eps_j of sl_n"""

    i: int
    j: int

    @property
    def is_positive(self) -> bool:
        return self.i < self.j

    @classmethod
    def from_simple_range(cls, i: int, j: int) -> "Root":
        """beta_{i,j} = alpha_i + ... + alpha_j"""
        if j < i:
            raise ValueError(f"empty simple root range {i}..{j}")
        return cls(i, j + 1)

    def simple_coefficients(self, n: int) -> List[int]:
        """Coefficients of the root on alpha_1..alpha_{n-1}"""
        lo, hi = sorted((self.i, self.j))
        sign = 1 if self.is_positive else -1
        return [sign if lo <= a < hi else 0 for a in range(1, n)]

    def negate(self) -> "Root":
        return Root(self.j, self.i)

    def root_vector(self, n: int) -> LieElement:
        return E(n, self.i, self.j)

    def coroot(self, n: int) -> LieElement:
        """H_alpha = E_ii - E_jj"""
        return LieElement.from_matrix(n, {(self.i, self.i): 1, (self.j, self.j): -1})

    def evaluate(self, h: LieElement) -> Fraction:
        diagonal = h.diagonal()
        return diagonal[self.i - 1] - diagonal[self.j - 1]


def simple_root_values(h: LieElement) -> List[Fraction]:
    """alpha_i(h) for i = 1..n-1"""
    diagonal = h.diagonal()
    return [diagonal[a] - diagonal[a + 1] for a in range(h.n - 1)]


def to_rows(elements: Sequence[LieElement], labels: Sequence[BasisLabel]) -> List[List[Fraction]]:
    return [x.vector(labels) for x in elements]


def coordinates(x: LieElement, basis: Sequence[LieElement]) -> Optional[List[Fraction]]:
    """Coefficients of x on the basis, None when x is outside the span"""
    labels = all_labels(x.n)
    return linalg.solve_in_span(to_rows(basis, labels), x.vector(labels))


def weight_decompose(h: LieElement, space: Sequence[LieElement]) -> Dict[int, List[LieElement]]:
    """
    Split span(space) into ad h eigenspaces

    Args:
        h: diagonal element with integral weights on the labels
        space: spanning set

    Returns:
        {weight: canonical basis of the eigenspace}
    """
    if not h.is_diagonal():
        raise NonSemisimpleError("h must be a Cartan element")
    if not space:
        return {}
    n = h.n
    labels = all_labels(n)
    diagonal = h.diagonal()
    rows = to_rows(space, labels)
    span = linalg.Span(rows, len(labels))
    dim = span.dim
    by_weight: Dict[Fraction, List[int]] = {}
    for index, label in enumerate(labels):
        by_weight.setdefault(label_weight(label, diagonal), []).append(index)

    blocks: Dict[int, List[LieElement]] = {}
    found = 0
    for weight, positions in sorted(by_weight.items()):
        keep = set(positions)
        projections = [[value if index in keep else Fraction(0) for index, value in enumerate(row)] for row in rows]
        reduced, _ = linalg.rref(projections, len(labels))
        if not reduced:
            continue
        for vector in reduced:
            if not span.contains(vector):
                raise NonSemisimpleError(
                    f"span is not ad h-stable at weight {weight}",
                    vector=LieElement.from_vector(n, labels, vector),
                )
        if weight.denominator != 1:
            raise NonSemisimpleError(f"non-integral weight {weight}")
        blocks[int(weight)] = [LieElement.from_vector(n, labels, vector) for vector in reduced]
        found += len(reduced)
    if found != dim:
        raise NonSemisimpleError(f"eigenspaces span {found} of {dim} dimensions")
    logger.debug("weight decomposition dims {}", {m: len(v) for m, v in sorted(blocks.items())})
    return blocks


def gram_matrix(n: int, scale: Fraction = Fraction(1)) -> List[List[Fraction]]:
    """Gram matrix of the invariant form on all_labels(n)"""
    basis = [LieElement(n, {label: 1}) for label in all_labels(n)]
    return [[pairing(x, y, scale) for y in basis] for x in basis]


def structure_constants(basis: Sequence[LieElement]) -> List[List[List[Fraction]]]:
    """
    c[i][j] = coordinates of [b_i, b_j] on the basis

    The basis must span a subalgebra.
    """
    out = []
    for x in basis:
        row = []
        for y in basis:
            coords = coordinates(bracket(x, y), basis)
            if coords is None:
                raise DimensionError("basis does not span a subalgebra")
            row.append(coords)
        out.append(row)
    return out


def is_subalgebra(basis: Sequence[LieElement]) -> bool:
    if not basis:
        return True
    labels = all_labels(basis[0].n)
    span = linalg.Span(to_rows(basis, labels), len(labels))
    for a, x in enumerate(basis):
        for y in basis[a + 1:]:
            if not span.contains(bracket(x, y).vector(labels)):
                return False
    return True
