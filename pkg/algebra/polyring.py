"""
Exact sparse polynomials over QQ in q1..qk, their fraction field, and
matrix algebra over both

Polynomials are sympy PolyElements of a graded-lex ring; RatFunc keeps a
reduced fraction with a monic denominator.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from algebra import linalg
from algebra.errors import DimensionError, SingularMatrixError
from algebra.linalg import from_qq, to_qq


class PolyContext:
    """The ring QQ[q1..qk] with graded-lex order"""

    def __init__(self, k: int, prefix: str = "q"):
        if k < 1:
            raise DimensionError("at least one variable is required")
        self.k = k
        self.names = [f"{prefix}{s}" for s in range(1, k + 1)]
        self.ring = PolyRing(",".join(self.names), QQ, grlex)
        self.gens: Tuple[PolyElement, ...] = self.ring.gens

    @property
    def zero(self) -> PolyElement:
        return self.ring.zero

    @property
    def one(self) -> PolyElement:
        return self.ring.one

    def const(self, value) -> PolyElement:
        return self.ring.ground_new(to_qq(value))

    def var(self, s: int) -> PolyElement:
        """The variable q_s, 1-based"""
        if not 1 <= s <= self.k:
            raise DimensionError(f"variable q{s} out of range 1..{self.k}")
        return self.gens[s - 1]

    def from_terms(self, terms: Dict[Tuple[int, ...], object]) -> PolyElement:
        return self.ring({exps: to_qq(c) for exps, c in terms.items() if Fraction(c)})

    def linear(self, coefficients: Sequence[Fraction], constant: Fraction = Fraction(0)) -> PolyElement:
        """constant + sum c_s q_s"""
        out = self.const(constant)
        for gen, c in zip(self.gens, coefficients):
            if c:
                out += gen * to_qq(c)
        return out


@lru_cache(maxsize=None)
def get_context(k: int) -> PolyContext:
    return PolyContext(k)


# polynomial helpers


def total_degree(p: PolyElement) -> Optional[int]:
    """Maximal total degree, None for the zero polynomial"""
    if not p:
        return None
    return max(sum(monom) for monom in p.keys())


def constant_term(p: PolyElement) -> Fraction:
    return from_qq(p.get(p.ring.zero_monom, QQ.zero))


def coefficient(p: PolyElement, exps: Sequence[int]) -> Fraction:
    return from_qq(p.get(tuple(exps), QQ.zero))


def poly_arith(a: PolyElement, b: Optional[PolyElement], op: str, var: Optional[int] = None) -> PolyElement:
    """
    Ring operations on polynomials of one context

    Args:
        a, b: operands (b is ignored for partial_derivative)
        op: add, sub, mul or partial_derivative
        var: 1-based variable index for partial_derivative
    """
    if op == "partial_derivative":
        if var is None or not 1 <= var <= a.ring.ngens:
            raise DimensionError(f"variable index {var} out of range")
        return a.diff(a.ring.gens[var - 1])
    if b is None or b.ring != a.ring:
        raise DimensionError("operands belong to different rings")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def weighted_substitute(p: PolyElement, weights: Sequence[int]) -> Set[int]:
    """
    Weighted degrees of the terms of p

    p is quasi-homogeneous of weight d iff the result is {d}; the zero
    polynomial yields the empty set.
    """
    if len(weights) != p.ring.ngens:
        raise DimensionError(f"{len(weights)} weights for {p.ring.ngens} variables")
    if not p:
        return set()
    return {sum(w * e for w, e in zip(weights, monom)) for monom in p.keys()}


def is_quasi_homogeneous(p: PolyElement, weights: Sequence[int], degree: int) -> bool:
    return weighted_substitute(p, weights) <= {degree}


def rescale(p: PolyElement, factors: Sequence[Fraction]) -> PolyElement:
    """Substitute q_s -> c_s q_s"""
    qq_factors = [to_qq(c) for c in factors]
    terms = {}
    for monom, coeff in p.items():
        for c, e in zip(qq_factors, monom):
            if e:
                coeff = coeff * c**e
        terms[monom] = coeff
    return p.ring(terms)


def poly_to_json(p: PolyElement) -> List[Dict[str, object]]:
    return [{"coeff": _qq_text(c), "exps": list(m)} for m, c in p.terms()]


def poly_from_json(ctx: PolyContext, data: Iterable[Dict[str, object]]) -> PolyElement:
    terms = {tuple(int(e) for e in item["exps"]): Fraction(str(item["coeff"])) for item in data}
    for exps in terms:
        if len(exps) != ctx.k:
            raise DimensionError(f"exponent vector {exps} for {ctx.k} variables")
    return ctx.from_terms(terms)


def _qq_text(c) -> str:
    value = from_qq(c)
    return f"{value.numerator}/{value.denominator}"


def _monomial_text(names: Sequence[str], monom: Sequence[int], latex: bool) -> str:
    factors = []
    for name, e in zip(names, monom):
        if not e:
            continue
        base = f"{name[0]}_{{{name[1:]}}}" if latex else name
        factors.append(base if e == 1 else (f"{base}^{{{e}}}" if latex else f"{base}^{e}"))
    return (" " if latex else "*").join(factors)


def _coefficient_text(value: Fraction, latex: bool) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    if latex:
        return f"\\frac{{{value.numerator}}}{{{value.denominator}}}"
    return f"{value.numerator}/{value.denominator}"


def format_poly(p: PolyElement, latex: bool = False) -> str:
    """Terms in graded-lex order, e.g. 375/2*q1^3 + 10*q1*q5"""
    if not p:
        return "0"
    names = [str(s) for s in p.ring.symbols]
    pieces = []
    for monom, coeff in p.terms():
        value = from_qq(coeff)
        mono = _monomial_text(names, monom, latex)
        mag = abs(value)
        if not mono:
            body = _coefficient_text(mag, latex)
        elif mag == 1:
            body = mono
        else:
            body = _coefficient_text(mag, latex) + (" " if latex else "*") + mono
        pieces.append(("-" if value < 0 else "+", body))
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# fraction field


class RatFunc:
    """Reduced fraction num/den with den monic under graded-lex"""

    __slots__ = ("num", "den")

    def __init__(self, num: PolyElement, den: Optional[PolyElement] = None, reduced: bool = False):
        ring = num.ring
        if den is None:
            den = ring.one
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = ring.zero, ring.one
            return
        if not reduced and not (den.is_ground):
            _, num, den = num.cofactors(den)
        lc = den.LC
        if lc != ring.domain.one:
            inv = ring.domain.one / lc
            num, den = num.mul_ground(inv), den.mul_ground(inv)
        self.num, self.den = num, den

    @classmethod
    def of(cls, p: PolyElement) -> "RatFunc":
        return cls(p, None, reduced=True)

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    @property
    def is_polynomial(self) -> bool:
        return self.den == self.ring.one

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if self.is_polynomial and other.is_polynomial:
            return RatFunc.of(self.num + other.num)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduced=True)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if self.is_polynomial and other.is_polynomial:
            return RatFunc.of(self.num * other.num)
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def diff(self, var: int) -> "RatFunc":
        gen = self.ring.gens[var - 1]
        if self.is_polynomial:
            return RatFunc.of(self.num.diff(gen))
        top = self.num.diff(gen) * self.den - self.num * self.den.diff(gen)
        return RatFunc(top, self.den**2)

    def rescale(self, factors: Sequence[Fraction]) -> "RatFunc":
        return RatFunc(rescale(self.num, factors), rescale(self.den, factors))

    def degree(self) -> Optional[int]:
        """Total degree when polynomial, else None"""
        return total_degree(self.num) if self.is_polynomial else None

    def at_zero(self) -> Fraction:
        den0 = constant_term(self.den)
        if not den0:
            raise ZeroDivisionError("denominator vanishes at the origin")
        return constant_term(self.num) / den0

    def cross_equal(self, other: "RatFunc") -> bool:
        return self.num * other.den == other.num * self.den

    def __eq__(self, other) -> bool:
        if isinstance(other, PolyElement):
            other = RatFunc.of(other)
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.num.items())), tuple(sorted(self.den.items()))))

    def to_json(self) -> Dict[str, object]:
        return {"num": poly_to_json(self.num), "den": poly_to_json(self.den)}

    def format(self, latex: bool = False) -> str:
        if self.is_polynomial:
            return format_poly(self.num, latex)
        if latex:
            return f"\\frac{{{format_poly(self.num, True)}}}{{{format_poly(self.den, True)}}}"
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    def __repr__(self) -> str:
        return f"RatFunc({self.format()})"


def denominator_factors(r: RatFunc) -> List[Tuple[PolyElement, int]]:
    """
    Square-free split of the reduced denominator

    Returns:
        [(monic factor, multiplicity)], empty for polynomials
    """
    if r.is_polynomial:
        return []
    _, factors = r.den.sqf_list()
    out = [(factor.monic(), power) for factor, power in factors if not factor.is_ground]
    return sorted(out, key=lambda item: (total_degree(item[0]) or 0, format_poly(item[0])))


# matrices


class PolyMatrix:
    """Rectangular matrix of PolyElements of one context"""

    def __init__(self, ctx: PolyContext, rows: Sequence[Sequence[PolyElement]]):
        self.ctx = ctx
        self.rows = [list(row) for row in rows]
        widths = {len(row) for row in self.rows}
        if len(widths) > 1:
            raise DimensionError("ragged polynomial matrix")
        self.shape = (len(self.rows), widths.pop() if widths else 0)

    @classmethod
    def identity(cls, ctx: PolyContext, size: int) -> "PolyMatrix":
        return cls(ctx, [[ctx.one if i == j else ctx.zero for j in range(size)] for i in range(size)])

    @classmethod
    def constant(cls, ctx: PolyContext, rows: Sequence[Sequence[Fraction]]) -> "PolyMatrix":
        return cls(ctx, [[ctx.const(x) for x in row] for row in rows])

    def __getitem__(self, index: Tuple[int, int]) -> PolyElement:
        i, j = index
        return self.rows[i][j]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ctx, [list(col) for col in zip(*self.rows)]) if self.rows else self

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape[1] != other.shape[0]:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.ctx.zero
        out = [[zero] * other.shape[1] for _ in range(self.shape[0])]
        for i, row in enumerate(self.rows):
            acc = out[i]
            for t, a in enumerate(row):
                if not a:
                    continue
                for j, b in enumerate(other.rows[t]):
                    if b:
                        acc[j] = acc[j] + a * b
        return PolyMatrix(self.ctx, out)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix(self.ctx, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix(self.ctx, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, factor) -> "PolyMatrix":
        c = to_qq(factor)
        return PolyMatrix(self.ctx, [[a * c for a in row] for row in self.rows])

    def map(self, fn: Callable[[PolyElement], PolyElement]) -> "PolyMatrix":
        return PolyMatrix(self.ctx, [[fn(a) for a in row] for row in self.rows])

    def at_zero(self) -> List[List[Fraction]]:
        return [[constant_term(a) for a in row] for row in self.rows]

    def is_zero(self) -> bool:
        return not any(a for row in self.rows for a in row)

    def trace(self) -> PolyElement:
        out = self.ctx.zero
        for i in range(min(self.shape)):
            out += self.rows[i][i]
        return out

    def to_rat(self) -> "RatMatrix":
        return RatMatrix(self.ctx, [[RatFunc.of(a) for a in row] for row in self.rows])

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self.rows == other.rows


class RatMatrix:
    """Rectangular matrix of RatFuncs"""

    def __init__(self, ctx: PolyContext, rows: Sequence[Sequence[RatFunc]]):
        self.ctx = ctx
        self.rows = [list(row) for row in rows]
        widths = {len(row) for row in self.rows}
        if len(widths) > 1:
            raise DimensionError("ragged rational matrix")
        self.shape = (len(self.rows), widths.pop() if widths else 0)

    def __getitem__(self, index: Tuple[int, int]) -> RatFunc:
        i, j = index
        return self.rows[i][j]

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        return RatMatrix(self.ctx, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape[1] != other.shape[0]:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        zero = RatFunc.of(self.ctx.zero)
        out = []
        for row in self.rows:
            acc = [zero] * other.shape[1]
            for t, a in enumerate(row):
                if a.is_zero():
                    continue
                for j, b in enumerate(other.rows[t]):
                    if not b.is_zero():
                        acc[j] = acc[j] + a * b
            out.append(acc)
        return RatMatrix(self.ctx, out)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.ctx, [list(col) for col in zip(*self.rows)]) if self.rows else self

    def map(self, fn: Callable[[RatFunc], RatFunc]) -> "RatMatrix":
        return RatMatrix(self.ctx, [[fn(a) for a in row] for row in self.rows])

    def is_polynomial(self) -> bool:
        return all(a.is_polynomial for row in self.rows for a in row)

    def is_antisymmetric(self) -> bool:
        size = self.shape[0]
        if self.shape != (size, size):
            return False
        return all(self.rows[i][j] == -self.rows[j][i] for i in range(size) for j in range(i, size))

    def at_zero(self) -> List[List[Fraction]]:
        return [[a.at_zero() for a in row] for row in self.rows]

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMatrix) and self.rows == other.rows


# determinants and inverses


def cofactor_det(m: PolyMatrix) -> PolyElement:
    """Laplace expansion along the first row; reference for small sizes"""
    size = m.shape[0]
    if size == 0:
        return m.ctx.one
    if size == 1:
        return m.rows[0][0]
    total = m.ctx.zero
    for j, a in enumerate(m.rows[0]):
        if not a:
            continue
        minor = PolyMatrix(m.ctx, [row[:j] + row[j + 1:] for row in m.rows[1:]])
        term = a * cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _pivot_row(rows: List[List[PolyElement]], k: int) -> Optional[int]:
    """Row >= k with a nonzero entry in column k, fewest terms first"""
    best, best_key = None, None
    for r in range(k, len(rows)):
        entry = rows[r][k]
        if not entry:
            continue
        key = (0 if entry.is_ground else 1, len(entry), total_degree(entry))
        if best_key is None or key < best_key:
            best, best_key = r, key
    return best


def bareiss_gauss_jordan(m: PolyMatrix, augment: bool = True) -> Tuple[PolyElement, PolyElement, Optional[PolyMatrix]]:
    """
    Fraction-free Gauss-Jordan elimination on [M | I]

    Every division by the previous pivot is exact. The final left block is
    delta * I and the right block delta * M^-1, with det M = sign * delta.
    Without augmentation only the forward pass runs (plain Bareiss).

    Returns:
        (det M, delta, delta * M^-1 or None when not augmented)

    Raises:
        SingularMatrixError: det M vanishes identically
    """
    size = m.shape[0]
    if m.shape != (size, size):
        raise DimensionError(f"square matrix required, got {m.shape}")
    ctx = m.ctx
    width = 2 * size if augment else size
    rows = [
        list(row) + ([ctx.one if i == j else ctx.zero for j in range(size)] if augment else [])
        for i, row in enumerate(m.rows)
    ]
    prev = ctx.one
    sign = 1
    for k in range(size):
        pivot = _pivot_row(rows, k)
        if pivot is None:
            raise SingularMatrixError(f"determinant vanishes identically (column {k + 1})")
        if pivot != k:
            rows[k], rows[pivot] = rows[pivot], rows[k]
            sign = -sign
        row_k = rows[k]
        pk = row_k[k]
        logger.debug("bareiss step {}: pivot with {} terms", k + 1, len(pk))
        exact = prev != ctx.one
        for i in range(0 if augment else k + 1, size):
            if i == k:
                continue
            row_i = rows[i]
            factor = row_i[k]
            for j in range(0 if augment else k, width):
                if j == k:
                    row_i[j] = ctx.zero
                    continue
                value = pk * row_i[j] if row_i[j] else ctx.zero
                if factor and row_k[j]:
                    value = value - factor * row_k[j]
                row_i[j] = value.exquo(prev) if exact and value else value
        prev = pk
    det = prev if sign > 0 else -prev
    if not augment:
        return det, prev, None
    return det, prev, PolyMatrix(ctx, [row[size:] for row in rows])


def bareiss_det(m: PolyMatrix) -> PolyElement:
    return bareiss_gauss_jordan(m, augment=False)[0]


class InverseResult(BaseModel):
    """Exact inverse of a polynomial matrix"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    inverse: RatMatrix = Field(..., description="M^-1 over the fraction field")
    det: Any = Field(..., description="det M as a PolyElement")
    method: str = Field(..., description="unipotent or bareiss")
    det_constant: bool = Field(..., description="det is a nonzero constant")
    singular_at_origin: bool = Field(default=False, description="det(0) = 0 while det is not identically 0")


def _unipotent_inverse(m: PolyMatrix) -> Optional[Tuple[PolyMatrix, Fraction]]:
    """
    Inverse when M = C0 (I + N) with N nilpotent, C0 = M(0)

    Returns None when C0 is singular or N is not nilpotent. A nonzero trace
    of some power of N rules out nilpotency early.
    """
    size = m.shape[0]
    c0 = m.at_zero()
    det0 = linalg.det(c0)
    if not det0:
        return None
    ctx = m.ctx
    c0_inv = PolyMatrix.constant(ctx, linalg.inverse(c0))
    nilpotent_part = c0_inv @ (m - PolyMatrix.constant(ctx, c0))
    series = PolyMatrix.identity(ctx, size)
    power = PolyMatrix.identity(ctx, size)
    for step in range(1, size + 1):
        power = power @ nilpotent_part
        if power.is_zero():
            logger.debug("unipotent inverse: nilpotency index {}", step)
            return series @ c0_inv, det0
        if power.trace():
            return None
        series = series - power if step % 2 else series + power
    return None


def rat_inverse(m: PolyMatrix) -> InverseResult:
    """
    Exact inverse and determinant of a square polynomial matrix

    Args:
        m: square polynomial matrix with det not identically zero

    Returns:
        InverseResult; entries are polynomial whenever det is constant

    Raises:
        SingularMatrixError: det M is identically zero
    """
    size = m.shape[0]
    if m.shape != (size, size):
        raise DimensionError(f"square matrix required, got {m.shape}")
    ctx = m.ctx
    fast = _unipotent_inverse(m)
    if fast is not None:
        inverse, det0 = fast
        return InverseResult(inverse=inverse.to_rat(), det=ctx.const(det0), method="unipotent", det_constant=True)

    det, delta, scaled = bareiss_gauss_jordan(m)
    inverse = RatMatrix(ctx, [[RatFunc(a, delta) for a in row] for row in scaled.rows])
    singular_at_origin = not constant_term(det)
    if singular_at_origin:
        logger.warning("det vanishes at the origin; inverse only valid off the hypersurface det = 0")
    return InverseResult(
        inverse=inverse,
        det=det,
        method="bareiss",
        det_constant=det.is_ground,
        singular_at_origin=singular_at_origin,
    )
