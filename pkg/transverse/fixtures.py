"""
Complement files, coordinate alignment against reference dual bases, and
the shipped reference fixtures
"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from sympy import SympifyError, fraction, sympify, together
from sympy.polys.polyerrors import CoercionFailed

from algebra.errors import ComplementFileError, ConsistencyError, DimensionError
from algebra.lie import LieElement
from algebra.polyring import PolyContext, PolyMatrix, RatFunc, RatMatrix, coefficient, denominator_factors, rescale
from models.config import FormNormalization
from models.partition import Partition
from transverse.complement import Complement, DualData, custom_complement
from transverse.dirac import TransverseRun, compute_transverse
from transverse.orbit import GradedCentralizer, Sl2Triplet, centralizer, centralizer_from_vectors, triplet_from_partition

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"

# name -> file under FIXTURE_DIR
REFERENCE_FIXTURES: Dict[str, str] = {
    "subregular_graded": "n.json",
    "subregular_graded_prime": "n_prime.json",
    "subregular_ungraded": "n1.json",
    "sl5_32_graded": "sl5_32_graded.json",
}

ElementData = Dict[str, str]


class ExpectedValues(BaseModel):
    """Reference values, written in the coordinates of dual_reference"""

    degree: Optional[int] = None
    degree_prime: Optional[int] = None
    polynomial: Optional[bool] = None
    graded: Optional[bool] = None
    lambda_equals_prime: Optional[bool] = None
    det_c_constant: Optional[bool] = None
    c: Optional[List[List[str]]] = Field(None, description="Full C matrix, row by row")
    d: Optional[List[List[str]]] = Field(None, description="Full D matrix, row by row")
    lambda_prime: Dict[str, str] = Field(default_factory=dict, description='"i,j" -> entry, 1-based')
    lambda_prime_terms: Dict[str, Dict[str, str]] = Field(
        default_factory=dict, description='"i,j" -> {monomial: coefficient}, for entries pinned term by term'
    )
    denominator_base: Optional[str] = Field(None, description="Every reduced denominator is a power of this")


class ComplementFile(BaseModel):
    """
    On-disk complement description

    Elements are objects mapping basis labels ("E(i,j)", "H(i)") to exact
    rationals written as strings, against the dominant triplet built from the
    partition.
    """

    model_config = ConfigDict(extra="forbid")

    n: int = Field(..., ge=2)
    partition: List[int]
    complement: List[ElementData]
    centralizer: Optional[List[ElementData]] = None
    dual_reference: Optional[List[ElementData]] = None
    description: str = ""
    regrade: bool = True
    expected: Optional[ExpectedValues] = None


class LoadedComplement(BaseModel):
    """A complement file resolved against its orbit"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    source: ComplementFile
    triplet: Sl2Triplet
    centralizer: GradedCentralizer
    complement: Complement
    reference: Optional[List[LieElement]] = None


def _elements(n: int, data: Sequence[ElementData], what: str) -> List[LieElement]:
    out = []
    for index, item in enumerate(data):
        try:
            out.append(LieElement.from_json(n, item))
        except (ValueError, ZeroDivisionError, DimensionError) as exc:
            raise ComplementFileError(f"{what}[{index}] is not an element of sl_{n}: {exc}") from exc
    return out


def parse_complement_file(text: str) -> ComplementFile:
    """
    Raises:
        ComplementFileError: not JSON or not matching the schema
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplementFileError(f"malformed complement JSON: {exc}") from exc
    if isinstance(raw, list):
        raise ComplementFileError("a bare element list needs n and partition; use the object form")
    try:
        return ComplementFile.model_validate(raw)
    except ValidationError as exc:
        raise ComplementFileError(f"complement file does not match the schema: {exc.error_count()} errors") from exc


def read_complement_file(path: Union[str, Path]) -> ComplementFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ComplementFileError(f"cannot read {path}: {exc}") from exc
    logger.debug("reading complement file {}", path)
    return parse_complement_file(text)


def resolve(cf: ComplementFile, n: Optional[int] = None, partition: Optional[Partition] = None) -> LoadedComplement:
    """
    Build the triplet of the file's orbit and validate its bases

    Raises:
        ComplementFileError: orbit differs from the requested one
        RankDefectError, DimensionError: bases are not valid
    """
    file_partition = Partition.of(cf.partition, cf.n)
    if n is not None and n != cf.n:
        raise ComplementFileError(f"file describes sl_{cf.n}, sl_{n} requested")
    if partition is not None and partition != file_partition:
        raise ComplementFileError(f"file describes the orbit {file_partition}, {partition} requested")
    t = triplet_from_partition(file_partition)
    if cf.centralizer is not None:
        z = centralizer_from_vectors(_elements(cf.n, cf.centralizer, "centralizer"), t)
    else:
        z = centralizer(t)
    c = custom_complement(_elements(cf.n, cf.complement, "complement"), t, z, regrade=cf.regrade)
    reference = None
    if cf.dual_reference is not None:
        reference = _elements(cf.n, cf.dual_reference, "dual_reference")
        if len(reference) != z.dim:
            raise ComplementFileError(f"{len(reference)} reference dual vectors, expected {z.dim}")
    return LoadedComplement(source=cf, triplet=t, centralizer=z, complement=c, reference=reference)


def align_coordinates(dual: DualData, reference: Sequence[LieElement]) -> List[Fraction]:
    """
    Scaling c with reference_s = c_s * z_bar_s

    Raises:
        ConsistencyError: some reference vector is not a nonzero multiple of
            the matching dual vector
    """
    if len(reference) != len(dual.z_bar):
        raise DimensionError(f"{len(reference)} reference vectors for {len(dual.z_bar)} dual vectors")
    factors = []
    for s, (ref, zb) in enumerate(zip(reference, dual.z_bar)):
        if zb.is_zero() or ref.is_zero():
            raise ConsistencyError(f"reference Z-bar{s + 1} is zero")
        pivot = zb.labels()[0]
        factor = ref.coefficient(pivot) / zb.coefficient(pivot)
        if not factor or ref != zb.scale(factor):
            raise ConsistencyError(f"reference Z-bar{s + 1} is not a multiple of the dual vector")
        factors.append(factor)
    if any(c != 1 for c in factors):
        logger.info("coordinates aligned with scaling {}", [str(c) for c in factors])
    return factors


def rescale_coordinates(m: Union[PolyMatrix, RatMatrix], factors: Sequence[Fraction]):
    """Substitute q_s -> c_s q_s in every entry"""
    if isinstance(m, PolyMatrix):
        return m.map(lambda p: rescale(p, factors))
    return m.map(lambda r: r.rescale(factors))


def parse_entry(ctx: PolyContext, text: str) -> RatFunc:
    """Rational function in q1..qk from text such as "q5**2 + 2*q2*q4*(2*q3-1)/(q3-1)" """
    try:
        num, den = fraction(together(sympify(text)))
        return RatFunc(ctx.ring.from_expr(num), ctx.ring.from_expr(den))
    except (SympifyError, CoercionFailed, ValueError, TypeError) as exc:
        raise ComplementFileError(f"cannot read expected entry {text!r}: {exc}") from exc


def parse_monomial(ctx: PolyContext, text: str) -> Tuple[int, ...]:
    """Exponent vector of a monic monomial such as "q1**2*q4" """
    p = parse_entry(ctx, text)
    if not p.is_polynomial or len(p.num) != 1 or coefficient(p.num, p.num.LM) != 1:
        raise ComplementFileError(f"{text!r} is not a monic monomial")
    return tuple(p.num.LM)


def parse_matrix(ctx: PolyContext, rows: Sequence[Sequence[str]]) -> RatMatrix:
    return RatMatrix(ctx, [[parse_entry(ctx, text) for text in row] for row in rows])


class Presentation(BaseModel):
    """Matrices of a run expressed in reference coordinates"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    scaling: List[Fraction]
    a: PolyMatrix
    c: PolyMatrix
    d: PolyMatrix
    lambda_prime: RatMatrix
    lambda_full: RatMatrix


def present(run: TransverseRun, scaling: Optional[Sequence[Fraction]] = None) -> Presentation:
    """Rescale the matrices of run for display and comparison; identity scaling by default"""
    ts = run.structure
    factors = list(scaling) if scaling is not None else [Fraction(1)] * ts.k
    if all(c == 1 for c in factors):
        return Presentation(scaling=factors, a=ts.a, c=ts.c, d=ts.d,
                            lambda_prime=ts.lambda_prime, lambda_full=ts.lambda_full)
    return Presentation(
        scaling=factors,
        a=rescale_coordinates(ts.a, factors),
        c=rescale_coordinates(ts.c, factors),
        d=rescale_coordinates(ts.d, factors),
        lambda_prime=rescale_coordinates(ts.lambda_prime, factors),
        lambda_full=rescale_coordinates(ts.lambda_full, factors),
    )


class FileRun(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    loaded: LoadedComplement
    run: TransverseRun
    presentation: Presentation


def run_complement_file(cf: ComplementFile, form: FormNormalization = FormNormalization.TRACE,
                        n: Optional[int] = None, partition: Optional[Partition] = None) -> FileRun:
    """Resolve a complement file, compute its transverse structure and align coordinates"""
    loaded = resolve(cf, n, partition)
    run = compute_transverse(loaded.triplet, loaded.centralizer, loaded.complement, form.scale(cf.n))
    scaling = None
    if loaded.reference is not None:
        try:
            scaling = align_coordinates(run.dual, loaded.reference)
        except ConsistencyError as exc:
            raise ComplementFileError(f"dual_reference does not match the complement: {exc}") from exc
    return FileRun(loaded=loaded, run=run, presentation=present(run, scaling))


def fixture_path(name: str) -> Path:
    try:
        return FIXTURE_DIR / REFERENCE_FIXTURES[name]
    except KeyError as exc:
        raise ComplementFileError(f"unknown fixture {name!r}") from exc


def load_fixture(name: str) -> ComplementFile:
    return read_complement_file(fixture_path(name))


def _compare_matrix(name: str, got: RatMatrix, want: RatMatrix, problems: List[str]) -> None:
    if got.shape != want.shape:
        problems.append(f"{name}: shape {got.shape}, expected {want.shape}")
        return
    for i, (row_got, row_want) in enumerate(zip(got.rows, want.rows)):
        for j, (a, b) in enumerate(zip(row_got, row_want)):
            if a != b:
                problems.append(f"{name}({i + 1},{j + 1}) = {a.format()}, expected {b.format()}")


def compare_with_expected(fr: FileRun) -> List[str]:
    """
    Mismatches between a file run and the file's expected values, in the
    coordinates of its dual_reference

    Returns:
        human-readable problems, empty when everything matches
    """
    expected = fr.loaded.source.expected
    run, pres = fr.run, fr.presentation
    ts = run.structure
    problems: List[str] = []
    if not run.jacobi.passed:
        problems.append(f"Jacobi identity fails at {run.jacobi.witness}")
    if expected is None:
        return problems
    flags = {
        "degree": ts.degree,
        "degree_prime": ts.degree_prime,
        "polynomial": ts.polynomial,
        "graded": run.complement.ad_h_invariant,
        "lambda_equals_prime": ts.lambda_equals_prime,
        "det_c_constant": ts.det_c_constant,
    }
    for name, value in flags.items():
        want = getattr(expected, name)
        if want is not None and value != want:
            problems.append(f"{name} = {value}, expected {want}")
    ctx = ts.ctx
    if expected.c is not None:
        _compare_matrix("C", pres.c.to_rat(), parse_matrix(ctx, expected.c), problems)
    if expected.d is not None:
        _compare_matrix("D", pres.d.to_rat(), parse_matrix(ctx, expected.d), problems)
    for key, text in sorted(expected.lambda_prime.items()):
        i, j = (int(x) for x in key.split(","))
        got, want = pres.lambda_prime[i - 1, j - 1], parse_entry(ctx, text)
        if got != want:
            problems.append(f"Lambda'({i},{j}) = {got.format()}, expected {want.format()}")
    for key, terms in sorted(expected.lambda_prime_terms.items()):
        i, j = (int(x) for x in key.split(","))
        got = pres.lambda_prime[i - 1, j - 1]
        if not got.is_polynomial:
            problems.append(f"Lambda'({i},{j}) = {got.format()} is not polynomial")
            continue
        for mono, text in sorted(terms.items()):
            value, want = coefficient(got.num, parse_monomial(ctx, mono)), Fraction(text)
            if value != want:
                problems.append(f"coefficient of {mono} in Lambda'({i},{j}) = {value}, expected {want}")
    if expected.denominator_base is not None:
        base = parse_entry(ctx, expected.denominator_base).num.monic()
        non_polynomial = 0
        for row in pres.lambda_prime.rows:
            for entry in row:
                factors = denominator_factors(entry)
                if not factors:
                    continue
                non_polynomial += 1
                if any(factor != base for factor, _ in factors):
                    problems.append(f"denominator of {entry.format()} is not a power of {expected.denominator_base}")
        if not non_polynomial:
            problems.append("no entry of Lambda' is genuinely rational")
    return problems
