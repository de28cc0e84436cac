"""
Dirac constraint formula on the slice e + n^perp: constraint matrices,
transverse Poisson tensor, degree, Jacobi identity and weight grading
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict

from algebra import linalg
from algebra.errors import ConsistencyError, DimensionError, InvalidTransversalError, NotAntisymmetricError
from algebra.lie import LieElement, bracket, pairing, structure_constants
from algebra.polyring import (
    PolyContext,
    PolyMatrix,
    RatFunc,
    RatMatrix,
    format_poly,
    get_context,
    rat_inverse,
    total_degree,
    weighted_substitute,
)
from models.reports import GradingItem, GradingReport, JacobiReport
from transverse.complement import Complement, DualData, dual_basis
from transverse.orbit import GradedCentralizer, Sl2Triplet


class TransverseStructure(BaseModel):
    """Constraint matrices in q_1..q_k and, once computed, the tensors"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    ctx: PolyContext
    a: PolyMatrix
    b: PolyMatrix
    c: PolyMatrix
    d: PolyMatrix
    z_weights: List[int]
    x_weights: Optional[List[int]] = None
    det_c: Any = None
    det_c_constant: Optional[bool] = None
    singular_at_origin: bool = False
    inverse_method: Optional[str] = None
    lambda_prime: Optional[RatMatrix] = None
    lambda_full: Optional[RatMatrix] = None
    degree: Optional[int] = None
    degree_prime: Optional[int] = None
    polynomial: Optional[bool] = None
    quadratic: Optional[bool] = None
    quasi_homogeneous: Optional[bool] = None
    lambda_equals_prime: Optional[bool] = None

    @property
    def k(self) -> int:
        return self.ctx.k

    @property
    def graded(self) -> bool:
        return self.x_weights is not None


def _point_pairings(ctx: PolyContext, e: LieElement, d: DualData):
    """y -> <e + sum q_s Zbar_s, y> as a linear polynomial"""

    def evaluate(y: LieElement):
        if y.is_zero():
            return ctx.zero
        constant = pairing(e, y, d.form_scale)
        coefficients = [pairing(zb, y, d.form_scale) for zb in d.z_bar]
        return ctx.linear(coefficients, constant)

    return evaluate


def assemble(e: LieElement, z: GradedCentralizer, c: Complement, d: DualData) -> TransverseStructure:
    """
    C(l,m) = <x, [X_l, X_m]>, D(l,j) = <x, [X_l, Z_j]>, A(i,j) = <x, [Z_i, Z_j]>
    at x = e + sum q_s Zbar_s, and B = D^T

    Raises:
        InvalidTransversalError: C(0) is singular
        ConsistencyError: A(0) or D(0) is nonzero
    """
    k, p = z.dim, c.dim
    if len(d.z_bar) != k or len(d.x_bar) != p:
        raise DimensionError("dual data does not match the centralizer and complement")
    ctx = get_context(k)
    at = _point_pairings(ctx, e, d)
    zero = ctx.zero

    c_rows = [[zero] * p for _ in range(p)]
    for l in range(p):
        for m in range(l + 1, p):
            value = at(bracket(c.basis[l], c.basis[m]))
            c_rows[l][m] = value
            c_rows[m][l] = -value
    d_rows = [[at(bracket(x, zz)) for zz in z.basis] for x in c.basis]
    a_rows = [[zero] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            value = at(bracket(z.basis[i], z.basis[j]))
            a_rows[i][j] = value
            a_rows[j][i] = -value

    c_matrix = PolyMatrix(ctx, c_rows)
    d_matrix = PolyMatrix(ctx, d_rows)
    a_matrix = PolyMatrix(ctx, a_rows)
    if not linalg.det(c_matrix.at_zero()):
        raise InvalidTransversalError("C(0) is singular: the complement is not transversal at e")
    if any(v for row in d_matrix.at_zero() for v in row) or any(v for row in a_matrix.at_zero() for v in row):
        raise ConsistencyError("A(0) and D(0) must vanish")
    logger.debug("assembled C {}x{}, D {}x{}, A {}x{}", p, p, p, k, k, k)
    return TransverseStructure(
        ctx=ctx,
        a=a_matrix,
        b=d_matrix.transpose(),
        c=c_matrix,
        d=d_matrix,
        z_weights=list(z.weights),
        x_weights=list(c.weights) if c.weights is not None else None,
    )


def tensor_degree(m: RatMatrix) -> Optional[int]:
    """Maximal total degree of the entries; None when some entry is not polynomial"""
    if not m.is_polynomial():
        return None
    degrees = [total_degree(a.num) for row in m.rows for a in row if not a.is_zero()]
    return max(degrees) if degrees else 0


def transverse_tensor(ts: TransverseStructure) -> TransverseStructure:
    """
    Lambda' = B C^-1 D and Lambda = A + Lambda'

    Raises:
        SingularMatrixError: det C vanishes identically
    """
    inverse = rat_inverse(ts.c)
    if inverse.inverse.is_polynomial():
        c_inv = PolyMatrix(ts.ctx, [[a.num for a in row] for row in inverse.inverse.rows])
        prime_poly = ts.b @ (c_inv @ ts.d)
        lambda_prime = prime_poly.to_rat()
        lambda_full = (ts.a + prime_poly).to_rat()
    else:
        d_rat = ts.d.to_rat()
        lambda_prime = ts.b.to_rat() @ (inverse.inverse @ d_rat)
        lambda_full = ts.a.to_rat() + lambda_prime
    degree = tensor_degree(lambda_full)
    degree_prime = tensor_degree(lambda_prime)
    polynomial = degree is not None and degree_prime is not None
    logger.info("transverse tensor: inverse via {}, degree {}, degree of Lambda' {}",
                inverse.method, degree, degree_prime)
    return ts.model_copy(update={
        "det_c": inverse.det,
        "det_c_constant": inverse.det_constant,
        "singular_at_origin": inverse.singular_at_origin,
        "inverse_method": inverse.method,
        "lambda_prime": lambda_prime,
        "lambda_full": lambda_full,
        "degree": degree,
        "degree_prime": degree_prime,
        "polynomial": polynomial,
        "quadratic": polynomial and degree <= 2,
        "lambda_equals_prime": ts.a.is_zero(),
    })


def jacobi_check(m: RatMatrix) -> JacobiReport:
    """
    Jacobi identity of the bivector with matrix m in coordinates q_1..q_k

    All entries are put over a common denominator delta; the cyclic sum is
    multiplied by delta^3 so the residual is polynomial.

    Raises:
        NotAntisymmetricError: m is not antisymmetric
    """
    size = m.shape[0]
    if not m.is_antisymmetric():
        raise NotAntisymmetricError("Jacobi check needs an antisymmetric matrix")
    ring = m.ctx.ring
    if ring.ngens != size:
        raise DimensionError(f"{size}x{size} matrix over {ring.ngens} variables")
    gens = ring.gens
    delta = ring.one
    for row in m.rows:
        for a in row:
            if not a.is_polynomial:
                delta = delta.lcm(a.den).monic()
    nums = [[a.num if a.is_polynomial and delta == ring.one else a.num * delta.exquo(a.den) for a in row]
            for row in m.rows]
    polynomial = delta == ring.one
    delta_diff = [delta.diff(g) for g in gens]

    grads: Dict[Tuple[int, int], List[Any]] = {}
    for a in range(size):
        for b in range(a + 1, size):
            entry = nums[a][b]
            if polynomial:
                grads[(a, b)] = [entry.diff(g) for g in gens]
            else:
                grads[(a, b)] = [delta * entry.diff(g) - entry * dd for g, dd in zip(gens, delta_diff)]

    def grad(a: int, b: int) -> List[Any]:
        if a < b:
            return grads[(a, b)]
        return [-x for x in grads[(b, a)]]

    support = [[l for l in range(size) if nums[i][l]] for i in range(size)]
    checked = 0
    for i in range(size):
        for j in range(i + 1, size):
            for k in range(j + 1, size):
                checked += 1
                residual = ring.zero
                for first, pair in ((i, (j, k)), (j, (k, i)), (k, (i, j))):
                    g = grad(*pair)
                    for l in support[first]:
                        if g[l]:
                            residual += nums[first][l] * g[l]
                if residual:
                    logger.error("Jacobi identity fails at ({}, {}, {})", i + 1, j + 1, k + 1)
                    return JacobiReport(passed=False, triples_checked=checked,
                                        witness=[i + 1, j + 1, k + 1], residual=format_poly(residual))
    logger.debug("Jacobi identity holds on {} triples", checked)
    return JacobiReport(passed=True, triples_checked=checked)


def lie_poisson_matrix(basis: Sequence[LieElement]) -> RatMatrix:
    """Linear Poisson matrix sum_k c_ij^k q_k of the Lie algebra spanned by basis"""
    ctx = get_context(len(basis))
    constants = structure_constants(basis)
    rows = [[RatFunc.of(ctx.linear(coords)) for coords in row] for row in constants]
    return RatMatrix(ctx, rows)


def _check_weights(name: str, matrix_rows, expected, weights: Sequence[int], items: List[GradingItem]) -> bool:
    ok = True
    for r, row in enumerate(matrix_rows):
        for col, entry in enumerate(row):
            target = expected(r, col)
            if isinstance(entry, RatFunc):
                if not entry.is_polynomial:
                    items.append(GradingItem(matrix=name, row=r + 1, col=col + 1, expected_weight=target, found_weights=[]))
                    ok = False
                    continue
                entry = entry.num
            found = weighted_substitute(entry, weights)
            if not found <= {target}:
                items.append(GradingItem(matrix=name, row=r + 1, col=col + 1, expected_weight=target,
                                         found_weights=sorted(found)))
                ok = False
    return ok


def grading_report(ts: TransverseStructure) -> GradingReport:
    """
    Quasi-homogeneity checks under the variable weights w_s = 2 + n_s

    C entries must have weight 2 + nu_l + nu_m, D entries 2 + nu_l + n_j,
    A, Lambda and Lambda' entries n_i + n_j + 2, and det C must be a nonzero
    constant. Not applicable when the complement is not graded.
    """
    if ts.x_weights is None or ts.lambda_full is None:
        return GradingReport(applicable=False)
    nu, nz = ts.x_weights, ts.z_weights
    weights = [2 + w for w in nz]
    items: List[GradingItem] = []
    c_ok = _check_weights("C", ts.c.rows, lambda l, m: 2 + nu[l] + nu[m], weights, items)
    d_ok = _check_weights("D", ts.d.rows, lambda l, j: 2 + nu[l] + nz[j], weights, items)
    a_ok = _check_weights("A", ts.a.rows, lambda i, j: nz[i] + nz[j] + 2, weights, items)
    full_ok = _check_weights("Lambda", ts.lambda_full.rows, lambda i, j: nz[i] + nz[j] + 2, weights, items)
    prime_ok = _check_weights("Lambda'", ts.lambda_prime.rows, lambda i, j: nz[i] + nz[j] + 2, weights, items)
    det_ok = bool(ts.det_c_constant) and bool(ts.det_c)
    report = GradingReport(
        applicable=True,
        det_constant=det_ok,
        c_quasi_homogeneous=c_ok,
        d_quasi_homogeneous=d_ok,
        a_quasi_homogeneous=a_ok,
        lambda_weights_ok=full_ok,
        lambda_prime_weights_ok=prime_ok,
        variable_weights=weights,
        violations=items,
    )
    if not report.passed:
        logger.warning("grading violations: {}", len(items))
    return report


def vanishes_at_origin(m: RatMatrix) -> Optional[bool]:
    """None when some denominator vanishes at the origin"""
    try:
        return all(v == 0 for row in m.at_zero() for v in row)
    except ZeroDivisionError:
        return None


class TransverseRun(BaseModel):
    """Everything computed for one orbit and one complement"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    triplet: Sl2Triplet
    centralizer: GradedCentralizer
    complement: Complement
    dual: DualData
    structure: TransverseStructure
    jacobi: JacobiReport
    grading: GradingReport

    @property
    def consistent(self) -> bool:
        """Every verdict agrees with the flags of the complement"""
        ts = self.structure
        checks = [
            self.jacobi.passed,
            ts.lambda_full.is_antisymmetric(),
            ts.lambda_prime.is_antisymmetric(),
            vanishes_at_origin(ts.lambda_full) is not False,
        ]
        if self.complement.ad_h_invariant:
            checks += [bool(ts.polynomial), self.grading.passed]
        if self.complement.subalgebra and ts.polynomial:
            checks.append(bool(ts.quadratic))
        return all(checks)


def compute_transverse(t: Sl2Triplet, z: GradedCentralizer, c: Complement,
                       form_scale: Fraction = Fraction(1)) -> TransverseRun:
    """Dual basis, constraint matrices, tensors, Jacobi identity and grading"""
    dual = dual_basis(z, c, form_scale)
    structure = transverse_tensor(assemble(t.e, z, c, dual))
    jacobi = jacobi_check(structure.lambda_full)
    grading = grading_report(structure)
    if grading.applicable:
        structure = structure.model_copy(update={"quasi_homogeneous": grading.passed})
    return TransverseRun(triplet=t, centralizer=z, complement=c, dual=dual,
                         structure=structure, jacobi=jacobi, grading=grading)
