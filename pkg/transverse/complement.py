"""
Complements of the centralizer: Im ad f, the block parabolic subalgebra
complements of the |p_i - p_j| <= 1 family, supplied bases, and dual bases
with respect to the invariant form
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from algebra import linalg
from algebra.errors import ConsistencyError, DimensionError, NonSemisimpleError, RankDefectError, UnsupportedFamilyError
from algebra.lie import (
    LieElement,
    all_labels,
    bracket,
    cartan,
    is_subalgebra,
    offdiag,
    pairing,
    to_rows,
    weight_decompose,
)
from models.partition import centralizer_dimension
from transverse.orbit import GradedCentralizer, Sl2Triplet, centralizer, classify, weight_labels


class Complement(BaseModel):
    """Ordered basis X_1..X_p of a complement of g^e with its analysis"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    basis: List[LieElement]
    origin: str = Field(..., description="imadf, conormal or file")
    ad_h_invariant: bool
    subalgebra: bool
    weights: Optional[List[int]] = Field(None, description="nu_j, present when every X_j is an ad h eigenvector")
    regraded: bool = False

    @property
    def dim(self) -> int:
        return len(self.basis)


class DualData(BaseModel):
    """Z-bar basis of the annihilator of the complement and X-bar basis"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    z_bar: List[LieElement]
    x_bar: List[LieElement]
    scaling: List[Fraction] = Field(..., description="c_s with z_bar_s = c_s * strict dual")
    form_scale: Fraction = Fraction(1)

    @property
    def is_strict(self) -> bool:
        return all(c == 1 for c in self.scaling)

    def rescaled(self, factors: Sequence[Fraction]) -> "DualData":
        if len(factors) != len(self.z_bar):
            raise DimensionError(f"{len(factors)} factors for {len(self.z_bar)} dual vectors")
        return DualData(
            z_bar=[z.scale(c) for z, c in zip(self.z_bar, factors)],
            x_bar=self.x_bar,
            scaling=[a * Fraction(c) for a, c in zip(self.scaling, factors)],
            form_scale=self.form_scale,
        )


def _label_key(x: LieElement) -> Tuple[int, int, int]:
    return min(x.labels())


def _graded_order(elements: Sequence[LieElement], t: Sl2Triplet) -> Tuple[List[LieElement], List[int]]:
    """Sort weight vectors by descending weight, then by their first label"""
    tagged = []
    for x in elements:
        weight = t.weight(x)
        if weight is None:
            raise ConsistencyError(f"{x} is not a weight vector")
        tagged.append((-weight, _label_key(x), x))
    tagged.sort(key=lambda item: (item[0], item[1]))
    return [item[2] for item in tagged], [-item[0] for item in tagged]


def check_direct(z: GradedCentralizer, vectors: Sequence[LieElement], n: int) -> None:
    """
    Raises:
        DimensionError: wrong number of vectors
        RankDefectError: g^e + span(vectors) is not direct
    """
    expected = n * n - 1 - z.dim
    if len(vectors) != expected:
        raise DimensionError(f"{len(vectors)} complement vectors, expected {expected}")
    labels = all_labels(n)
    rows = to_rows(list(z.basis) + list(vectors), labels)
    if linalg.rank(rows, len(labels)) == len(rows):
        return
    dependent = linalg.first_dependent(rows, len(labels))
    index = dependent - z.dim
    raise RankDefectError(f"X{index + 1} lies in g^e plus the span of X1..X{index}", index)


def _analyse(vectors: List[LieElement], t: Sl2Triplet, origin: str, regrade: bool) -> Complement:
    weights = [t.weight(x) for x in vectors]
    if all(w is not None for w in weights):
        return Complement(basis=vectors, origin=origin, ad_h_invariant=True,
                          subalgebra=is_subalgebra(vectors), weights=weights)
    try:
        blocks = weight_decompose(t.h, vectors)
    except NonSemisimpleError:
        return Complement(basis=vectors, origin=origin, ad_h_invariant=False,
                          subalgebra=is_subalgebra(vectors), weights=None)
    if not regrade:
        return Complement(basis=vectors, origin=origin, ad_h_invariant=True,
                          subalgebra=is_subalgebra(vectors), weights=None)
    logger.warning("complement span is ad h-stable but its basis mixes weights; regrading")
    graded = [x for m in sorted(blocks, reverse=True) for x in blocks[m]]
    ordered, weights = _graded_order(graded, t)
    return Complement(basis=ordered, origin=origin, ad_h_invariant=True,
                      subalgebra=is_subalgebra(ordered), weights=weights, regraded=True)


def im_ad_f(t: Sl2Triplet) -> Complement:
    """
    Image of ad f, built weight space by weight space

    Returns:
        graded complement, descending weight then label order
    """
    n = t.n
    spaces = weight_labels(t)
    labels = all_labels(n)
    basis: List[LieElement] = []
    for m in sorted(spaces, reverse=True):
        source = spaces.get(m + 2, [])
        if not source:
            continue
        images = [bracket(t.f, LieElement(n, {label: 1})) for label in source]
        reduced, _ = linalg.rref(to_rows(images, labels), len(labels))
        basis += [LieElement.from_vector(n, labels, row) for row in reduced]
    ordered, weights = _graded_order(basis, t)
    expected = n * n - 1 - centralizer_dimension(t.partition)
    if len(ordered) != expected:
        raise ConsistencyError(f"Im ad f has dimension {len(ordered)}, expected {expected}")
    logger.info("Im ad f for {}: dim {}", t.partition, len(ordered))
    return Complement(basis=ordered, origin="imadf", ad_h_invariant=True,
                      subalgebra=is_subalgebra(ordered), weights=weights)


def _blocks(t: Sl2Triplet) -> List[List[int]]:
    """Index blocks of the parabolic: the last weight group, the one before it when
    the family has two part sizes, and everything else"""
    parts = t.partition.parts
    n = t.n
    r = t.partition.multiplicity(parts[0])
    if parts[0] == parts[-1]:
        return [list(range(1, n - r + 1)), list(range(n - r + 1, n + 1))]
    s = len(parts) - r
    tail = r + s
    return [
        list(range(1, n - tail + 1)),
        list(range(n - tail + 1, n - r + 1)),
        list(range(n - r + 1, n + 1)),
    ]


def conormal_complement(t: Sl2Triplet, z: Optional[GradedCentralizer] = None) -> Complement:
    """
    Subalgebra complement sl(B1) + a~ + lower nilradical of the block parabolic

    B1 collects every index except the last weight group (type I) or the last
    two weight groups (type II); a~ is the orthogonal complement, inside the
    span a of the boundary coroots, of the a-component of g^e ∩ h.

    Raises:
        UnsupportedFamilyError: partition outside the |p_i - p_j| <= 1 family
        ConsistencyError: the construction fails directness or closure
    """
    if not classify(t.partition).conormal_family:
        raise UnsupportedFamilyError(f"partition {t.partition} is outside the conormal family")
    z = z or centralizer(t)
    n = t.n
    blocks = _blocks(t)
    block_of = {i: b for b, members in enumerate(blocks) for i in members}
    first = blocks[0]

    vectors: List[LieElement] = []
    # sl(B1)
    for i in first:
        for j in first:
            if i != j:
                vectors.append(LieElement(n, {offdiag(i, j): 1}))
    for a in first[:-1]:
        vectors.append(LieElement(n, {cartan(a): 1}))
    # lower nilradical
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if block_of[i] > block_of[j]:
                vectors.append(LieElement(n, {offdiag(i, j): 1}))
    vectors += _a_tilde(t, z, blocks)

    ordered, weights = _graded_order(vectors, t)
    try:
        check_direct(z, ordered, n)
    except (RankDefectError, DimensionError) as exc:
        raise ConsistencyError(f"conormal complement of {t.partition} is not direct: {exc}") from exc
    if not is_subalgebra(ordered):
        raise ConsistencyError(f"conormal complement of {t.partition} is not a subalgebra")
    logger.info("conormal complement for {}: dim {}", t.partition, len(ordered))
    return Complement(basis=ordered, origin="conormal", ad_h_invariant=True, subalgebra=True, weights=weights)


def _a_tilde(t: Sl2Triplet, z: GradedCentralizer, blocks: List[List[int]]) -> List[LieElement]:
    n = t.n
    boundaries = [members[-1] for members in blocks[:-1]]
    a_basis = [LieElement(n, {cartan(b): 1}) for b in boundaries]
    # g^e ∩ h, projected to a along the interior coroots
    cartan_part = [x for x in z.basis if x.is_diagonal()]
    projections = [[x.coefficient(cartan(b)) for b in boundaries] for x in cartan_part]
    w_rows, _ = linalg.rref(projections, len(boundaries))
    w_elements = [LieElement(n, {cartan(b): c for b, c in zip(boundaries, row)}) for row in w_rows]
    gram = [[pairing(w, a) for a in a_basis] for w in w_elements]
    kernel = linalg.nullspace(gram, len(a_basis))
    if len(kernel) != len(a_basis) - len(w_elements) or len(kernel) != 1:
        raise ConsistencyError(f"a~ has dimension {len(kernel)}, expected 1")
    return [LieElement(n, {cartan(b): c for b, c in zip(boundaries, row)}) for row in kernel]


def custom_complement(vectors: Sequence[LieElement], t: Sl2Triplet, z: Optional[GradedCentralizer] = None,
                      regrade: bool = True) -> Complement:
    """
    Validate and analyse a supplied basis

    Args:
        vectors: proposed X_1..X_p
        t: triplet of the orbit
        z: centralizer basis, computed when omitted
        regrade: replace a mixed basis of an ad h-stable span by a weight basis

    Raises:
        DimensionError: wrong count or wrong sl_n
        RankDefectError: not a direct complement, naming the dependent vector
    """
    for index, x in enumerate(vectors):
        if x.n != t.n:
            raise DimensionError(f"X{index + 1} lives in sl_{x.n}, expected sl_{t.n}")
    z = z or centralizer(t)
    check_direct(z, vectors, t.n)
    complement = _analyse(list(vectors), t, "file", regrade)
    logger.info("custom complement: dim {}, ad h-invariant {}, subalgebra {}",
                complement.dim, complement.ad_h_invariant, complement.subalgebra)
    return complement


def dual_basis(z: GradedCentralizer, c: Complement, form_scale: Fraction = Fraction(1)) -> DualData:
    """
    Basis dual to (Z_1..Z_k, X_1..X_p) under the invariant form

    Raises:
        ConsistencyError: the Gram system is singular
    """
    basis = list(z.basis) + list(c.basis)
    if not basis:
        raise DimensionError("empty basis")
    n = basis[0].n
    labels = all_labels(n)
    unit = [LieElement(n, {label: 1}) for label in labels]
    # (M G)[a][l] = <b_a, label_l>; dual label coordinates Y solve Y (M G)^T = I
    mg = [[pairing(b, u, form_scale) for u in unit] for b in basis]
    try:
        inv = linalg.inverse(mg)
    except ConsistencyError as exc:
        raise ConsistencyError("Gram system of the complement is singular") from exc
    dual_rows = linalg.transpose(inv)
    duals = [LieElement.from_vector(n, labels, row) for row in dual_rows]
    k = z.dim
    return DualData(z_bar=duals[:k], x_bar=duals[k:], scaling=[Fraction(1)] * k, form_scale=form_scale)


def gram_identities_hold(z: GradedCentralizer, c: Complement, d: DualData) -> bool:
    """<Z-bar_i, Z_j> = c_i delta_ij and <Z-bar_i, X_l> = 0"""
    for i, zb in enumerate(d.z_bar):
        for j, zz in enumerate(z.basis):
            if pairing(zb, zz, d.form_scale) != (d.scaling[i] if i == j else 0):
                return False
        for x in c.basis:
            if pairing(zb, x, d.form_scale):
                return False
    for l, xb in enumerate(d.x_bar):
        for j, zz in enumerate(z.basis):
            if pairing(xb, zz, d.form_scale):
                return False
        for m, x in enumerate(c.basis):
            if pairing(xb, x, d.form_scale) != (1 if l == m else 0):
                return False
    return True


def annihilator_is_centralizer_of_f(t: Sl2Triplet, d: DualData) -> bool:
    """span(Z-bar) = g^f, the expected annihilator of Im ad f"""
    if any(not bracket(t.f, zb).is_zero() for zb in d.z_bar):
        return False
    labels = all_labels(t.n)
    return linalg.rank(to_rows(d.z_bar, labels), len(labels)) == len(d.z_bar)
