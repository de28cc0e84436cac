"""
Nilpotent orbit data from a partition: sl2-triplet, characteristic, height,
graded centralizer, moduli dimension and classification
"""

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from algebra import linalg
from algebra.errors import ConsistencyError, DimensionError, RankDefectError
from algebra.lie import (
    LieElement,
    all_labels,
    bracket,
    label_weight,
    simple_root_values,
    to_rows,
    weight_of,
)
from models.partition import Partition, centralizer_dimension
from models.reports import OrbitClassification


class Sl2Triplet(BaseModel):
    """(h, e, f) with h dominant diagonal"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    partition: Partition
    h: LieElement
    e: LieElement
    f: LieElement

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def diagonal(self) -> List[Fraction]:
        return self.h.diagonal()

    def weight(self, x: LieElement):
        return weight_of(x, self.h)


class GradedCentralizer(BaseModel):
    """Weight basis Z_1..Z_k of g^e, ascending weight"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    basis: List[LieElement]
    weights: List[int] = Field(..., description="ad h weight n_i of Z_i")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def by_weight(self) -> Dict[int, List[LieElement]]:
        out: Dict[int, List[LieElement]] = {}
        for z, w in zip(self.basis, self.weights):
            out.setdefault(w, []).append(z)
        return out


def triplet_from_partition(partition: Partition) -> Sl2Triplet:
    """
    Build (h, e, f) blockwise in Jordan form and reorder the basis so h is
    dominant

    Args:
        partition: Jordan type of e

    Returns:
        Sl2Triplet with [h,e] = 2e, [h,f] = -2f, [e,f] = h

    Raises:
        ZeroOrbitError: partition (1, ..., 1)
    """
    partition.require_nonzero()
    n = partition.n
    raw = []
    for block, p in enumerate(partition.parts):
        for k in range(p):
            raw.append((block, k, p, p - 1 - 2 * k))
    order = sorted(range(n), key=lambda a: -raw[a][3])
    index = {(raw[a][0], raw[a][1]): position + 1 for position, a in enumerate(order)}

    e_entries: Dict[Tuple[int, int], int] = {}
    f_entries: Dict[Tuple[int, int], int] = {}
    for block, p in enumerate(partition.parts):
        for k in range(p - 1):
            upper, lower = index[(block, k)], index[(block, k + 1)]
            e_entries[(upper, lower)] = 1
            f_entries[(lower, upper)] = (k + 1) * (p - k - 1)
    h = LieElement.from_diagonal([raw[a][3] for a in order])
    e = LieElement.from_matrix(n, e_entries)
    f = LieElement.from_matrix(n, f_entries)
    triplet = Sl2Triplet(partition=partition, h=h, e=e, f=f)
    if not verify_triplet(triplet):
        raise ConsistencyError(f"sl2 relations fail for {partition}")
    logger.info("triplet for {}: h = diag{}", partition, tuple(int(d) for d in h.diagonal()))
    return triplet


def verify_triplet(t: Sl2Triplet) -> bool:
    """[h,e] = 2e, [h,f] = -2f, [e,f] = h, exactly"""
    return (
        bracket(t.h, t.e) == t.e.scale(2)
        and bracket(t.h, t.f) == t.f.scale(-2)
        and bracket(t.e, t.f) == t.h
    )


def _dense(x: LieElement) -> List[List[Fraction]]:
    entries = x.to_matrix()
    return [[entries.get((r, c), Fraction(0)) for c in range(1, x.n + 1)] for r in range(1, x.n + 1)]


def jordan_type(e: LieElement) -> Partition:
    """Partition read off the ranks of e, e^2, ..."""
    n = e.n
    power = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    dense = _dense(e)
    ranks = [n]
    while ranks[-1]:
        power = linalg.matmul(power, dense)
        ranks.append(linalg.rank(power, n))
    # number of parts >= k is rank(e^(k-1)) - rank(e^k)
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    parts = []
    for k, count in enumerate(at_least, start=1):
        following = at_least[k] if k < len(at_least) else 0
        parts += [k] * (count - following)
    return Partition.of(sorted(parts, reverse=True))


def characteristic_and_height(t: Sl2Triplet) -> Tuple[List[int], int]:
    """
    Characteristic alpha_i(h) and height, the latter computed two ways

    Raises:
        ConsistencyError: grading scan and 2(p_1 - 1) disagree
    """
    characteristic = [int(v) for v in simple_root_values(t.h)]
    diagonal = t.diagonal
    scanned = max(int(label_weight(label, diagonal)) for label in all_labels(t.n))
    closed = 2 * (t.partition.largest - 1)
    if scanned != closed:
        raise ConsistencyError(f"height {scanned} from the grading, {closed} from the partition")
    return characteristic, scanned


def weight_labels(t: Sl2Triplet) -> Dict[int, List]:
    """Basis labels of each g(m), canonical order"""
    diagonal = t.diagonal
    out: Dict[int, List] = {}
    for label in all_labels(t.n):
        out.setdefault(int(label_weight(label, diagonal)), []).append(label)
    return out


def _kernel_on(t: Sl2Triplet, x: LieElement, source_weight: int, shift: int) -> List[LieElement]:
    """Kernel of ad x: g(m) -> g(m + shift), basis in canonical order"""
    spaces = weight_labels(t)
    source = spaces.get(source_weight, [])
    target = spaces.get(source_weight + shift, [])
    if not source:
        return []
    images = [bracket(x, LieElement(t.n, {label: 1})) for label in source]
    if not target:
        kernel = [[Fraction(int(a == b)) for b in range(len(source))] for a in range(len(source))]
    else:
        rows = [[image.coefficient(label) for image in images] for label in target]
        kernel = linalg.nullspace(rows, len(source))
    return [LieElement(t.n, dict(zip(source, vector))) for vector in kernel]


def centralizer(t: Sl2Triplet) -> GradedCentralizer:
    """
    Kernel of ad e, one weight space at a time

    Returns:
        GradedCentralizer in ascending weight order

    Raises:
        ConsistencyError: dimension differs from sum (2i - 1) p_i - 1
    """
    basis: List[LieElement] = []
    weights: List[int] = []
    for m in sorted(weight_labels(t)):
        found = _kernel_on(t, t.e, m, 2)
        if found and m < 0:
            raise ConsistencyError(f"ad e has a kernel in negative weight {m}")
        basis += found
        weights += [m] * len(found)
    expected = centralizer_dimension(t.partition)
    if len(basis) != expected:
        raise ConsistencyError(f"centralizer has dimension {len(basis)}, expected {expected}")
    logger.info("centralizer of {}: dim {}, weights {}", t.partition, len(basis), weights)
    return GradedCentralizer(basis=basis, weights=weights)


def centralizer_from_vectors(vectors: Sequence[LieElement], t: Sl2Triplet) -> GradedCentralizer:
    """
    Validate a supplied weight basis of g^e

    Raises:
        DimensionError: wrong count or wrong sl_n
        RankDefectError: vector outside g^e, not a weight vector or dependent
    """
    expected = centralizer_dimension(t.partition)
    if len(vectors) != expected:
        raise DimensionError(f"{len(vectors)} centralizer vectors, expected {expected}")
    weights = []
    for index, z in enumerate(vectors):
        if z.n != t.n:
            raise DimensionError(f"Z{index + 1} lives in sl_{z.n}")
        if not bracket(t.e, z).is_zero():
            raise RankDefectError(f"Z{index + 1} is not annihilated by ad e", index)
        weight = t.weight(z)
        if weight is None:
            raise RankDefectError(f"Z{index + 1} is not an ad h weight vector", index)
        weights.append(weight)
    labels = all_labels(t.n)
    dependent = linalg.first_dependent(to_rows(vectors, labels), len(labels))
    if dependent is not None:
        raise RankDefectError(f"Z{dependent + 1} depends on the previous vectors", dependent)
    return GradedCentralizer(basis=list(vectors), weights=weights)


def graded_dims(t: Sl2Triplet, z: GradedCentralizer) -> Dict[int, Tuple[int, int]]:
    """{m: (dim g(m), dim g^e(m))}"""
    spaces = weight_labels(t)
    counts = z.by_weight()
    return {m: (len(spaces[m]), len(counts.get(m, []))) for m in sorted(spaces)}


def moduli_dimension(t: Sl2Triplet, z: Optional[GradedCentralizer] = None) -> int:
    """2 sum_{i >= 0} dim g^e(i) (dim g(i) - dim g^e(i))"""
    z = z or centralizer(t)
    total = 0
    for m, (dim_g, dim_ge) in graded_dims(t, z).items():
        if m >= 0:
            total += dim_ge * (dim_g - dim_ge)
    return 2 * total


def orbit_dimension(t: Sl2Triplet) -> int:
    return t.n * t.n - 1 - centralizer_dimension(t.partition)


def classify(partition: Partition) -> OrbitClassification:
    """Sphericity and membership in the |p_i - p_j| <= 1 family"""
    family = partition.largest - partition.smallest <= 1
    family_type = None
    if family:
        family_type = "I" if partition.largest == partition.smallest else "II"
    return OrbitClassification(
        spherical=partition.largest <= 2,
        conormal_family=family,
        family_type=family_type,
        known_conormal=family,
        conjectured_conormal=family,
    )
