"""
Invariant suites and reference fixture comparisons behind the check command
"""

import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Tuple

from loguru import logger

from algebra import linalg
from algebra.errors import TransverseError
from algebra.lie import LieElement, all_labels, bracket, gram_matrix, label_weight, pairing
from models.config import CheckScope, Settings
from models.partition import Partition, partitions_of
from models.reports import CheckCase, CheckSuite, CheckSummary
from transverse.complement import conormal_complement, im_ad_f
from transverse.dirac import assemble, compute_transverse, transverse_tensor, vanishes_at_origin
from transverse.fixtures import REFERENCE_FIXTURES, FileRun, compare_with_expected, load_fixture, rescale_coordinates, run_complement_file
from transverse.orbit import (
    centralizer,
    characteristic_and_height,
    classify,
    graded_dims,
    jordan_type,
    moduli_dimension,
    triplet_from_partition,
    verify_triplet,
)

Outcome = Tuple[bool, str]
Case = Tuple[str, Callable[[], Outcome]]

TRANSVERSE_MAX_N = 5
CONORMAL_MAX_N = 6
RESCALING_PARTITIONS = [(2, 1), (3, 1), (2, 2), (3, 2)]


def _guard(fn: Callable[[], Outcome]) -> Outcome:
    try:
        return fn()
    except TransverseError as exc:
        return False, f"{type(exc).__name__}: {exc}"


def run_cases(name: str, cases: List[Case], workers: int = 1) -> CheckSuite:
    """Run independent cases on a bounded pool; results keep submission order"""
    suite = CheckSuite(name=name)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [(case_id, pool.submit(_guard, fn)) for case_id, fn in cases]
        for case_id, future in futures:
            ok, detail = future.result()
            if not ok:
                logger.error("check {}/{} failed: {}", name, case_id, detail)
            suite.add(CheckCase(id=case_id, ok=ok, detail=detail))
    logger.info("suite {}: {} passed, {} failed", name, suite.passed, suite.failed)
    return suite


# reference fixtures


@lru_cache(maxsize=None)
def _fixture_run(name: str) -> FileRun:
    return run_complement_file(load_fixture(name))


def _fixture_case(name: str) -> Callable[[], Outcome]:
    def check() -> Outcome:
        fr = _fixture_run(name)
        problems = compare_with_expected(fr)
        if problems:
            return False, "; ".join(problems[:5])
        ts = fr.run.structure
        return True, f"degree {ts.degree}, degree of Lambda' {ts.degree_prime}, polynomial {ts.polynomial}"
    return check


def fixture_suite(workers: int = 1) -> CheckSuite:
    suite = run_cases("fixtures", [(name, _fixture_case(name)) for name in REFERENCE_FIXTURES], workers)

    def degree_depends_on_complement() -> Outcome:
        first = _fixture_run("subregular_graded").run.structure.degree
        second = _fixture_run("subregular_graded_prime").run.structure.degree
        return first != second, f"same orbit (3,1), degrees {first} and {second}"

    ok, detail = _guard(degree_depends_on_complement)
    suite.add(CheckCase(id="degree_depends_on_complement", ok=ok, detail=detail))
    return suite


# properties


def _random_element(rng: random.Random, n: int) -> LieElement:
    return LieElement(n, {label: rng.randint(-3, 3) for label in all_labels(n)})


def _lie_case(n: int, seed: int) -> Callable[[], Outcome]:
    def check() -> Outcome:
        rng = random.Random(seed + n)
        for _ in range(5):
            x, y, z = (_random_element(rng, n) for _ in range(3))
            cyclic = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
            if not cyclic.is_zero():
                return False, "bracket violates the Jacobi identity"
            if pairing(bracket(x, y), z) != pairing(x, bracket(y, z)):
                return False, "form is not ad-invariant"
        if not linalg.det(gram_matrix(n)):
            return False, "Gram matrix is singular"
        return True, "Jacobi, invariance and nondegeneracy hold"
    return check


def _oracle_moduli(t) -> Tuple[dict, int]:
    """dim g(m) by counting labels, dim g^e(m) = dim g(m) - dim g(m + 2) for m >= 0"""
    counts = Counter(int(label_weight(label, t.diagonal)) for label in all_labels(t.n))
    centralizer_dims = {m: counts[m] - counts.get(m + 2, 0) for m in counts if m >= 0}
    total = sum(centralizer_dims[m] * (counts[m] - centralizer_dims[m]) for m in centralizer_dims)
    return centralizer_dims, 2 * total


def _orbit_case(partition: Partition) -> Callable[[], Outcome]:
    def check() -> Outcome:
        t = triplet_from_partition(partition)
        if not verify_triplet(t):
            return False, "h, e, f do not satisfy the sl2 relations"
        if jordan_type(t.e) != partition:
            return False, f"e has Jordan type {jordan_type(t.e)}"
        characteristic, height = characteristic_and_height(t)
        if any(v not in (0, 1, 2) for v in characteristic):
            return False, f"characteristic {characteristic} is not in {{0, 1, 2}}"
        if height != 2 * (partition.parts[0] - 1):
            return False, f"height {height}, largest part {partition.parts[0]}"
        z = centralizer(t)
        im_ad_f(t)
        oracle_dims, oracle = _oracle_moduli(t)
        dims = graded_dims(t, z)
        if any(dims[m][1] != oracle_dims[m] for m in oracle_dims):
            return False, "graded centralizer dimensions differ from dim g(m) - dim g(m + 2)"
        moduli = moduli_dimension(t, z)
        if moduli != oracle:
            return False, f"moduli dimension {moduli}, oracle {oracle}"
        return True, f"height {height}, dim g^e {z.dim}, moduli {moduli}"
    return check


def _transverse_case(partition: Partition, kind: str) -> Callable[[], Outcome]:
    def check() -> Outcome:
        t = triplet_from_partition(partition)
        z = centralizer(t)
        c = conormal_complement(t, z) if kind == "conormal" else im_ad_f(t)
        run = compute_transverse(t, z, c)
        ts = run.structure
        problems = []
        if not ts.polynomial:
            problems.append("non-polynomial tensor")
        if not ts.det_c_constant:
            problems.append("det C is not constant")
        if not run.grading.passed:
            problems.append(f"{len(run.grading.violations)} grading violations")
        if not run.jacobi.passed:
            problems.append(f"Jacobi fails at {run.jacobi.witness}")
        if not (ts.lambda_full.is_antisymmetric() and ts.lambda_prime.is_antisymmetric()):
            problems.append("tensor is not antisymmetric")
        if vanishes_at_origin(ts.lambda_full) is not True:
            problems.append("tensor does not vanish at e")
        if kind == "conormal" and not ts.quadratic:
            problems.append(f"conormal complement gives degree {ts.degree}")
        if problems:
            return False, "; ".join(problems)
        return True, f"degree {ts.degree}"
    return check


def _rescaling_case(partition: Partition, seed: int) -> Callable[[], Outcome]:
    def check() -> Outcome:
        rng = random.Random(seed + sum(p * 10 ** i for i, p in enumerate(partition.parts)))
        t = triplet_from_partition(partition)
        z = centralizer(t)
        run = compute_transverse(t, z, im_ad_f(t))
        factors = [Fraction(rng.choice([-1, 1]) * rng.randint(1, 5), rng.randint(1, 3)) for _ in range(z.dim)]
        rescaled = transverse_tensor(assemble(t.e, z, run.complement, run.dual.rescaled(factors)))
        if (rescaled.degree, rescaled.degree_prime) != (run.structure.degree, run.structure.degree_prime):
            return False, f"degree {run.structure.degree} became {rescaled.degree}"
        if rescale_coordinates(run.structure.lambda_prime, factors) != rescaled.lambda_prime:
            return False, "rescaled dual basis does not substitute q_s -> c_s q_s"
        return True, f"degree {rescaled.degree} under {[str(c) for c in factors]}"
    return check


def lie_suite(max_n: int, seed: int, workers: int = 1) -> CheckSuite:
    return run_cases("lie", [(f"sl{n}", _lie_case(n, seed)) for n in range(2, max_n + 1)], workers)


def orbit_suite(max_n: int, workers: int = 1) -> CheckSuite:
    cases = [(f"{n}:{p}", _orbit_case(p)) for n in range(2, max_n + 1) for p in partitions_of(n)]
    return run_cases("orbit", cases, workers)


def property_suites(max_n: int, seed: int, workers: int = 1) -> List[CheckSuite]:
    suites = [lie_suite(max_n, seed, workers), orbit_suite(max_n, workers)]

    transverse_cases: List[Case] = []
    for n in range(2, min(max_n, CONORMAL_MAX_N) + 1):
        for p in partitions_of(n):
            if n <= TRANSVERSE_MAX_N:
                transverse_cases.append((f"{n}:{p}:imadf", _transverse_case(p, "imadf")))
            if classify(p).conormal_family:
                transverse_cases.append((f"{n}:{p}:conormal", _transverse_case(p, "conormal")))
    suites.append(run_cases("transverse", transverse_cases, workers))

    rescaling_cases = [
        (str(Partition.of(parts)), _rescaling_case(Partition.of(parts), seed))
        for parts in RESCALING_PARTITIONS
        if sum(parts) <= max_n
    ]
    suites.append(run_cases("rescaling", rescaling_cases, workers))
    return suites


def run_checks(scope: CheckScope, max_n: int, settings: Settings) -> CheckSummary:
    """
    Run the selected suites

    Args:
        scope: all, fixtures or properties
        max_n: largest n of the property sweeps
        settings: worker cap and seed
    """
    summary = CheckSummary()
    workers = settings.num_threads
    if scope in (CheckScope.ALL, CheckScope.FIXTURES):
        summary.add(fixture_suite(workers))
    if scope in (CheckScope.ALL, CheckScope.PROPERTIES):
        for suite in property_suites(max_n, settings.seed, workers):
            summary.add(suite)
    logger.info("checks: {} passed, {} failed", summary.passed, summary.failed)
    return summary
