"""
Report models emitted by the command line front end

Every field is plain JSON data (strings for exact rationals and
polynomials) so reports serialize deterministically.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class OrbitClassification(BaseModel):
    """Flags derived from the partition alone"""

    spherical: bool = Field(..., description="All parts <= 2")
    conormal_family: bool = Field(..., description="max part - min part <= 1")
    family_type: Optional[str] = Field(None, description="I (all parts equal) or II, inside the family")
    known_conormal: bool = Field(..., description="A subalgebra complement is constructed explicitly")
    conjectured_conormal: bool = Field(..., description="Conormal according to the closing conjecture (metadata)")


class GradedDimension(BaseModel):
    weight: int
    dim_g: int = Field(..., description="dim g(weight)")
    dim_centralizer: int = Field(..., description="dim g^e(weight)")


class OrbitReport(BaseModel):
    n: int
    partition: List[int]
    characteristic: List[int]
    height: int
    centralizer_dim: int
    orbit_dim: int
    graded_dims: List[GradedDimension]
    moduli_dimension: int
    classification: OrbitClassification
    h: Dict[str, str]
    e: Dict[str, str]
    f: Dict[str, str]


class ComplementReport(BaseModel):
    origin: str = Field(..., description="imadf, conormal or file")
    dim: int
    ad_h_invariant: bool
    subalgebra: bool
    regraded: bool = Field(default=False, description="Basis was replaced by a weight basis of the same span")
    weights: Optional[List[int]] = None
    basis: List[Dict[str, str]]


class GradingItem(BaseModel):
    matrix: str
    row: int
    col: int
    expected_weight: int
    found_weights: List[int]


class GradingReport(BaseModel):
    applicable: bool
    det_constant: Optional[bool] = None
    c_quasi_homogeneous: Optional[bool] = None
    d_quasi_homogeneous: Optional[bool] = None
    a_quasi_homogeneous: Optional[bool] = None
    lambda_weights_ok: Optional[bool] = None
    lambda_prime_weights_ok: Optional[bool] = None
    variable_weights: Optional[List[int]] = None
    violations: List[GradingItem] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        if not self.applicable:
            return True
        return bool(
            self.det_constant
            and self.c_quasi_homogeneous
            and self.d_quasi_homogeneous
            and self.a_quasi_homogeneous
            and self.lambda_weights_ok
            and self.lambda_prime_weights_ok
        )


class JacobiReport(BaseModel):
    passed: bool
    triples_checked: int
    witness: Optional[List[int]] = Field(None, description="1-based (i, j, k) of a failing triple")
    residual: Optional[str] = None


class DenominatorFactor(BaseModel):
    factor: str
    multiplicity: int


class NonPolynomialEntry(BaseModel):
    row: int
    col: int
    denominator: List[DenominatorFactor]


class PolyTerm(BaseModel):
    coeff: str = Field(..., description="Exact rational written num/den")
    exps: List[int]


class TensorEntry(BaseModel):
    """One entry of a tensor, serialized term by term"""

    text: str
    num: List[PolyTerm]
    den: Optional[List[PolyTerm]] = Field(None, description="Monic reduced denominator, absent for polynomials")


class TensorReport(BaseModel):
    name: str = Field(..., description="lambda or lambda_prime")
    polynomial: bool
    degree: Optional[int] = None
    antisymmetric: bool
    vanishes_at_origin: bool
    entries: List[List[TensorEntry]]
    non_polynomial_entries: List[NonPolynomialEntry] = Field(default_factory=list)


class TransverseReport(BaseModel):
    n: int
    partition: List[int]
    form: str
    complement: ComplementReport
    centralizer_weights: List[int]
    coordinate_scaling: Optional[List[str]] = Field(None, description="c_s with reference = c_s * strict dual")
    det_c: str
    det_c_constant: bool
    det_c_vanishes_at_origin: bool
    inverse_method: str
    c: List[List[str]]
    d: List[List[str]]
    a: Optional[List[List[str]]] = None
    tensors: List[TensorReport]
    degree: Optional[int] = None
    degree_prime: Optional[int] = None
    polynomial: bool
    quadratic: bool
    quasi_homogeneous: Optional[bool] = None
    lambda_equals_prime: bool
    conormal_orbit: bool
    grading: GradingReport
    jacobi: JacobiReport
    consistent: bool = Field(..., description="All verdicts agree with the flags")


class CheckCase(BaseModel):
    id: str
    ok: bool
    detail: str = ""


class CheckSuite(BaseModel):
    name: str
    passed: int = 0
    failed: int = 0
    cases: List[CheckCase] = Field(default_factory=list)

    def add(self, case: CheckCase) -> None:
        self.cases.append(case)
        if case.ok:
            self.passed += 1
        else:
            self.failed += 1


class CheckSummary(BaseModel):
    suites: List[CheckSuite] = Field(default_factory=list)
    passed: int = 0
    failed: int = 0

    def add(self, suite: CheckSuite) -> None:
        self.suites.append(suite)
        self.passed += suite.passed
        self.failed += suite.failed
