"""
Report builders and text, JSON and LaTeX emitters
"""

import json
from typing import List, Optional, Sequence

from pydantic import BaseModel

from algebra.lie import LieElement, format_element
from algebra.polyring import PolyMatrix, RatFunc, RatMatrix, denominator_factors, format_poly, rescale
from models.config import FormNormalization, TensorChoice
from models.reports import (
    CheckSummary,
    ComplementReport,
    DenominatorFactor,
    GradedDimension,
    NonPolynomialEntry,
    OrbitReport,
    TensorEntry,
    TensorReport,
    TransverseReport,
)
from transverse.complement import Complement
from transverse.dirac import TransverseRun, vanishes_at_origin
from transverse.fixtures import Presentation
from transverse.orbit import (
    GradedCentralizer,
    Sl2Triplet,
    characteristic_and_height,
    classify,
    graded_dims,
    moduli_dimension,
    orbit_dimension,
)


# builders


def build_orbit_report(t: Sl2Triplet, z: GradedCentralizer) -> OrbitReport:
    characteristic, height = characteristic_and_height(t)
    return OrbitReport(
        n=t.n,
        partition=list(t.partition.parts),
        characteristic=characteristic,
        height=height,
        centralizer_dim=z.dim,
        orbit_dim=orbit_dimension(t),
        graded_dims=[GradedDimension(weight=m, dim_g=g, dim_centralizer=ge) for m, (g, ge) in graded_dims(t, z).items()],
        moduli_dimension=moduli_dimension(t, z),
        classification=classify(t.partition),
        h=t.h.to_json(),
        e=t.e.to_json(),
        f=t.f.to_json(),
    )


def build_complement_report(c: Complement) -> ComplementReport:
    return ComplementReport(
        origin=c.origin,
        dim=c.dim,
        ad_h_invariant=c.ad_h_invariant,
        subalgebra=c.subalgebra,
        regraded=c.regraded,
        weights=c.weights,
        basis=[x.to_json() for x in c.basis],
    )


def _poly_rows(m: PolyMatrix) -> List[List[str]]:
    return [[format_poly(a) for a in row] for row in m.rows]


def _entry(a: RatFunc) -> TensorEntry:
    data = a.to_json()
    return TensorEntry(text=a.format(), num=data["num"], den=None if a.is_polynomial else data["den"])


def _rat_rows(m: RatMatrix) -> List[List[TensorEntry]]:
    return [[_entry(a) for a in row] for row in m.rows]


def build_tensor_report(name: str, m: RatMatrix) -> TensorReport:
    entries = []
    for i, row in enumerate(m.rows):
        for j, a in enumerate(row):
            factors = denominator_factors(a)
            if factors:
                entries.append(NonPolynomialEntry(
                    row=i + 1,
                    col=j + 1,
                    denominator=[DenominatorFactor(factor=format_poly(f), multiplicity=k) for f, k in factors],
                ))
    polynomial = not entries
    degree = None
    if polynomial:
        degree = max((a.degree() for row in m.rows for a in row if not a.is_zero()), default=0)
    return TensorReport(
        name=name,
        polynomial=polynomial,
        degree=degree,
        antisymmetric=m.is_antisymmetric(),
        vanishes_at_origin=bool(vanishes_at_origin(m)),
        entries=_rat_rows(m),
        non_polynomial_entries=entries,
    )


def _tensors(pres: Presentation, choice: TensorChoice) -> List[TensorReport]:
    out = []
    if choice in (TensorChoice.FULL, TensorChoice.BOTH):
        out.append(build_tensor_report("lambda", pres.lambda_full))
    if choice in (TensorChoice.PRIME, TensorChoice.BOTH):
        out.append(build_tensor_report("lambda_prime", pres.lambda_prime))
    return out


def build_transverse_report(run: TransverseRun, pres: Presentation, form: FormNormalization,
                            tensor: TensorChoice = TensorChoice.BOTH, show_a: bool = False) -> TransverseReport:
    ts = run.structure
    det_c = rescale(ts.det_c, pres.scaling)
    return TransverseReport(
        n=run.triplet.n,
        partition=list(run.triplet.partition.parts),
        form=form.value,
        complement=build_complement_report(run.complement),
        centralizer_weights=list(run.centralizer.weights),
        coordinate_scaling=[str(c) for c in pres.scaling] if any(c != 1 for c in pres.scaling) else None,
        det_c=format_poly(det_c),
        det_c_constant=bool(ts.det_c_constant),
        det_c_vanishes_at_origin=ts.singular_at_origin,
        inverse_method=ts.inverse_method,
        c=_poly_rows(pres.c),
        d=_poly_rows(pres.d),
        a=_poly_rows(pres.a) if show_a else None,
        tensors=_tensors(pres, tensor),
        degree=ts.degree,
        degree_prime=ts.degree_prime,
        polynomial=bool(ts.polynomial),
        quadratic=bool(ts.quadratic),
        quasi_homogeneous=ts.quasi_homogeneous,
        lambda_equals_prime=bool(ts.lambda_equals_prime),
        conormal_orbit=classify(run.triplet.partition).conormal_family,
        grading=run.grading,
        jacobi=run.jacobi,
        consistent=run.consistent,
    )


# emitters


def to_json(report: BaseModel) -> str:
    """Fixed field order, no timestamps"""
    return json.dumps(report.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"


def _text_matrix(name: str, rows: Sequence[Sequence[str]]) -> List[str]:
    if not rows or not rows[0]:
        return [f"{name} = []"]
    width = max(len(x) for row in rows for x in row)
    lines = [f"{name} ="]
    for row in rows:
        lines.append("  [ " + "  ".join(x.rjust(width) for x in row) + " ]")
    return lines


def _flag(value: Optional[bool]) -> str:
    return "n/a" if value is None else ("yes" if value else "no")


def orbit_text(report: OrbitReport) -> str:
    lines = [
        f"orbit {','.join(map(str, report.partition))} in sl_{report.n}",
        f"characteristic: ({', '.join(map(str, report.characteristic))})",
        f"height: {report.height}",
        f"dim g^e: {report.centralizer_dim}",
        f"dim orbit: {report.orbit_dim}",
        "graded dimensions (weight: dim g, dim g^e):",
    ]
    for item in report.graded_dims:
        lines.append(f"  {item.weight:>3}: {item.dim_g}, {item.dim_centralizer}")
    flags = report.classification
    lines += [
        f"moduli dimension: {report.moduli_dimension}",
        f"spherical: {_flag(flags.spherical)}",
        f"conormal family: {_flag(flags.conormal_family)}" + (f" (type {flags.family_type})" if flags.family_type else ""),
        f"conormal complement known: {_flag(flags.known_conormal)}",
        f"conjectured conormal: {_flag(flags.conjectured_conormal)}",
        f"h = {_element_text(report.n, report.h)}",
        f"e = {_element_text(report.n, report.e)}",
        f"f = {_element_text(report.n, report.f)}",
    ]
    return "\n".join(lines) + "\n"


def _element_text(n: int, data) -> str:
    return format_element(LieElement.from_json(n, data))


def transverse_text(report: TransverseReport) -> str:
    comp = report.complement
    lines = [
        f"transverse structure at {','.join(map(str, report.partition))} in sl_{report.n} ({report.form} form)",
        f"complement: {comp.origin}, dim {comp.dim}, ad h-invariant {_flag(comp.ad_h_invariant)}, "
        f"subalgebra {_flag(comp.subalgebra)}" + (", regraded" if comp.regraded else ""),
        f"centralizer weights: {report.centralizer_weights}",
    ]
    if report.coordinate_scaling:
        lines.append(f"coordinate scaling: ({', '.join(report.coordinate_scaling)})")
    lines.append(f"det C = {report.det_c} (inverse via {report.inverse_method})")
    lines += _text_matrix("C", report.c)
    lines += _text_matrix("D", report.d)
    if report.a is not None:
        lines += _text_matrix("A", report.a)
    for tensor in report.tensors:
        title = "Lambda" if tensor.name == "lambda" else "Lambda'"
        lines += _text_matrix(title, [[entry.text for entry in row] for row in tensor.entries])
        for entry in tensor.non_polynomial_entries:
            factors = " * ".join(f"({d.factor})^{d.multiplicity}" for d in entry.denominator)
            lines.append(f"  {title}({entry.row},{entry.col}) has denominator {factors}")
    degree = "non-polynomial" if report.degree is None else str(report.degree)
    degree_prime = "non-polynomial" if report.degree_prime is None else str(report.degree_prime)
    lines += [
        f"degree: {degree}" + (" (conormal orbit)" if report.conormal_orbit else ""),
        f"degree of Lambda': {degree_prime}",
        f"polynomial: {_flag(report.polynomial)}, quadratic: {_flag(report.quadratic)}, "
        f"quasi-homogeneous: {_flag(report.quasi_homogeneous)}",
        f"Lambda = Lambda': {_flag(report.lambda_equals_prime)}",
    ]
    grading = report.grading
    if grading.applicable:
        lines.append(f"grading: {'pass' if grading.passed else 'FAIL'} under weights {grading.variable_weights}")
        for item in grading.violations[:10]:
            lines.append(f"  {item.matrix}({item.row},{item.col}): expected {item.expected_weight}, "
                         f"found {item.found_weights}")
    else:
        lines.append("grading: not applicable")
    jacobi = report.jacobi
    if jacobi.passed:
        lines.append(f"Jacobi identity: pass ({jacobi.triples_checked} triples)")
    else:
        lines.append(f"Jacobi identity: FAIL at {tuple(jacobi.witness)}: {jacobi.residual}")
    lines.append(f"consistent: {_flag(report.consistent)}")
    return "\n".join(lines) + "\n"


def _latex_matrix(name: str, rows: Sequence[Sequence[str]]) -> str:
    body = " \\\\\n".join(" & ".join(row) for row in rows)
    return f"$$\n{name} = \\begin{{pmatrix}}\n{body}\n\\end{{pmatrix}}\n$$\n"


def transverse_latex(report: TransverseReport, pres: Presentation, tensor: TensorChoice, show_a: bool = False) -> str:
    """pmatrix layout of C, D, optionally A, and the selected tensors"""
    parts = [
        _latex_matrix("C_N(q)", [[format_poly(a, True) for a in row] for row in pres.c.rows]),
        _latex_matrix("D_N(q)", [[format_poly(a, True) for a in row] for row in pres.d.rows]),
    ]
    if show_a:
        parts.append(_latex_matrix("A_N(q)", [[format_poly(a, True) for a in row] for row in pres.a.rows]))
    if tensor in (TensorChoice.FULL, TensorChoice.BOTH):
        parts.append(_latex_matrix("\\Lambda_N(q)", [[a.format(True) for a in row] for row in pres.lambda_full.rows]))
    if tensor in (TensorChoice.PRIME, TensorChoice.BOTH):
        parts.append(_latex_matrix("\\Lambda'_N(q)", [[a.format(True) for a in row] for row in pres.lambda_prime.rows]))
    degree = "non-polynomial" if report.degree is None else f"degree {report.degree}"
    parts.append(f"% {degree}; degree of Lambda' "
                 f"{'non-polynomial' if report.degree_prime is None else report.degree_prime}\n")
    return "\n".join(parts)


def orbit_latex(report: OrbitReport) -> str:
    rows = [[str(item.weight), str(item.dim_g), str(item.dim_centralizer)] for item in report.graded_dims]
    body = " \\\\\n".join(" & ".join(row) for row in rows)
    return (
        f"% orbit {','.join(map(str, report.partition))} of sl_{report.n}\n"
        f"characteristic $({', '.join(map(str, report.characteristic))})$, height ${report.height}$, "
        f"$\\dim \\mathfrak{{g}}^e = {report.centralizer_dim}$\n\n"
        f"\\begin{{tabular}}{{|c|c|c|}}\n\\hline\n$m$ & $\\dim \\mathfrak{{g}}(m)$ & "
        f"$\\dim \\mathfrak{{g}}^e(m)$ \\\\ \\hline\n{body} \\\\ \\hline\n\\end{{tabular}}\n"
    )


def check_text(summary: CheckSummary) -> str:
    lines = []
    for suite in summary.suites:
        lines.append(f"{suite.name}: {suite.passed} passed, {suite.failed} failed")
        for case in suite.cases:
            if not case.ok:
                lines.append(f"  FAIL {case.id}: {case.detail}")
    lines.append(f"total: {summary.passed} passed, {summary.failed} failed")
    return "\n".join(lines) + "\n"
