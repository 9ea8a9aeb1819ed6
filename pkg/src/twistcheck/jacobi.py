"""Twisted Jacobi structures on charts.

A structure is a triple (Lambda, E, omega): a bivector field, a vector
field and a 2-form twist.  The module verifies the defining identities,
exposes the function bracket with its twisted Jacobi anomaly, the induced
Lie algebroid on pair sections (1-form, function), conformal changes,
the homogeneous Poisson counterpart on chart x R and its two projection
constructions, and the cotangent construction for exact twisted Poisson
structures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .expr import (
    NONZERO,
    SAMPLED_ZERO,
    Chart,
    EvalError,
    Expr,
    ExprError,
    Verdict,
    sample_points,
)
from .report import CheckReport, scalar_zero_verdict, tensor_zero_verdict
from .tensor import (
    Form,
    MultiVec,
    PairForm,
    PairVec,
    SmoothMap,
    differential,
    ext_d,
    interior,
    lie,
    pair_sharp,
    pullback,
    pushforward_projection,
    schouten,
    sharp,
    sharp1,
    sharp_tensor,
    wedge,
)

__all__ = [
    "TwistedJacobi",
    "TwistedPoisson",
    "HomTwistedPoisson",
    "Section",
    "NonStraightenedField",
    "check_twisted_jacobi",
    "bracket",
    "jacobi_anomaly",
    "hamiltonian",
    "algebroid_bracket",
    "algebroid_anchor",
    "check_algebroid",
    "conformal",
    "poissonize",
    "check_homogeneous",
    "project_homogeneous",
    "project_along_E",
    "cotangent_twisted_symplectic",
]

# A pair section of T*M x R: a 1-form together with a function.
Section = tuple[Form, Expr]


class NonStraightenedField(ExprError):
    pass


@dataclass
class TwistedJacobi:
    chart: Chart
    lam: MultiVec
    e: MultiVec
    omega: Form
    status: str = "candidate"

    def __post_init__(self):
        if self.lam.degree != 2 or self.e.degree != 1 or self.omega.degree != 2:
            raise ExprError("twisted Jacobi data must be (bivector, vector, 2-form)")
        if not (self.lam.chart == self.e.chart == self.omega.chart == self.chart):
            raise ExprError("twisted Jacobi parts must share the chart")

    def pair(self) -> PairVec:
        return PairVec(self.lam, self.e)


@dataclass
class TwistedPoisson:
    chart: Chart
    lam: MultiVec
    phi: Form

    def __post_init__(self):
        if self.lam.degree != 2 or self.phi.degree != 3:
            raise ExprError("twisted Poisson data must be (bivector, 3-form)")
        if not ext_d(self.phi).is_symbolic_zero:
            raise ExprError("the twist 3-form must be closed")


@dataclass
class HomTwistedPoisson:
    chart: Chart
    lam: MultiVec
    omega: Form
    z: MultiVec

    def __post_init__(self):
        if self.lam.degree != 2 or self.omega.degree != 2 or self.z.degree != 1:
            raise ExprError("homogeneous data must be (bivector, 2-form, vector)")


def check_twisted_jacobi(
    j: TwistedJacobi,
    samples: Optional[Sequence[Sequence[float]]] = None,
    tol: float = 1e-9,
) -> CheckReport:
    """Verify the two compatibility identities of a twisted Jacobi triple."""
    lam, e, omega = j.lam, j.e, j.omega
    half = Expr.const(j.chart, Fraction(1, 2))
    domega = ext_d(omega)
    res1 = (
        schouten(lam, lam).scale(half)
        + wedge(e, lam)
        - sharp(lam, domega)
        - wedge(sharp(lam, omega), e)
    )
    res2 = (
        schouten(e, lam)
        - sharp_tensor(lam, domega, e)
        + wedge(sharp_tensor(lam, omega, e), e)
    )
    report = CheckReport(f"twisted Jacobi identities on {j.chart.name}")
    report.add("trivector identity", tensor_zero_verdict(res1, samples, tol))
    report.add("bivector identity", tensor_zero_verdict(res2, samples, tol))
    if report.passed:
        j.status = "verified"
    return report


def bracket(j: TwistedJacobi, f: Expr, g: Expr) -> Expr:
    """{f,g} = Lambda(df,dg) + f E(g) - g E(f)."""
    return j.lam.apply([differential(f), differential(g)]) + f * j.e.of(g) - g * j.e.of(f)


def jacobi_anomaly(j: TwistedJacobi, f: Expr, g: Expr, h: Expr) -> tuple[Expr, Expr]:
    """Cyclic bracket sum and its predicted twist term, as (lhs, rhs)."""
    lhs = (
        bracket(j, f, bracket(j, g, h))
        + bracket(j, g, bracket(j, h, f))
        + bracket(j, h, bracket(j, f, g))
    )
    twist = PairForm(ext_d(j.omega), j.omega)
    sharped = pair_sharp(j.pair(), twist)
    args = [PairForm.section(differential(u), u) for u in (f, g, h)]
    rhs = sharped.apply(args)
    return lhs, rhs


def hamiltonian(j: TwistedJacobi, f: Expr) -> MultiVec:
    """X_f = Lambda^#(df) + f E."""
    return sharp1(j.lam, differential(f)) + j.e.scale(f)


def algebroid_anchor(j: TwistedJacobi, a: Section) -> MultiVec:
    zeta, f = a
    return sharp1(j.lam, zeta) + j.e.scale(f)


def _base_bracket(j: TwistedJacobi, a: Section, b: Section) -> Section:
    """Untwisted bracket on pair sections extending (df,f),(dg,g) -> (d{f,g},{f,g})."""
    zeta, f = a
    eta, g = b
    lam, e = j.lam, j.e
    xz = sharp1(lam, zeta)
    xe = sharp1(lam, eta)
    lam_ze = lam.apply([zeta, eta])
    first = (
        lie(xz, eta)
        - lie(xe, zeta)
        - differential(lam_ze)
        + lie(e, eta).scale(f)
        - lie(e, zeta).scale(g)
        - interior(e, wedge(zeta, eta))
    )
    second = -lam_ze + xz.of(g) - xe.of(f) + f * e.of(g) - g * e.of(f)
    return first, second


def algebroid_bracket(j: TwistedJacobi, a: Section, b: Section) -> Section:
    """Twisted bracket on pair sections: base bracket plus the twist correction
    (domega, omega)((Lambda,E)^# a, (Lambda,E)^# b, .)."""
    first, second = _base_bracket(j, a, b)
    pa = pair_sharp(j.pair(), PairForm.section(*a))
    pb = pair_sharp(j.pair(), PairForm.section(*b))
    x1, h1 = pa.primary, pa.secondary.as_scalar()
    x2, h2 = pb.primary, pb.secondary.as_scalar()
    domega = ext_d(j.omega)
    corr_form = (
        interior(x2, interior(x1, domega))
        + interior(x2, j.omega).scale(h1)
        - interior(x1, j.omega).scale(h2)
    )
    corr_func = j.omega.apply([x1, x2])
    return first + corr_form, second + corr_func


def _pairing(a: Section, x: MultiVec, g: Expr) -> Expr:
    """<(zeta,f),(X,g)> = zeta(X) + f g."""
    zeta, f = a
    return zeta.apply([x]) + f * g


def check_algebroid(
    j: TwistedJacobi,
    sections: Sequence[Section],
    samples: Optional[Sequence[Sequence[float]]] = None,
    tol: float = 1e-9,
    leibniz_factors: Optional[Sequence[Expr]] = None,
) -> CheckReport:
    """Lie-algebroid axioms for the twisted section bracket on a sample set."""
    report = CheckReport(f"section-bracket algebroid on {j.chart.name}")
    br = lambda a, b: algebroid_bracket(j, a, b)
    rho = lambda a: algebroid_anchor(j, a)
    if leibniz_factors is None:
        leibniz_factors = [Expr.coord(j.chart, j.chart.coords[0])]

    def sec_verdict(s: Section):
        form_v = tensor_zero_verdict(s[0], samples, tol)
        if not form_v.passed:
            return form_v
        func_v = scalar_zero_verdict(s[1], samples, tol)
        if not func_v.passed:
            return func_v
        if form_v.kind == "SampledZero" or func_v.kind == "SampledZero":
            return form_v if form_v.kind == "SampledZero" else func_v
        return form_v

    def sec_sub(s: Section, t: Section) -> Section:
        return (s[0] - t[0], s[1] - t[1])

    for i, a in enumerate(sections):
        for k, b in enumerate(sections):
            if k <= i:
                continue
            # antisymmetry
            ab = br(a, b)
            ba = br(b, a)
            report.add(
                f"antisymmetry [{i},{k}]",
                sec_verdict((ab[0] + ba[0], ab[1] + ba[1])),
            )
            # anchor is a bracket homomorphism
            res = rho(ab) - schouten(rho(a), rho(b))
            report.add(f"anchor homomorphism [{i},{k}]", tensor_zero_verdict(res, samples, tol))
            # Leibniz: {a, u b} = u {a,b} + (rho(a)u) b
            for m, u in enumerate(leibniz_factors):
                lhs = br(a, (b[0].scale(u), u * b[1]))
                du = rho(a).of(u)
                rhs = (ab[0].scale(u) + b[0].scale(du), u * ab[1] + du * b[1])
                report.add(f"Leibniz [{i},{k}] factor {m}", sec_verdict(sec_sub(lhs, rhs)))
            # 1-cocycle identity for (-E, 0)
            lhs_c = _pairing(ab, -j.e, Expr.zero(j.chart))
            rhs_c = rho(a).of(_pairing(b, -j.e, Expr.zero(j.chart))) - rho(b).of(
                _pairing(a, -j.e, Expr.zero(j.chart))
            )
            report.add(f"cocycle [{i},{k}]", scalar_zero_verdict(lhs_c - rhs_c, samples, tol))
            for m, c in enumerate(sections):
                if m <= k:
                    continue
                t1 = br(a, br(b, c))
                t2 = br(b, br(c, a))
                t3 = br(c, br(a, b))
                jac = (t1[0] + t2[0] + t3[0], t1[1] + t2[1] + t3[1])
                report.add(f"Jacobi identity [{i},{k},{m}]", sec_verdict(jac))
    return report


def conformal(j: TwistedJacobi, a: Expr) -> TwistedJacobi:
    """The structure conformally rescaled by a nonvanishing function a."""
    lam2 = j.lam.scale(a)
    e2 = sharp1(j.lam, differential(a)) + j.e.scale(a)
    omega2 = j.omega.scale(Expr.one(j.chart) / a)
    return TwistedJacobi(j.chart, lam2, e2, omega2)


def _extended_chart(chart: Chart) -> tuple[Chart, str]:
    name = "s"
    while name in chart.coords:
        name += "_"
    return chart.extend(name, name=f"{chart.name}x{name}"), name


def poissonize(j: TwistedJacobi) -> HomTwistedPoisson:
    """Homogeneous twisted Poisson structure on chart x R:
    Lambda~ = e^{-s}(Lambda + d/ds ^ E), omega~ = e^s omega, Z = d/ds."""
    big, s = _extended_chart(j.chart)
    es = Expr.exp(Expr.coord(big, s))
    inv = Expr.one(big) / es
    lam = j.lam.map_components(lambda c: c.rechart(big), big)
    e = j.e.map_components(lambda c: c.rechart(big), big)
    omega = j.omega.map_components(lambda c: c.rechart(big), big)
    ds = MultiVec.d_dx(big, s)
    lam_t = (lam + wedge(ds, e)).scale(inv)
    return HomTwistedPoisson(big, lam_t, omega.scale(es), ds)


def check_homogeneous(
    h: HomTwistedPoisson,
    samples: Optional[Sequence[Sequence[float]]] = None,
    tol: float = 1e-9,
) -> CheckReport:
    """Twisted Poisson identity plus homogeneity of (Lambda, omega) under Z."""
    half = Expr.const(h.chart, Fraction(1, 2))
    domega = ext_d(h.omega)
    report = CheckReport(f"homogeneous twisted Poisson on {h.chart.name}")
    report.add(
        "twisted Poisson identity",
        tensor_zero_verdict(schouten(h.lam, h.lam).scale(half) - sharp(h.lam, domega), samples, tol),
    )
    report.add("degree -1 homogeneity of the bivector",
               tensor_zero_verdict(lie(h.z, h.lam) + h.lam, samples, tol))
    report.add("twist recovery i(Z)d(omega) = omega",
               tensor_zero_verdict(interior(h.z, domega) - h.omega, samples, tol))
    report.add("twist homogeneity L_Z(omega) = omega",
               tensor_zero_verdict(lie(h.z, h.omega) - h.omega, samples, tol))
    report.add("radial contraction i(Z)omega = 0",
               tensor_zero_verdict(interior(h.z, h.omega), samples, tol))
    return report


def _straightened_projection(chart: Chart, coord: str, value) -> SmoothMap:
    """Projection dropping one coordinate, with the affine slice as section."""
    kept = [c for c in chart.coords if c != coord]
    base = Chart(f"{chart.name}/{coord}", tuple(kept))
    comps = tuple(Expr.coord(chart, c) for c in kept)
    section = tuple(
        Expr.coord(base, c) if c != coord else Expr.const(base, value)
        for c in chart.coords
    )
    return SmoothMap(chart, base, comps, section)


def _slice_inclusion(phi: SmoothMap) -> SmoothMap:
    """The slice embedding base -> source determined by a projection's section."""
    return SmoothMap(phi.target, phi.source, phi.section)


def _require_coordinate_field(v: MultiVec, what: str) -> str:
    """The coordinate c with v = d/dc, else NonStraightenedField."""
    hits = []
    for (i,), comp in v.comps.items():
        cv = comp.constant_value()
        if cv == 0:
            continue
        if cv != 1:
            raise NonStraightenedField(f"{what} is not a coordinate field")
        hits.append(i)
    if len(hits) != 1:
        raise NonStraightenedField(f"{what} is not a coordinate field")
    return v.chart.coords[hits[0]]


def project_homogeneous(
    h: HomTwistedPoisson,
    value=0,
    a: Optional[Expr] = None,
    samples: Optional[Sequence[Sequence[float]]] = None,
    tol: float = 1e-9,
) -> tuple[TwistedJacobi, CheckReport]:
    """Induced twisted Jacobi structure on a slice transverse to Z.

    Z must be a coordinate field d/dc; the conformal factor a defaults to
    e^{c - value} and must satisfy a|slice = 1 and Z(a) = a.
    """
    coord = _require_coordinate_field(h.z, "the homothety field")
    if a is None:
        a = Expr.exp(Expr.coord(h.chart, coord) - Expr.const(h.chart, value))
    phi = _straightened_projection(h.chart, coord, value)
    base = phi.target
    report = CheckReport(f"homogeneous projection onto {base.name}")
    report.add("Z(a) = a", tensor_zero_verdict(h.z.of(a) - a, samples, tol))
    a_on_slice = a.subst(base, list(phi.section))
    report.add("a = 1 on the slice",
               tensor_zero_verdict(a_on_slice - Expr.one(base), None, tol))
    lam0 = pushforward_projection(phi, h.lam.scale(a))
    e0 = pushforward_projection(phi, sharp1(h.lam, differential(a)))
    scaled = h.omega.scale(Expr.one(h.chart) / a)
    for idx, comp in scaled.comps.items():
        if comp.depends_on(coord):
            raise ExprError(
                f"twist component {idx} still depends on {coord!r} after rescaling"
            )
    omega0 = pullback(_slice_inclusion(phi), scaled)
    j0 = TwistedJacobi(base, lam0, e0, omega0)
    # base-chart residuals need base-dimension sample points
    report.merge(check_twisted_jacobi(j0, None, tol))
    # conformal-projection property: {a f0~, a g0~} = a * pullback of {f0,g0}
    probes = _probe_functions(base)
    for t, f0 in enumerate(probes):
        g0 = probes[(t + 1) % len(probes)]
        fh = a * phi.pull_scalar(f0)
        gh = a * phi.pull_scalar(g0)
        lhs = h.lam.apply([differential(fh), differential(gh)])
        rhs = a * phi.pull_scalar(bracket(j0, f0, g0))
        report.add(f"conformal bracket compatibility {t}",
                   tensor_zero_verdict(lhs - rhs, samples, tol))
    return j0, report


def _probe_functions(chart: Chart) -> list[Expr]:
    coords = [Expr.coord(chart, c) for c in chart.coords]
    probes = list(coords)
    if len(coords) >= 2:
        probes.append(coords[0] * coords[1] + Expr.one(chart))
    return probes


@dataclass
class ProjectionAlongE:
    poisson: TwistedPoisson
    omega0: Form
    z0: MultiVec
    homogeneous: object  # Verdict for omega0 = i(Z0) d(omega0)
    report: CheckReport


def project_along_E(
    j: TwistedJacobi,
    value=0,
    samples: Optional[Sequence[Sequence[float]]] = None,
    tol: float = 1e-9,
) -> ProjectionAlongE:
    """Exact twisted Poisson structure on the space of E-orbits.

    E must be a coordinate field d/dc and omega must not depend on c.
    Returns the projected bivector, the slice twist, the induced vector
    field Z0 = Lambda^#(dc) projected, and a homogeneity verdict.
    """
    coord = _require_coordinate_field(j.e, "E")
    report = CheckReport(f"projection along E on {j.chart.name}")
    report.add("[E, Lambda] = 0",
               tensor_zero_verdict(schouten(j.e, j.lam), samples, tol))
    if not report.passed:
        raise ExprError("Lambda is not invariant along E; projection undefined")
    for idx, comp in j.omega.comps.items():
        if comp.depends_on(coord):
            raise ExprError(f"twist component {idx} depends on {coord!r}")
    phi = _straightened_projection(j.chart, coord, value)
    base = phi.target
    lam0 = pushforward_projection(phi, j.lam)
    omega0 = pullback(_slice_inclusion(phi), j.omega)
    eta = differential(Expr.coord(j.chart, coord))
    z0 = pushforward_projection(phi, sharp1(j.lam, eta))
    phi0 = ext_d(omega0)
    half = Expr.const(base, Fraction(1, 2))
    # base-chart residuals need base-dimension sample points
    report.add(
        "induced twisted Poisson identity",
        tensor_zero_verdict(schouten(lam0, lam0).scale(half) - sharp(lam0, phi0), None, tol),
    )
    # L_{Z0} Lambda0 = -Lambda0 - Lambda0^#( i(Z0)d(omega0) - omega0 )
    residual = (
        lie(z0, lam0)
        + lam0
        + sharp(lam0, interior(z0, phi0) - omega0)
    )
    report.add("homothety defect identity", tensor_zero_verdict(residual, None, tol))
    hom = tensor_zero_verdict(omega0 - interior(z0, phi0), None, tol)
    poisson = TwistedPoisson(base, lam0, phi0)
    return ProjectionAlongE(poisson, omega0, z0, hom, report)


@dataclass
class CotangentModel:
    chart: Chart
    theta: Form
    omega: Form
    z: MultiVec
    report: CheckReport


def cotangent_twisted_symplectic(
    p: TwistedPoisson,
    samples: Optional[Sequence[Sequence[float]]] = None,
    tol: float = 1e-9,
) -> CotangentModel:
    """Canonical 1-form, induced twist and Liouville field on the cotangent chart.

    omega_{kl} = sum_{i,j} p_i lambda^{ij} phi_{jkl}, and the pair
    (d theta + omega, omega) is checked to be homogeneous for Z = sum p_i d/dp_i
    and nondegenerate at sample points.
    """
    base = p.chart
    n = base.dim
    big = Chart(f"T*{base.name}", base.coords + tuple(f"p_{c}" for c in base.coords))
    pvars = [Expr.coord(big, f"p_{c}") for c in base.coords]
    theta = Form(big, 1, {(i,): pvars[i] for i in range(n)})
    half = Expr.const(big, Fraction(1, 2))
    omega_comps: dict[tuple[int, ...], Expr] = {}
    for k in range(n):
        for l in range(k + 1, n):
            total = Expr.zero(big)
            for i in range(n):
                for jj in range(n):
                    lam_ij = p.lam.component(i, jj).rechart(big)
                    if lam_ij.is_symbolic_zero:
                        continue
                    phi_jkl = p.phi.component(jj, k, l).rechart(big)
                    if phi_jkl.is_symbolic_zero:
                        continue
                    total = total + pvars[i] * lam_ij * phi_jkl
            omega_comps[(k, l)] = total
    omega = Form(big, 2, omega_comps)
    z = MultiVec(big, 1, {(n + i,): pvars[i] for i in range(n)})
    big_sym = ext_d(theta) + omega
    report = CheckReport(f"cotangent construction over {base.name}")
    report.add("closed twist on the base", tensor_zero_verdict(ext_d(p.phi), None, tol))
    report.add("homogeneity L_Z(d theta + omega) = d theta + omega",
               tensor_zero_verdict(lie(z, big_sym) - big_sym, samples, tol))
    report.add("twist recovery i(Z)d(omega) = omega",
               tensor_zero_verdict(interior(z, ext_d(omega)) - omega, samples, tol))
    # nondegeneracy of d theta + omega at sample points
    pts = list(samples) if samples is not None else sample_points(big)
    nondeg = Verdict(SAMPLED_ZERO)
    tested = 0
    for pt in pts:
        try:
            mat = np.zeros((2 * n, 2 * n))
            for a in range(2 * n):
                for b in range(a + 1, 2 * n):
                    v = big_sym.component(a, b).eval(pt)
                    mat[a, b] = v
                    mat[b, a] = -v
            det = float(np.linalg.det(mat))
        except EvalError:
            nondeg.skipped.append(tuple(pt))
            continue
        tested += 1
        if abs(det) < 1e-9:
            nondeg = Verdict(NONZERO, witness=tuple(pt), value=det)
            break
    if tested == 0 and nondeg.kind == SAMPLED_ZERO:
        nondeg = Verdict(NONZERO, assumptions=["all sample points skipped"])
    nondeg.assumptions.append("nondegeneracy certified at sample points only")
    report.add("nondegeneracy of d theta + omega", nondeg)
    return CotangentModel(big, theta, omega, z, report)
