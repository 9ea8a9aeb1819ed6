"""Twisted Jacobi structures: identities, brackets, algebroid, projections."""

import random
from fractions import Fraction

import pytest

from twistcheck.expr import Chart, Expr, ExprError
from twistcheck.report import tensor_zero_verdict
from twistcheck.tensor import Form, MultiVec, differential, wedge
from twistcheck.jacobi import (
    TwistedJacobi,
    TwistedPoisson,
    algebroid_anchor,
    algebroid_bracket,
    bracket,
    check_algebroid,
    check_homogeneous,
    check_twisted_jacobi,
    conformal,
    cotangent_twisted_symplectic,
    hamiltonian,
    jacobi_anomaly,
    poissonize,
    project_along_E,
    project_homogeneous,
)
from conftest import jacobi_of


def test_corpus_structures_verify(std_jacobi, twisted_jacobi):
    for j in (std_jacobi, twisted_jacobi):
        report = check_twisted_jacobi(j)
        assert report.passed
        assert all(item.verdict.kind == "SymbolicZero" for item in report.items)
        assert j.status == "verified"


def test_broken_structure_fails(r3):
    x = Expr.coord(r3, "x")
    lam = MultiVec(r3, 2, {(0, 1): Expr.one(r3)})
    e = MultiVec.d_dx(r3, "z")
    omega = wedge(Form.d_coord(r3, "x"), Form.d_coord(r3, "y")).scale(x)
    report = check_twisted_jacobi(TwistedJacobi(r3, lam, e, omega))
    assert not report.passed


def test_bracket_and_hamiltonian(std_jacobi):
    r3 = std_jacobi.chart
    x, y, z = (Expr.coord(r3, c) for c in r3.coords)
    # {f,g} = Lambda(df,dg) + f E(g) - g E(f)
    assert bracket(std_jacobi, x, y).equals(Expr.one(r3))
    assert bracket(std_jacobi, x, z).equals(x)  # fE(g) term
    xf = hamiltonian(std_jacobi, Expr.one(r3))
    assert tensor_zero_verdict(xf - std_jacobi.e).kind == "SymbolicZero"


def test_anomaly_identity(twisted_jacobi):
    r3 = twisted_jacobi.chart
    rng = random.Random(21)
    coords = [Expr.coord(r3, c) for c in r3.coords]

    def rand_poly():
        e = Expr.const(r3, Fraction(rng.randrange(-2, 3)))
        for _ in range(rng.randrange(1, 4)):
            term = Expr.const(r3, Fraction(rng.randrange(-2, 3)))
            for _ in range(rng.randrange(0, 3)):
                term = term * rng.choice(coords)
            e = e + term
        return e

    triples = [tuple(coords)] + [tuple(rand_poly() for _ in range(3)) for _ in range(3)]
    for f, g, h in triples:
        lhs, rhs = jacobi_anomaly(twisted_jacobi, f, g, h)
        assert tensor_zero_verdict(lhs - rhs, None, 1e-9).passed


def test_algebroid_axioms(std_jacobi, twisted_jacobi):
    for j in (std_jacobi, twisted_jacobi):
        chart = j.chart
        x = Expr.coord(chart, "x")
        sections = [(Form.d_coord(chart, c), Expr.zero(chart)) for c in chart.coords]
        sections.append((Form.zero(chart, 1), Expr.one(chart)))
        sections.append((Form.d_coord(chart, "y").scale(x), Expr.zero(chart)))
        report = check_algebroid(j, sections)
        assert report.passed, report.summary()


def test_exact_pair_relation(twisted_jacobi):
    from twistcheck.jacobi import _base_bracket

    chart = twisted_jacobi.chart
    x, y = Expr.coord(chart, "x"), Expr.coord(chart, "y")
    f = x * y + Expr.one(chart)
    g = y ** 2 - x
    pair_f = (differential(f), f)
    pair_g = (differential(g), g)
    fg = bracket(twisted_jacobi, f, g)
    # the untwisted part maps exact pairs to exact pairs
    base = _base_bracket(twisted_jacobi, pair_f, pair_g)
    assert tensor_zero_verdict(base[0] - differential(fg)).passed
    assert (base[1] - fg).is_symbolic_zero
    # the twisted bracket adds the omega correction in the scalar slot
    got = algebroid_bracket(twisted_jacobi, pair_f, pair_g)
    corr = twisted_jacobi.omega.apply(
        [hamiltonian(twisted_jacobi, f), hamiltonian(twisted_jacobi, g)]
    )
    assert (got[1] - fg - corr).is_symbolic_zero


def test_anchor_is_hamiltonian_on_exact_sections(std_jacobi):
    chart = std_jacobi.chart
    z = Expr.coord(chart, "z")
    f = z ** 2
    got = algebroid_anchor(std_jacobi, (differential(f), f))
    assert tensor_zero_verdict(got - hamiltonian(std_jacobi, f)).passed


def test_conformal_preserves_class(twisted_jacobi):
    chart = twisted_jacobi.chart
    a = Expr.exp(Expr.coord(chart, "z"))
    report = check_twisted_jacobi(conformal(twisted_jacobi, a))
    assert report.passed


def test_poissonization_is_homogeneous(std_jacobi, twisted_jacobi):
    for j in (std_jacobi, twisted_jacobi):
        h = poissonize(j)
        report = check_homogeneous(h)
        assert report.passed
        assert all(item.verdict.kind == "SymbolicZero" for item in report.items)


def same_components(got, want):
    """Componentwise equality across charts that share coordinate names."""
    keys = set(k for k, v in got.comps.items() if not v.is_symbolic_zero)
    keys |= set(k for k, v in want.comps.items() if not v.is_symbolic_zero)
    for k in keys:
        if not got.component(*k).rechart(want.chart).equals(want.component(*k)):
            return False
    return True


def test_poissonization_round_trip_exact(twisted_jacobi):
    h = poissonize(twisted_jacobi)
    back, report = project_homogeneous(h, value=0)
    assert report.passed, report.summary()
    assert back.chart.coords == twisted_jacobi.chart.coords
    assert same_components(back.lam, twisted_jacobi.lam)
    assert same_components(back.e, twisted_jacobi.e)
    assert same_components(back.omega, twisted_jacobi.omega)


def test_projection_along_e(twisted_jacobi):
    out = project_along_E(twisted_jacobi, value=0)
    assert out.report.passed, out.report.summary()
    # the projected twist is exact with d(omega0) = 0 on the 2-dim base, so
    # the homogeneity condition omega0 = i(Z0)d(omega0) genuinely fails
    assert out.homogeneous.kind == "NonZero"
    assert out.poisson.chart.dim == 2


def test_projection_requires_invariance(r3):
    # [E, Lambda] != 0 -> projection undefined
    x = Expr.coord(r3, "x")
    z = Expr.coord(r3, "z")
    lam = MultiVec(r3, 2, {(0, 1): z})
    j = TwistedJacobi(r3, lam, MultiVec.d_dx(r3, "z"), Form.zero(r3, 2))
    with pytest.raises(ExprError):
        project_along_E(j)


def test_cotangent_model(r3):
    x = Expr.coord(r3, "x")
    lam = MultiVec(r3, 2, {(0, 1): Expr.one(r3)})
    phi = Form(r3, 3, {(0, 1, 2): x})
    model = cotangent_twisted_symplectic(TwistedPoisson(r3, lam, phi))
    assert model.report.passed, model.report.summary()
    assert model.chart.dim == 6
    assert model.chart.coords[3:] == ("p_x", "p_y", "p_z")


def test_homogeneous_negative_control():
    # omega = ds^dx with Z = d/ds violates i(Z)omega = 0 and L_Z omega = omega
    ch = Chart("R2s", ("x", "s"))
    from twistcheck.jacobi import HomTwistedPoisson

    lam = MultiVec(ch, 2, {(0, 1): Expr.exp(-Expr.coord(ch, "s"))})
    omega = wedge(Form.d_coord(ch, "s"), Form.d_coord(ch, "x"))
    h = HomTwistedPoisson(ch, lam, omega, MultiVec.d_dx(ch, "s"))
    report = check_homogeneous(h)
    assert not report.passed
    failing = [item for item in report.items if not item.passed]
    assert failing and any(item.verdict.kind == "NonZero" for item in failing)
