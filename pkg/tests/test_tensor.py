"""Exterior calculus, Schouten bracket, sharp maps and chart maps."""

import random
from fractions import Fraction

import pytest

from twistcheck.expr import Chart, Expr, ExprError
from twistcheck.report import tensor_zero_verdict
from twistcheck.tensor import (
    Form,
    MultiVec,
    ProjectabilityFailure,
    SmoothMap,
    differential,
    ext_d,
    interior,
    lie,
    pullback,
    pushforward_diffeo,
    pushforward_projection,
    schouten,
    sharp1,
    wedge,
)

R3 = Chart("R3", ("x", "y", "z"))
X, Y, Z = (Expr.coord(R3, c) for c in R3.coords)


def rand_poly(rng, chart=R3, deg=2):
    e = Expr.const(chart, Fraction(rng.randrange(-3, 4)))
    basis = [Expr.coord(chart, c) for c in chart.coords]
    for _ in range(deg):
        term = Expr.const(chart, Fraction(rng.randrange(-3, 4)))
        for _ in range(rng.randrange(0, 3)):
            term = term * rng.choice(basis)
        e = e + term
    return e


def rand_form(rng, degree, chart=R3):
    from twistcheck.tensor import increasing_indices

    return Form(chart, degree,
                {idx: rand_poly(rng, chart) for idx in increasing_indices(chart.dim, degree)})


def rand_vec(rng, degree, chart=R3):
    from twistcheck.tensor import increasing_indices

    return MultiVec(chart, degree,
                    {idx: rand_poly(rng, chart) for idx in increasing_indices(chart.dim, degree)})


def is_sym_zero(t):
    return tensor_zero_verdict(t).kind == "SymbolicZero"


def test_component_antisymmetry():
    w = wedge(Form.d_coord(R3, "x"), Form.d_coord(R3, "y"))
    assert w.component(0, 1).equals(Expr.one(R3))
    assert w.component(1, 0).equals(-Expr.one(R3))
    assert w.component(0, 0).is_symbolic_zero
    assert w.component(0, 2).is_symbolic_zero


def test_d_squared_zero():
    rng = random.Random(11)
    for _ in range(5):
        assert is_sym_zero(ext_d(ext_d(rand_form(rng, 1))))
        f = rand_poly(rng)
        assert is_sym_zero(ext_d(differential(f)))


def test_wedge_graded_commutativity_and_leibniz():
    rng = random.Random(12)
    a, b = rand_form(rng, 1), rand_form(rng, 1)
    assert is_sym_zero(wedge(a, b) + wedge(b, a))
    c = rand_form(rng, 2)
    # d(a^c) = da^c - a^dc for deg(a)=1
    assert is_sym_zero(ext_d(wedge(a, c)) - wedge(ext_d(a), c) + wedge(a, ext_d(c)))


def test_degree_above_dim_is_zero():
    four = wedge(wedge(Form.d_coord(R3, "x"), Form.d_coord(R3, "y")),
                 wedge(Form.d_coord(R3, "z"), Form.d_coord(R3, "x")))
    assert four.degree == 4 and is_sym_zero(four)
    top = rand_form(random.Random(1), 3)
    assert is_sym_zero(ext_d(top))


def test_interior_contracts_first_slot():
    v = MultiVec.d_dx(R3, "x")
    w = wedge(Form.d_coord(R3, "x"), Form.d_coord(R3, "y"))
    assert is_sym_zero(interior(v, w) - Form.d_coord(R3, "y"))


def test_cartan_formula():
    rng = random.Random(13)
    for degree in (1, 2):
        x = rand_vec(rng, 1)
        a = rand_form(rng, degree)
        lhs = lie(x, a)
        rhs = interior(x, ext_d(a)) + ext_d(interior(x, a))
        assert is_sym_zero(lhs - rhs)


def test_lie_on_vector_is_commutator():
    rng = random.Random(14)
    x, y = rand_vec(rng, 1), rand_vec(rng, 1)
    f = rand_poly(rng)
    # [X, Y](f) = X(Y(f)) - Y(X(f))
    br = lie(x, y)
    assert br.of(f).equals(x.of(y.of(f)) - y.of(x.of(f)))


def test_schouten_graded_antisymmetry_and_jacobi():
    rng = random.Random(15)
    x, y = rand_vec(rng, 1), rand_vec(rng, 1)
    p = rand_vec(rng, 2)
    # [X, P] = -(-1)^{(1-1)(2-1)}[P, X] = -[P, X]
    assert is_sym_zero(schouten(x, p) + schouten(p, x))
    # graded Jacobi for degrees (1, 1, 2)
    j = (
        schouten(x, schouten(y, p))
        - schouten(y, schouten(x, p))
        - schouten(schouten(x, y), p)
    )
    assert is_sym_zero(j)


def test_schouten_self_bracket_of_nonintegrable_bivector():
    # Lambda = (dx + y dz) ^ dy has a nonzero self-bracket: the Jacobiator of
    # its bracket is the constant -1, which forces [L, L] = -2 dx^dy^dz.
    lam = MultiVec(R3, 2, {(0, 1): Expr.one(R3), (1, 2): -Y})
    expected = MultiVec(R3, 3, {(0, 1, 2): Expr.const(R3, -2)})
    assert is_sym_zero(schouten(lam, lam) - expected)


def test_schouten_pins_jacobiator():
    rng = random.Random(16)
    lam = rand_vec(rng, 2)
    f, g, h = (rand_poly(rng) for _ in range(3))

    def br(a, b):
        return sharp1(lam, differential(a)).of(b)

    jacobiator = br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))
    half_bracket = schouten(lam, lam).scale(Expr.const(R3, Fraction(1, 2)))
    applied = half_bracket.apply([differential(f), differential(g), differential(h)])
    assert jacobiator.equals(applied)


def test_sharp_of_differential():
    lam = MultiVec(R3, 2, {(0, 1): Expr.one(R3)})
    v = sharp1(lam, differential(X))
    assert is_sym_zero(v - MultiVec.d_dx(R3, "y"))
    assert is_sym_zero(sharp1(lam, differential(Z)))


def test_pullback_functorial_and_commutes_with_d():
    src = Chart("S", ("u", "v"))
    u, v = (Expr.coord(src, c) for c in src.coords)
    phi = SmoothMap(src, R3, (u * v, u + v, v ** 2))
    rng = random.Random(17)
    a = rand_form(rng, 1)
    assert is_sym_zero(pullback(phi, ext_d(a)) - ext_d(pullback(phi, a)))
    mid = Chart("M", ("p", "q", "r"))
    p, q, r = (Expr.coord(mid, c) for c in mid.coords)
    psi = SmoothMap(mid, R3, (p + q, q, r * p))
    chi = SmoothMap(src, mid, (u, v, u * v))
    comp = psi.compose(chi)
    b = rand_form(rng, 2)
    assert is_sym_zero(pullback(comp, b) - pullback(chi, pullback(psi, b)))


def test_pushforward_projection_and_failure():
    big = Chart("B", ("x", "y", "t"))
    small = Chart("S", ("x", "y"))
    xs = [Expr.coord(big, c) for c in ("x", "y")]
    section = (Expr.coord(small, "x"), Expr.coord(small, "y"), Expr.zero(small))
    proj = SmoothMap(big, small, tuple(xs), section=section)
    t = Expr.coord(big, "t")
    good = MultiVec(big, 2, {(0, 1): Expr.coord(big, "x"), (0, 2): t})
    pushed = pushforward_projection(proj, good)
    assert pushed.chart == small
    assert pushed.component(0, 1).equals(Expr.coord(small, "x"))
    bad = MultiVec(big, 2, {(0, 1): t})
    with pytest.raises(ProjectabilityFailure):
        pushforward_projection(proj, bad)


def test_pushforward_diffeo_roundtrip():
    flip_comps = (Y, X, -Z)
    flip = SmoothMap(R3, R3, flip_comps, section=flip_comps)
    v = MultiVec(R3, 1, {(0,): X * Y, (2,): Expr.one(R3)})
    w = pushforward_diffeo(flip, v)
    back = pushforward_diffeo(flip, w)
    assert is_sym_zero(back - v)
    with pytest.raises(ExprError):
        # the declared inverse of a squashed coordinate cannot validate
        SmoothMap(R3, R3, (X, Y, Expr.zero(R3)), section=(X, Y, Expr.zero(R3)))


def test_smooth_map_section_validated():
    small = Chart("S", ("x", "y"))
    big = Chart("B", ("x", "y", "t"))
    with pytest.raises(ExprError):
        SmoothMap(
            big, small,
            (Expr.coord(big, "x"), Expr.coord(big, "y")),
            section=(Expr.coord(small, "y"), Expr.coord(small, "x"), Expr.zero(small)),
        )
