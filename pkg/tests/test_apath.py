"""A-paths: anchor residuals, cocycle integrals, concatenation, time changes."""

import numpy as np
import pytest

from twistcheck.expr import Chart, Expr, ExprError
from twistcheck.tensor import Form, MultiVec
from twistcheck.jacobi import TwistedJacobi
from twistcheck.apath import (
    APath,
    anchor_residual,
    cocycle_integral,
    concatenate,
    path_from_exprs,
    reparameterize,
)

T = Chart("T", ("t",))
TT = Expr.coord(T, "t")
ZERO = Expr.zero(T)
ONE = Expr.one(T)


def vertical_structure():
    ch = Chart("R3", ("x", "y", "z"))
    return TwistedJacobi(ch, MultiVec.zero(ch, 2), MultiVec.d_dx(ch, "z"),
                         Form.zero(ch, 2))


def line_path(j=None, n=64, zeta_z=ONE, f=ONE, offset=ZERO):
    j = j or vertical_structure()
    return path_from_exprs(j, [ZERO, ZERO, TT + offset], [ZERO, ZERO, zeta_z], f, n)


def test_validation():
    j = vertical_structure()
    with pytest.raises(ExprError):
        line_path(j, n=7)  # odd
    with pytest.raises(ExprError):
        line_path(j, n=6)  # too few
    with pytest.raises(ExprError):
        path_from_exprs(j, [ZERO, ZERO, TT + TT], [ZERO, ZERO, ONE], ONE, 64)  # out of box


def test_constant_zero_path_is_trivial():
    j = vertical_structure()
    c = path_from_exprs(j, [ZERO, ZERO, ZERO], [ZERO, ZERO, ZERO], ZERO, 16)
    assert anchor_residual(c) == 0.0
    assert cocycle_integral(c) == 0.0


def test_anchor_residual_exact_match():
    # anchor image f E = d/dz equals the velocity of gamma(t) = (0,0,t)
    assert anchor_residual(line_path()) < 1e-12


def test_anchor_residual_detects_mismatch():
    c = line_path(f=Expr.const(T, 2))
    assert abs(anchor_residual(c) - 1.0) < 1e-12


def test_cocycle_integral_closed_forms():
    assert abs(cocycle_integral(line_path()) + 1.0) < 1e-8
    assert abs(cocycle_integral(line_path(zeta_z=TT)) + 0.5) < 1e-10
    # pairing with (-E, 0) ignores the scalar slot
    j = vertical_structure()
    c = path_from_exprs(j, [ZERO, ZERO, TT], [ZERO, ZERO, ZERO], TT ** 2, 16)
    assert cocycle_integral(c) == 0.0


def test_concatenation_additivity():
    half = Expr.const(T, "1/2")
    a = line_path(zeta_z=ONE, offset=-ONE)  # gamma from -1 to 0... rescale below
    j = vertical_structure()
    a = path_from_exprs(j, [ZERO, ZERO, half * TT - ONE], [ZERO, ZERO, ONE], ONE, 64)
    b = path_from_exprs(j, [ZERO, ZERO, half * TT - half], [ZERO, ZERO, ONE], ONE, 64)
    c = concatenate(a, b)
    ia, ib, ic = cocycle_integral(a), cocycle_integral(b), cocycle_integral(c)
    assert abs(ic - ia - ib) < 1e-8
    assert abs(ic + 2.0) < 1e-8


def test_concatenation_with_constant_path_is_neutral():
    j = vertical_structure()
    c = line_path(j)
    start = path_from_exprs(j, [ZERO, ZERO, ZERO], [ZERO, ZERO, ZERO], ZERO, 64)
    joined = concatenate(start, c)
    assert abs(cocycle_integral(joined) - cocycle_integral(c)) < 1e-8


def test_concatenation_endpoint_check():
    j = vertical_structure()
    half = Expr.const(T, "1/2")
    a = path_from_exprs(j, [ZERO, ZERO, half * TT], [ZERO, ZERO, ONE], ONE, 16)
    far = path_from_exprs(j, [ONE, ZERO, half * TT], [ZERO, ZERO, ONE], ONE, 16)
    with pytest.raises(ExprError):
        concatenate(a, far)


def test_reparameterize_identity():
    c = line_path()
    c2 = reparameterize(c, TT)
    assert np.allclose(c2.gamma, c.gamma)
    assert abs(cocycle_integral(c2) - cocycle_integral(c)) < 1e-12


def test_reparameterize_invariance():
    c = line_path()
    for tau in (TT ** 2, Expr.const(T, 3) * TT ** 2 - Expr.const(T, 2) * TT ** 3):
        ct = reparameterize(c, tau)
        assert abs(cocycle_integral(ct) + 1.0) < 1e-6


def test_reparameterize_rejects_bad_tau():
    c = line_path()
    with pytest.raises(ExprError):
        reparameterize(c, TT + ONE)  # endpoints wrong
    bad = Expr.const(T, 4) * TT ** 3 - Expr.const(T, 4) * TT ** 2 + TT
    with pytest.raises(ExprError):
        reparameterize(c, bad)  # decreasing in the middle


def test_simpson_convergence_order():
    j = vertical_structure()

    def err(n):
        c = path_from_exprs(j, [ZERO, ZERO, TT], [ZERO, ZERO, TT ** 4], ONE, n)
        return abs(cocycle_integral(c) + 0.2)

    e16, e32 = err(16), err(32)
    assert e32 > 0
    assert e16 / e32 >= 8.0


def test_anchor_negative_control_persists():
    # f = 2 violates the anchor equation at every resolution
    for n in (16, 64, 256):
        c = line_path(f=Expr.const(T, 2), n=n)
        assert anchor_residual(c) > 0.9
