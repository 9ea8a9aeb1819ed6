"""Shared structure builders for the test suite."""

import pytest

from twistcheck.expr import Chart, Expr
from twistcheck.tensor import Form, MultiVec, wedge
from twistcheck.jacobi import TwistedJacobi
from twistcheck.contact import TwistedContact


@pytest.fixture
def r3():
    return Chart("R3", ("x", "y", "z"))


@pytest.fixture
def std_contact(r3):
    # theta = dz - y dx, no twist
    y = Expr.coord(r3, "y")
    theta = Form.d_coord(r3, "z") - Form.d_coord(r3, "x").scale(y)
    return TwistedContact(r3, theta, Form.zero(r3, 2))


@pytest.fixture
def twisted_contact(r3):
    # theta = dz - y dx, twist omega = x dx^dy
    x = Expr.coord(r3, "x")
    y = Expr.coord(r3, "y")
    theta = Form.d_coord(r3, "z") - Form.d_coord(r3, "x").scale(y)
    omega = wedge(Form.d_coord(r3, "x"), Form.d_coord(r3, "y")).scale(x)
    return TwistedContact(r3, theta, omega)


def jacobi_of(chart, twisted: bool) -> TwistedJacobi:
    x = Expr.coord(chart, "x")
    y = Expr.coord(chart, "y")
    scale = Expr.one(chart) / (Expr.one(chart) + x) if twisted else Expr.one(chart)
    lam = MultiVec(chart, 2, {(0, 1): scale, (1, 2): -y * scale})
    e = MultiVec.d_dx(chart, "z")
    omega = (
        wedge(Form.d_coord(chart, "x"), Form.d_coord(chart, "y")).scale(x)
        if twisted
        else Form.zero(chart, 2)
    )
    return TwistedJacobi(chart, lam, e, omega)


@pytest.fixture
def std_jacobi(r3):
    return jacobi_of(r3, twisted=False)


@pytest.fixture
def twisted_jacobi(r3):
    return jacobi_of(r3, twisted=True)
