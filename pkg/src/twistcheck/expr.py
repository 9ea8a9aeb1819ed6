"""Exact symbolic scalar expressions on coordinate charts.

The canonical form is a quotient of "poly-exp" polynomials: finite sums of
terms ``c * x^m * exp(L)`` where ``c`` is a rational, ``m`` a monomial and
``L`` an affine form in the chart coordinates with rational coefficients.
Products of exponentials merge their affine arguments, so everything built
from ``e^{-r}``, ``e^s`` and polynomial data stays inside the class.
Quotients are only kept when the denominator has more than one term;
single-term denominators always cancel into the numerator.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

__all__ = [
    "Chart",
    "Expr",
    "ExprError",
    "ParseError",
    "EvalError",
    "parse",
    "diff",
    "evaluate",
    "is_zero",
    "Verdict",
    "sample_points",
]


class ExprError(Exception):
    pass


class ParseError(ExprError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EvalError(ExprError):
    pass


@dataclass(frozen=True)
class Chart:
    """An ordered coordinate system. Coordinates must be unique identifiers."""

    name: str
    coords: tuple[str, ...]

    def __post_init__(self):
        if len(self.coords) < 1:
            raise ExprError(f"chart {self.name!r} needs at least one coordinate")
        if len(set(self.coords)) != len(self.coords):
            raise ExprError(f"chart {self.name!r} has duplicate coordinates")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, coord: str) -> int:
        try:
            return self.coords.index(coord)
        except ValueError:
            raise ExprError(f"unknown coordinate {coord!r} on chart {self.name!r}") from None

    def product(self, other: "Chart", name: Optional[str] = None) -> "Chart":
        """Concatenate coordinate lists; duplicates must be renamed by the caller."""
        return Chart(name or f"{self.name}x{other.name}", self.coords + other.coords)

    def extend(self, *extra: str, name: Optional[str] = None) -> "Chart":
        return Chart(name or f"{self.name}+{'_'.join(extra)}", self.coords + tuple(extra))


# A term key is (monomial exponents, affine exp part).  The exp part has
# length dim+1: (constant, coefficient per coordinate).
Mon = tuple[int, ...]
ExpV = tuple[Fraction, ...]
Key = tuple[Mon, ExpV]
Poly = dict[Key, Fraction]


def _unit_key(n: int) -> Key:
    return ((0,) * n, (Fraction(0),) * (n + 1))


def _poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, Fraction(0)) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _poly_scale(a: Poly, c: Fraction) -> Poly:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for (ma, ea), ca in a.items():
        for (mb, eb), cb in b.items():
            key = (
                tuple(x + y for x, y in zip(ma, mb)),
                tuple(x + y for x, y in zip(ea, eb)),
            )
            s = out.get(key, Fraction(0)) + ca * cb
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _poly_diff(a: Poly, i: int) -> Poly:
    out: Poly = {}
    for (m, e), c in a.items():
        if m[i]:
            key = (m[:i] + (m[i] - 1,) + m[i + 1 :], e)
            s = out.get(key, Fraction(0)) + c * m[i]
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        if e[i + 1]:
            s = out.get((m, e), Fraction(0)) + c * e[i + 1]
            if s:
                out[(m, e)] = s
            else:
                out.pop((m, e), None)
    return out


def _term_divides(da: Key, db: Key) -> bool:
    # exp parts are units, only the monomial must divide
    return all(x <= y for x, y in zip(da[0], db[0]))


def _term_div(num: Key, den: Key) -> Key:
    return (
        tuple(x - y for x, y in zip(num[0], den[0])),
        tuple(x - y for x, y in zip(num[1], den[1])),
    )


def _lead(p: Poly) -> Key:
    # graded-lex over the combined (monomial, exp) exponents; deterministic
    return max(p, key=lambda k: (sum(k[0]), k[0], k[1]))


def _poly_exact_div(num: Poly, den: Poly) -> Optional[Poly]:
    """Exact division in the poly-exp ring, or None when not divisible."""
    if not num:
        return {}
    quot: Poly = {}
    rem = dict(num)
    dlead = _lead(den)
    dc = den[dlead]
    steps = 0
    while rem:
        steps += 1
        if steps > 2000:
            return None
        rlead = _lead(rem)
        if not _term_divides(dlead, rlead):
            return None
        tkey = _term_div(rlead, dlead)
        tc = rem[rlead] / dc
        quot[tkey] = quot.get(tkey, Fraction(0)) + tc
        rem = _poly_add(rem, _poly_mul({tkey: -tc}, den))
    return quot


def _normalize(num: Poly, den: Poly, n: int) -> tuple[Poly, Poly]:
    unit = _unit_key(n)
    if not den:
        raise ExprError("division by symbolic zero")
    if not num:
        return {}, {unit: Fraction(1)}
    if len(den) > 1:
        q = _poly_exact_div(num, den)
        if q is not None:
            num, den = q, {unit: Fraction(1)}
    # shift out the exp part of the denominator's reference term
    ref = min(den)
    shift = ref[1]
    if any(shift):
        neg = tuple(-x for x in shift)
        num = {(m, tuple(a + b for a, b in zip(e, neg))): c for (m, e), c in num.items()}
        den = {(m, tuple(a + b for a, b in zip(e, neg))): c for (m, e), c in den.items()}
    # divide out the common monomial content of numerator and denominator
    keys = list(num) + list(den)
    gcd_mon = tuple(min(k[0][i] for k in keys) for i in range(n))
    if any(gcd_mon):
        num = {(tuple(a - b for a, b in zip(m, gcd_mon)), e): c for (m, e), c in num.items()}
        den = {(tuple(a - b for a, b in zip(m, gcd_mon)), e): c for (m, e), c in den.items()}
    # make the denominator's reference coefficient 1
    c = den[min(den)]
    if c != 1:
        inv = Fraction(1) / c
        num = _poly_scale(num, inv)
        den = _poly_scale(den, inv)
    # constant multiple of the denominator collapses to a constant
    if num.keys() == den.keys():
        k0 = next(iter(num))
        ratio = num[k0] / den[k0]
        if all(num[k] == ratio * den[k] for k in num):
            unit_p = {_unit_key(n): Fraction(1)}
            return ({_unit_key(n): ratio} if ratio else {}), unit_p
    return num, den


class Expr:
    """Immutable exact scalar on a chart, stored as a normalized quotient."""

    __slots__ = ("chart", "num", "den")

    def __init__(self, chart: Chart, num: Poly, den: Optional[Poly] = None):
        if den is None:
            den = {_unit_key(chart.dim): Fraction(1)}
        num, den = _normalize(num, den, chart.dim)
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("Expr is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(chart: Chart, value) -> "Expr":
        c = Fraction(value)
        num = {_unit_key(chart.dim): c} if c else {}
        return Expr(chart, num)

    @staticmethod
    def zero(chart: Chart) -> "Expr":
        return Expr.const(chart, 0)

    @staticmethod
    def one(chart: Chart) -> "Expr":
        return Expr.const(chart, 1)

    @staticmethod
    def coord(chart: Chart, name: str) -> "Expr":
        i = chart.index(name)
        mon = tuple(1 if j == i else 0 for j in range(chart.dim))
        return Expr(chart, {(mon, (Fraction(0),) * (chart.dim + 1)): Fraction(1)})

    @staticmethod
    def exp(arg: "Expr") -> "Expr":
        """exp of an affine combination of coordinates."""
        aff = arg.affine_parts()
        if aff is None:
            raise ExprError("exp argument must be affine in the coordinates")
        n = arg.chart.dim
        return Expr(arg.chart, {((0,) * n, tuple(aff)): Fraction(1)})

    # -- structure ---------------------------------------------------------

    @property
    def is_symbolic_zero(self) -> bool:
        return not self.num

    @property
    def has_denominator(self) -> bool:
        return self.den != {_unit_key(self.chart.dim): Fraction(1)}

    def affine_parts(self) -> Optional[list[Fraction]]:
        """(constant, per-coordinate) coefficients, or None if not affine."""
        if self.has_denominator:
            return None
        n = self.chart.dim
        out = [Fraction(0)] * (n + 1)
        for (m, e), c in self.num.items():
            if any(e) or sum(m) > 1:
                return None
            if sum(m) == 0:
                out[0] += c
            else:
                out[1 + m.index(1)] += c
        return out

    def constant_value(self) -> Optional[Fraction]:
        if not self.num:
            return Fraction(0)
        if self.has_denominator or len(self.num) != 1:
            return None
        (k, c), = self.num.items()
        if k == _unit_key(self.chart.dim):
            return c
        return None

    def _check(self, other: "Expr"):
        if self.chart is not other.chart and self.chart != other.chart:
            raise ExprError(
                f"chart mismatch: {self.chart.name!r} vs {other.chart.name!r}"
            )

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Expr":
        if isinstance(other, Expr):
            self._check(other)
            return other
        return Expr.const(self.chart, other)

    def __add__(self, other) -> "Expr":
        o = self._coerce(other)
        if self.den == o.den:
            return Expr(self.chart, _poly_add(self.num, o.num), self.den)
        num = _poly_add(_poly_mul(self.num, o.den), _poly_mul(o.num, self.den))
        return Expr(self.chart, num, _poly_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr(self.chart, _poly_scale(self.num, Fraction(-1)), self.den)

    def __sub__(self, other) -> "Expr":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Expr":
        return (-self) + other

    def __mul__(self, other) -> "Expr":
        o = self._coerce(other)
        return Expr(self.chart, _poly_mul(self.num, o.num), _poly_mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Expr":
        o = self._coerce(other)
        if o.is_symbolic_zero:
            raise ExprError("division by symbolic zero")
        return Expr(self.chart, _poly_mul(self.num, o.den), _poly_mul(self.den, o.num))

    def __rtruediv__(self, other) -> "Expr":
        return self._coerce(other) / self

    def __pow__(self, k: int) -> "Expr":
        if not isinstance(k, int):
            raise ExprError("only integer powers are supported")
        if k == 0:
            return Expr.one(self.chart)
        base = self if k > 0 else Expr.one(self.chart) / self
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    def equals(self, other: "Expr") -> bool:
        """Canonical equality via cross-multiplication."""
        return (self - self._coerce(other)).is_symbolic_zero

    # -- calculus ----------------------------------------------------------

    def diff(self, coord: str) -> "Expr":
        i = self.chart.index(coord)
        dn = _poly_diff(self.num, i)
        if not self.has_denominator:
            return Expr(self.chart, dn, self.den)
        dd = _poly_diff(self.den, i)
        num = _poly_add(_poly_mul(dn, self.den), _poly_scale(_poly_mul(self.num, dd), Fraction(-1)))
        return Expr(self.chart, num, _poly_mul(self.den, self.den))

    def depends_on(self, coord: str) -> bool:
        return not self.diff(coord).is_symbolic_zero

    def subst(self, target: Chart, images: Sequence["Expr"]) -> "Expr":
        """Substitute every coordinate of this chart by an Expr on `target`."""
        if len(images) != self.chart.dim:
            raise ExprError("substitution needs one image per coordinate")
        for im in images:
            if im.chart != target:
                raise ExprError("substitution images must live on the target chart")
        num = self._subst_poly(self.num, target, images)
        den = self._subst_poly(self.den, target, images)
        if den.is_symbolic_zero:
            raise ExprError("substitution made the denominator vanish identically")
        return num / den

    @staticmethod
    def _subst_poly(p: Poly, target: Chart, images: Sequence["Expr"]) -> "Expr":
        out = Expr.zero(target)
        for (m, e), c in p.items():
            term = Expr.const(target, c)
            for i, k in enumerate(m):
                if k:
                    term = term * images[i] ** k
            if any(e):
                arg = Expr.const(target, e[0])
                for i, q in enumerate(e[1:]):
                    if q:
                        arg = arg + Expr.const(target, q) * images[i]
                term = term * Expr.exp(arg)
            out = out + term
        return out

    def rechart(self, target: Chart) -> "Expr":
        """Reinterpret on another chart whose coordinates include this chart's."""
        images = [Expr.coord(target, c) for c in self.chart.coords]
        return self.subst(target, images)

    # -- evaluation --------------------------------------------------------

    def eval(self, point: Sequence[float]) -> float:
        if len(point) != self.chart.dim:
            raise EvalError(
                f"point of length {len(point)} on {self.chart.dim}-dimensional chart"
            )
        try:
            nv = _poly_eval(self.num, point)
            dv = _poly_eval(self.den, point)
        except OverflowError as e:
            raise EvalError(f"overflow during evaluation: {e}") from None
        if dv == 0.0:
            raise EvalError("denominator vanishes at the sample point")
        v = nv / dv
        if math.isnan(v) or math.isinf(v):
            raise EvalError("non-finite value")
        return v

    def max_term_magnitude(self, point: Sequence[float]) -> float:
        """Largest |term| of the numerator over the denominator, for tolerance scaling."""
        dv = _poly_eval(self.den, point)
        if dv == 0.0:
            raise EvalError("denominator vanishes at the sample point")
        best = 0.0
        for k, c in self.num.items():
            best = max(best, abs(_poly_eval({k: c}, point) / dv))
        return best

    # -- printing ----------------------------------------------------------

    def __repr__(self) -> str:
        return f"Expr({self!s})"

    def __str__(self) -> str:
        num = _poly_str(self.num, self.chart)
        if not self.has_denominator:
            return num
        return f"({num})/({_poly_str(self.den, self.chart)})"


def _poly_eval(p: Poly, point: Sequence[float]) -> float:
    total = 0.0
    for (m, e), c in p.items():
        v = float(c)
        for x, k in zip(point, m):
            if k:
                v *= x**k
        if any(e):
            arg = float(e[0]) + sum(float(q) * x for q, x in zip(e[1:], point))
            v *= math.exp(arg)
        total += v
    return total


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _affine_str(e: ExpV, chart: Chart) -> str:
    parts = []
    if e[0]:
        parts.append(_frac_str(e[0]))
    for coord, q in zip(chart.coords, e[1:]):
        if not q:
            continue
        if q == 1:
            parts.append(coord)
        elif q == -1:
            parts.append(f"-{coord}")
        else:
            parts.append(f"{_frac_str(q)}*{coord}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def _poly_str(p: Poly, chart: Chart) -> str:
    if not p:
        return "0"
    pieces = []
    for (m, e) in sorted(p, key=lambda k: (-sum(k[0]), tuple(-x for x in k[0]), k[1])):
        c = p[(m, e)]
        factors = []
        for coord, k in zip(chart.coords, m):
            if k == 1:
                factors.append(coord)
            elif k > 1:
                factors.append(f"{coord}^{k}")
        if any(e):
            factors.append(f"exp({_affine_str(e, chart)})")
        mag = abs(c)
        if mag != 1 or not factors:
            factors.insert(0, _frac_str(mag))
        pieces.append((c < 0, "*".join(factors)))
    neg, body = pieces[0]
    out = f"-{body}" if neg else body
    for neg, body in pieces[1:]:
        out += f" - {body}" if neg else f" + {body}"
    return out


# ---------------------------------------------------------------------------
# parser


_TOKEN_CHARS = set("+-*/^()")


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_CHARS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            seen_dot = False
            while j < len(text) and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            tokens.append(("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.chart = chart

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            e = e + t if op == "+" else e - t
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            f = self.factor()
            if op == "*":
                e = e * f
            else:
                if f.is_symbolic_zero:
                    raise ParseError("division by zero", self.peek()[2])
                e = e / f
        return e

    def factor(self) -> Expr:
        e = self.base()
        if self.peek()[0] == "^":
            self.take()
        else:
            return e
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        tok = self.take("num")
        if "." in tok[1]:
            raise ParseError("exponent must be an integer", tok[2])
        return e ** (sign * int(tok[1]))

    def base(self) -> Expr:
        tok = self.peek()
        if tok[0] == "-":
            self.take()
            return -self.base()
        if tok[0] == "num":
            self.take()
            return Expr.const(self.chart, Fraction(tok[1]))
        if tok[0] == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if tok[0] == "ident":
            self.take()
            if tok[1] == "exp":
                self.take("(")
                arg = self.expr()
                self.take(")")
                if arg.affine_parts() is None:
                    raise ParseError("exp argument must be affine in the coordinates", tok[2])
                return Expr.exp(arg)
            if tok[1] not in self.chart.coords:
                raise ParseError(f"unknown identifier {tok[1]!r}", tok[2])
            return Expr.coord(self.chart, tok[1])
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2])


def parse(text: str, chart: Chart) -> Expr:
    return _Parser(text, chart).parse()


def diff(e: Expr, coord: str) -> Expr:
    return e.diff(coord)


def evaluate(e: Expr, point: Sequence[float]) -> float:
    return e.eval(point)


# ---------------------------------------------------------------------------
# zero verdicts


SYMBOLIC_ZERO = "SymbolicZero"
SAMPLED_ZERO = "SampledZero"
NONZERO = "NonZero"

DEFAULT_TOL = 1e-9
DEFAULT_SAMPLES = 25
DEFAULT_SEED = 0


@dataclass
class Verdict:
    kind: str
    witness: Optional[tuple[float, ...]] = None
    value: Optional[float] = None
    skipped: list[tuple[float, ...]] = field(default_factory=list)
    assumptions: list[str] = field(default_factory=list)
    max_residual: float = 0.0

    @property
    def passed(self) -> bool:
        return self.kind in (SYMBOLIC_ZERO, SAMPLED_ZERO)

    def __str__(self) -> str:
        if self.kind == NONZERO:
            parts = []
            if self.witness is not None:
                parts.append(f"witness={self.witness}")
            if self.value is not None:
                parts.append(f"value={self.value:.3e}")
            parts.extend(self.assumptions)
            return f"NonZero({', '.join(parts)})"
        return self.kind


def sample_points(
    chart: Chart, count: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED
) -> list[tuple[float, ...]]:
    """Deterministic sample points in the box [-1, 1]^n."""
    rng = random.Random(f"{seed}:{chart.dim}:{count}")
    return [tuple(rng.uniform(-1.0, 1.0) for _ in range(chart.dim)) for _ in range(count)]


def is_zero(
    e: Expr,
    samples: Optional[Iterable[Sequence[float]]] = None,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
) -> Verdict:
    """SymbolicZero on a vanishing canonical form, else a sampled verdict.

    Sampled residuals are compared against ``tol * (1 + max |term|)``; points
    within 1e-3 of a denominator zero are skipped and recorded.
    """
    if e.is_symbolic_zero:
        return Verdict(SYMBOLIC_ZERO)
    v = Verdict(SAMPLED_ZERO)
    if e.has_denominator:
        v.assumptions.append(f"denominator nonvanishing: {_poly_str(e.den, e.chart)}")
    pts = list(samples) if samples is not None else sample_points(e.chart, seed=seed)
    if not pts:
        raise ExprError("sampled zero test needs at least one point")
    tested = 0
    for p in pts:
        try:
            dv = _poly_eval(e.den, p)
            if abs(dv) < 1e-3:
                v.skipped.append(tuple(p))
                continue
            val = e.eval(p)
            scale = 1.0 + e.max_term_magnitude(p)
        except EvalError:
            v.skipped.append(tuple(p))
            continue
        tested += 1
        v.max_residual = max(v.max_residual, abs(val))
        if abs(val) > tol * scale:
            return Verdict(
                NONZERO,
                witness=tuple(p),
                value=val,
                skipped=v.skipped,
                assumptions=v.assumptions,
                max_residual=abs(val),
            )
    if tested == 0:
        return Verdict(
            NONZERO,
            witness=None,
            value=None,
            skipped=v.skipped,
            assumptions=v.assumptions + ["all sample points skipped"],
        )
    if v.skipped:
        v.assumptions.append(f"{len(v.skipped)} sample point(s) skipped near denominator zeros")
    return v
