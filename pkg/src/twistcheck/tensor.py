"""Exterior and multivector calculus on coordinate charts.

Differential forms and multivector fields are stored densely: one exact
scalar per strictly increasing multi-index.  Degree 0 is a single scalar
keyed by the empty index.  All operations are pure; values are immutable
in practice (components are never mutated after construction).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .expr import Chart, Expr, ExprError

__all__ = [
    "Form",
    "MultiVec",
    "PairForm",
    "PairVec",
    "SmoothMap",
    "ProjectabilityFailure",
    "differential",
    "wedge",
    "ext_d",
    "interior",
    "lie",
    "schouten",
    "sharp",
    "sharp1",
    "sharp_tensor",
    "pair_sharp",
    "pullback",
    "pushforward_projection",
    "pushforward_diffeo",
]

Index = tuple[int, ...]


def increasing_indices(n: int, k: int) -> list[Index]:
    return list(itertools.combinations(range(n), k))


def _sort_index(idx: Sequence[int]) -> Optional[tuple[Index, int]]:
    """Sorted index and permutation sign; None when indices repeat."""
    if len(set(idx)) != len(idx):
        return None
    order = sorted(range(len(idx)), key=lambda t: idx[t])
    sign = 1
    perm = list(order)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return tuple(idx[t] for t in order), sign


class _Tensor:
    """Shared storage/arithmetic for forms and multivector fields."""

    kind = "tensor"

    def __init__(self, chart: Chart, degree: int, comps: Optional[dict[Index, Expr]] = None):
        n = chart.dim
        # degrees above the dimension are allowed and identically zero
        if degree < 0:
            raise ExprError(f"negative degree {degree}")
        self.chart = chart
        self.degree = degree
        table = {idx: Expr.zero(chart) for idx in increasing_indices(n, degree)}
        if comps:
            for idx, e in comps.items():
                key = tuple(idx)
                if key not in table:
                    raise ExprError(f"invalid degree-{degree} multi-index {key}")
                if e.chart != chart:
                    raise ExprError("component chart mismatch")
                table[key] = e
        self.comps = table

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, chart: Chart, degree: int):
        return cls(chart, degree)

    @classmethod
    def scalar(cls, e: Expr):
        return cls(e.chart, 0, {(): e})

    @classmethod
    def basis(cls, chart: Chart, *indices: int):
        return cls(chart, len(indices), {tuple(indices): Expr.one(chart)})

    def component(self, *idx: int) -> Expr:
        """Component at an arbitrary (possibly unsorted) multi-index."""
        s = _sort_index(idx)
        if s is None or s[0] not in self.comps:
            return Expr.zero(self.chart)
        key, sign = s
        c = self.comps[key]
        return c if sign == 1 else -c

    def as_scalar(self) -> Expr:
        if self.degree != 0:
            raise ExprError("not a degree-0 tensor")
        return self.comps[()]

    # -- algebra -----------------------------------------------------------

    def _check(self, other):
        if type(self) is not type(other):
            raise ExprError(f"kind mismatch: {self.kind} vs {other.kind}")
        if self.chart != other.chart:
            raise ExprError("chart mismatch")

    def __add__(self, other):
        self._check(other)
        if self.degree != other.degree:
            raise ExprError("degree mismatch in sum")
        return type(self)(
            self.chart, self.degree, {k: v + other.comps[k] for k, v in self.comps.items()}
        )

    def __neg__(self):
        return type(self)(self.chart, self.degree, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        if not isinstance(f, Expr):
            f = Expr.const(self.chart, f)
        return type(self)(self.chart, self.degree, {k: f * v for k, v in self.comps.items()})

    def __rmul__(self, f):
        return self.scale(f)

    def map_components(self, fn: Callable[[Expr], Expr], chart: Optional[Chart] = None):
        return type(self)(
            chart or self.chart, self.degree, {k: fn(v) for k, v in self.comps.items()}
        )

    @property
    def is_symbolic_zero(self) -> bool:
        return all(v.is_symbolic_zero for v in self.comps.values())

    def equals(self, other) -> bool:
        self._check(other)
        return self.degree == other.degree and (self - other).is_symbolic_zero

    def _str(self, basis_name: Callable[[int], str]) -> str:
        pieces = []
        for idx, v in self.comps.items():
            if v.is_symbolic_zero:
                continue
            label = "^".join(basis_name(i) for i in idx) or "1"
            body = str(v)
            if body == "1":
                pieces.append(label if idx else "1")
            elif body == "-1":
                pieces.append(f"-{label}" if idx else "-1")
            else:
                coeff = body if ("+" not in body and " - " not in body) else f"({body})"
                pieces.append(f"{coeff}*{label}" if idx else coeff)
        if not pieces:
            return "0"
        out = pieces[0]
        for p in pieces[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


class Form(_Tensor):
    kind = "form"

    @classmethod
    def d_coord(cls, chart: Chart, coord: str) -> "Form":
        return cls.basis(chart, chart.index(coord))

    def apply(self, vectors: Sequence["MultiVec"]) -> Expr:
        """Evaluate on vector fields with the determinant convention."""
        if len(vectors) != self.degree:
            raise ExprError("wrong number of vector arguments")
        for v in vectors:
            if not isinstance(v, MultiVec) or v.degree != 1 or v.chart != self.chart:
                raise ExprError("form arguments must be vector fields on the same chart")
        total = Expr.zero(self.chart)
        for idx, c in self.comps.items():
            if c.is_symbolic_zero:
                continue
            total = total + c * _det(
                [[v.comps[(i,)] for i in idx] for v in vectors], self.chart
            )
        return total

    def __str__(self) -> str:
        return self._str(lambda i: f"d{self.chart.coords[i]}")


class MultiVec(_Tensor):
    kind = "multivector"

    @classmethod
    def d_dx(cls, chart: Chart, coord: str) -> "MultiVec":
        return cls.basis(chart, chart.index(coord))

    def apply(self, covectors: Sequence["Form"]) -> Expr:
        """Evaluate on 1-forms with the determinant convention."""
        if len(covectors) != self.degree:
            raise ExprError("wrong number of covector arguments")
        for a in covectors:
            if not isinstance(a, Form) or a.degree != 1 or a.chart != self.chart:
                raise ExprError("multivector arguments must be 1-forms on the same chart")
        total = Expr.zero(self.chart)
        for idx, c in self.comps.items():
            if c.is_symbolic_zero:
                continue
            total = total + c * _det(
                [[a.comps[(i,)] for i in idx] for a in covectors], self.chart
            )
        return total

    def of(self, f: Expr) -> Expr:
        """Directional derivative X(f) for a vector field."""
        if self.degree != 1:
            raise ExprError("directional derivative needs a vector field")
        out = Expr.zero(self.chart)
        for i, coord in enumerate(self.chart.coords):
            out = out + self.comps[(i,)] * f.diff(coord)
        return out

    def __str__(self) -> str:
        return self._str(lambda i: f"d/d{self.chart.coords[i]}")


def differential(f: Expr) -> Form:
    """df as a 1-form."""
    chart = f.chart
    return Form(chart, 1, {(i,): f.diff(c) for i, c in enumerate(chart.coords)})


def _det(rows: list[list[Expr]], chart: Chart) -> Expr:
    k = len(rows)
    if k == 0:
        return Expr.one(chart)
    total = Expr.zero(chart)
    for perm in itertools.permutations(range(k)):
        sign = _perm_sign(perm)
        term = Expr.const(chart, sign)
        for r, c in enumerate(perm):
            term = term * rows[r][c]
        total = total + term
    return total


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# core operations


def wedge(a, b):
    a._check(b)
    out: dict[Index, Expr] = {}
    for ia, ca in a.comps.items():
        if ca.is_symbolic_zero:
            continue
        for ib, cb in b.comps.items():
            if cb.is_symbolic_zero:
                continue
            s = _sort_index(ia + ib)
            if s is None:
                continue
            key, sign = s
            term = ca * cb if sign == 1 else -(ca * cb)
            out[key] = out.get(key, Expr.zero(a.chart)) + term
    return type(a)(a.chart, a.degree + b.degree, out)


def ext_d(a: Form) -> Form:
    if not isinstance(a, Form):
        raise ExprError("ext_d expects a form")
    n = a.chart.dim
    if a.degree >= n:
        return Form(a.chart, a.degree + 1)
    out: dict[Index, Expr] = {}
    for idx, c in a.comps.items():
        if c.is_symbolic_zero:
            continue
        for i in range(n):
            dc = c.diff(a.chart.coords[i])
            if dc.is_symbolic_zero:
                continue
            s = _sort_index((i,) + idx)
            if s is None:
                continue
            key, sign = s
            term = dc if sign == 1 else -dc
            out[key] = out.get(key, Expr.zero(a.chart)) + term
    return Form(a.chart, a.degree + 1, out)


def interior(x: MultiVec, a: Form) -> Form:
    if not isinstance(x, MultiVec) or x.degree != 1:
        raise ExprError("interior product expects a vector field")
    if not isinstance(a, Form) or a.chart != x.chart:
        raise ExprError("interior product expects a form on the same chart")
    if a.degree == 0:
        raise ExprError("interior product of a degree-0 form")
    return _contract_first(x.comps, a, Form)


def _contract_first(vec_comps: dict[Index, Expr], t, out_cls):
    """Contract a vector/covector into a tensor's first slot."""
    chart = t.chart
    out: dict[Index, Expr] = {}
    for rest in increasing_indices(chart.dim, t.degree - 1):
        total = Expr.zero(chart)
        for j in range(chart.dim):
            xj = vec_comps[(j,)]
            if xj.is_symbolic_zero:
                continue
            total = total + xj * t.component(j, *rest)
        out[rest] = total
    return out_cls(chart, t.degree - 1, out)


def _contract_form(alpha: Form, p: MultiVec) -> MultiVec:
    """i(α)P: contraction of a 1-form into a multivector's first slot."""
    if p.degree == 0:
        raise ExprError("contraction of a degree-0 multivector")
    return _contract_first(alpha.comps, p, MultiVec)


def lie(x: MultiVec, t):
    """Lie derivative along a vector field: Cartan on forms, Leibniz on multivectors."""
    if not isinstance(x, MultiVec) or x.degree != 1:
        raise ExprError("Lie derivative expects a vector field")
    if t.chart != x.chart:
        raise ExprError("chart mismatch")
    chart = t.chart
    if t.degree == 0:
        return type(t).scalar(x.of(t.as_scalar()))
    if isinstance(t, Form):
        return interior(x, ext_d(t)) + ext_d(interior(x, t))
    # multivector: (L_X P)^I = X(P^I) - sum over slots of P^{I[t]->m} dX^{I[t]}/dx_m
    out: dict[Index, Expr] = {}
    for idx in increasing_indices(chart.dim, t.degree):
        total = x.of(t.comps[idx])
        for pos, i in enumerate(idx):
            for m in range(chart.dim):
                dxi = x.comps[(i,)].diff(chart.coords[m])
                if dxi.is_symbolic_zero:
                    continue
                replaced = idx[:pos] + (m,) + idx[pos + 1 :]
                total = total - t.component(*replaced) * dxi
        out[idx] = total
    return MultiVec(chart, t.degree, out)


def schouten(p: MultiVec, q: MultiVec) -> MultiVec:
    """Schouten-Nijenhuis bracket, degree p+q-1.

    Pinned by: [X,Y] = Lie bracket, [f,P] = -i(df)P, graded Leibniz in the
    second slot, and graded antisymmetry [P,Q] = -(-1)^{(p-1)(q-1)}[Q,P].
    """
    if not isinstance(p, MultiVec) or not isinstance(q, MultiVec):
        raise ExprError("schouten expects multivector fields")
    if p.chart != q.chart:
        raise ExprError("chart mismatch")
    chart = p.chart
    dp, dq = p.degree, q.degree
    if dp == 0:
        f = p.as_scalar()
        if dq == 0:
            return MultiVec.scalar(Expr.zero(chart))
        df = Form(chart, 1, {(i,): f.diff(c) for i, c in enumerate(chart.coords)})
        return -_contract_form(df, q)
    if dq == 0:
        sign = -1 if ((dp - 1) * (dq - 1)) % 2 == 0 else 1
        return schouten(q, p).scale(sign)
    if dp == 1:
        return lie(p, q)
    # split a vector factor off the first argument and apply graded Leibniz
    result = MultiVec.zero(chart, dp + dq - 1)
    for idx, c in p.comps.items():
        if c.is_symbolic_zero:
            continue
        a = MultiVec(chart, 1, {(idx[0],): c})
        b = MultiVec.basis(chart, *idx[1:])
        # [A^B, Q] = -(-1)^{(p-1)(q-1)} ( [Q,A]^B + (-1)^{q-1} A^[Q,B] )
        flip = -((-1) ** ((dp - 1) * (dq - 1)))
        qa = -lie(a, q)
        qb = schouten(q, b)
        term = wedge(qa, b) + wedge(a, qb).scale((-1) ** (dq - 1))
        result = result + term.scale(flip)
    return result


# ---------------------------------------------------------------------------
# sharp extensions


def sharp(lam: MultiVec, z: Form) -> MultiVec:
    """Extension of the bivector-induced bundle map to forms of any degree."""
    if lam.degree != 2:
        raise ExprError("sharp expects a bivector")
    if z.chart != lam.chart:
        raise ExprError("chart mismatch")
    chart = lam.chart
    n = chart.dim
    k = z.degree
    if k == 0:
        return MultiVec.scalar(z.as_scalar())
    basis_images = [sharp1(lam, Form.basis(chart, i)) for i in range(n)]
    if k == 1:
        out = MultiVec.zero(chart, 1)
        for (i,), c in z.comps.items():
            out = out + basis_images[i].scale(c)
        return out
    sign = (-1) ** k
    out: dict[Index, Expr] = {}
    for idx in increasing_indices(n, k):
        val = z.apply([basis_images[i] for i in idx])
        out[idx] = val if sign == 1 else -val
    return MultiVec(chart, k, out)


def sharp1(lam: MultiVec, zeta: Form) -> MultiVec:
    """Bivector sharp on a 1-form: <eta, sharp(zeta)> = Lambda(zeta, eta)."""
    chart = lam.chart
    out: dict[Index, Expr] = {}
    for j in range(chart.dim):
        total = Expr.zero(chart)
        for i in range(chart.dim):
            ci = zeta.comps[(i,)]
            if ci.is_symbolic_zero:
                continue
            total = total + ci * lam.component(i, j)
        out[(j,)] = total
    return MultiVec(chart, 1, out)


def sharp_tensor(lam: MultiVec, z: Form, x: MultiVec) -> MultiVec:
    """The tensored sharp map contracted with a vector field.

    The result R satisfies R(a_1,...,a_{k-1}) = (-1)^k z(sharp a_1, ...,
    sharp a_{k-1}, X) on 1-form arguments.
    """
    if lam.degree != 2 or x.degree != 1:
        raise ExprError("sharp_tensor expects a bivector and a vector field")
    if z.degree < 1:
        raise ExprError("sharp_tensor needs a form of degree >= 1")
    chart = lam.chart
    k = z.degree
    sign = (-1) ** k
    basis_images = [sharp1(lam, Form.basis(chart, i)) for i in range(chart.dim)]
    out: dict[Index, Expr] = {}
    for idx in increasing_indices(chart.dim, k - 1):
        val = z.apply([basis_images[i] for i in idx] + [x])
        out[idx] = val if sign == 1 else -val
    return MultiVec(chart, k - 1, out)


# ---------------------------------------------------------------------------
# pair calculus (sections of E^1(M) = TM x R and its dual)


@dataclass
class PairForm:
    """A k-form together with a (k-1)-form, acting on pair arguments."""

    primary: Form
    secondary: Form

    def __post_init__(self):
        if self.primary.chart != self.secondary.chart:
            raise ExprError("pair parts must share a chart")
        if self.secondary.degree != self.primary.degree - 1:
            raise ExprError("secondary degree must be one less than primary")

    @property
    def chart(self) -> Chart:
        return self.primary.chart

    @property
    def degree(self) -> int:
        return self.primary.degree

    @staticmethod
    def section(zeta: Form, f: Expr) -> "PairForm":
        return PairForm(zeta, Form.scalar(f))

    def apply(self, args: Sequence["PairVec"]) -> Expr:
        """(z, z')((X_1,f_1),...,(X_k,f_k)) with alternating f-terms."""
        if len(args) != self.degree:
            raise ExprError("wrong number of pair arguments")
        vecs = [a.primary for a in args]
        total = self.primary.apply(vecs)
        for i, a in enumerate(args):
            fi = a.secondary.as_scalar()
            if fi.is_symbolic_zero:
                continue
            rest = vecs[:i] + vecs[i + 1 :]
            term = fi * self.secondary.apply(rest)
            total = total + (term if i % 2 == 0 else -term)
        return total


@dataclass
class PairVec:
    """A k-vector together with a (k-1)-vector; degree 1 is (X, f)."""

    primary: MultiVec
    secondary: MultiVec

    def __post_init__(self):
        if self.primary.chart != self.secondary.chart:
            raise ExprError("pair parts must share a chart")
        if self.secondary.degree != self.primary.degree - 1:
            raise ExprError("secondary degree must be one less than primary")

    @property
    def chart(self) -> Chart:
        return self.primary.chart

    @property
    def degree(self) -> int:
        return self.primary.degree

    @staticmethod
    def section(x: MultiVec, f: Expr) -> "PairVec":
        return PairVec(x, MultiVec.scalar(f))

    @property
    def is_symbolic_zero(self) -> bool:
        return self.primary.is_symbolic_zero and self.secondary.is_symbolic_zero

    def __add__(self, other: "PairVec") -> "PairVec":
        return PairVec(self.primary + other.primary, self.secondary + other.secondary)

    def __neg__(self) -> "PairVec":
        return PairVec(-self.primary, -self.secondary)

    def __sub__(self, other: "PairVec") -> "PairVec":
        return self + (-other)

    def scale(self, f) -> "PairVec":
        return PairVec(self.primary.scale(f), self.secondary.scale(f))

    def apply(self, args: Sequence["PairForm"]) -> Expr:
        """Dual evaluation on degree-1 pair forms with alternating f-terms."""
        if len(args) != self.degree:
            raise ExprError("wrong number of pair-form arguments")
        if any(a.degree != 1 for a in args):
            raise ExprError("pair-vector evaluation takes degree-1 pair forms")
        forms = [a.primary for a in args]
        total = self.primary.apply(forms)
        for i, a in enumerate(args):
            fi = a.secondary.as_scalar()
            if fi.is_symbolic_zero:
                continue
            term = fi * self.secondary.apply(forms[:i] + forms[i + 1 :])
            total = total + (term if i % 2 == 0 else -term)
        return total


def pair_sharp(l: PairVec, z: PairForm) -> PairVec:
    """Sharp map of a (bivector, vector) pair on pair forms of any degree."""
    if l.degree != 2:
        raise ExprError("pair_sharp expects a (bivector, vector field) pair")
    if l.chart != z.chart:
        raise ExprError("chart mismatch")
    chart = l.chart
    lam, e = l.primary, l.secondary
    k = z.degree
    if k == 0:
        raise ExprError("pair_sharp needs degree >= 1")
    if k == 1:
        zeta, f = z.primary, z.secondary.as_scalar()
        prim = sharp1(lam, zeta) + e.scale(f)
        sec = -zeta.apply([e])
        return PairVec.section(prim, sec)
    # degree k >= 2: evaluate the defining alternating identity on basis pairs
    basis_pairs = [
        PairVec.section(sharp1(lam, Form.basis(chart, i)), -e.comps[(i,)])
        for i in range(chart.dim)
    ]
    e_pair = PairVec.section(e, Expr.zero(chart))
    sign = (-1) ** k
    prim_out: dict[Index, Expr] = {}
    for idx in increasing_indices(chart.dim, k):
        val = z.apply([basis_pairs[i] for i in idx])
        prim_out[idx] = val if sign == 1 else -val
    sec_out: dict[Index, Expr] = {}
    for idx in increasing_indices(chart.dim, k - 1):
        val = z.apply([e_pair] + [basis_pairs[i] for i in idx])
        sec_out[idx] = val if sign == 1 else -val
    return PairVec(MultiVec(chart, k, prim_out), MultiVec(chart, k - 1, sec_out))


# ---------------------------------------------------------------------------
# smooth maps


class ProjectabilityFailure(ExprError):
    def __init__(self, component: Index, coord: str):
        super().__init__(
            f"component {component} depends on the dropped coordinate {coord!r}"
        )
        self.component = component
        self.coord = coord


@dataclass
class SmoothMap:
    """A map between charts given by target-coordinate expressions."""

    source: Chart
    target: Chart
    components: tuple[Expr, ...]
    section: Optional[tuple[Expr, ...]] = None

    def __post_init__(self):
        if len(self.components) != self.target.dim:
            raise ExprError("one component per target coordinate required")
        for c in self.components:
            if c.chart != self.source:
                raise ExprError("map components must live on the source chart")
        if self.section is not None:
            if len(self.section) != self.source.dim:
                raise ExprError("one section component per source coordinate required")
            for c in self.section:
                if c.chart != self.target:
                    raise ExprError("section components must live on the target chart")
            for j, comp in enumerate(self.components):
                image = comp.subst(self.target, list(self.section))
                if not image.equals(Expr.coord(self.target, self.target.coords[j])):
                    raise ExprError(
                        f"declared section is not a right inverse in coordinate "
                        f"{self.target.coords[j]!r}"
                    )

    @staticmethod
    def identity(chart: Chart) -> "SmoothMap":
        comps = tuple(Expr.coord(chart, c) for c in chart.coords)
        return SmoothMap(chart, chart, comps, comps)

    def compose(self, inner: "SmoothMap") -> "SmoothMap":
        """self after inner (source of the result = source of inner)."""
        if inner.target != self.source:
            raise ExprError("charts do not chain for composition")
        comps = tuple(c.subst(inner.source, list(inner.components)) for c in self.components)
        section = None
        if self.section is not None and inner.section is not None:
            section = tuple(
                c.subst(self.target, list(self.section)) for c in inner.section
            )
        return SmoothMap(inner.source, self.target, comps, section)

    def pull_scalar(self, f: Expr) -> Expr:
        if f.chart != self.target:
            raise ExprError("scalar must live on the target chart")
        return f.subst(self.source, list(self.components))

    def push_scalar(self, f: Expr) -> Expr:
        """Transport a source scalar via the section (needs one declared)."""
        if self.section is None:
            raise ExprError("push_scalar requires a declared section")
        if f.chart != self.source:
            raise ExprError("scalar must live on the source chart")
        return f.subst(self.target, list(self.section))

    def projection_data(self) -> Optional[tuple[list[int], list[int]]]:
        """(kept source indices per target coordinate, dropped indices) when
        every component is exactly one source coordinate; otherwise None."""
        kept = []
        for comp in self.components:
            aff = comp.affine_parts()
            if aff is None or aff[0] != 0:
                return None
            hits = [i for i, q in enumerate(aff[1:]) if q]
            if len(hits) != 1 or aff[1 + hits[0]] != 1:
                return None
            kept.append(hits[0])
        if len(set(kept)) != len(kept):
            return None
        dropped = [i for i in range(self.source.dim) if i not in kept]
        return kept, dropped


def pullback(phi: SmoothMap, a: Form) -> Form:
    if not isinstance(a, Form) or a.chart != phi.target:
        raise ExprError("pullback expects a form on the target chart")
    src = phi.source
    if a.degree == 0:
        return Form.scalar(phi.pull_scalar(a.as_scalar()))
    diffs = [
        Form(
            src,
            1,
            {(i,): comp.diff(src.coords[i]) for i in range(src.dim)},
        )
        for comp in phi.components
    ]
    out = Form.zero(src, a.degree)
    for idx, c in a.comps.items():
        if c.is_symbolic_zero:
            continue
        term = Form.scalar(phi.pull_scalar(c))
        for j in idx:
            term = wedge(term, diffs[j])
        out = out + term
    return out


def pushforward_projection(phi: SmoothMap, p: MultiVec) -> MultiVec:
    """Project a multivector field along a coordinate projection with section.

    Components touching a dropped direction are discarded (they push to
    zero); surviving components must not depend on the dropped coordinates,
    else ProjectabilityFailure is raised.
    """
    if phi.section is None:
        raise ExprError("pushforward requires a declared section")
    data = phi.projection_data()
    if data is None:
        raise ExprError("pushforward_projection needs a coordinate projection")
    kept, dropped = data
    if p.chart != phi.source:
        raise ExprError("multivector must live on the source chart")
    if p.degree > phi.target.dim:
        raise ExprError("degree exceeds the target dimension")
    out: dict[Index, Expr] = {}
    for tidx in increasing_indices(phi.target.dim, p.degree):
        sidx = tuple(sorted(kept[t] for t in tidx))
        comp = p.component(*tuple(kept[t] for t in tidx))
        for d in dropped:
            if comp.depends_on(phi.source.coords[d]):
                raise ProjectabilityFailure(sidx, phi.source.coords[d])
        out[tidx] = comp.subst(phi.target, list(phi.section))
    return MultiVec(phi.target, p.degree, out)


def pushforward_diffeo(phi: SmoothMap, p: MultiVec) -> MultiVec:
    """Push a multivector along an invertible map (section = inverse)."""
    if phi.section is None or phi.source.dim != phi.target.dim:
        raise ExprError("pushforward_diffeo needs an invertible map with inverse")
    # verify the section is also a left inverse
    for j, sec in enumerate(phi.section):
        back = sec.subst(phi.source, list(phi.components))
        if not back.equals(Expr.coord(phi.source, phi.source.coords[j])):
            raise ExprError("declared section is not a two-sided inverse")
    if p.chart != phi.source:
        raise ExprError("multivector must live on the source chart")
    if p.degree == 0:
        return MultiVec.scalar(phi.push_scalar(p.as_scalar()))
    pulled = [pullback(phi, Form.basis(phi.target, t)) for t in range(phi.target.dim)]
    out: dict[Index, Expr] = {}
    for tidx in increasing_indices(phi.target.dim, p.degree):
        val = p.apply([pulled[t] for t in tidx])
        out[tidx] = phi.push_scalar(val)
    return MultiVec(phi.target, p.degree, out)
