"""Scenario files: JSON documents declaring charts, structures and checks.

Schema
------
{
  "charts": {"R3": ["x", "y", "z"]},
  "structures": {
    "std-contact": {"type": "contact", "chart": "R3",
                    "theta": {"dz": "1", "dx": "-y"}, "omega": {}},
    "std-jacobi":  {"type": "jacobi", "chart": "R3",
                    "lam": {"d/dx^d/dy": "1"}, "e": {"d/dz": "1"},
                    "omega": {}},
    "hom":         {"type": "homogeneous", ... "z": {"d/ds": "1"}},
    "pair":        {"type": "pair_groupoid", "base": "std-contact"},
    "path":        {"type": "apath", "structure": "std-jacobi", "param": "t",
                    "gamma": [...], "zeta": [...], "f": "1", "n": 64}
  },
  "checks": [{"check": "contact", "target": "std-contact", "tol": 1e-9}, ...]
}

Component keys: forms use "dx^dy" (degree 0: "1"), multivectors use
"d/dx^d/dy".  Expression strings follow the expression grammar.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any, Optional

from .expr import Chart, Expr, ExprError, parse, sample_points
from .report import CheckReport
from .tensor import Form, MultiVec, SmoothMap
from .jacobi import (
    HomTwistedPoisson,
    TwistedJacobi,
    check_algebroid,
    check_homogeneous,
    check_twisted_jacobi,
    poissonize,
)
from .contact import (
    TwistedContact,
    check_contact,
    contact_poissonization_check,
    jacobi_from_contact,
)
from .groupoid import (
    GroupoidModel,
    base_coincidence_check,
    build_pair_groupoid,
    check_algebroid_morphism,
    check_axioms,
    check_multiplicativity,
    check_properties,
    induced_base_structure,
    suspend,
)
from . import apath as _apath

__all__ = [
    "Scenario",
    "ScenarioError",
    "CheckOutcome",
    "load",
    "loads",
    "run",
    "derive",
    "render_structure",
]


class ScenarioError(ExprError):
    """Schema violation, annotated with the JSON path of the offender."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class CheckOutcome:
    name: str
    verdict: str  # SymbolicZero | SampledZero | NonZero | Error
    passed: bool
    max_residual: float
    assumptions: list[str]
    ms: float
    lines: list[str] = field(default_factory=list)

    def machine_record(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "max_residual": self.max_residual,
            "assumptions": self.assumptions,
            "ms": round(self.ms, 3),
        }


@dataclass
class Scenario:
    charts: dict[str, Chart]
    structures: dict[str, Any]
    checks: list[dict]
    raw: dict


def _expect(cond: bool, where: str, message: str) -> None:
    if not cond:
        raise ScenarioError(where, message)


def _parse_expr(text: Any, chart: Chart, where: str) -> Expr:
    _expect(isinstance(text, str), where, "expected an expression string")
    try:
        return parse(text, chart)
    except ExprError as exc:
        raise ScenarioError(where, str(exc)) from exc


def _key_indices(key: str, chart: Chart, prefix: str, where: str) -> tuple[int, ...]:
    if key == "1":
        return ()
    idx = []
    for part in key.split("^"):
        _expect(part.startswith(prefix), where, f"component key part {part!r} must start with {prefix!r}")
        coord = part[len(prefix):]
        try:
            idx.append(chart.index(coord))
        except ExprError as exc:
            raise ScenarioError(where, str(exc)) from exc
    _expect(list(idx) == sorted(set(idx)), where, f"key {key!r} must use strictly increasing coordinates")
    return tuple(idx)


def _parse_form(data: Any, chart: Chart, degree: int, where: str) -> Form:
    _expect(isinstance(data, dict), where, "expected a component table")
    comps = {}
    for key, text in data.items():
        idx = _key_indices(key, chart, "d", f"{where}.{key}")
        _expect(len(idx) == degree, f"{where}.{key}", f"expected a degree-{degree} key")
        comps[idx] = _parse_expr(text, chart, f"{where}.{key}")
    return Form(chart, degree, comps)


def _parse_vec(data: Any, chart: Chart, degree: int, where: str) -> MultiVec:
    _expect(isinstance(data, dict), where, "expected a component table")
    comps = {}
    for key, text in data.items():
        idx = _key_indices(key, chart, "d/d", f"{where}.{key}")
        _expect(len(idx) == degree, f"{where}.{key}", f"expected a degree-{degree} key")
        comps[idx] = _parse_expr(text, chart, f"{where}.{key}")
    return MultiVec(chart, degree, comps)


def _form_key(idx: tuple[int, ...], chart: Chart) -> str:
    return "1" if not idx else "^".join("d" + chart.coords[i] for i in idx)


def _vec_key(idx: tuple[int, ...], chart: Chart) -> str:
    return "1" if not idx else "^".join("d/d" + chart.coords[i] for i in idx)


def _render_comps(t, keyer) -> dict[str, str]:
    out = {}
    for idx in sorted(t.comps):
        v = t.comps[idx]
        if not v.is_symbolic_zero:
            out[keyer(idx, t.chart)] = str(v)
    return out


def render_structure(obj, charts: dict[str, Chart]) -> dict:
    """Scenario-syntax definition of a derived object (round-trippable).
    Charts not yet declared are added to the passed registry."""
    name_of = {chart: name for name, chart in charts.items()}

    def chart_name(chart: Chart) -> str:
        if chart not in name_of:
            name_of[chart] = chart.name
            charts.setdefault(chart.name, chart)
        return name_of[chart]

    if isinstance(obj, TwistedJacobi):
        return {
            "type": "jacobi",
            "chart": chart_name(obj.chart),
            "lam": _render_comps(obj.lam, _vec_key),
            "e": _render_comps(obj.e, _vec_key),
            "omega": _render_comps(obj.omega, _form_key),
        }
    if isinstance(obj, HomTwistedPoisson):
        return {
            "type": "homogeneous",
            "chart": chart_name(obj.chart),
            "lam": _render_comps(obj.lam, _vec_key),
            "omega": _render_comps(obj.omega, _form_key),
            "z": _render_comps(obj.z, _vec_key),
        }
    if isinstance(obj, TwistedContact):
        return {
            "type": "contact",
            "chart": chart_name(obj.chart),
            "theta": _render_comps(obj.theta, _form_key),
            "omega": _render_comps(obj.omega, _form_key),
        }
    if isinstance(obj, MultiVec):
        return {"type": "multivector", "chart": chart_name(obj.chart),
                "components": _render_comps(obj, _vec_key)}
    if isinstance(obj, GroupoidModel):
        return {
            "type": "groupoid",
            "base_chart": chart_name(obj.base),
            "total_chart": chart_name(obj.total),
            "composable_chart": chart_name(obj.composable),
            "maps": {
                key: [str(c) for c in getattr(obj, key).components]
                for key in ("alpha", "beta", "iota", "eps", "pr1", "pr2", "m")
            },
            "r": str(obj.r),
            "theta": _render_comps(obj.theta, _form_key),
            "omega0": _render_comps(obj.omega0, _form_key),
            "omega": _render_comps(obj.omega, _form_key),
        }
    raise ScenarioError("derive", f"cannot render a {type(obj).__name__}")


def _required(d: dict, key: str, where: str):
    _expect(key in d, where, f"missing field {key!r}")
    return d[key]


def _chart_of(sc: Scenario, d: dict, where: str, key: str = "chart") -> Chart:
    name = _required(d, key, where)
    _expect(name in sc.charts, f"{where}.{key}", f"unknown chart {name!r}")
    return sc.charts[name]


def _build_structure(sc: Scenario, name: str, d: dict):
    where = f"structures.{name}"
    _expect(isinstance(d, dict), where, "expected an object")
    kind = _required(d, "type", where)
    if kind == "jacobi":
        chart = _chart_of(sc, d, where)
        return TwistedJacobi(
            chart,
            _parse_vec(_required(d, "lam", where), chart, 2, f"{where}.lam"),
            _parse_vec(_required(d, "e", where), chart, 1, f"{where}.e"),
            _parse_form(d.get("omega", {}), chart, 2, f"{where}.omega"),
        )
    if kind == "contact":
        chart = _chart_of(sc, d, where)
        # constructor errors are domain preconditions, reported per check
        return TwistedContact(
            chart,
            _parse_form(_required(d, "theta", where), chart, 1, f"{where}.theta"),
            _parse_form(d.get("omega", {}), chart, 2, f"{where}.omega"),
        )
    if kind == "homogeneous":
        chart = _chart_of(sc, d, where)
        return HomTwistedPoisson(
            chart,
            _parse_vec(_required(d, "lam", where), chart, 2, f"{where}.lam"),
            _parse_form(d.get("omega", {}), chart, 2, f"{where}.omega"),
            _parse_vec(_required(d, "z", where), chart, 1, f"{where}.z"),
        )
    if kind == "pair_groupoid":
        base = _resolve(sc, _required(d, "base", where), f"{where}.base")
        _expect(isinstance(base, TwistedContact), f"{where}.base",
                "the pair-groupoid base must be a contact structure")
        model, _ = build_pair_groupoid(base)
        return model
    if kind == "groupoid":
        base = _chart_of(sc, d, where, "base_chart")
        total = _chart_of(sc, d, where, "total_chart")
        comp = _chart_of(sc, d, where, "composable_chart")
        maps = _required(d, "maps", where)

        def smooth(key: str, src: Chart, tgt: Chart, section_of: Optional[str] = None) -> SmoothMap:
            comps_txt = _required(maps, key, f"{where}.maps")
            _expect(isinstance(comps_txt, list) and len(comps_txt) == tgt.dim,
                    f"{where}.maps.{key}", f"expected {tgt.dim} component expressions")
            comps = tuple(_parse_expr(t, src, f"{where}.maps.{key}") for t in comps_txt)
            section = None
            if section_of is not None and section_of in maps:
                stexts = maps[section_of]
                section = tuple(_parse_expr(t, tgt, f"{where}.maps.{section_of}") for t in stexts)
            return SmoothMap(src, tgt, comps, section=section)

        return GroupoidModel(
            base=base, total=total, composable=comp,
            alpha=smooth("alpha", total, base, section_of="eps"),
            beta=smooth("beta", total, base, section_of="eps"),
            iota=smooth("iota", total, total, section_of="iota"),
            eps=smooth("eps", base, total),
            pr1=smooth("pr1", comp, total),
            pr2=smooth("pr2", comp, total),
            m=smooth("m", comp, total),
            r=_parse_expr(_required(d, "r", where), total, f"{where}.r"),
            theta=_parse_form(_required(d, "theta", where), total, 1, f"{where}.theta"),
            omega0=_parse_form(_required(d, "omega0", where), base, 2, f"{where}.omega0"),
            omega=(
                _parse_form(d["omega"], total, 2, f"{where}.omega")
                if "omega" in d else None
            ),
        )
    if kind == "apath":
        j = _resolve(sc, _required(d, "structure", where), f"{where}.structure")
        _expect(isinstance(j, TwistedJacobi), f"{where}.structure",
                "an A-path needs a twisted Jacobi structure")
        param = Chart(f"{name}-param", (str(d.get("param", "t")),))
        gamma = [_parse_expr(t, param, f"{where}.gamma") for t in _required(d, "gamma", where)]
        zeta = [_parse_expr(t, param, f"{where}.zeta") for t in _required(d, "zeta", where)]
        f = _parse_expr(_required(d, "f", where), param, f"{where}.f")
        n = int(d.get("n", 64))
        return _apath.path_from_exprs(j, gamma, zeta, f, n)
    raise ScenarioError(where, f"unknown structure type {kind!r}")


def _resolve(sc: Scenario, name: Any, where: str):
    _expect(isinstance(name, str), where, "expected a structure name")
    if name not in sc.structures:
        raise ScenarioError(where, f"unresolved reference {name!r}")
    value = sc.structures[name]
    if isinstance(value, dict):  # not yet built
        sc.structures[name] = None  # cycle guard
        try:
            sc.structures[name] = _build_structure(sc, name, value)
        except BaseException:
            sc.structures[name] = value  # keep re-buildable for later checks
            raise
        value = sc.structures[name]
    if value is None:
        raise ScenarioError(where, f"cyclic reference through {name!r}")
    return value


def loads(text: str) -> Scenario:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    _expect(isinstance(raw, dict), "$", "top level must be an object")
    charts_raw = raw.get("charts", {})
    _expect(isinstance(charts_raw, dict), "charts", "expected an object")
    charts = {}
    for name, coords in charts_raw.items():
        _expect(isinstance(coords, list) and all(isinstance(c, str) for c in coords),
                f"charts.{name}", "expected a list of coordinate names")
        try:
            charts[name] = Chart(name, tuple(coords))
        except ExprError as exc:
            raise ScenarioError(f"charts.{name}", str(exc)) from exc
    structures = raw.get("structures", {})
    _expect(isinstance(structures, dict), "structures", "expected an object")
    checks = raw.get("checks", [])
    _expect(isinstance(checks, list), "checks", "expected a list")
    sc = Scenario(charts, dict(structures), list(checks), raw)
    return sc


def load(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


# ---------------------------------------------------------------------------
# check execution


def _samples_for(chart: Chart, count: Optional[int], seed: int):
    if count is None:
        return None
    return sample_points(chart, count=count, seed=seed)


def _report_outcome(name: str, report: CheckReport, ms: float) -> CheckOutcome:
    if not report.passed:
        verdict = "NonZero"
    else:
        kinds = {item.verdict.kind for item in report.items}
        verdict = "SampledZero" if "SampledZero" in kinds else "SymbolicZero"
    lines = [item.line() for item in report.items] + [f"note: {n}" for n in report.notes]
    return CheckOutcome(name, verdict, report.passed, report.max_residual,
                        report.assumptions, ms, lines)


def _numeric_outcome(name: str, value: float, limit: float, ms: float,
                     label: str) -> CheckOutcome:
    passed = abs(value) <= limit
    verdict = "SampledZero" if passed else "NonZero"
    return CheckOutcome(name, verdict, passed, abs(value), [label], ms,
                        [f"[{'PASS' if passed else 'FAIL'}] {label}: {value!r} (limit {limit!r})"])


def _run_check(sc: Scenario, cdef: dict, idx: int,
               tol: float, count: Optional[int], seed: int) -> CheckOutcome:
    where = f"checks[{idx}]"
    kind = _required(cdef, "check", where)
    target_name = _required(cdef, "target", where)
    tol = float(cdef.get("tol", tol))
    count = cdef.get("samples", count)
    count = int(count) if count is not None else None
    name = f"{kind}({target_name})"
    start = time.perf_counter()

    def done(outcome: CheckOutcome) -> CheckOutcome:
        return outcome

    try:
        target = _resolve(sc, target_name, where)
        if kind == "contact":
            _expect(isinstance(target, TwistedContact), where, "target is not a contact structure")
            rep = check_contact(target, _samples_for(target.chart, count, seed), tol)
        elif kind == "twisted_jacobi":
            _expect(isinstance(target, TwistedJacobi), where, "target is not a twisted Jacobi structure")
            rep = check_twisted_jacobi(target, _samples_for(target.chart, count, seed), tol)
        elif kind == "jacobi_from_contact":
            _expect(isinstance(target, TwistedContact), where, "target is not a contact structure")
            _, rep = jacobi_from_contact(target)
        elif kind == "algebroid":
            _expect(isinstance(target, TwistedJacobi), where, "target is not a twisted Jacobi structure")
            chart = target.chart
            sections = [(Form.d_coord(chart, c), Expr.zero(chart)) for c in chart.coords]
            sections.append((Form.zero(chart, 1), Expr.one(chart)))
            for extra in cdef.get("sections", []):
                sections.append((
                    _parse_form(extra.get("zeta", {}), chart, 1, f"{where}.sections"),
                    _parse_expr(extra.get("f", "0"), chart, f"{where}.sections"),
                ))
            rep = check_algebroid(target, sections, _samples_for(chart, count, seed), tol)
        elif kind == "homogeneous":
            _expect(isinstance(target, HomTwistedPoisson), where, "target is not homogeneous twisted Poisson")
            rep = check_homogeneous(target, _samples_for(target.chart, count, seed), tol)
        elif kind == "poissonization":
            if isinstance(target, TwistedContact):
                rep = contact_poissonization_check(target, tol=tol)
            else:
                _expect(isinstance(target, TwistedJacobi), where, "target is not a twisted Jacobi structure")
                rep = check_homogeneous(poissonize(target), tol=tol)
        elif kind == "groupoid_axioms":
            _expect(isinstance(target, GroupoidModel), where, "target is not a groupoid model")
            rep = check_axioms(target)
        elif kind == "multiplicativity":
            _expect(isinstance(target, GroupoidModel), where, "target is not a groupoid model")
            rep = check_multiplicativity(target, _samples_for(target.composable, count, seed), tol)
        elif kind == "groupoid_properties":
            _expect(isinstance(target, GroupoidModel), where, "target is not a groupoid model")
            rep = check_properties(target, _samples_for(target.total, count, seed), tol)
        elif kind == "induced_base":
            _expect(isinstance(target, GroupoidModel), where, "target is not a groupoid model")
            _, rep = induced_base_structure(target, tol=tol)
        elif kind == "suspension":
            _expect(isinstance(target, GroupoidModel), where, "target is not a groupoid model")
            _, rep = suspend(target, tol=tol)
        elif kind == "base_coincidence":
            _expect(isinstance(target, GroupoidModel), where, "target is not a groupoid model")
            rep = base_coincidence_check(target, tol=tol)
        elif kind == "algebroid_morphism":
            _expect(isinstance(target, GroupoidModel), where, "target is not a groupoid model")
            rep = check_algebroid_morphism(target, tol=tol)
        elif kind == "anchor_residual":
            _expect(isinstance(target, _apath.APath), where, "target is not an A-path")
            value = _apath.anchor_residual(target)
            limit = float(cdef.get("max", tol))
            return done(_numeric_outcome(name, value, limit,
                                         (time.perf_counter() - start) * 1000.0,
                                         "anchor residual"))
        elif kind == "cocycle_integral":
            _expect(isinstance(target, _apath.APath), where, "target is not an A-path")
            value = _apath.cocycle_integral(target)
            expect = float(_required(cdef, "expect", where))
            limit = float(cdef.get("atol", 1e-8))
            return done(_numeric_outcome(name, value - expect, limit,
                                         (time.perf_counter() - start) * 1000.0,
                                         f"cocycle integral minus {expect}"))
        else:
            raise ScenarioError(where, f"unknown check {kind!r}")
    except ScenarioError:
        raise
    except ExprError as exc:
        ms = (time.perf_counter() - start) * 1000.0
        return CheckOutcome(name, "Error", False, 0.0, [str(exc)], ms,
                            [f"[FAIL] precondition failure: {exc}"])
    ms = (time.perf_counter() - start) * 1000.0
    return done(_report_outcome(name, rep, ms))


def run(sc: Scenario, tol: float = 1e-9, samples: Optional[int] = None,
        seed: int = 0) -> list[CheckOutcome]:
    """Execute all checks in declaration order, continuing past failures."""
    outcomes = []
    for idx, cdef in enumerate(sc.checks):
        _expect(isinstance(cdef, dict), f"checks[{idx}]", "expected an object")
        outcomes.append(_run_check(sc, cdef, idx, tol, samples, seed))
    return outcomes


def derive(sc: Scenario, object_name: str, construction: str) -> dict:
    """Build a derived structure and return a self-contained scenario
    fragment (charts plus one structure definition) that re-parses."""
    registry = dict(sc.charts)
    sdef = _derive_definition(sc, object_name, construction, registry)
    chart_names = {sdef[k] for k in
                   ("chart", "base_chart", "total_chart", "composable_chart")
                   if k in sdef}
    charts = {n: list(ch.coords) for n, ch in registry.items() if n in chart_names}
    return {
        "charts": charts,
        "structures": {f"{object_name}.{construction}": sdef},
    }


def _derive_definition(sc: Scenario, object_name: str, construction: str,
                       registry: dict[str, Chart]) -> dict:
    target = _resolve(sc, object_name, "derive")
    if construction == "reeb":
        _expect(isinstance(target, TwistedContact), "derive", "reeb needs a contact structure")
        from .contact import reeb as _reeb

        vec, _ = _reeb(target)
        return render_structure(vec, registry)
    if construction == "bivector":
        _expect(isinstance(target, TwistedContact), "derive", "bivector needs a contact structure")
        from .contact import contact_bivector as _cb

        vec, _ = _cb(target)
        return render_structure(vec, registry)
    if construction == "jacobi":
        _expect(isinstance(target, TwistedContact), "derive", "jacobi needs a contact structure")
        j, _ = jacobi_from_contact(target)
        return render_structure(j, registry)
    if construction == "poissonize":
        if isinstance(target, TwistedContact):
            target, _ = jacobi_from_contact(target)
        _expect(isinstance(target, TwistedJacobi), "derive", "poissonize needs a twisted Jacobi structure")
        return render_structure(poissonize(target), registry)
    if construction == "pair_groupoid":
        _expect(isinstance(target, TwistedContact), "derive", "pair_groupoid needs a contact structure")
        model, _ = build_pair_groupoid(target)
        return render_structure(model, registry)
    if construction == "induced_base":
        _expect(isinstance(target, GroupoidModel), "derive", "induced_base needs a groupoid model")
        j, _ = induced_base_structure(target)
        return render_structure(j, registry)
    raise ScenarioError("derive", f"unknown construction {construction!r}")
