"""Command-line front end: operator spec files in, JSON reports out.

Specs are JSON trees naming the constructors of :mod:`woldkit.zoo` plus the
combinators scale/adjoint/compose, so every fixture an analysis needs is a
small reproducible file.  Reports are deterministic JSON (fixed probe seed,
sorted keys): `check` runs the membership diagnostics, `decompose` the
decomposition of a given vector, `fourfold` the pair decomposition, and
`zoo list` enumerates the available constructors.

Exit codes: 0 when every gating verdict passes at the requested tolerances,
1 on spec or input errors, 2 on convergence failures, 3 when the run
completed but a gating verdict failed.  Diagnostics go to stderr and the
report to --out or stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .bandop import (
    BandOp,
    GramSolveParams,
    NoConvergence,
    Weight,
    bergman,
    constant,
    dirichlet,
    lower_bound_estimate,
    table,
)
from .classd import (
    CheckReport,
    classd_residual,
    default_probes,
    double_commuting_residual,
    isometry_residual,
    product_closure_check,
    quasinormal_residual,
)
from .oracle import (
    WindowTooLarge,
    dense_section,
    oracle_decompose,
    oracle_left_inverse,
    oracle_limit_project,
)
from .seqspace import FinVec
from .wold import (
    InputNotInHInfinity,
    NoStrongConvergence,
    SeriesNotConverged,
    WoldResult,
    decompose,
)
from .wold2d import FourfoldResult, PART_TAGS, fourfold
from .zoo import (
    PhiFamily,
    direct_sum,
    identity_on,
    quasinormal_block,
    tensor_pair,
    weighted_shift,
    weighted_translation,
)

SCHEMA_VERSION = 1
DEFAULT_SEED = 0x5EED
LOWER_BOUND_FLOOR = 1e-8


class SpecError(ValueError):
    """Spec parsing or validation failed; carries every error found."""

    def __init__(self, errors):
        self.errors = [str(e) for e in errors]
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True, eq=True)
class OpSpec:
    """Validated operator description; parameters are canonical values."""

    kind: str
    params: dict

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for key, val in sorted(self.params.items()):
            out[key] = _jsonable_param(val)
        return out


def _jsonable_param(val):
    if isinstance(val, OpSpec):
        return val.to_dict()
    if isinstance(val, complex):
        return val.real if val.imag == 0 else [val.real, val.imag]
    if isinstance(val, (list, tuple)):
        return [_jsonable_param(v) for v in val]
    if isinstance(val, dict):
        return {k: _jsonable_param(v) for k, v in sorted(val.items())}
    return val


# ---------------------------------------------------------------------------
# spec validation
# ---------------------------------------------------------------------------

def _as_complex(v, path, errors):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if (isinstance(v, list) and len(v) == 2
            and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)):
        return complex(v[0], v[1])
    errors.append(f"{path}: expected a number or [re, im] pair, got {v!r}")
    return None


def _as_positive_number(v, path, errors):
    if isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0:
        return float(v)
    errors.append(f"{path}: expected a positive number, got {v!r}")
    return None


def _as_lattice_name(v, path, errors):
    if v in ("nat", "int"):
        return v
    errors.append(f"{path}: expected 'nat' or 'int', got {v!r}")
    return None


def _check_fields(obj, path, errors, required, optional=()):
    for key in required:
        if key not in obj:
            errors.append(f"{path}: missing required field '{key}'")
    for key in obj:
        if key != "kind" and key not in required and key not in optional:
            errors.append(f"{path}: unknown field '{key}'")


def _parse_weight(obj, path, errors):
    if not isinstance(obj, dict):
        errors.append(f"{path}: expected a weight object, got {obj!r}")
        return None
    family = obj.get("family")
    if family == "constant":
        _check_fields(obj, path, errors, ("family", "value"))
        value = _as_complex(obj.get("value", 0), f"{path}.value", errors)
        return {"family": "constant", "value": value}
    if family in ("bergman", "dirichlet"):
        _check_fields(obj, path, errors, ("family",))
        return {"family": family}
    if family == "table":
        _check_fields(obj, path, errors, ("family", "values", "default"))
        values = obj.get("values")
        if not isinstance(values, list) or not values:
            errors.append(f"{path}.values: expected a nonempty list")
            vals = ()
        else:
            vals = tuple(_as_complex(v, f"{path}.values[{i}]", errors) or 0j
                         for i, v in enumerate(values))
        default = _as_complex(obj.get("default", 0), f"{path}.default", errors)
        return {"family": "table", "values": vals, "default": default}
    errors.append(f"{path}.family: expected one of constant/bergman/dirichlet/table, "
                  f"got {family!r}")
    return None


def _parse_phi(obj, path, errors):
    if not isinstance(obj, dict):
        errors.append(f"{path}: expected an envelope object, got {obj!r}")
        return None
    kind = obj.get("kind")
    if kind == "exp":
        _check_fields(obj, path, errors, ("kind", "alpha"))
        alpha = obj.get("alpha")
        if not isinstance(alpha, (int, float)) or isinstance(alpha, bool):
            errors.append(f"{path}.alpha: expected a number")
            alpha = 0.0
        return {"kind": "exp", "alpha": float(alpha)}
    if kind == "power":
        _check_fields(obj, path, errors, ("kind", "beta"))
        beta = obj.get("beta")
        if not isinstance(beta, (int, float)) or isinstance(beta, bool):
            errors.append(f"{path}.beta: expected a number")
            beta = 0.0
        return {"kind": "power", "beta": float(beta)}
    if kind == "table":
        _check_fields(obj, path, errors, ("kind", "samples", "h", "tail_ratio"))
        samples = obj.get("samples")
        if not isinstance(samples, list) or not samples or \
                any(not isinstance(s, (int, float)) or isinstance(s, bool) or s <= 0
                    for s in samples):
            errors.append(f"{path}.samples: expected a nonempty list of positive numbers")
            samples = [1.0]
        h = _as_positive_number(obj.get("h", 0), f"{path}.h", errors)
        tail = _as_positive_number(obj.get("tail_ratio", 0), f"{path}.tail_ratio", errors)
        return {"kind": "table", "samples": tuple(float(s) for s in samples),
                "h": h, "tail_ratio": tail}
    errors.append(f"{path}.kind: expected one of exp/power/table, got {kind!r}")
    return None


def _parse_matrix(obj, path, errors):
    if not isinstance(obj, list) or not obj:
        errors.append(f"{path}: expected a nonempty list of rows")
        return None
    d = len(obj)
    rows = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != d:
            errors.append(f"{path}[{i}]: expected a row of length {d}")
            return None
        rows.append(tuple(_as_complex(v, f"{path}[{i}][{j}]", errors) or 0j
                          for j, v in enumerate(row)))
    L = np.array(rows, dtype=complex)
    scale = max(1.0, float(np.abs(L).max()))
    if float(np.abs(L - L.conj().T).max()) > 1e-12 * scale:
        errors.append(f"{path}: matrix must be Hermitian")
        return tuple(rows)
    eigs = np.linalg.eigvalsh(L)
    if eigs.min() <= 0:
        errors.append(f"{path}: matrix must be positive definite "
                      f"(smallest eigenvalue {eigs.min():.3e})")
    return tuple(rows)


def _parse_node(obj, path, errors):
    if not isinstance(obj, dict):
        errors.append(f"{path}: expected an object, got {obj!r}")
        return None
    kind = obj.get("kind")
    if kind not in KIND_VALIDATORS:
        errors.append(f"{path}.kind: unknown operator kind {kind!r}")
        return None
    params = KIND_VALIDATORS[kind](obj, path, errors)
    return OpSpec(kind, params or {})


def _v_identity(obj, path, errors):
    _check_fields(obj, path, errors, (), ("lattice",))
    lat = _as_lattice_name(obj.get("lattice", "nat"), f"{path}.lattice", errors)
    return {"lattice": lat or "nat"}


def _v_weighted_shift(obj, path, errors):
    _check_fields(obj, path, errors, ("weight",), ("step", "lattice"))
    w = _parse_weight(obj.get("weight"), f"{path}.weight", errors)
    step = obj.get("step", 1)
    if not isinstance(step, int) or isinstance(step, bool) or step < 1:
        errors.append(f"{path}.step: expected a positive integer, got {step!r}")
        step = 1
    lat = _as_lattice_name(obj.get("lattice", "nat"), f"{path}.lattice", errors)
    return {"weight": w, "step": step, "lattice": lat or "nat"}


def _v_plain(obj, path, errors):
    _check_fields(obj, path, errors, ())
    return {}


def _v_weighted_translation(obj, path, errors):
    _check_fields(obj, path, errors, ("phi", "t", "h"))
    phi = _parse_phi(obj.get("phi"), f"{path}.phi", errors)
    t = _as_positive_number(obj.get("t", 0), f"{path}.t", errors)
    h = _as_positive_number(obj.get("h", 0), f"{path}.h", errors)
    if t and h:
        s = t / h
        if abs(s - round(s)) > 1e-9 * max(1.0, abs(s)) or round(s) < 1:
            errors.append(f"{path}: translation step t/h = {s} is not a positive "
                          f"integer (incommensurate grid)")
    return {"phi": phi, "t": t, "h": h}


def _v_quasinormal_block(obj, path, errors):
    _check_fields(obj, path, errors, ("L",))
    L = _parse_matrix(obj.get("L"), f"{path}.L", errors)
    return {"L": L}


def _v_tensor_pair(obj, path, errors):
    _check_fields(obj, path, errors, ("w1", "w2"), ("lattice1", "lattice2", "part"))
    w1 = _parse_weight(obj.get("w1"), f"{path}.w1", errors)
    w2 = _parse_weight(obj.get("w2"), f"{path}.w2", errors)
    lat1 = _as_lattice_name(obj.get("lattice1", "nat"), f"{path}.lattice1", errors)
    lat2 = _as_lattice_name(obj.get("lattice2", "nat"), f"{path}.lattice2", errors)
    out = {"w1": w1, "w2": w2, "lattice1": lat1 or "nat", "lattice2": lat2 or "nat"}
    if "part" in obj:
        part = obj["part"]
        if part not in (1, 2):
            errors.append(f"{path}.part: expected 1 or 2, got {part!r}")
        else:
            out["part"] = part
    return out


def _v_direct_sum(obj, path, errors):
    _check_fields(obj, path, errors, ("a", "b"))
    return {"a": _parse_node(obj.get("a"), f"{path}.a", errors),
            "b": _parse_node(obj.get("b"), f"{path}.b", errors)}


def _v_scale(obj, path, errors):
    _check_fields(obj, path, errors, ("factor", "child"))
    factor = _as_complex(obj.get("factor", 0), f"{path}.factor", errors)
    return {"factor": factor,
            "child": _parse_node(obj.get("child"), f"{path}.child", errors)}


def _v_adjoint(obj, path, errors):
    _check_fields(obj, path, errors, ("child",))
    return {"child": _parse_node(obj.get("child"), f"{path}.child", errors)}


def _v_compose(obj, path, errors):
    _check_fields(obj, path, errors, ("a", "b"))
    return {"a": _parse_node(obj.get("a"), f"{path}.a", errors),
            "b": _parse_node(obj.get("b"), f"{path}.b", errors)}


def _v_pair(obj, path, errors):
    _check_fields(obj, path, errors, ("first", "second"))
    return {"first": _parse_node(obj.get("first"), f"{path}.first", errors),
            "second": _parse_node(obj.get("second"), f"{path}.second", errors)}


KIND_VALIDATORS = {
    "identity": _v_identity,
    "weighted_shift": _v_weighted_shift,
    "bergman_shift": _v_plain,
    "dirichlet_shift": _v_plain,
    "weighted_translation": _v_weighted_translation,
    "quasinormal_block": _v_quasinormal_block,
    "tensor_pair": _v_tensor_pair,
    "direct_sum": _v_direct_sum,
    "scale": _v_scale,
    "adjoint": _v_adjoint,
    "compose": _v_compose,
    "pair": _v_pair,
}

KIND_SUMMARIES = {
    "identity": "identity operator on a rank-1 lattice ('nat' or 'int')",
    "weighted_shift": "e_k -> w(k) e_{k+step}; weight family constant/bergman/dirichlet/table",
    "bergman_shift": "unilateral shift with weights sqrt((k+1)/(k+2))",
    "dirichlet_shift": "unilateral shift with weights sqrt((k+2)/(k+1))",
    "weighted_translation": "grid translation by t with envelope-ratio weights (phi exp/power/table)",
    "quasinormal_block": "block shift (k_0, k_1, ...) -> (0, L k_0, L k_1, ...), L Hermitian PD",
    "tensor_pair": "double-commuting pair shifting the two axes of a product lattice",
    "direct_sum": "block operator acting summand-wise on a tagged union lattice",
    "scale": "scalar multiple of a child operator",
    "adjoint": "adjoint of a child operator",
    "compose": "composition a after b of two child operators",
    "pair": "explicit operator pair for the pair commands",
}


def parse_spec(text: str) -> OpSpec:
    """Parse and fully validate a JSON operator spec; collects all errors."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError([f"$: invalid JSON: {e}"]) from None
    errors: list[str] = []
    spec = _parse_node(obj, "$", errors)
    if errors:
        raise SpecError(errors)
    return spec


def serialize_spec(spec: OpSpec) -> dict:
    return spec.to_dict()


# ---------------------------------------------------------------------------
# spec -> operator
# ---------------------------------------------------------------------------

def _build_weight(w: dict) -> Weight:
    family = w["family"]
    if family == "constant":
        return constant(w["value"])
    if family == "bergman":
        return bergman()
    if family == "dirichlet":
        return dirichlet()
    return table(w["values"], w["default"])


def _build_phi(p: dict) -> PhiFamily:
    if p["kind"] == "exp":
        return PhiFamily.exp(p["alpha"])
    if p["kind"] == "power":
        return PhiFamily.power(p["beta"])
    return PhiFamily.table(p["samples"], p["h"], p["tail_ratio"])


def _single(value, what):
    if isinstance(value, tuple):
        raise SpecError([f"{what} needs a single operator, but the spec names a pair"])
    return value


def build_operator(spec: OpSpec):
    """Turn a validated spec into a BandOp, or a pair for pair-shaped specs."""
    k, prm = spec.kind, spec.params
    try:
        if k == "identity":
            return identity_on(prm["lattice"])
        if k == "weighted_shift":
            return weighted_shift(_build_weight(prm["weight"]), prm["step"], prm["lattice"])
        if k == "bergman_shift":
            return weighted_shift(bergman(), 1, "nat")
        if k == "dirichlet_shift":
            return weighted_shift(dirichlet(), 1, "nat")
        if k == "weighted_translation":
            return weighted_translation(_build_phi(prm["phi"]), prm["t"], prm["h"])
        if k == "quasinormal_block":
            return quasinormal_block(np.array(prm["L"], dtype=complex))
        if k == "tensor_pair":
            T1, T2 = tensor_pair(_build_weight(prm["w1"]), _build_weight(prm["w2"]),
                                 prm["lattice1"], prm["lattice2"])
            if "part" in prm:
                return T1 if prm["part"] == 1 else T2
            return (T1, T2)
        if k == "direct_sum":
            return direct_sum(_single(build_operator(prm["a"]), "direct_sum"),
                              _single(build_operator(prm["b"]), "direct_sum"))
        if k == "scale":
            return prm["factor"] * _single(build_operator(prm["child"]), "scale")
        if k == "adjoint":
            return _single(build_operator(prm["child"]), "adjoint").adjoint()
        if k == "compose":
            return _single(build_operator(prm["a"]), "compose").compose(
                _single(build_operator(prm["b"]), "compose"))
        if k == "pair":
            return (_single(build_operator(prm["first"]), "pair"),
                    _single(build_operator(prm["second"]), "pair"))
    except SpecError:
        raise
    except (ValueError, TypeError) as e:
        raise SpecError([f"building '{k}': {e}"]) from None
    raise SpecError([f"unknown operator kind {k!r}"])


# ---------------------------------------------------------------------------
# vector literals
# ---------------------------------------------------------------------------

def parse_vector_literal(obj, rank: int | None = None) -> FinVec:
    """Vector from a list of records ``[coord..., re, im]``."""
    errors: list[str] = []
    if not isinstance(obj, list) or not obj:
        raise SpecError(["vector: expected a nonempty list of records"])
    entries = []
    r = rank
    for i, rec in enumerate(obj):
        if not isinstance(rec, list) or len(rec) < 3:
            errors.append(f"vector[{i}]: expected [coords..., re, im] with >= 3 entries")
            continue
        if r is None:
            r = len(rec) - 2
        if len(rec) - 2 != r:
            errors.append(f"vector[{i}]: rank {len(rec) - 2} disagrees with {r}")
            continue
        coords = rec[:-2]
        if any(not isinstance(c, int) or isinstance(c, bool) for c in coords):
            errors.append(f"vector[{i}]: coordinates must be integers")
            continue
        re_part, im_part = rec[-2], rec[-1]
        if any(not isinstance(c, (int, float)) or isinstance(c, bool)
               for c in (re_part, im_part)):
            errors.append(f"vector[{i}]: amplitude parts must be numbers")
            continue
        entries.append((tuple(coords), complex(re_part, im_part)))
    if errors:
        raise SpecError(errors)
    return FinVec(entries, rank=r)


def vector_to_literal(v: FinVec) -> list:
    return [[*ix, amp.real, amp.imag] for ix, amp in v.items()]


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------

def _wold_result_dict(res: WoldResult) -> dict:
    return {
        "limit_part": vector_to_literal(res.limit_part),
        "components": [vector_to_literal(c) for c in res.components],
        "reconstruction_residual": res.reconstruction_residual,
        "convergence_history": list(res.convergence_history),
        "n_used": res.n_used,
        "j_used": res.j_used,
        "component_cross_max": res.component_cross_max,
        "flags": list(res.flags),
    }


def _fourfold_result_dict(res: FourfoldResult) -> dict:
    return {
        "parts": {tag: vector_to_literal(res.parts[tag]) for tag in PART_TAGS},
        "residual": res.residual,
        "cross_terms": res.cross_terms,
        "double_commuting": res.double_commuting,
        "flags": list(res.flags),
    }


def _check_dict(report: CheckReport, informational: bool) -> dict:
    out = report.to_dict()
    out["informational"] = informational
    return out


def _base_report(command: str, spec: OpSpec | None, args) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "woldkit", "version": __version__},
        "command": command,
        "spec": serialize_spec(spec) if spec is not None else None,
        "params": {
            "tol": args.tol,
            "guard": args.guard,
            "n_max": args.n_max,
            "j_max": args.j_max,
            "seed": args.seed,
            "oracle": bool(args.oracle),
        },
    }


def _emit(report: dict, out_path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_source(source: str) -> str:
    if source.lstrip().startswith(("{", "[")):
        return source
    with open(source, "r", encoding="utf-8") as fh:
        return fh.read()


def _oracle_extent(lattice, vectors, depth: int, reach: int) -> int:
    spread = 0
    for v in vectors:
        for ix in v.support():
            spread = max(spread, max(abs(c) for c in ix))
    return spread + depth * max(1, reach) + 4


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_check(args) -> int:
    spec = parse_spec(_read_source(args.spec))
    built = build_operator(spec)
    report = _base_report("check", spec, args)
    report["params"]["window"] = args.window
    checks: list[dict] = []

    if isinstance(built, tuple):
        T1, T2 = built
        probes = default_probes(T1.lattice, seed=args.seed)
        p = GramSolveParams(guard=args.guard)
        tol = args.tol if args.tol is not None else 1e-9
        dc = double_commuting_residual(T1, T2, probes, tolerance=1e-10)
        closure = product_closure_check(T1, T2, probes=probes, params=p, tolerance=tol)
        checks.append(_check_dict(dc, informational=False))
        checks.append(_check_dict(closure, informational=False))
        gating = [dc, closure]
    else:
        T = built
        probes = default_probes(T.lattice, seed=args.seed)
        p = GramSolveParams(guard=args.guard)
        tol = args.tol if args.tol is not None else 1e-10
        lb = lower_bound_estimate(T, window=args.window)
        lb_report = CheckReport(
            name="left_invertibility",
            residual=max(0.0, LOWER_BOUND_FLOOR - lb),
            tolerance=0.0,
            probes_used=len(T.lattice.window(args.window)),
            window=args.window,
            details={"lower_bound": lb, "floor": LOWER_BOUND_FLOOR},
        )
        iso = isometry_residual(T, window=args.window, params=p)
        quasi = quasinormal_residual(T, probes)
        cd = classd_residual(T, n_max=8, probes=probes, params=p, tolerance=tol)
        checks.append(_check_dict(lb_report, informational=False))
        checks.append(_check_dict(iso, informational=True))
        checks.append(_check_dict(quasi, informational=True))
        checks.append(_check_dict(cd, informational=False))
        gating = [lb_report, cd]

        if args.oracle:
            report["oracle"] = _oracle_check(T, probes, args)

    report["checks"] = checks
    ok = all(c.passed for c in gating)
    report["verdict"] = "pass" if ok else "fail"
    _emit(report, args.out)
    return 0 if ok else 3


def _oracle_check(T: BandOp, probes, args) -> dict:
    extent = _oracle_extent(T.lattice, probes, depth=2, reach=T.max_band_reach()) + 8
    try:
        D = dense_section(T, extent)
    except WindowTooLarge as e:
        return {"skipped": str(e)}
    p = GramSolveParams(guard=args.guard)
    worst = 0.0
    compared = 0
    from .bandop import left_inverse_apply
    for v in probes:
        if v.is_zero:
            continue
        band = left_inverse_apply(T, v, p)
        dense = oracle_left_inverse(D, v)
        worst = max(worst, (band - dense).norm() / v.norm())
        compared += 1
    return {"window": extent, "compared": compared, "max_rel_delta": worst}


def _cmd_decompose(args) -> int:
    spec = parse_spec(_read_source(args.spec))
    T = _single(build_operator(spec), "decompose")
    v = parse_vector_literal(json.loads(_read_source(args.vector)), rank=T.rank)
    tol = args.tol if args.tol is not None else 1e-10
    p = GramSolveParams(guard=args.guard, tol=tol)
    res = decompose(T, v, p, n_max=args.n_max, j_max=args.j_max)
    report = _base_report("decompose", spec, args)
    report["params"]["tol"] = tol
    report["vector"] = vector_to_literal(v)
    report["decomposition"] = _wold_result_dict(res)
    ok = res.reconstruction_residual <= tol * max(v.norm(), 1e-300)

    if args.oracle:
        depth = res.n_used + res.j_used + 2
        extent = _oracle_extent(T.lattice, [v], depth, T.max_band_reach())
        try:
            D = dense_section(T, extent)
            ores = oracle_decompose(D, v, n_max=args.n_max, j_max=args.j_max, tol=tol)
            delta = (res.limit_part - ores.limit_part).norm()
            for i in range(max(len(res.components), len(ores.components))):
                a = res.components[i] if i < len(res.components) else res.limit_part * 0
                b = ores.components[i] if i < len(ores.components) else a * 0
                delta = max(delta, (a - b).norm())
            report["oracle"] = {"window": extent,
                                "max_abs_delta": delta,
                                "max_rel_delta": delta / max(v.norm(), 1e-300)}
        except WindowTooLarge as e:
            report["oracle"] = {"skipped": str(e)}

    report["verdict"] = "pass" if ok else "fail"
    _emit(report, args.out)
    return 0 if ok else 3


def _cmd_fourfold(args) -> int:
    spec = parse_spec(_read_source(args.spec))
    built = build_operator(spec)
    if not isinstance(built, tuple):
        raise SpecError(["fourfold needs a pair spec (kind 'pair' or 'tensor_pair')"])
    T1, T2 = built
    v = parse_vector_literal(json.loads(_read_source(args.vector)), rank=T1.rank)
    tol = args.tol if args.tol is not None else 1e-10
    p = GramSolveParams(guard=args.guard, tol=tol)
    res = fourfold(T1, T2, v, p, n_max=args.n_max)
    report = _base_report("fourfold", spec, args)
    report["params"]["tol"] = tol
    report["vector"] = vector_to_literal(v)
    report["fourfold"] = _fourfold_result_dict(res)
    hn = max(v.norm(), 1e-300)
    ok = res.residual <= tol * hn and res.cross_terms <= tol * hn * hn

    if args.oracle:
        depth = 2 * args.n_max
        extent = _oracle_extent(T1.lattice, [v], min(depth, 24),
                                max(T1.max_band_reach(), T2.max_band_reach()))
        try:
            D1 = dense_section(T1, extent)
            D2 = dense_section(T2, extent)
            q2h, _ = oracle_limit_project(D2, v, n_max=args.n_max, tol=tol / 10)
            q1h, _ = oracle_limit_project(D1, v, n_max=args.n_max, tol=tol / 10)
            inf_inf, _ = oracle_limit_project(D1, q2h, n_max=args.n_max, tol=tol)
            inf_s, _ = oracle_limit_project(D1, v - q2h, n_max=args.n_max, tol=tol)
            s_inf, _ = oracle_limit_project(D2, v - q1h, n_max=args.n_max, tol=tol)
            s_s = v - q1h - q2h + inf_inf
            dense_parts = {"inf_inf": inf_inf, "inf_s": inf_s,
                           "s_inf": s_inf, "s_s": s_s}
            delta = max((res.parts[tag] - dense_parts[tag]).norm() for tag in PART_TAGS)
            report["oracle"] = {"window": extent,
                                "max_abs_delta": delta,
                                "max_rel_delta": delta / hn}
        except WindowTooLarge as e:
            report["oracle"] = {"skipped": str(e)}

    report["verdict"] = "pass" if ok else "fail"
    _emit(report, args.out)
    return 0 if ok else 3


def _cmd_zoo(args) -> int:
    if args.action != "list":
        raise SpecError([f"unknown zoo action {args.action!r}; try 'list'"])
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "woldkit", "version": __version__},
        "command": "zoo list",
        "kinds": [{"kind": k, "summary": KIND_SUMMARIES[k]}
                  for k in sorted(KIND_VALIDATORS)],
    }
    _emit(report, args.out)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(sp) -> None:
    sp.add_argument("--tol", type=float, default=None,
                    help="requested tolerance (default: per-command)")
    sp.add_argument("--guard", type=int, default=None,
                    help="initial Gram-solve window padding (default: derived)")
    sp.add_argument("--n-max", dest="n_max", type=int, default=64,
                    help="cap on projection iterations (default 64)")
    sp.add_argument("--j-max", dest="j_max", type=int, default=256,
                    help="cap on series terms (default 256)")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED,
                    help=f"probe seed recorded in the report (default {DEFAULT_SEED})")
    sp.add_argument("--oracle", action="store_true",
                    help="cross-check against the dense finite-section oracle")
    sp.add_argument("--out", default=None, help="report file (default: stdout)")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="woldkit",
        description="Left-invertibility diagnostics and Wold-type decompositions "
                    "for band operators on sequence lattices.",
        epilog="Exit codes: 0 all gating verdicts pass, 1 spec/input error, "
               "2 convergence failure, 3 a gating verdict failed.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", help="run the membership diagnostics on an operator spec")
    sp.add_argument("spec", help="spec file path, or inline JSON")
    sp.add_argument("--window", type=int, default=16,
                    help="window for basis-vector checks (default 16)")
    _add_common(sp)
    sp.set_defaults(func=_cmd_check)

    sp = sub.add_parser("decompose", help="decompose a vector under an operator spec")
    sp.add_argument("spec", help="spec file path, or inline JSON")
    sp.add_argument("--vector", required=True,
                    help="vector literal [[coords..., re, im], ...] or a file path")
    _add_common(sp)
    sp.set_defaults(func=_cmd_decompose)

    sp = sub.add_parser("fourfold", help="fourfold decomposition under a pair spec")
    sp.add_argument("spec", help="pair spec file path, or inline JSON")
    sp.add_argument("--vector", required=True,
                    help="vector literal [[coords..., re, im], ...] or a file path")
    _add_common(sp)
    sp.set_defaults(func=_cmd_fourfold)

    sp = sub.add_parser("zoo", help="inspect the operator constructors")
    sp.add_argument("action", help="'list' prints the available kinds")
    sp.add_argument("--out", default=None, help="report file (default: stdout)")
    sp.set_defaults(func=_cmd_zoo)

    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as e:
        for msg in e.errors:
            print(f"spec error: {msg}", file=sys.stderr)
        return 1
    except (NoConvergence, NoStrongConvergence, SeriesNotConverged,
            InputNotInHInfinity) as e:
        print(f"convergence error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"spec error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
