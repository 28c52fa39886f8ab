"""Batch driver: ``glab run task.json`` and ``glab check``.

A task document names a module (and optionally an algebra built on it),
a task and its parameters. The report goes to stdout as sorted JSON and
diagnostics go to stderr. Exit codes: 0 completed or proven, 2 inconclusive
or refuted, 1 error.
"""

from __future__ import annotations

import argparse
import copy
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from math import comb
from typing import Any, Callable, Mapping

import jsonschema
import sympy

from . import __version__
from .errors import GlabError, NotDominantError, SpecError
from .exact_linalg import IntMatrix
from .galgebra import (
    GradedGAlgebra,
    GrosshansGradedAlgebra,
    QuotientAlgebra,
    format_vector,
    hull_algebra,
    invariant_subalgebra,
    multicone,
    projection_map,
    quotient,
    schur_cone_pair,
    sym_algebra,
    torsion_bound,
)
from .gmodule import (
    GMap,
    GModule,
    SubgroupTag,
    adjoint_sl2,
    direct_sum,
    dual,
    invariants,
    monomial_basis,
    standard_rep,
    sym_power,
    tensor,
    trivial,
    validate,
)
from .grosshans import graded, has_good_filtration, hull, hull_embedding
from .induction import delta, nabla, steinberg
from .reductivity import (
    INCONCLUSIVE,
    PROVEN,
    check_power_reductivity,
    gr_mod_p_comparison,
    int_property_witness,
    integrality_consistency,
    lift_invariants,
    p_power_surjectivity,
    power_surjectivity,
)
from .root_data import check_characteristic

COMPLETED = "completed"
REFUTED = "refuted"

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2

MODULE_TASKS = {"validate", "invariants", "grosshans", "torsion-bound", "power-red", "lift", "int",
                "power-surj", "gr-mod-p"}
QUOTIENT_TASKS = {"lift", "int"}


def load_schema() -> dict:
    text = resources.files("glab").joinpath("task_schema.json").read_text(encoding="utf-8")
    return json.loads(text)


@dataclass
class TaskSpec:
    group: str
    ring: str
    task: str
    params: dict = field(default_factory=dict)
    module: dict | None = None
    algebra: dict | None = None

    @property
    def modulus(self) -> int:
        return 0 if self.ring == "Z" else int(self.ring.split("/")[1])

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "schema_version": 1,
            "group": self.group,
            "ring": self.ring,
            "task": {"name": self.task, "params": copy.deepcopy(self.params)},
        }
        if self.module is not None:
            out["module"] = copy.deepcopy(self.module)
        if self.algebra is not None:
            out["algebra"] = copy.deepcopy(self.algebra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def _line_of(text: str, path) -> int | None:
    """Best-effort line number of the last object key on ``path``."""
    keys = [p for p in path if isinstance(p, str)]
    if not keys:
        return None
    needle = json.dumps(keys[-1])
    pos = text.find(needle)
    return text.count("\n", 0, pos) + 1 if pos >= 0 else None


def parse_spec(text: str) -> TaskSpec:
    """Parse and validate a task document.

    Raises SpecError for malformed JSON or schema violations, and the
    library's own errors (e.g. a non-prime characteristic or a non-dominant
    weight) when a construction cannot be resolved.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        where = _pointer(err.absolute_path)
        line = _line_of(text, err.absolute_path)
        loc = f"{where} (line {line})" if line else where
        raise SpecError(f"schema violation at {loc}: {err.message}")
    ring = data["ring"]
    if ring != "Z" and int(ring.split("/")[1]) < 2:
        raise SpecError(f"ring {ring!r}: modulus must be at least 2 (use \"Z\" for the integers)")
    task = data["task"]
    spec = TaskSpec(
        group=data["group"],
        ring=ring,
        task=task["name"],
        params=dict(task.get("params", {})),
        module=data.get("module"),
        algebra=data.get("algebra"),
    )
    _check_spec(spec)
    return spec


def _check_spec(spec: TaskSpec) -> None:
    name = spec.task
    if name in MODULE_TASKS and spec.module is None:
        raise SpecError(f"task {name!r} needs a module")
    if name in QUOTIENT_TASKS and (spec.algebra is None or spec.algebra["op"] != "quotient"):
        raise SpecError(f"task {name!r} needs a quotient algebra")
    if spec.algebra is not None and spec.module is None:
        raise SpecError("an algebra is built on the module, so a module is required")
    if name == "power-red" and "target" not in spec.params:
        raise SpecError("task 'power-red' needs params.target (the row of the map to the cyclic module)")
    if name == "gr-mod-p" and "p" not in spec.params:
        raise SpecError("task 'gr-mod-p' needs params.p")
    if name == "schur-cone" and "lambda" not in spec.params:
        raise SpecError("task 'schur-cone' needs params.lambda")
    if name == "multicone" and "weights" not in spec.params:
        raise SpecError("task 'multicone' needs params.weights")
    if "p" in spec.params:
        p = spec.params["p"]
        check_characteristic(p)
        if p == 0:
            raise SpecError("params.p must be a prime")
    for key in ("lambda",):
        if key in spec.params and spec.params[key] < 0:
            raise NotDominantError(f"params.{key} = {spec.params[key]} is not dominant")
    for w in spec.params.get("weights", []):
        if w < 0:
            raise NotDominantError(f"params.weights contains the non-dominant weight {w}")
    if spec.module is not None:
        M = build_module(spec.module, spec.modulus)
        if "target" in spec.params and len(spec.params["target"]) != M.rank:
            raise SpecError(f"params.target has length {len(spec.params['target'])}, module rank is {M.rank}")
        if spec.algebra is not None:
            for k, g in enumerate(spec.algebra.get("generators", [])):
                r = comb(M.rank + g["degree"] - 1, g["degree"]) if M.rank else int(g["degree"] == 0)
                if "vector" in g and len(g["vector"]) != r:
                    raise SpecError(
                        f"/algebra/generators/{k}/vector has length {len(g['vector'])}, degree {g['degree']} has rank {r}"
                    )
                if "expr" in g:
                    _parse_expr(g["expr"], M, g["degree"])


def _construct(expr: Mapping, modulus: int) -> GModule:
    op = expr["op"]
    if op == "standard":
        return standard_rep(modulus)
    if op == "trivial":
        return trivial(expr["k"], modulus)
    if op == "adjoint":
        return adjoint_sl2(modulus)
    if op == "dual":
        return dual(build_module(expr["arg"], modulus))
    if op == "tensor":
        mods = [build_module(a, modulus) for a in expr["args"]]
        out = mods[0]
        for m in mods[1:]:
            out = tensor(out, m)
        return out
    if op == "direct_sum":
        return direct_sum(*(build_module(a, modulus) for a in expr["args"]))
    if op == "sym":
        return sym_power(build_module(expr["arg"], modulus), expr["d"])
    if op == "nabla":
        return nabla(expr["m"], modulus)
    if op == "delta":
        if expr["m"] < 0:
            raise NotDominantError(f"delta({expr['m']}): weight is not dominant")
        return delta(expr["m"], modulus)
    if op == "steinberg":
        return steinberg(expr["r"], expr["p"], modulus).underlying
    if op == "explicit":
        r = len(expr["weights"])
        for kind in ("raising", "lowering"):
            for e in expr.get(kind, []):
                for i, j, _ in e["entries"]:
                    if not (0 <= i < r and 0 <= j < r):
                        raise SpecError(f"explicit module: {kind} entry ({i},{j}) out of range for rank {r}")
        data = {
            "ring": f"Z/{modulus}" if modulus else "Z",
            "weights": expr["weights"],
            "raising": [{"root": 0, **e} for e in expr.get("raising", [])],
            "lowering": [{"root": 0, **e} for e in expr.get("lowering", [])],
        }
        return GModule.from_dict(data)
    raise SpecError(f"unknown module op {op!r}")


def build_module(expr: Mapping, modulus: int) -> GModule:
    M = _construct(expr, modulus)
    if "labels" in expr:
        if len(expr["labels"]) != M.rank:
            raise SpecError(f"{len(expr['labels'])} labels given for a module of rank {M.rank}")
        M = M.with_labels(list(expr["labels"]))
    return M


def _parse_expr(text: str, M: GModule, degree: int) -> tuple[int, ...]:
    """Coordinates of a homogeneous polynomial in the module's labels."""
    labels = [M.label(i) for i in range(M.rank)]
    symbols = {lab: sympy.Symbol(f"_g{i}") for i, lab in enumerate(labels)}
    gens = list(symbols.values())
    try:
        poly = sympy.Poly(sympy.parse_expr(text, local_dict=symbols), *gens) if gens else None
    except (sympy.SympifyError, SyntaxError, TypeError) as e:
        raise SpecError(f"cannot parse generator {text!r}: {e}") from None
    if poly is None:
        raise SpecError("generator expressions need a module of positive rank")
    extra = poly.free_symbols - set(gens)
    if extra:
        raise SpecError(f"generator {text!r} uses unknown names {sorted(map(str, extra))}; labels are {labels}")
    index = {m: i for i, m in enumerate(monomial_basis(M.rank, degree))}
    out = [0] * len(index)
    for exps, c in poly.terms():
        if sum(exps) != degree:
            raise SpecError(f"generator {text!r} is not homogeneous of degree {degree}")
        if not c.is_integer:
            raise SpecError(f"generator {text!r} has a non-integral coefficient {c}")
        out[index[tuple(i for i, e in enumerate(exps) for _ in range(e))]] += int(c)
    return tuple(out)


def build_algebra(spec: TaskSpec, M: GModule, truncation: int) -> GradedGAlgebra:
    A = sym_algebra(M, truncation)
    alg = spec.algebra
    if alg is None or alg["op"] == "sym_algebra":
        return A
    gens = []
    for g in alg["generators"]:
        if g["degree"] > truncation:
            continue
        v = tuple(g["vector"]) if "vector" in g else _parse_expr(g["expr"], M, g["degree"])
        gens.append((g["degree"], v))
    return quotient(A, gens)


# ---------------------------------------------------------------------------
# tasks
# ---------------------------------------------------------------------------


@dataclass
class Outcome:
    status: str
    results: dict


def _param(spec: TaskSpec, key: str, default):
    return spec.params.get(key, default)


def _subgroup(spec: TaskSpec) -> SubgroupTag:
    return SubgroupTag(_param(spec, "subgroup", "G"))


def _task_validate(spec: TaskSpec, M: GModule) -> Outcome:
    rep = validate(M)
    return Outcome(COMPLETED if rep.ok else REFUTED, {"rank": M.rank, "validation": rep.to_dict()})


def _task_invariants(spec: TaskSpec, M: GModule) -> Outcome:
    h = _subgroup(spec)
    if spec.algebra is None and "D" not in spec.params:
        inv = invariants(M, h)
        return Outcome(COMPLETED, {
            "subgroup": h.value,
            "rank": inv.rank,
            "basis": [format_vector([M.label(i) for i in range(M.rank)], b) for b in inv.basis],
            "weights": [str(w) for w in inv.weights],
            "structure": inv.structure(),
        })
    D = _param(spec, "D", 4)
    A = build_algebra(spec, M, _param(spec, "truncation", D))
    res = invariant_subalgebra(A, h, D)
    return Outcome(COMPLETED, res.to_dict())


def _task_grosshans(spec: TaskSpec, M: GModule) -> Outcome:
    filt = graded(M)
    H = hull(M)
    emb = hull_embedding(M, filt)
    good = has_good_filtration(M, _param(spec, "invert", []))
    return Outcome(COMPLETED, {
        "filtration_degrees": filt.degrees,
        "graded_ranks": {str(k): v for k, v in filt.graded_ranks().items()},
        "hull_ranks": H.ranks(),
        "cokernel": emb.cokernel(),
        "good_filtration": good.to_dict(),
    })


def _task_torsion(spec: TaskSpec, M: GModule) -> Outcome:
    D = _param(spec, "D", 2)
    A = build_algebra(spec, M, _param(spec, "truncation", D))
    tb = torsion_bound(A, D)
    return Outcome(COMPLETED, tb.to_dict())


def _task_schur(spec: TaskSpec, M: GModule | None) -> Outcome:
    pair = schur_cone_pair(
        spec.params["lambda"], _param(spec, "D", 3), spec.modulus, _param(spec, "exponent_bound", 4)
    )
    return Outcome(COMPLETED if pair.integral else INCONCLUSIVE, pair.to_dict())


def _task_multicone(spec: TaskSpec, M: GModule | None) -> Outcome:
    mc = multicone(spec.params["weights"], _param(spec, "D", 4), spec.modulus)
    return Outcome(COMPLETED if mc.all_surjective else REFUTED, mc.to_dict())


def _task_power_red(spec: TaskSpec, M: GModule) -> Outcome:
    L = trivial(1, spec.modulus).with_labels(["l"])
    phi = GMap(M, L, IntMatrix.from_rows([spec.params["target"]], ncols=M.rank, modulus=spec.modulus))
    res = check_power_reductivity(phi, _param(spec, "d_max", 8), _subgroup(spec))
    return Outcome(res.status, res.to_dict())


def _power_bounds(spec: TaskSpec) -> tuple[int, int, int, int]:
    D = _param(spec, "D", 4)
    return D, _param(spec, "truncation", 2 * D), _param(spec, "s_max", 8), _param(spec, "seed", 0)


def _task_lift(spec: TaskSpec, M: GModule) -> Outcome:
    D, trunc, s_max, _ = _power_bounds(spec)
    Q = build_algebra(spec, M, trunc)
    assert isinstance(Q, QuotientAlgebra)
    v = lift_invariants(Q, D, s_max)
    return Outcome(v.status, v.to_dict())


def _task_int(spec: TaskSpec, M: GModule) -> Outcome:
    D, trunc, s_max, _ = _power_bounds(spec)
    Q = build_algebra(spec, M, trunc)
    assert isinstance(Q, QuotientAlgebra)
    rels = int_property_witness(Q, D, s_max)
    lift = lift_invariants(Q, D, s_max)
    bad = integrality_consistency(lift, rels)
    ok = all(r.relation is not None for r in rels) and not bad
    return Outcome(PROVEN if ok else INCONCLUSIVE, {
        "relations": [r.to_dict() for r in rels],
        "lift": lift.to_dict(),
        "consistency_violations": bad,
    })


def _task_power_surj(spec: TaskSpec, M: GModule) -> Outcome:
    D, trunc, s_max, seed = _power_bounds(spec)
    A = build_algebra(spec, M, trunc)
    kind = _param(spec, "map", "hull-embedding")
    if kind == "projection":
        if not isinstance(A, QuotientAlgebra):
            raise SpecError("map 'projection' needs a quotient algebra")
        f = projection_map(A)
    else:
        _, f = hull_algebra(A)
    p = spec.params.get("p")
    if p is None:
        v = power_surjectivity(f, None, D, s_max, seed)
    else:
        v = p_power_surjectivity(f, p, None, D, s_max, seed)
    out = v.to_dict()
    out["map"] = kind
    return Outcome(v.status, out)


def _task_gr_mod_p(spec: TaskSpec, M: GModule) -> Outcome:
    D, trunc, s_max, seed = _power_bounds(spec)
    A = build_algebra(spec, M, trunc)
    v = gr_mod_p_comparison(A, spec.params["p"], D, s_max, seed)
    return Outcome(v.status, v.to_dict())


TASKS: dict[str, Callable[[TaskSpec, Any], Outcome]] = {
    "validate": _task_validate,
    "invariants": _task_invariants,
    "grosshans": _task_grosshans,
    "torsion-bound": _task_torsion,
    "schur-cone": _task_schur,
    "multicone": _task_multicone,
    "power-red": _task_power_red,
    "lift": _task_lift,
    "int": _task_int,
    "power-surj": _task_power_surj,
    "gr-mod-p": _task_gr_mod_p,
}


def exit_code(status: str) -> int:
    return EXIT_OK if status in (COMPLETED, PROVEN) else EXIT_INCONCLUSIVE


def run(spec: TaskSpec) -> dict:
    """Execute a parsed task and return the report (timing included)."""
    start = time.perf_counter()
    M = build_module(spec.module, spec.modulus) if spec.module is not None else None
    try:
        out = TASKS[spec.task](spec, M)
    except GlabError as e:
        raise type(e)(f"task {spec.task!r}: {e}") from e
    return {
        "tool": "glab",
        "version": __version__,
        "exact_arithmetic": True,
        "task": spec.to_dict(),
        "status": out.status,
        "results": out.results,
        "timing_seconds": round(time.perf_counter() - start, 3),
    }


def render(report: Mapping) -> str:
    return json.dumps(report, sort_keys=True, ensure_ascii=False, indent=2)


def apply_overrides(spec: TaskSpec, args: argparse.Namespace) -> TaskSpec:
    spec = copy.deepcopy(spec)
    for flag, key in (("d_max", "d_max"), ("s_max", "s_max"), ("degree", "D"), ("seed", "seed")):
        value = getattr(args, flag, None)
        if value is not None:
            spec.params[key] = value
    return spec


# ---------------------------------------------------------------------------
# fixture suite
# ---------------------------------------------------------------------------


def _fixture_checks(d_max: int, s_max: int) -> list[tuple[str, Callable[[], bool]]]:
    from .fixtures import adjoint_fixture, conjugation_fixture, unipotent_fixture
    from .induction import cartan_multiply
    from .exact_linalg import is_surjective

    def conj_power_red():
        r = check_power_reductivity(conjugation_fixture(2).phi, d_max)
        return r.degree == 2 and r.cokernels[1] == [2] and r.witness_expression == "a*d - b*c"

    def conj_invariants():
        res = invariant_subalgebra(conjugation_fixture(4).algebra, SubgroupTag.FullG, 4)
        return res.generator_degrees == [1, 2] and [res.ranks[d] for d in range(1, 5)] == [1, 2, 2, 3]

    def adjoint_lift():
        fx = adjoint_fixture(4)
        v = lift_invariants(fx.mod2, 2, s_max)
        return v.exponent_of("H") == 2 and invariants(sym_power(fx.module, 2)).rank == 1

    def unipotent_control():
        fx = unipotent_fixture()
        return check_power_reductivity(fx.phi, d_max, SubgroupTag.UPlus).status == INCONCLUSIVE

    def torsion():
        return torsion_bound(adjoint_fixture(2).algebra, 2).bound == 2

    def cartan():
        return all(
            is_surjective(cartan_multiply(a, b, n).matrix)
            for n in (0, 2) for a in range(0, 5) for b in range(0, 5 - a)
        )

    def gr_algebra():
        A = adjoint_fixture(4).algebra
        gr = GrosshansGradedAlgebra(A)
        return [gr.rank(d) for d in range(5)] == [A.rank(d) for d in range(5)]

    return [
        ("power reductivity of the trace on 2x2 matrices (d = 2, witness a*d - b*c)", conj_power_red),
        ("conjugation invariants: generators in degrees 1 and 2, ranks 1, 2, 2, 3", conj_invariants),
        ("invariants of S(sl2) mod 2: H lifts with exponent 2", adjoint_lift),
        ("unipotent restriction stays inconclusive", unipotent_control),
        ("torsion bound of S(sl2) up to degree 2 is 2", torsion),
        ("Cartan multiplication surjective over Z and Z/2", cartan),
        ("gr S(sl2) has the ranks of S(sl2)", gr_algebra),
    ]


def run_check(d_max: int = 8, s_max: int = 8, out=None) -> int:
    out = out or sys.stdout
    failed = 0
    for name, fn in _fixture_checks(d_max, s_max):
        start = time.perf_counter()
        ok = fn()
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} {name} ({time.perf_counter() - start:.2f}s)", file=out)
    return EXIT_OK if not failed else EXIT_INCONCLUSIVE


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glab", description="Exact computations with A1 modules and algebras.")
    parser.add_argument("--version", action="version", version=f"glab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def bounds(p):
        p.add_argument("--d-max", type=int, help="largest symmetric power for power-red")
        p.add_argument("--s-max", type=int, help="largest exponent tried in power searches")

    run_p = sub.add_parser("run", help="run a JSON task document")
    run_p.add_argument("file", help="task document, or - for stdin")
    bounds(run_p)
    run_p.add_argument("--degree", type=int, help="override the task's degree bound D")
    run_p.add_argument("--seed", type=int, help="seed for sampled test sets")

    check_p = sub.add_parser("check", help="run the built-in fixture suite")
    bounds(check_p)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "check":
        return run_check(args.d_max or 8, args.s_max or 8)
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        spec = apply_overrides(parse_spec(text), args)
        report = run(spec)
    except OSError as e:
        print(f"glab: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (GlabError, ValueError) as e:
        print(f"glab: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR
    print(render(report))
    if report["status"] == INCONCLUSIVE:
        print("glab: verdict inconclusive within the given bounds", file=sys.stderr)
    return exit_code(report["status"])


if __name__ == "__main__":
    sys.exit(main())
