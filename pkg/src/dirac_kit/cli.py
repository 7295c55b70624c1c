"""Batch command line front end.

Three subcommands cover the pipelines: ``lin`` for the exact linear
calculus (JSON request in, JSON response out), ``groupoid check`` for
the pair-groupoid identities, and ``surf`` for the surface classifier
and its comparisons.

Every response is a single JSON envelope {ok, result|error,
diagnostics} printed to stdout (and to --out when given).  Exit codes:
0 success, 2 malformed input, 3 violated mathematical precondition,
4 non-generic geometry.  Floats are rounded to 12 significant digits
before printing, so identical flags give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import exact_linalg as xl
from .dirac import (
    Bivector,
    LinearDirac,
    LinearDualPairData,
    LinearMap,
    LinearRelation,
    PreconditionError,
    SkewForm,
    backward,
    check_dual_pair,
    compose,
    dirac_from_bivector,
    dirac_from_form,
    forward,
    form_kernel,
    gauge,
    gauge_bivector,
    gauge_dual_pair,
    leaf_form,
    quotient_bivector,
    reduce_predual,
)
from .exact_linalg import Mat, Subspace, rat_str
from .expr import ExprSyntaxError, PoleError, parse, to_string
from .groupoid import (
    check_multiplicative,
    gauge_groupoid_form,
    make_pair_groupoid,
    morita_bimodule_form,
)
from .surface import (
    NonGenericError,
    SurfaceSpec,
    classify,
    curves_to_csv,
    gauge_forward,
    gauge_witness,
    graph_to_dot,
)
from .trees import decide_morita_sphere, tree_from_region_graph, tree_to_json


class _InputError(ValueError):
    """Bad request content that the schemas cannot express."""


# ---------------------------------------------------------------------------
# serialization helpers

_SCHEMAS: dict[str, dict] = {}


def _schema(name: str) -> dict:
    if name not in _SCHEMAS:
        from importlib import resources

        text = resources.files("dirac_kit").joinpath("schemas", name).read_text()
        _SCHEMAS[name] = json.loads(text)
    return _SCHEMAS[name]


def _jsonify(obj):
    """Round floats to 12 significant digits and strip numpy types."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, (np.floating, float)):
        return float(format(float(obj), ".12g"))
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def _mat_out(m: Mat) -> list[list[str]]:
    return [[rat_str(x) for x in row] for row in m.data]


def _dirac_out(l: LinearDirac) -> dict:
    return {"dim_v": l.dim_v, "basis": _mat_out(l.space.basis)}


def _dirac_in(d: dict) -> LinearDirac:
    n = d["dim_v"]
    return LinearDirac(n, Subspace(2 * n, Mat(d["basis"], 2 * n)))


def _relation_out(r: LinearRelation) -> dict:
    return {
        "source_dim": r.source_dim,
        "target_dim": r.target_dim,
        "basis": _mat_out(r.space.basis),
    }


def _relation_in(d: dict) -> LinearRelation:
    s, t = d["source_dim"], d["target_dim"]
    return LinearRelation(s, t, Subspace(2 * (s + t), Mat(d["basis"], 2 * (s + t))))


def _subspace_out(s: Subspace) -> dict:
    return {"ambient": s.ambient, "basis": _mat_out(s.basis)}


def _load_json(path: str):
    return json.loads(Path(path).read_text())


def _require(req: dict, fields: tuple[str, ...], op: str) -> None:
    missing = [f for f in fields if f not in req]
    if missing:
        raise _InputError(f"op {op} requires field(s): {', '.join(missing)}")


def _dual_pair_data(req: dict) -> LinearDualPairData:
    return LinearDualPairData(
        omega=SkewForm(Mat(req["omega"])),
        j1=LinearMap(Mat(req["j1"])),
        j2=LinearMap(Mat(req["j2"])),
        l1=_dirac_in(req["l1"]),
        l2=_dirac_in(req["l2"]),
        full=req.get("full", True),
    )


# ---------------------------------------------------------------------------
# lin subcommand

_LIN_REQUIRED = {
    "from-form": ("omega",),
    "from-bivector": ("pi",),
    "forward": ("phi", "dirac"),
    "backward": ("phi", "dirac"),
    "gauge": ("b", "dirac"),
    "gauge-bivector": ("b", "pi"),
    "leaf-form": ("dirac",),
    "quotient-bivector": ("dirac",),
    "check-dual-pair": ("omega", "j1", "j2", "l1", "l2"),
    "gauge-dual-pair": ("omega", "j1", "j2", "l1", "l2", "b1", "b2"),
    "reduce": ("omega", "j1", "j2", "l1", "l2"),
    "compose": ("r1", "r2"),
}


def _run_lin(args) -> tuple[dict, dict]:
    req = _load_json(args.infile)
    jsonschema.validate(req, _schema("lin_request.schema.json"))
    op = args.op
    _require(req, _LIN_REQUIRED[op], op)

    if op == "from-form":
        result = {"dirac": _dirac_out(dirac_from_form(SkewForm(Mat(req["omega"]))))}
    elif op == "from-bivector":
        result = {"dirac": _dirac_out(dirac_from_bivector(Bivector(Mat(req["pi"]))))}
    elif op in ("forward", "backward"):
        phi = LinearMap(Mat(req["phi"]))
        l = _dirac_in(req["dirac"])
        moved = forward(phi, l) if op == "forward" else backward(phi, l)
        result = {"dirac": _dirac_out(moved)}
    elif op == "gauge":
        result = {
            "dirac": _dirac_out(gauge(SkewForm(Mat(req["b"])), _dirac_in(req["dirac"])))
        }
    elif op == "gauge-bivector":
        out = gauge_bivector(SkewForm(Mat(req["b"])), Bivector(Mat(req["pi"])))
        result = {
            "present": out is not None,
            "pi": None if out is None else _mat_out(out.m),
        }
    elif op == "leaf-form":
        rng, omega_r = leaf_form(_dirac_in(req["dirac"]))
        result = {"range": _subspace_out(rng), "form": _mat_out(omega_r.m)}
    elif op == "quotient-bivector":
        ker, pi_q = quotient_bivector(_dirac_in(req["dirac"]))
        result = {"kernel": _subspace_out(ker), "bivector": _mat_out(pi_q.m)}
    elif op == "check-dual-pair":
        verdict = check_dual_pair(_dual_pair_data(req), req.get("mode", "dual"))
        result = verdict.as_dict()
    elif op == "gauge-dual-pair":
        omega_hat, verdict = gauge_dual_pair(
            _dual_pair_data(req), SkewForm(Mat(req["b1"])), SkewForm(Mat(req["b2"]))
        )
        result = {"omega_hat": _mat_out(omega_hat.m), "verdict": verdict.as_dict()}
    elif op == "reduce":
        red = reduce_predual(_dual_pair_data(req))
        result = {
            "omega": _mat_out(red.omega.m),
            "j1": _mat_out(red.j1.m),
            "j2": _mat_out(red.j2.m),
            "l1": _dirac_out(red.l1),
            "l2": _dirac_out(red.l2),
            "full": red.full,
        }
    else:
        result = {"relation": _relation_out(compose(_relation_in(req["r1"]), _relation_in(req["r2"])))}

    return result, {"command": "lin", "op": op}


# ---------------------------------------------------------------------------
# groupoid subcommand

def _run_groupoid(args) -> tuple[dict, dict]:
    omega_rows = _load_json(args.omega)
    b_rows = _load_json(args.b)
    schema = _schema("matrix.schema.json")
    jsonschema.validate(omega_rows, schema)
    jsonschema.validate(b_rows, schema)
    g = make_pair_groupoid(SkewForm(Mat(omega_rows)))
    b = SkewForm(Mat(b_rows))
    omega_b = gauge_groupoid_form(g, b)
    nondegenerate = form_kernel(omega_b).dim == 0
    try:
        _, verdict = morita_bimodule_form(g, b)
        dual_pair = verdict.ok
    except PreconditionError:
        dual_pair = False
    result = {
        "multiplicative": check_multiplicative(g, omega_b),
        "nondegenerate": nondegenerate,
        "dual_pair": dual_pair,
    }
    return result, {"command": "groupoid", "op": "check", "base_dim": g.base_dim}


# ---------------------------------------------------------------------------
# surf subcommand

def _classify_result(f_text: str, spec: SurfaceSpec):
    report = classify(parse(f_text), spec)
    result = {
        "surface": spec.kind,
        "grid": spec.grid_n,
        "curve_count": len(report.curves),
        "curves": [
            {
                "id": i,
                "points": len(c.points),
                "orientation": c.orientation,
                "period": report.periods[i],
            }
            for i, c in enumerate(report.curves)
        ],
        "periods": list(report.periods),
        "regularized_volume": report.regularized_volume,
        "graph": {
            "vertices": [
                {"id": v.id, "sign": v.sign, "point": [v.point[0], v.point[1]]}
                for v in report.graph.vertices
            ],
            "edges": [
                {"u": e.u, "v": e.v, "curve": e.curve, "period": e.period}
                for e in report.graph.edges
            ],
        },
    }
    if spec.kind == "sphere":
        result["tree"] = tree_to_json(tree_from_region_graph(report.graph))
    return report, result


def _run_surf(args) -> tuple[dict, dict]:
    spec = SurfaceSpec(args.surface, args.grid)
    diagnostics: dict = {"command": "surf", "op": args.op}

    if args.op == "classify":
        if not args.f:
            raise _InputError("classify requires --f")
        report, result = _classify_result(args.f, spec)
        if args.curves_csv:
            Path(args.curves_csv).write_text(curves_to_csv(report.curves))
        if args.dot:
            Path(args.dot).write_text(graph_to_dot(report.graph))
        diagnostics.update(report.diagnostics)
        return result, diagnostics

    if args.op == "compare":
        if not (args.f1 and args.f2):
            raise _InputError("compare requires --f1 and --f2")
        witness = gauge_witness(parse(args.f1), parse(args.f2), spec)
        result = {
            "gauge_verdict": witness.verdict,
            "witness_bounded": witness.bounded,
            "collar_max": witness.collar_max,
            "detail": witness.detail,
            "morita": None,
        }
        if spec.kind == "sphere":
            r1, _ = _classify_result(args.f1, spec)
            r2, _ = _classify_result(args.f2, spec)
            v = decide_morita_sphere(r1, r2, args.tol)
            result["morita"] = {
                "verdict": "morita_equivalent" if v.equivalent else "not_equivalent",
                "signs": v.signs,
                "discriminator": {
                    "periods": "modular period",
                    "tree_shape": "tree shape",
                }.get(v.reason),
                "detail": v.detail,
            }
        return result, diagnostics

    if not (args.f and args.b):
        raise _InputError("gauge requires --f and --b")
    fp, valid = gauge_forward(parse(args.f), parse(args.b), spec)
    return {"f_prime": to_string(fp), "valid": bool(valid)}, diagnostics


# ---------------------------------------------------------------------------
# driver

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirac-kit",
        description="Exact Dirac-structure calculus and the surface classifier.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    lin = sub.add_parser("lin", help="exact linear operations on JSON requests")
    lin.add_argument("op", choices=sorted(_LIN_REQUIRED))
    lin.add_argument("--in", dest="infile", required=True, metavar="request.json")
    lin.add_argument("--out", default=None, metavar="response.json")
    lin.set_defaults(handler=_run_lin)

    grp = sub.add_parser("groupoid", help="pair-groupoid identity checks")
    grp.add_argument("op", choices=["check"])
    grp.add_argument("--omega", required=True, metavar="omega.json")
    grp.add_argument("--b", required=True, metavar="b.json")
    grp.add_argument("--out", default=None)
    grp.set_defaults(handler=_run_groupoid)

    surf = sub.add_parser("surf", help="surface classifier pipelines")
    surf.add_argument("op", choices=["classify", "compare", "gauge"])
    surf.add_argument("--f", default=None)
    surf.add_argument("--f1", default=None)
    surf.add_argument("--f2", default=None)
    surf.add_argument("--b", default=None)
    surf.add_argument("--surface", choices=["sphere", "torus"], default="sphere")
    surf.add_argument("--grid", type=int, default=512)
    surf.add_argument("--tol", type=float, default=1e-3)
    surf.add_argument("--out", default=None)
    surf.add_argument("--curves-csv", dest="curves_csv", default=None)
    surf.add_argument("--dot", default=None)
    surf.set_defaults(handler=_run_surf)

    return parser


def _emit(envelope: dict, out_path: str | None) -> None:
    text = json.dumps(_jsonify(envelope), indent=2) + "\n"
    sys.stdout.write(text)
    if out_path:
        Path(out_path).write_text(text)


def _apply_thread_cap() -> None:
    # honored by BLAS/OpenMP pools that read these lazily
    cap = os.environ.get("DIRAC_KIT_THREADS")
    if cap:
        for var in (
            "OMP_NUM_THREADS",
            "OPENBLAS_NUM_THREADS",
            "MKL_NUM_THREADS",
            "NUMEXPR_NUM_THREADS",
        ):
            os.environ.setdefault(var, cap)


def main(argv=None) -> int:
    _apply_thread_cap()
    args = _build_parser().parse_args(argv)
    out_path = getattr(args, "out", None)
    try:
        result, diagnostics = args.handler(args)
    except ExprSyntaxError as e:
        _emit({"ok": False, "error": {"code": "input_error", "message": str(e)}, "diagnostics": {}}, out_path)
        return 2
    except NonGenericError as e:
        _emit({"ok": False, "error": {"code": "non_generic", "message": str(e)}, "diagnostics": {}}, out_path)
        return 4
    except PreconditionError as e:
        _emit({"ok": False, "error": {"code": "precondition_violated", "message": str(e)}, "diagnostics": {}}, out_path)
        return 3
    except jsonschema.ValidationError as e:
        _emit({"ok": False, "error": {"code": "input_error", "message": e.message}, "diagnostics": {}}, out_path)
        return 2
    except (PoleError, json.JSONDecodeError, OSError, ValueError, KeyError) as e:
        _emit({"ok": False, "error": {"code": "input_error", "message": str(e)}, "diagnostics": {}}, out_path)
        return 2
    _emit({"ok": True, "result": result, "diagnostics": diagnostics}, out_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
