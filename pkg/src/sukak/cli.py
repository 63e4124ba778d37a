"""Command-line front end.

Subcommands: decompose, invariant, check-pair, check-point, synth-su4,
synth-aiii, zxz, fat-points, scan-centroid, haar.

Matrix files are UTF-8 JSON with fields {"n", "re", "im", "pair"?};
numbers are written with 17 significant digits so doubles round-trip
bit-exactly.  Exit codes: 0 success, 2 certified-false, 1 error.
Reports are deterministic given inputs, flags and seed (timing is only
included with --timing).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .alcove import AlcovePoint, PairType
from .cartan import alcove_invariant, decompose_ai, decompose_aiii
from .errors import NotUnitary, ParseError, SukakError
from .numerics import (Tolerance, default_tolerance, haar_unitary,
                       set_default_tolerance, unitarity_residual)
from .products import (VPolytope, centroid_feasibility_scan,
                       fixed_by_alcove_symmetries, in_large_product_set,
                       fat_points, pair_large_product)
from .synthesis import block_zxz, synth_aiii, synth_su4

_PAIR_FLAGS = {"ai": "AI", "aii": "AII", "aiii": "AIII"}


def _fmt(x: float) -> float:
    return float(f"{x:.17g}")


def _matrix_to_json(u: np.ndarray) -> dict:
    u = np.asarray(u, dtype=complex)
    return {
        "n": int(u.shape[0]),
        "re": [[_fmt(v) for v in row] for row in u.real.tolist()],
        "im": [[_fmt(v) for v in row] for row in u.imag.tolist()],
    }


def serialize_matrix(u: np.ndarray, pair: str | None = None) -> str:
    doc = _matrix_to_json(u)
    if pair:
        doc["pair"] = pair
    return json.dumps(doc, indent=None, separators=(",", ":"))


def parse_matrix(path: str, tol: Tolerance | None = None) -> np.ndarray:
    """Load and validate a unitary matrix from a JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top-level value must be an object")
    for field in ("n", "re", "im"):
        if field not in doc:
            raise ParseError(f"{path}: missing field '{field}'")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise ParseError(f"{path}: field 'n' must be a positive integer")
    for field in ("re", "im"):
        arr = doc[field]
        if (not isinstance(arr, list) or len(arr) != n
                or any(not isinstance(r, list) or len(r) != n for r in arr)):
            raise ParseError(f"{path}: field '{field}' must be an {n}x{n} array")
    u = np.array(doc["re"], dtype=float) + 1j * np.array(doc["im"], dtype=float)
    tol = tol or default_tolerance()
    r = unitarity_residual(u)
    if r > tol.eps_ortho * n:
        raise NotUnitary(r, f"{path}: unitarity residual {r:.3e} above tolerance")
    return u


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


def _point_json(x: AlcovePoint) -> list:
    return [_fmt(v) for v in x.x]


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")], dtype=float)
    except ValueError as exc:
        raise ParseError(f"bad vector {text!r}: {exc}") from exc


def _parse_rational(v) -> Fraction:
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    raise ParseError(f"bad rational value {v!r}")


def parse_polytope(path: str) -> VPolytope:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "dim" not in doc or "vertices" not in doc:
        raise ParseError(f"{path}: polytope JSON needs fields 'dim' and 'vertices'")
    dim = doc["dim"]
    verts = [[_parse_rational(v) for v in row] for row in doc["vertices"]]
    return VPolytope(dim, verts)


def polytope_json(p: VPolytope) -> dict:
    return {"dim": p.dim,
            "vertices": [[str(v) for v in vert] for vert in p.vertices]}


def _pair_type(flag: str, n: int) -> PairType:
    kind = _PAIR_FLAGS[flag]
    m = n if kind == "AI" else n // 2
    return PairType(kind, m)


class _Run:
    """Collects the report for one CLI invocation."""

    def __init__(self, args):
        self.args = args
        self.t0 = time.monotonic()
        self.report = {
            "command": args.command,
            "inputs": {},
            "outputs": {},
            "residuals": {},
            "version": __version__,
        }
        self._limits = {}
        self.exit_code = 0

    def input_file(self, name, path):
        self.report["inputs"][name] = {"path": path, "sha256": _digest(path)}

    def add_residual(self, name, value, limit):
        self.report["residuals"][name] = float(value)
        self._limits[name] = limit

    def finish(self):
        if self.args.timing:
            self.report["elapsed_s"] = round(time.monotonic() - self.t0, 6)
        if self.exit_code == 0:
            for name, value in self.report["residuals"].items():
                if value > self._limits[name]:
                    self.report["error"] = f"residual {name} above tolerance"
                    self.exit_code = 1
        print(json.dumps(self.report, indent=2, sort_keys=True))
        return self.exit_code


def _cmd_decompose(run, args):
    u = parse_matrix(args.infile)
    run.input_file("matrix", args.infile)
    pair = _pair_type(args.pair, u.shape[0])
    if pair.kind == "AI":
        fac = decompose_ai(u)
    elif pair.kind == "AIII":
        fac = decompose_aiii(u)
    else:
        raise SukakError("constructive factors for AII are not available; "
                         "use 'invariant' for the spectral invariant")
    resid = float(np.linalg.norm(fac.reconstruct() - u))
    run.report["outputs"] = {
        "pair": str(pair),
        "k1": _matrix_to_json(fac.k1),
        "k2": _matrix_to_json(fac.k2),
        "alcove_point": _point_json(fac.x),
    }
    run.add_residual("reconstruction", resid,
                     default_tolerance().eps_recon * u.shape[0])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(run.report["outputs"], fh)


def _cmd_invariant(run, args):
    u = parse_matrix(args.infile)
    run.input_file("matrix", args.infile)
    pair = _pair_type(args.pair, u.shape[0])
    x = alcove_invariant(u, pair)
    run.report["outputs"] = {"pair": str(pair), "alcove_point": _point_json(x)}


def _cmd_check_pair(run, args):
    u = parse_matrix(args.u)
    v = parse_matrix(args.v)
    run.input_file("u", args.u)
    run.input_file("v", args.v)
    pair = _pair_type(args.pair, u.shape[0])
    cert = pair_large_product(u, v, pair)
    run.report["outputs"] = {
        "pair": str(pair),
        "product_is_group": cert.product_is_group,
        "a_u": _point_json(cert.a_u),
        "a_v_inv": _point_json(cert.a_v_inv),
    }
    if not cert.product_is_group:
        run.exit_code = 2


def _cmd_check_point(run, args):
    vec = _parse_vector(args.x)
    pair = PairType(_PAIR_FLAGS[args.pair], vec.shape[0])
    x = AlcovePoint(pair, vec)
    in_set = in_large_product_set(x)
    run.report["outputs"] = {
        "pair": str(pair),
        "in_large_product_set": in_set,
        "fixed_by_alcove_symmetries": fixed_by_alcove_symmetries(x),
    }
    if not in_set:
        run.exit_code = 2


def _cmd_synth_su4(run, args):
    u = parse_matrix(args.infile)
    run.input_file("matrix", args.infile)
    circ = synth_su4(u)
    resid = float(np.linalg.norm(circ.reconstruct() - circ.phase * u))
    layers = []
    for a, b, ph in circ.factors:
        layers.append({"a": _matrix_to_json(a), "b": _matrix_to_json(b),
                       "phase": [_fmt(ph.real), _fmt(ph.imag)]})
    run.report["outputs"] = {
        "layers": layers,
        "phase": [_fmt(circ.phase.real), _fmt(circ.phase.imag)],
    }
    run.add_residual("reconstruction", resid, 1e-6 * 4)


def _cmd_synth_aiii(run, args):
    u = parse_matrix(args.infile)
    run.input_file("matrix", args.infile)
    seq = synth_aiii(u)
    resid = float(np.linalg.norm(seq.reconstruct() - u))
    run.report["outputs"] = {
        "k1": _matrix_to_json(seq.k1),
        "v": _matrix_to_json(seq.v),
        "k2": _matrix_to_json(seq.k2),
        "v_inv": _matrix_to_json(seq.v_inv),
        "k3": _matrix_to_json(seq.k3),
        "x_star": _point_json(seq.x_star),
    }
    run.add_residual("reconstruction", resid, 1e-6 * u.shape[0])


def _cmd_zxz(run, args):
    u = parse_matrix(args.infile)
    run.input_file("matrix", args.infile)
    fac = block_zxz(u)
    resid = float(np.linalg.norm(fac.reconstruct() - u))
    run.report["outputs"] = {
        "a": _matrix_to_json(fac.a),
        "b": _matrix_to_json(fac.b),
        "c": _matrix_to_json(fac.c),
        "s": _matrix_to_json(fac.s),
    }
    run.add_residual("reconstruction", resid,
                     default_tolerance().eps_recon * u.shape[0])


def _cmd_fat_points(run, args):
    poly = parse_polytope(args.infile)
    run.input_file("polytope", args.infile)
    d1, d2 = (int(v) for v in args.split.split(","))
    result = fat_points(poly, (d1, d2))
    run.report["outputs"] = {"fat_points": polytope_json(result)}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(polytope_json(result), fh)


def _cmd_scan_centroid(run, args):
    violations = centroid_feasibility_scan(args.n)
    run.report["outputs"] = {
        "n": args.n,
        "violations": [
            {"k": t.k, "i_set": list(t.i_set), "j_set": list(t.j_set),
             "k_set": list(t.k_set), "d": t.d}
            for t in violations
        ],
    }
    if violations:
        run.exit_code = 2


def _cmd_haar(run, args):
    u = haar_unitary(args.n, args.seed, special=args.special)
    run.report["outputs"] = {"matrix": _matrix_to_json(u)}
    run.add_residual("unitarity", unitarity_residual(u),
                     default_tolerance().eps_ortho * args.n)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize_matrix(u))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sukak",
        description="KAK decompositions, double-coset certification and gate synthesis")
    parser.add_argument("--tol", type=float, default=None,
                        help="reconstruction tolerance; the others scale proportionally")
    parser.add_argument("--seed", type=int, default=0, help="RNG seed")
    parser.add_argument("--out", type=str, default=None,
                        help="also write the primary output to this path")
    parser.add_argument("--timing", action="store_true",
                        help="include elapsed time in the report (breaks byte determinism)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        return p

    p = add("decompose", _cmd_decompose, help="KAK factors of a matrix file")
    p.add_argument("--pair", required=True, choices=sorted(_PAIR_FLAGS))
    p.add_argument("--in", dest="infile", required=True)

    p = add("invariant", _cmd_invariant, help="canonical alcove point of a matrix")
    p.add_argument("--pair", required=True, choices=sorted(_PAIR_FLAGS))
    p.add_argument("--in", dest="infile", required=True)

    p = add("check-pair", _cmd_check_pair, help="certify K u K v K = SU(n)")
    p.add_argument("--pair", required=True, choices=sorted(_PAIR_FLAGS))
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)

    p = add("check-point", _cmd_check_point,
            help="large-product membership of a raw alcove vector")
    p.add_argument("--pair", required=True, choices=sorted(_PAIR_FLAGS))
    p.add_argument("--x", required=True, help="comma-separated coordinates")

    p = add("synth-su4", _cmd_synth_su4, help="Berkeley-gate circuit for a 4x4 unitary")
    p.add_argument("--in", dest="infile", required=True)

    p = add("synth-aiii", _cmd_synth_aiii, help="five-factor split-pair synthesis")
    p.add_argument("--in", dest="infile", required=True)

    p = add("zxz", _cmd_zxz, help="single-level block-ZXZ decomposition")
    p.add_argument("--in", dest="infile", required=True)

    p = add("fat-points", _cmd_fat_points, help="fat points of a vertex polytope")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--split", required=True, help="d1,d2")

    p = add("scan-centroid", _cmd_scan_centroid,
            help="enumerate centroid feasibility inequalities")
    p.add_argument("--n", type=int, required=True)

    p = add("haar", _cmd_haar, help="sample a Haar-random unitary")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--special", action="store_true")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is not None:
        set_default_tolerance(default_tolerance().scaled(args.tol))
    run = _Run(args)
    try:
        args.fn(run, args)
    except SukakError as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}},
                         indent=2))
        return 1
    return run.finish()


if __name__ == "__main__":
    sys.exit(main())
