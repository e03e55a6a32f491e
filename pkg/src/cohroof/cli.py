"""Command line interface.

State files are JSON: {"dim": n, "matrix": [[[re, im], ...], ...]} with an
optional "label". Reports go to stdout and are byte-identical for
identical inputs and flags. Exit codes: 0 success, 2 invalid input,
3 optimization finished without converging (the report is still printed).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from . import _kernels
from .coherence import coherence_of_assistance, l1_coherence
from .convexroof import RoofConfig
from .entangle import (
    bipartite_state,
    negativity,
    negativity_convex_roof_mc,
    negativity_roof_direct,
    schmidt_lift,
)
from .statecore import StateValidationError, validate_density
from .xanalytic import concurrence

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNCONVERGED = 3


class CliError(Exception):
    """Bad command input; message goes to stderr, exit code 2."""


def load_state_file(path):
    """Read and structurally check a state file.

    Returns (matrix ndarray, label or None, sha256 hexdigest of the bytes).
    """
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise CliError("%s: %s" % (path, exc.strerror or exc))
    digest = hashlib.sha256(raw).hexdigest()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CliError("%s: not valid JSON (%s)" % (path, exc))
    if not isinstance(doc, dict):
        raise CliError("%s: top level must be an object" % path)
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise CliError("%s: dim must be a positive integer" % path)
    rows = doc.get("matrix")
    if not isinstance(rows, list) or len(rows) != dim:
        raise CliError("%s: matrix must be a list of %d rows" % (path, dim))
    out = np.empty((dim, dim), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise CliError("%s: row %d must be a list of %d entries" % (path, i, dim))
        for j, entry in enumerate(row):
            ok = (
                isinstance(entry, list)
                and len(entry) == 2
                and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
            )
            if not ok:
                raise CliError(
                    "%s: entry (%d, %d) must be a [re, im] pair of numbers" % (path, i, j)
                )
            out[i, j] = complex(entry[0], entry[1])
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise CliError("%s: label must be a string" % path)
    return out, label, digest


def matrix_to_pairs(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def ensemble_to_doc(ensemble):
    return {
        "target_trace": float(ensemble.target_trace),
        "members": [
            {
                "weight": float(p),
                "amplitudes": [[float(z.real), float(z.imag)] for z in psi.amplitudes],
            }
            for p, psi in ensemble.members
        ],
    }


def roof_summary(diag):
    return {
        "direction": diag["direction"],
        "rank": diag["rank"],
        "ensemble_size": diag["ensemble_size"],
        "lower_bound": diag["lower_bound"],
        "certified_optimal": diag["certified_optimal"],
        "converged": diag["converged"],
        "best_restart": diag["best_restart"],
        "restarts_executed": diag["restarts_executed"],
        "restart_values": [r["value"] for r in diag["restarts"]],
    }


def block_entries(diag):
    out = []
    for blk in diag["blocks"]:
        entry = {
            "indices": list(blk["indices"]),
            "dim": blk["dim"],
            "path": blk["path"],
            "value": blk["value"],
            "converged": blk["converged"],
        }
        if "optimizer" in blk:
            entry["lower_bound"] = blk["lower_bound"]
            entry["optimizer"] = roof_summary(blk["optimizer"])
        out.append(entry)
    return out


def build_report(measure, value, path, blocks, diagnostics, seed, ensemble=None):
    report = {
        "measure": measure,
        "value": float(value),
        "path": path,
        "blocks": blocks,
    }
    if ensemble is not None:
        report["ensemble"] = ensemble
    report["diagnostics"] = diagnostics
    report["seed"] = seed
    return report


def render_text(report):
    lines = [
        "measure: %s" % report["measure"],
        "value: %r" % report["value"],
        "path: %s" % report["path"],
    ]
    diag = report["diagnostics"]
    if "converged" in diag:
        lines.append("converged: %s" % ("yes" if diag["converged"] else "no"))
    for k, blk in enumerate(report["blocks"]):
        lines.append(
            "block %d: indices %s, dim %d, %s, value %r"
            % (k, blk["indices"], blk["dim"], blk["path"], blk["value"])
        )
    if "direct" in diag:
        lines.append("direct value: %r" % diag["direct"]["value"])
        lines.append("discrepancy: %r" % diag["discrepancy"])
    if "ensemble" in report:
        members = report["ensemble"]["members"]
        lines.append("ensemble (%d members):" % len(members))
        for mem in members:
            amp = ", ".join(repr(complex(re, im)) for re, im in mem["amplitudes"])
            lines.append("  weight %r: [%s]" % (mem["weight"], amp))
    lines.append("seed: %d" % report["seed"])
    lines.append("input: sha256:%s" % diag["input_sha256"])
    return "\n".join(lines) + "\n"


def emit(report, fmt):
    if fmt == "json":
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(render_text(report))


def make_config(args):
    return RoofConfig(
        ensemble_size=args.ensemble_size,
        restarts=args.restarts,
        max_iterations=args.max_iterations,
        convergence_tol=args.tol,
        seed=args.seed,
    )


def handle_l1(args):
    matrix, _, digest = load_state_file(args.state)
    rho = validate_density(matrix)
    value = l1_coherence(rho)
    diagnostics = {"backend": _kernels.BACKEND, "input_sha256": digest}
    report = build_report("l1_coherence", value, "analytic", [], diagnostics, args.seed)
    emit(report, args.format)
    return EXIT_OK


def handle_concurrence(args):
    matrix, _, digest = load_state_file(args.state)
    rho = validate_density(matrix)
    res = concurrence(rho, make_config(args))
    diagnostics = {
        "backend": _kernels.BACKEND,
        "input_sha256": digest,
        "converged": res.diagnostics["converged"],
        "lower_bound": res.diagnostics["lower_bound"],
    }
    ensemble = ensemble_to_doc(res.ensemble) if args.emit_ensemble else None
    report = build_report(
        "coherence_concurrence", res.value, res.path,
        block_entries(res.diagnostics), diagnostics, args.seed, ensemble,
    )
    emit(report, args.format)
    return EXIT_OK if res.diagnostics["converged"] else EXIT_UNCONVERGED


def handle_assist(args):
    matrix, _, digest = load_state_file(args.state)
    rho = validate_density(matrix)
    res = coherence_of_assistance(rho, make_config(args))
    diagnostics = {"backend": _kernels.BACKEND, "input_sha256": digest,
                   "converged": res.diagnostics["converged"]}
    diagnostics["optimizer"] = roof_summary(res.diagnostics)
    ensemble = ensemble_to_doc(res.ensemble) if args.emit_ensemble else None
    report = build_report(
        "coherence_of_assistance", res.value, res.path, [], diagnostics,
        args.seed, ensemble,
    )
    emit(report, args.format)
    return EXIT_OK if res.diagnostics["converged"] else EXIT_UNCONVERGED


def handle_lift(args):
    matrix, label, _ = load_state_file(args.state)
    rho = validate_density(matrix)
    lifted = schmidt_lift(rho)
    doc = {"dim": lifted.state.dim, "matrix": matrix_to_pairs(lifted.state.entries)}
    if label is not None:
        doc["label"] = label + " (lifted)"
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def parse_dims(text, dim, path):
    parts = text.split(",")
    if len(parts) != 2:
        raise CliError("--dims must be two comma-separated integers")
    try:
        da, db = (int(p) for p in parts)
    except ValueError:
        raise CliError("--dims must be two comma-separated integers")
    if da < 1 or db < 1:
        raise CliError("--dims entries must be positive")
    if da * db != dim:
        raise CliError("%s: dims %dx%d do not factor dimension %d" % (path, da, db, dim))
    return da, db


def handle_negativity(args):
    matrix, _, digest = load_state_file(args.state)
    dims = parse_dims(args.dims, matrix.shape[0], args.state)
    b = bipartite_state(matrix, dims)
    value = negativity(b)
    diagnostics = {"backend": _kernels.BACKEND, "input_sha256": digest,
                   "dims": list(dims)}
    report = build_report("negativity", value, "analytic", [], diagnostics, args.seed)
    emit(report, args.format)
    return EXIT_OK


def handle_roof(args):
    matrix, _, digest = load_state_file(args.state)
    rho = validate_density(matrix)
    cfg = make_config(args)
    res = negativity_convex_roof_mc(rho, cfg)
    converged = res.diagnostics["converged"]
    diagnostics = {
        "backend": _kernels.BACKEND,
        "input_sha256": digest,
        "converged": converged,
        "route": "lifted-local",
    }
    if args.direct:
        direct = negativity_roof_direct(schmidt_lift(rho), cfg)
        diagnostics["direct"] = roof_summary(direct.diagnostics)
        diagnostics["direct"]["value"] = direct.value
        diagnostics["discrepancy"] = abs(res.value - direct.value)
        converged = converged and direct.diagnostics["converged"]
        diagnostics["converged"] = converged
    ensemble = ensemble_to_doc(res.ensemble) if args.emit_ensemble else None
    report = build_report(
        "negativity_roof", res.value, res.path,
        block_entries(res.diagnostics), diagnostics, args.seed, ensemble,
    )
    emit(report, args.format)
    return EXIT_OK if converged else EXIT_UNCONVERGED


def add_common(parser):
    parser.add_argument("state", help="path to a state file (JSON)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--restarts", type=int, default=16)
    parser.add_argument("--ensemble-size", type=int, default=None)
    parser.add_argument("--max-iterations", type=int, default=2000)
    parser.add_argument("--tol", type=float, default=1e-8)
    parser.add_argument("--format", choices=("json", "text"), default="text")
    parser.add_argument("--emit-ensemble", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cohroof",
        description="Coherence concurrence and related measures of density matrices.",
    )
    top = parser.add_subparsers(dest="group", required=True)

    coh = top.add_parser("coherence", help="coherence measures").add_subparsers(
        dest="command", required=True)
    p = coh.add_parser("l1", help="sum of off-diagonal moduli")
    add_common(p)
    p.set_defaults(handler=handle_l1)
    p = coh.add_parser("concurrence", help="convex-roof coherence")
    add_common(p)
    p.set_defaults(handler=handle_concurrence)
    p = coh.add_parser("assist", help="concave-roof coherence")
    add_common(p)
    p.set_defaults(handler=handle_assist)

    ent = top.add_parser("entangle", help="bipartite measures").add_subparsers(
        dest="command", required=True)
    p = ent.add_parser("lift", help="emit the doubled-space lift as a state file")
    add_common(p)
    p.set_defaults(handler=handle_lift)
    p = ent.add_parser("negativity", help="negativity of a bipartite state")
    add_common(p)
    p.add_argument("--dims", required=True, help="factor dimensions, e.g. 2,3")
    p.set_defaults(handler=handle_negativity)
    p = ent.add_parser("roof", help="roof negativity of the lifted state")
    add_common(p)
    p.add_argument("--direct", action="store_true",
                   help="also run the direct bipartite optimization and report the gap")
    p.set_defaults(handler=handle_roof)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (CliError, StateValidationError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
