"""Command-line front end.

Every command reads a single JSON document, dispatches to one library
operation and emits a verdict object

    {"status": "ok"|"fail"|"error", "payload": ..., "diagnostics": [...]}

with exit code 0 for ok, 1 for fail, 2 for error.  The default tolerance can
be overridden with the LOGCONNECT_TOL environment variable; ``--output -``
(the default) writes to standard output.
"""

from __future__ import annotations

import json
import os
import sys

import click
import numpy as np

from . import connections, lifting, monodromy, projective
from .connections import FuchsianSystem, LocalModel, LogConnection
from .errors import LogConnectError, SchemaViolation
from .lifting import ProjectivePresentation
from .projective import RiccatiSystem
from .serialization import (
    parse_loops,
    parse_ratfunc,
    matrix_to_json,
    scalar_to_json,
    system_to_json,
    validate_schema,
)

DEFAULT_TOL = 1e-10


def _tolerance(opt, default=DEFAULT_TOL):
    if opt is not None:
        return float(opt)
    env = os.environ.get("LOGCONNECT_TOL")
    return float(env) if env else default


def _load(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(verdict, output):
    text = json.dumps(verdict, indent=2, sort_keys=True)
    if output == "-":
        click.echo(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _finish(status, payload, output, diagnostics=()):
    _emit({"status": status, "payload": payload, "diagnostics": list(diagnostics)},
          output)
    sys.exit({"ok": 0, "fail": 1}.get(status, 2))


def _run(fn, output):
    """Run an operation returning (status, payload); map errors to verdicts."""
    try:
        status, payload, notes = fn()
    except SchemaViolation as exc:
        _finish("error", {"error": "SchemaViolation", "pointer": exc.pointer,
                          "message": exc.message}, output)
    except LogConnectError as exc:
        _finish("error", {"error": type(exc).__name__, "message": str(exc)}, output)
    except (ValueError, json.JSONDecodeError, OSError) as exc:
        _finish("error", {"error": type(exc).__name__, "message": str(exc)}, output)
    else:
        _finish(status, payload, output, notes)


def _parse_as(path, *types):
    obj = validate_schema(_load(path))
    if types and not isinstance(obj, types):
        names = ", ".join(t.__name__ for t in types)
        raise SchemaViolation("/type", f"expected one of: {names}")
    return obj


out_opt = click.option("--output", default="-", help="output path, '-' for stdout")
tol_opt = click.option("--tol", default=None, type=float,
                       help="tolerance (default from LOGCONNECT_TOL or 1e-10)")


@click.group()
def main():
    """Flat logarithmic connections, monodromy and projective lifting."""


@main.command("check-flat")
@click.argument("input", type=str)
@tol_opt
@out_opt
def check_flat(input, tol, output):
    """Symbolic flatness verdict for a connection file."""
    def op():
        conn = _parse_as(input, FuchsianSystem, LocalModel, LogConnection)
        flat = connections.flatness_check(conn, tol=_tolerance(tol, 1e-12))
        return ("ok" if flat else "fail"), {"flat": flat}, ()
    _run(op, output)


@main.command("residues")
@click.argument("input", type=str)
@out_opt
def residues_cmd(input, output):
    """All residue matrices (plus infinity for Fuchsian systems)."""
    def op():
        conn = _parse_as(input, FuchsianSystem, LocalModel, LogConnection)
        if isinstance(conn, FuchsianSystem):
            count = conn.k
        elif isinstance(conn, LocalModel):
            count = conn.k
        else:
            count = len(conn.divisor)
        payload = {"residues": [matrix_to_json(connections.residue(conn, i))
                                for i in range(count)]}
        if isinstance(conn, FuchsianSystem):
            payload["infinity"] = matrix_to_json(conn.residue_at_infinity())
        return "ok", payload, ()
    _run(op, output)


@main.command("monodromy")
@click.argument("input", type=str)
@tol_opt
@click.option("--basepoint", default=None, type=str,
              help="basepoint as 're,im' (default 1 + max|p|)")
@click.option("--loops", "loops_path", default=None, type=str,
              help="loop override file (JSON list of loops)")
@out_opt
def monodromy_cmd(input, tol, basepoint, loops_path, output):
    """Numerical monodromy matrices over standard (or supplied) loops."""
    def op():
        conn = _parse_as(input, FuchsianSystem, LocalModel, LogConnection)
        t = _tolerance(tol)
        if loops_path is not None:
            loops = parse_loops(_load(loops_path))
        elif isinstance(conn, FuchsianSystem):
            bp = None
            if basepoint is not None:
                re, im = (float(s) for s in basepoint.split(","))
                bp = complex(re, im)
            loops = monodromy.standard_loops(conn, basepoint=bp)
        elif isinstance(conn, LocalModel) and conn.k == 1:
            loops = [monodromy.circle_loop(0.0, 1.0)]
        else:
            raise SchemaViolation("", "supply --loops for this system kind")
        rep = monodromy.monodromy_rep(conn, loops, tol=t) \
            if isinstance(conn, FuchsianSystem) else None
        if rep is None:
            mats = [monodromy.transport(conn, lp, tol=t) for lp in loops]
            payload = {"matrices": [matrix_to_json(M) for M in mats]}
        else:
            payload = {
                "matrices": [matrix_to_json(M) for M in rep.matrices],
                "infinity": matrix_to_json(rep.infinity),
                "composition_convention": rep.composition_convention,
            }
        return "ok", payload, ()
    _run(op, output)


@main.command("projectivize")
@click.argument("input", type=str)
@out_opt
def projectivize_cmd(input, output):
    """Riccati coefficient extraction."""
    def op():
        conn = _parse_as(input, FuchsianSystem, LocalModel, LogConnection)
        return "ok", system_to_json(projective.projectivize(conn)), ()
    _run(op, output)


@main.command("reconstruct")
@click.argument("input", type=str)
@click.option("--trace", "trace_json", default=None, type=str,
              help="trace 1-form file (JSON list of rational functions per variable)")
@out_opt
def reconstruct_cmd(input, trace_json, output):
    """Unique linear system with given Riccati data and trace (default 0)."""
    def op():
        ric = _parse_as(input, RiccatiSystem)
        trace = None
        if trace_json is not None:
            doc = _load(trace_json)
            if not isinstance(doc, list) or len(doc) != ric.n:
                raise SchemaViolation("/trace", "expected one entry per chart variable")
            trace = tuple(parse_ratfunc(e, ric.gens, f"/trace/{i}")
                          for i, e in enumerate(doc))
        conn = projective.reconstruct(ric, trace)
        return "ok", system_to_json(conn), ()
    _run(op, output)


@main.command("lift-trace-free")
@click.argument("input", type=str)
@out_opt
def lift_trace_free(input, output):
    """Trace-free linear lift of a Riccati system (verified flat)."""
    def op():
        ric = _parse_as(input, RiccatiSystem)
        conn = projective.trace_free_lift(ric)
        return "ok", system_to_json(conn), ()
    _run(op, output)


@main.command("predicates")
@click.argument("input", type=str)
@tol_opt
@out_opt
def predicates_cmd(input, tol, output):
    """Eigenvalue-separation and nonresonance predicates for a matrix file."""
    def op():
        doc = _load(input)
        M = validate_schema(doc)
        if not isinstance(M, np.ndarray):
            raise SchemaViolation("/type", "expected a 'matrix' document")
        t = _tolerance(tol, 1e-9)
        pm = projective.property_Pm(M, tol=t)
        nr = projective.nonresonant(M, tol=t)
        status = "ok" if (pm and nr) else "fail"
        return status, {"property_Pm": pm, "nonresonant": nr}, ()
    _run(op, output)


@main.command("pullback")
@click.argument("input", type=str)
@click.option("--var", default=0, type=int, help="chart variable index")
@click.option("--nu", required=True, type=int, help="covering degree")
@out_opt
def pullback_cmd(input, var, nu, output):
    """Pull back along x_var -> x_var^nu."""
    def op():
        conn = _parse_as(input, FuchsianSystem, LocalModel, LogConnection)
        out = connections.pullback_power(conn, var, nu)
        return "ok", system_to_json(out), ()
    _run(op, output)


@main.command("normalize")
@click.argument("input", type=str)
@click.option("--order", default=10, type=int, help="truncation order")
@out_opt
def normalize_cmd(input, order, output):
    """Poincare gauge series reducing A dx/x + tau(x) dx to its local model."""
    def op():
        conn = _parse_as(input, FuchsianSystem, LocalModel, LogConnection)
        gauge = connections.poincare_normalize(conn, order=order)
        return "ok", system_to_json(gauge), ()
    _run(op, output)


@main.command("realize-local")
@click.argument("input", type=str)
@out_opt
def realize_local(input, output):
    """Local model realizing a commuting presentation's generators."""
    def op():
        pres = _parse_as(input, ProjectivePresentation)
        model = lifting.local_realize(pres.generator_list())
        return "ok", system_to_json(model), ()
    _run(op, output)


@main.command("realize-fuchsian")
@click.argument("input", type=str)
@out_opt
def realize_fuchsian_cmd(input, output):
    """Fuchsian system on the sphere realizing an abelian presentation."""
    def op():
        pres = _parse_as(input, ProjectivePresentation)
        system = lifting.realize_fuchsian(pres)
        return "ok", system_to_json(system), ()
    _run(op, output)


@main.command("lift-rep")
@click.argument("input", type=str)
@click.option("--nu", default=1, type=int, help="raise generators to this power first")
@out_opt
def lift_rep(input, nu, output):
    """Lift a presentation to SL and report obstruction scalars."""
    def op():
        pres = _parse_as(input, ProjectivePresentation)
        if pres.relations:
            report = lifting.verify_lift_after_power(pres, nu)
        else:
            tuple_src = pres.powered(nu) if nu > 1 else pres
            report = lifting.lift_commuting(tuple_src.generator_list())
        status = "ok" if report.success else "fail"
        return status, system_to_json(report), ()
    _run(op, output)


@main.command("exponent")
@click.argument("input", type=str)
@out_opt
def exponent_cmd(input, output):
    """Lifting exponent: lcm of orders of finite-order eigenvalue ratios."""
    def op():
        pres = _parse_as(input, ProjectivePresentation)
        nu = lifting.lifting_exponent([g.canonical for g in pres.generator_list()])
        return "ok", {"nu": nu}, ()
    _run(op, output)


if __name__ == "__main__":
    main()
