"""JSON interchange for systems, Riccati data, loops and presentations.

Complex scalars serialize as two-element arrays [re, im]; matrices as
row-major nested arrays.  On input, each part of a scalar may also be a
string fraction like "1/3" to request exact coefficients; output always
emits numbers.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import sympy as sp
from sympy.polys.domains import QQ_I

from .connections import FuchsianSystem, LocalModel, LogConnection, GaugeSeries
from .errors import SchemaViolation
from .lifting import LiftReport, ProjectivePresentation
from .monodromy import ArcSegment, LineSegment, LoopPath
from .projective import ProjectiveClass, RiccatiSystem
from .ratfunc import RationalFunction

__all__ = [
    "parse_scalar",
    "scalar_to_json",
    "matrix_to_json",
    "validate_schema",
    "system_to_json",
    "parse_loops",
]


# -- scalars and matrices ----------------------------------------------


def _part(value, pointer):
    if isinstance(value, bool):
        raise SchemaViolation(pointer, "expected a number or fraction string")
    if isinstance(value, (int, float)):
        return value, isinstance(value, int) or float(value).is_integer()
    if isinstance(value, str):
        try:
            return Fraction(value), True
        except ValueError as exc:
            raise SchemaViolation(pointer, f"bad fraction literal {value!r}") from exc
    raise SchemaViolation(pointer, "expected a number or fraction string")


def parse_scalar(value, pointer=""):
    """[re, im] (or bare number) -> exact sympy scalar plus exactness flag."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        re, exact = _part(value, pointer)
        return sp.Rational(Fraction(re)), exact
    if not isinstance(value, list) or len(value) != 2:
        raise SchemaViolation(pointer, "expected [re, im]")
    re, ex1 = _part(value[0], pointer + "/0")
    im, ex2 = _part(value[1], pointer + "/1")
    return sp.Rational(Fraction(re)) + sp.Rational(Fraction(im)) * sp.I, ex1 and ex2


def scalar_to_json(z):
    c = complex(z)
    return [c.real, c.imag]


def parse_matrix(doc, m, pointer):
    if not isinstance(doc, list) or len(doc) != m:
        raise SchemaViolation(pointer, f"expected {m} rows")
    out = []
    exact = True
    for i, row in enumerate(doc):
        if not isinstance(row, list) or len(row) != m:
            raise SchemaViolation(f"{pointer}/{i}", f"expected {m} entries")
        r = []
        for j, e in enumerate(row):
            v, ex = parse_scalar(e, f"{pointer}/{i}/{j}")
            exact = exact and ex
            r.append(v if ex else complex(v))
        out.append(r)
    return out, exact


def matrix_to_json(M):
    A = np.asarray(M, dtype=complex)
    return [[[float(e.real), float(e.imag)] for e in row] for row in A]


# -- rational functions ------------------------------------------------


def _poly_to_json(poly: sp.Poly):
    out = {}
    for monom, coeff in poly.terms():
        key = ",".join(str(e) for e in monom)
        out[key] = scalar_to_json(coeff.as_expr() if hasattr(coeff, "as_expr") else coeff)
    return dict(sorted(out.items()))


def ratfunc_to_json(f: RationalFunction):
    return {"num": _poly_to_json(f.num), "den": _poly_to_json(f.den)}


def parse_ratfunc(doc, gens, pointer):
    if not isinstance(doc, dict) or "num" not in doc or "den" not in doc:
        raise SchemaViolation(pointer, "expected {num, den} coefficient maps")

    def build(part, ptr):
        expr = sp.Integer(0)
        entries = doc[part]
        if not isinstance(entries, dict):
            raise SchemaViolation(ptr, "expected a monomial -> coefficient map")
        exact = True
        for key, val in entries.items():
            try:
                exps = [int(e) for e in key.split(",")]
            except ValueError as exc:
                raise SchemaViolation(f"{ptr}/{key}", "bad monomial key") from exc
            if len(exps) != len(gens):
                raise SchemaViolation(f"{ptr}/{key}", "monomial arity mismatch")
            coeff, ex = parse_scalar(val, f"{ptr}/{key}")
            exact = exact and ex
            term = coeff
            for g, e in zip(gens, exps):
                term *= g ** e
            expr += term
        return expr, exact

    num, ex1 = build("num", pointer + "/num")
    den, ex2 = build("den", pointer + "/den")
    if den == 0:
        raise SchemaViolation(pointer + "/den", "denominator is identically zero")
    return RationalFunction(
        sp.Poly(num, *gens, domain=QQ_I),
        sp.Poly(den, *gens, domain=QQ_I),
        exact=ex1 and ex2,
    )


# -- systems -----------------------------------------------------------


def _require(doc, key, pointer, kind=None):
    if key not in doc:
        raise SchemaViolation(f"{pointer}/{key}", "missing required field")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaViolation(f"{pointer}/{key}", f"expected {kind.__name__}")
    return val


def _parse_fuchsian(doc):
    m = _require(doc, "rank", "", int)
    poles_doc = _require(doc, "poles", "", list)
    res_doc = _require(doc, "residues", "", list)
    if len(res_doc) != len(poles_doc):
        raise SchemaViolation("/residues", "one residue per pole required")
    poles = []
    for i, p in enumerate(poles_doc):
        v, _ = parse_scalar(p, f"/poles/{i}")
        poles.append(v)
    for i, a in enumerate(poles):
        for j, b in enumerate(poles[:i]):
            if abs(complex(a) - complex(b)) <= 1e-9:
                raise SchemaViolation(
                    f"/poles/{i}", "poles must be pairwise distinct (separation > 1e-9)"
                )
    residues = []
    for i, R in enumerate(res_doc):
        M, exact = parse_matrix(R, m, f"/residues/{i}")
        residues.append(M)
    return FuchsianSystem(m, poles, residues)


def _parse_local_model(doc):
    m = _require(doc, "rank", "", int)
    res_doc = _require(doc, "residues", "", list)
    residues = [parse_matrix(R, m, f"/residues/{i}")[0] for i, R in enumerate(res_doc)]
    n = doc.get("vars", len(residues))
    if not isinstance(n, int) or n < len(residues):
        raise SchemaViolation("/vars", "chart dimension must be an int >= branch count")
    return LocalModel(m, residues, n=n)


def _parse_gens_field(doc, pointer):
    names = _require(doc, "vars", pointer, list)
    if not names or not all(isinstance(s, str) for s in names):
        raise SchemaViolation(pointer + "/vars", "expected a nonempty list of names")
    return sp.symbols(names) if len(names) > 1 else (sp.Symbol(names[0]),)


def _parse_divisor(doc, nvars, pointer):
    out = []
    for i, d in enumerate(_require(doc, "divisor", pointer, list)):
        if not isinstance(d, dict):
            raise SchemaViolation(f"{pointer}/divisor/{i}", "expected {var, value}")
        v = _require(d, "var", f"{pointer}/divisor/{i}", int)
        if not 0 <= v < nvars:
            raise SchemaViolation(f"{pointer}/divisor/{i}/var", "variable index out of range")
        val, _ = parse_scalar(_require(d, "value", f"{pointer}/divisor/{i}"),
                              f"{pointer}/divisor/{i}/value")
        out.append((v, val))
    return tuple(out)


def _parse_log_connection(doc):
    m = _require(doc, "rank", "", int)
    gens = _parse_gens_field(doc, "")
    divisor = _parse_divisor(doc, len(gens), "")
    comps_doc = _require(doc, "components", "", list)
    if len(comps_doc) != len(gens):
        raise SchemaViolation("/components", "one matrix component per variable required")
    comps = []
    exact = True
    for v, comp in enumerate(comps_doc):
        if not isinstance(comp, list) or len(comp) != m:
            raise SchemaViolation(f"/components/{v}", f"expected {m} rows")
        rows = []
        for i, row in enumerate(comp):
            if not isinstance(row, list) or len(row) != m:
                raise SchemaViolation(f"/components/{v}/{i}", f"expected {m} entries")
            rows.append(tuple(
                parse_ratfunc(e, gens, f"/components/{v}/{i}/{j}")
                for j, e in enumerate(row)
            ))
        comps.append(tuple(rows))
    exact = all(f.exact for comp in comps for row in comp for f in row)
    return LogConnection(m, gens, divisor, tuple(comps), exact=exact)


def _parse_oneform(doc, gens, pointer):
    if not isinstance(doc, list) or len(doc) != len(gens):
        raise SchemaViolation(pointer, "expected one rational function per variable")
    return tuple(parse_ratfunc(e, gens, f"{pointer}/{i}") for i, e in enumerate(doc))


def _parse_riccati(doc):
    m = _require(doc, "rank", "", int)
    gens = _parse_gens_field(doc, "")
    divisor = _parse_divisor(doc, len(gens), "") if "divisor" in doc else ()
    b = [_parse_oneform(e, gens, f"/b/{i}")
         for i, e in enumerate(_require(doc, "b", "", list))]
    delta = [_parse_oneform(e, gens, f"/delta/{i}")
             for i, e in enumerate(_require(doc, "delta", "", list))]
    c = [_parse_oneform(e, gens, f"/c/{i}")
         for i, e in enumerate(_require(doc, "c", "", list))]
    offdiag = {}
    for key, val in doc.get("offdiag", {}).items():
        try:
            i, k = (int(t) for t in key.split(","))
        except ValueError as exc:
            raise SchemaViolation(f"/offdiag/{key}", "bad index pair") from exc
        offdiag[(i, k)] = _parse_oneform(val, gens, f"/offdiag/{key}")
    exact = all(
        f.exact for group in (b, delta, c) for form in group for f in form
    ) and all(f.exact for form in offdiag.values() for f in form)
    return RiccatiSystem(m, gens, divisor, b, delta, offdiag, c, exact=exact)


def _parse_presentation(doc):
    m = _require(doc, "rank", "", int)
    gens_doc = _require(doc, "generators", "", dict)
    generators = {}
    for name, M in gens_doc.items():
        mat, _ = parse_matrix(M, m, f"/generators/{name}")
        generators[name] = np.array([[complex(e) for e in row] for row in mat])
    relations = doc.get("relations", [])
    if not isinstance(relations, list):
        raise SchemaViolation("/relations", "expected a list of words")
    for i, word in enumerate(relations):
        if not isinstance(word, list) or not all(isinstance(t, str) for t in word):
            raise SchemaViolation(f"/relations/{i}", "expected a list of generator tokens")
        for t in word:
            base = t[:-3] if t.endswith("^-1") else t
            if base not in generators:
                raise SchemaViolation(f"/relations/{i}", f"unknown generator {base!r}")
    poles = None
    if "poles" in doc:
        poles = [parse_scalar(p, f"/poles/{i}")[0] for i, p in enumerate(doc["poles"])]
    try:
        return ProjectivePresentation(m, generators, relations, poles=poles)
    except ValueError as exc:
        raise SchemaViolation("/relations", str(exc)) from exc


def _parse_matrix_doc(doc):
    m = _require(doc, "rank", "", int)
    mat, exact = parse_matrix(_require(doc, "matrix", "", list), m, "/matrix")
    return np.array([[complex(e) for e in row] for row in mat])


PARSERS = {
    "fuchsian": _parse_fuchsian,
    "local_model": _parse_local_model,
    "log_connection": _parse_log_connection,
    "riccati": _parse_riccati,
    "presentation": _parse_presentation,
    "matrix": _parse_matrix_doc,
}


def validate_schema(doc):
    """Parse a JSON document into a typed object or raise SchemaViolation."""
    if not isinstance(doc, dict):
        raise SchemaViolation("", "expected a JSON object")
    kind = doc.get("type")
    if kind not in PARSERS:
        raise SchemaViolation(
            "/type", f"unknown or missing type; expected one of {sorted(PARSERS)}"
        )
    return PARSERS[kind](doc)


# -- loops -------------------------------------------------------------


def parse_loops(doc, pointer="/loops"):
    """Parse a list of loop documents into LoopPath objects."""
    if not isinstance(doc, list):
        raise SchemaViolation(pointer, "expected a list of loops")
    loops = []
    for i, entry in enumerate(doc):
        ptr = f"{pointer}/{i}"
        if not isinstance(entry, dict):
            raise SchemaViolation(ptr, "expected {basepoint, segments}")
        bp, _ = parse_scalar(_require(entry, "basepoint", ptr), ptr + "/basepoint")
        current = complex(bp)
        segs = []
        for j, s in enumerate(_require(entry, "segments", ptr, list)):
            sptr = f"{ptr}/segments/{j}"
            kind = _require(s, "kind", sptr, str)
            if kind == "line":
                to, _ = parse_scalar(_require(s, "to", sptr), sptr + "/to")
                segs.append(LineSegment(current, complex(to)))
                current = complex(to)
            elif kind == "arc":
                center, _ = parse_scalar(_require(s, "center", sptr), sptr + "/center")
                radius = _require(s, "radius", sptr, (int, float))
                a0 = _require(s, "from_angle", sptr, (int, float))
                a1 = _require(s, "to_angle", sptr, (int, float))
                seg = ArcSegment(complex(center), float(radius), float(a0), float(a1))
                if abs(seg.point(0.0) - current) > 1e-9:
                    raise SchemaViolation(sptr, "arc does not start at the current point")
                segs.append(seg)
                current = seg.point(1.0)
            else:
                raise SchemaViolation(sptr + "/kind", "expected 'line' or 'arc'")
        loops.append(LoopPath(segs, basepoint=complex(bp)))
    return loops


# -- emission ----------------------------------------------------------


def _oneform_to_json(form):
    return [ratfunc_to_json(f) for f in form]


def system_to_json(obj):
    """Serialize any library object to its JSON document."""
    if isinstance(obj, FuchsianSystem):
        return {
            "type": "fuchsian",
            "rank": obj.m,
            "poles": [scalar_to_json(p) for p in obj.poles],
            "residues": [matrix_to_json(obj.residue_array(i)) for i in range(obj.k)],
        }
    if isinstance(obj, LocalModel):
        return {
            "type": "local_model",
            "rank": obj.m,
            "vars": obj.n,
            "residues": [matrix_to_json(obj.residue_array(i)) for i in range(obj.k)],
        }
    if isinstance(obj, LogConnection):
        return {
            "type": "log_connection",
            "rank": obj.m,
            "vars": [g.name for g in obj.gens],
            "divisor": [
                {"var": v, "value": scalar_to_json(c)} for v, c in obj.divisor
            ],
            "components": [
                [[ratfunc_to_json(obj.entry(v, i, j)) for j in range(obj.m)]
                 for i in range(obj.m)]
                for v in range(obj.n)
            ],
        }
    if isinstance(obj, RiccatiSystem):
        return {
            "type": "riccati",
            "rank": obj.m,
            "vars": [g.name for g in obj.gens],
            "divisor": [
                {"var": v, "value": scalar_to_json(c)} for v, c in obj.divisor
            ],
            "b": [_oneform_to_json(f) for f in obj.b],
            "delta": [_oneform_to_json(f) for f in obj.delta],
            "offdiag": {
                f"{i},{k}": _oneform_to_json(f)
                for (i, k), f in sorted(obj.offdiag.items())
            },
            "c": [_oneform_to_json(f) for f in obj.c],
        }
    if isinstance(obj, GaugeSeries):
        return {
            "type": "gauge_series",
            "order": obj.order,
            "coefficients": [matrix_to_json(G) for G in obj.coefficients],
        }
    if isinstance(obj, LiftReport):
        return {
            "type": "lift_report",
            "lifts": [matrix_to_json(M) for M in obj.lifts],
            "obstruction_scalars": [scalar_to_json(s) for s in obj.obstruction_scalars],
            "success": obj.success,
        }
    if isinstance(obj, ProjectiveClass):
        return matrix_to_json(obj.canonical)
    if isinstance(obj, np.ndarray):
        return matrix_to_json(obj)
    raise TypeError(f"no JSON form for {type(obj).__name__}")
