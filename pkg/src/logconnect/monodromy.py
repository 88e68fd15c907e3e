"""Numerical parallel transport and monodromy of linear and projective systems.

Paths are piecewise lines and circular arcs in one chart variable; transport
solves dY = Omega(x) dx Y along the path with an adaptive embedded
Runge-Kutta pair (DOP853).  Under path concatenation the loop -> matrix map
is an antirepresentation: T(alpha then beta) = T(beta) @ T(alpha).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .connections import FuchsianSystem, LocalModel, _as_connection
from .errors import (
    DegenerateConfiguration,
    PoleProximity,
    ToleranceNotMet,
)
from .projective import ProjectiveClass, proj_equal, reconstruct, RiccatiSystem
from .ratfunc import RationalFunction

__all__ = [
    "LineSegment",
    "ArcSegment",
    "LoopPath",
    "MonodromyRep",
    "standard_loops",
    "transport",
    "monodromy_rep",
    "projective_monodromy",
    "relation_check",
]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class LineSegment:
    start: complex
    end: complex

    def point(self, t):
        return self.start + t * (self.end - self.start)

    def velocity(self, t):
        return self.end - self.start


@dataclass(frozen=True)
class ArcSegment:
    center: complex
    radius: float
    from_angle: float
    to_angle: float

    def point(self, t):
        a = self.from_angle + t * (self.to_angle - self.from_angle)
        return self.center + self.radius * np.exp(1j * a)

    def velocity(self, t):
        a = self.from_angle + t * (self.to_angle - self.from_angle)
        return 1j * (self.to_angle - self.from_angle) * self.radius * np.exp(1j * a)


class LoopPath:
    """Closed piecewise path in one chart variable, avoiding the polar divisor."""

    def __init__(self, segments, basepoint=None):
        self.segments = tuple(segments)
        if not self.segments:
            raise ValueError("a loop needs at least one segment")
        start = self.segments[0].point(0.0)
        end = self.segments[-1].point(1.0)
        if abs(start - end) > 1e-12:
            raise ValueError("path is not closed")
        for a, b in zip(self.segments, self.segments[1:]):
            if abs(a.point(1.0) - b.point(0.0)) > 1e-12:
                raise ValueError("consecutive segments do not join")
        self.basepoint = complex(basepoint) if basepoint is not None else complex(start)

    def samples(self, per_segment: int = 64):
        ts = np.linspace(0.0, 1.0, per_segment)
        return np.concatenate([[s.point(t) for t in ts] for s in self.segments])

    def clearance(self, poles) -> float:
        pts = self.samples()
        return min(
            float(np.min(np.abs(pts - complex(p)))) for p in poles
        ) if len(list(poles)) else np.inf

    def reversed(self) -> "LoopPath":
        rev = []
        for s in self.segments[::-1]:
            if isinstance(s, LineSegment):
                rev.append(LineSegment(s.end, s.start))
            else:
                rev.append(ArcSegment(s.center, s.radius, s.to_angle, s.from_angle))
        return LoopPath(rev, basepoint=self.basepoint)

    def refined(self, parts: int = 2) -> "LoopPath":
        """Split every segment into ``parts`` pieces (same trace, new discretization)."""
        out = []
        for s in self.segments:
            cuts = np.linspace(0.0, 1.0, parts + 1)
            for a, b in zip(cuts, cuts[1:]):
                if isinstance(s, LineSegment):
                    out.append(LineSegment(s.point(a), s.point(b)))
                else:
                    a0 = s.from_angle + a * (s.to_angle - s.from_angle)
                    a1 = s.from_angle + b * (s.to_angle - s.from_angle)
                    out.append(ArcSegment(s.center, s.radius, a0, a1))
        return LoopPath(out, basepoint=self.basepoint)


@dataclass(frozen=True)
class MonodromyRep:
    """Loop-indexed transport matrices (or projective classes).

    ``composition_convention`` records that concatenation alpha then beta
    maps to M(beta) @ M(alpha).
    """

    basepoint: complex
    loops: tuple
    names: tuple
    matrices: tuple
    composition_convention: str = "antirepresentation"
    infinity: object = None


def circle_loop(center, radius, basepoint=None) -> LoopPath:
    """Counterclockwise circle; starts at center + radius."""
    return LoopPath([ArcSegment(complex(center), float(radius), 0.0, TWO_PI)],
                    basepoint=basepoint)


def standard_loops(F: FuchsianSystem, basepoint=None, clearance=None):
    """One lasso per pole: spoke toward the pole, ccw circle, spoke back.

    Corridors are straight; a (near-)collinear pole/basepoint configuration is
    rejected rather than silently producing crossing corridors.
    """
    poles = [complex(p) for p in F.poles]
    defaulted = basepoint is None
    if defaulted:
        basepoint = 1.0 + max(abs(p) for p in poles)
    basepoint = complex(basepoint)
    if any(abs(basepoint - p) < 1e-9 for p in poles):
        raise ValueError("basepoint must be distinct from all poles")

    def corridor_degenerate(bp):
        for i, p in enumerate(poles):
            for j, q in enumerate(poles):
                if i == j:
                    continue
                d = p - bp
                t = np.real(np.conj(d) * (q - bp)) / abs(d) ** 2
                if 0.0 < t < 1.0 and abs((q - bp) - t * d) < 1e-12:
                    return True
        return False

    if corridor_degenerate(basepoint):
        if not defaulted:
            raise DegenerateConfiguration(
                "pole lies on another corridor; move the basepoint"
            )
        # deterministic perturbation of the default basepoint off the axis
        for k in range(1, 32):
            cand = basepoint * np.exp(0.07j * k)
            if not corridor_degenerate(cand) and all(
                abs(cand - p) > 1e-9 for p in poles
            ):
                basepoint = cand
                break
        else:  # pragma: no cover - 31 rotations always suffice for finitely many poles
            raise DegenerateConfiguration("could not find a non-degenerate basepoint")
    loops = []
    for i, p in enumerate(poles):
        nearest = min(
            [abs(p - q) for j, q in enumerate(poles) if j != i]
            + [abs(p - basepoint)]
        )
        r = nearest / 3.0
        if clearance is not None:
            r = min(r, clearance)
        direction = (p - basepoint) / abs(p - basepoint)
        entry = p - r * direction
        ang = float(np.angle(entry - p))
        loops.append(
            LoopPath(
                [
                    LineSegment(basepoint, entry),
                    ArcSegment(p, r, ang, ang + TWO_PI),
                    LineSegment(entry, basepoint),
                ],
                basepoint=basepoint,
            )
        )
    return loops


def _poles_of(C):
    if isinstance(C, FuchsianSystem):
        return [complex(p) for p in C.poles]
    conn = _as_connection(C)
    if conn.n != 1:
        return []
    return [complex(c) for _, c in conn.divisor]


def _omega_callable(C):
    """x -> Omega(x) for a one-variable system (fast path for Fuchsian data)."""
    if isinstance(C, FuchsianSystem):
        res = [C.residue_array(i) for i in range(C.k)]
        poles = [complex(p) for p in C.poles]

        def fn(x):
            return sum(A / (x - p) for A, p in zip(res, poles))

        return fn
    if isinstance(C, LocalModel):
        if C.k != 1:
            raise ValueError(
                "transport of a local model needs a one-dimensional slice; "
                "use a single-branch slice"
            )
        A = C.residue_array(0)
        return lambda x: A / x
    conn = _as_connection(C)
    if conn.n != 1:
        raise ValueError("transport is defined for one-variable charts")
    f = conn.component_callable(0)
    return f


def transport(C, path: LoopPath, tol: float = 1e-10) -> np.ndarray:
    """Fundamental-solution transport matrix along a path: Y(end) = T Y(start)."""
    conn_poles = _poles_of(C)
    if isinstance(C, LocalModel):
        conn_poles = [0.0]
    if conn_poles:
        clr = path.clearance(conn_poles)
        if clr < 1e-12:
            raise PoleProximity("path passes within 1e-12 of the polar divisor")
    omega = _omega_callable(C)
    m = C.m
    T = np.eye(m, dtype=complex)
    for seg in path.segments:
        def rhs(t, y):
            x = seg.point(t)
            Y = y.reshape(m, m)
            return (omega(x) @ Y * seg.velocity(t)).ravel()

        sol = solve_ivp(
            rhs, (0.0, 1.0), T.ravel(),
            method="DOP853", rtol=tol, atol=tol * 1e-2, dense_output=False,
        )
        if not sol.success:
            raise ToleranceNotMet(f"integrator failed on a segment: {sol.message}")
        T = sol.y[:, -1].reshape(m, m)
    return T


def monodromy_rep(C, loops, tol: float = 1e-10) -> MonodromyRep:
    """Transport each loop; for Fuchsian systems also report the implied
    infinity matrix (inverse of the ordered product in the concatenation
    convention)."""
    loops = list(loops)
    mats = [transport(C, lp, tol) for lp in loops]
    infinity = None
    if isinstance(C, FuchsianSystem):
        prod = np.eye(C.m, dtype=complex)
        for M in mats:
            prod = M @ prod
        infinity = np.linalg.inv(prod)
    bp = loops[0].basepoint if loops else 0.0
    names = tuple(f"p{i}" for i in range(len(loops)))
    return MonodromyRep(basepoint=bp, loops=tuple(loops), names=names,
                        matrices=tuple(mats), infinity=infinity)


def projective_monodromy(C, loops, tol: float = 1e-10) -> MonodromyRep:
    """Projective classes of the linear transport; trace-choice independence is
    asserted when the input is a Riccati system."""
    if isinstance(C, RiccatiSystem):
        lifted0 = reconstruct(C, None)
        # a second, distinct trace: m * dx in the first chart variable
        other = tuple(
            RationalFunction.constant(C.m if v == 0 else 0, C.gens)
            for v in range(C.n)
        )
        lifted1 = reconstruct(C, other)
        reps0 = [transport(lifted0, lp, tol) for lp in loops]
        reps1 = [transport(lifted1, lp, tol) for lp in loops]
        for M0, M1 in zip(reps0, reps1):
            if not proj_equal(M0, M1, 1e-7):
                raise ToleranceNotMet(
                    "projective transport depends on the chosen trace beyond tolerance"
                )
        mats = reps0
        base = lifted0
    else:
        base = C
        mats = [transport(C, lp, tol) for lp in loops]
    classes = tuple(ProjectiveClass(M) for M in mats)
    infinity = None
    if isinstance(base, FuchsianSystem):
        prod = np.eye(base.m, dtype=complex)
        for M in mats:
            prod = M @ prod
        infinity = ProjectiveClass(np.linalg.inv(prod))
    bp = loops[0].basepoint if loops else 0.0
    names = tuple(f"p{i}" for i in range(len(loops)))
    return MonodromyRep(basepoint=bp, loops=tuple(loops), names=names,
                        matrices=classes, infinity=infinity)


def relation_check(rep: MonodromyRep, tol: float = 1e-7) -> bool:
    """Sphere relation: ordered loop product times the infinity matrix is trivial."""
    mats = rep.matrices
    if not mats:
        return True
    projective = isinstance(mats[0], ProjectiveClass)
    m = mats[0].m if projective else mats[0].shape[0]
    prod = np.eye(m, dtype=complex)
    for M in mats:
        A = M.canonical if projective else M
        prod = A @ prod
    inf = rep.infinity
    if inf is None:
        total = prod
    else:
        A = inf.canonical if projective else inf
        total = A @ prod
    if projective:
        return proj_equal(total, np.eye(m), tol)
    return bool(np.linalg.norm(total - np.eye(m)) < tol * max(np.linalg.norm(total), 1.0))
