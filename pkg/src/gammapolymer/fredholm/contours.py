"""Piecewise contours and their Gauss-Legendre rules.

A contour is an ordered tuple of smooth pieces, each a map ``[0, 1] -> C``
with an exact derivative.  Every piece carries panel breakpoints in its
parameter; the rule places ``order`` Gauss-Legendre nodes on each panel.
Unbounded prototypes (vertical lines, wedges) are truncated at a finite
radius and graded so that panels grow geometrically away from the region
where integrands live.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from ..specfn import DomainError

TWO_PI_I = 2j * math.pi


@lru_cache(maxsize=64)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes on a contour with complex weights ``z'(t) * gauss weight``.

    ``sum(weights * f(nodes))`` approximates ``int f(z) dz``.
    """

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return self.nodes.size

    def integrate(self, values) -> complex:
        return complex(np.sum(self.weights * values))

    def __add__(self, other: "QuadratureRule") -> "QuadratureRule":
        return QuadratureRule(np.concatenate([self.nodes, other.nodes]),
                              np.concatenate([self.weights, other.weights]))


@dataclass(frozen=True)
class Piece:
    z: Callable[[np.ndarray], np.ndarray]
    dz: Callable[[np.ndarray], np.ndarray]
    breaks: tuple[float, ...] = (0.0, 1.0)

    def start(self) -> complex:
        return complex(self.z(np.array([0.0]))[0])

    def end(self) -> complex:
        return complex(self.z(np.array([1.0]))[0])

    def rule(self, order: int) -> QuadratureRule:
        x, w = _gauss_legendre(order)
        b = np.asarray(self.breaks)
        half = 0.5 * np.diff(b)
        mid = 0.5 * (b[:-1] + b[1:])
        t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        gw = (half[:, None] * w[None, :]).ravel()
        return QuadratureRule(self.z(t), self.dz(t) * gw)


@dataclass(frozen=True)
class Contour:
    pieces: tuple[Piece, ...]
    closed: bool
    truncation: float | None = None
    kind: str = field(default="", compare=False)

    def rule(self, order: int) -> QuadratureRule:
        if order < 4:
            raise DomainError("quadrature order must be >= 4")
        rules = [p.rule(order) for p in self.pieces]
        out = rules[0]
        for r in rules[1:]:
            out = out + r
        return out

    def gaps(self) -> float:
        """Largest jump between consecutive pieces (0 for a well-formed contour)."""
        ends = [p.end() for p in self.pieces]
        starts = [p.start() for p in self.pieces]
        pairs = list(zip(ends[:-1], starts[1:]))
        if self.closed:
            pairs.append((ends[-1], starts[0]))
        return max((abs(a - b) for a, b in pairs), default=0.0)

    def sample(self, per_piece: int = 200) -> np.ndarray:
        t = np.linspace(0.0, 1.0, per_piece)
        return np.concatenate([p.z(t) for p in self.pieces])


def segment(z0: complex, z1: complex, breaks=(0.0, 1.0)) -> Piece:
    z0, z1 = complex(z0), complex(z1)
    d = z1 - z0
    return Piece(lambda t: z0 + d * t, lambda t: np.full(np.shape(t), d, dtype=complex), tuple(breaks))


def arc(center: complex, radius: float, theta0: float, theta1: float, panels: int = 1) -> Piece:
    center = complex(center)
    span = theta1 - theta0
    return Piece(
        lambda t: center + radius * np.exp(1j * (theta0 + span * t)),
        lambda t: 1j * span * radius * np.exp(1j * (theta0 + span * t)),
        tuple(np.linspace(0.0, 1.0, panels + 1)),
    )


def graded_breaks(length: float, first: float, outward: bool = True) -> tuple[float, ...]:
    """Panel edges in ``[0, 1]`` for a ray of ``length``; sizes double away from 0.

    With ``outward=False`` the grading is mirrored so small panels sit at ``t = 1``.
    """
    if length <= first:
        edges = [0.0, 1.0]
    else:
        edges = [0.0]
        h = first
        pos = 0.0
        while pos + h < length:
            pos += h
            edges.append(pos / length)
            h *= 2.0
        edges.append(1.0)
    edges = np.asarray(edges)
    if not outward:
        edges = 1.0 - edges[::-1]
    return tuple(edges)


def ray(origin: complex, angle: float, length: float, first: float, outward: bool = True) -> Piece:
    """Straight ray from ``origin`` (or towards it if ``outward`` is False)."""
    origin = complex(origin)
    u = complex(np.exp(1j * angle)) * length
    if outward:
        return segment(origin, origin + u, graded_breaks(length, first, True))
    return segment(origin + u, origin, graded_breaks(length, first, False))


def circle(delta: float, center: complex = 0.0, panels: int = 4) -> Contour:
    """Positively oriented circle ``|z - center| = delta``."""
    if not delta > 0.0:
        raise DomainError("circle radius must be > 0")
    return Contour((arc(center, delta, -math.pi, math.pi, panels),), closed=True, kind="circle")


def vertical_line(x: float, T: float, first: float = 0.25, center_y: float = 0.0) -> Contour:
    """``x + i[-T, T]`` oriented upwards, graded away from ``x + i center_y``."""
    if not T > 0.0:
        raise DomainError("truncation must be > 0")
    c0 = complex(x, center_y)
    lower = segment(complex(x, center_y - T), c0, graded_breaks(T, first, outward=False))
    upper = segment(c0, complex(x, center_y + T), graded_breaks(T, first, outward=True))
    return Contour((lower, upper), closed=False, truncation=T, kind="line")


def wedge(vertex: complex, angle: float, M: float, first: float | None = None) -> Contour:
    """Two rays from ``vertex`` at angles ``-angle`` and ``+angle``, oriented upwards.

    The lower ray runs inward from ``vertex + M e^{-i angle}``; the upper ray
    runs outward to ``vertex + M e^{i angle}``.  For ``angle`` in
    ``(pi/2, pi)`` the arms open to the left.
    """
    if not M > 0.0:
        raise DomainError("truncation radius must be > 0")
    if first is None:
        first = M / 2.0
    lower = ray(vertex, -angle, M, first, outward=False)
    upper = ray(vertex, angle, M, first, outward=True)
    return Contour((lower, upper), closed=False, truncation=M, kind="wedge")


def wedge_v(M: float) -> Contour:
    """Truncated ``e^{2 pi i/3} R+ U e^{-2 pi i/3} R+``, upwards.

    Upwards through the vertex is the orientation inherited from the
    positively oriented closed contour the wedge replaces.
    """
    c = wedge(0.0, 2.0 * math.pi / 3.0, M)
    return Contour(c.pieces, closed=False, truncation=M, kind="wedge_v")


def wedge_w(M: float, offset: float = 1.0) -> Contour:
    """Truncated ``offset + (e^{i pi/3} R+ U e^{-i pi/3} R+)``, upwards."""
    if not offset > 0.0:
        raise DomainError("wedge offset must be > 0")
    c = wedge(complex(offset), math.pi / 3.0, M)
    return Contour(c.pieces, closed=False, truncation=M, kind="wedge_w")


def reverse(contour: Contour, kind: str | None = None) -> Contour:
    pieces = []
    for p in reversed(contour.pieces):
        z, dz = p.z, p.dz
        pieces.append(Piece(lambda t, z=z: z(1.0 - t), lambda t, dz=dz: -dz(1.0 - t),
                            tuple(1.0 - np.asarray(p.breaks)[::-1])))
    return Contour(tuple(pieces), contour.closed, contour.truncation, kind or contour.kind)


def polygon(points, closed: bool = True, panels=None, kind: str = "polygon") -> Contour:
    """Polyline through ``points``; ``panels[k]`` panel edges on edge ``k``."""
    pts = [complex(p) for p in points]
    if closed:
        pts = pts + [pts[0]]
    pieces = []
    for k, (a, b) in enumerate(zip(pts[:-1], pts[1:])):
        br = (0.0, 1.0) if panels is None else panels[k]
        pieces.append(segment(a, b, br))
    return Contour(tuple(pieces), closed=closed, kind=kind)


# Steepest-descent contours around the critical point ---------------------------------


def cv_descent(z_star: float, c: float, gamma: float) -> Contour:
    """Closed contour through ``z_star`` with legs at ``+-2 pi/3``.

    For ``c <= 5/2`` the legs have length ``2 gamma/(c-1)`` and are joined to
    the real point ``-2 gamma/(c-1)`` (a kite).  For ``c > 5/2`` the legs have
    length ``6 gamma/(5(sqrt c - 1))`` and are joined by the arc of the circle
    about ``z_star`` through the leg ends.  Positively oriented.
    """
    if not c > 1.0 or not gamma > 0.0 or not z_star > 0.0:
        raise DomainError("need c > 1, gamma > 0, z_star > 0")
    up = complex(np.exp(2j * math.pi / 3.0))
    if c <= 2.5:
        L = 2.0 * gamma / (c - 1.0)
        pts = [z_star, z_star + L * up, -L, z_star + L * up.conjugate()]
        return polygon(pts, closed=True, kind="cv_descent")
    L = 6.0 * gamma / (5.0 * (math.sqrt(c) - 1.0))
    p_up = z_star + L * up
    p_dn = z_star + L * up.conjugate()
    pieces = (
        segment(z_star, p_up),
        arc(z_star, L, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0),
        segment(p_dn, z_star),
    )
    return Contour(pieces, closed=True, kind="cv_descent")


def cw_descent(z_star: float, gamma: float, n: int, leg: float, T: float) -> Contour:
    """Legs at ``+-pi/3`` from ``z_star + gamma n^{-1/3}``, then vertical lines to ``+-T``."""
    vertex = z_star + gamma * n ** (-1.0 / 3.0)
    return _cw(vertex, leg, T, kind="cw_descent")


def _cw(vertex: float, leg: float, T: float, kind: str) -> Contour:
    if not leg > 0.0:
        raise DomainError("leg length must be > 0")
    e = complex(np.exp(1j * math.pi / 3.0))
    top = vertex + leg * e
    bot = vertex + leg * e.conjugate()
    if T <= top.imag:
        raise DomainError("truncation must exceed the leg height")
    first = leg / 8.0
    pieces = (
        segment(complex(bot.real, -T), bot, graded_breaks(T - top.imag, first, outward=False)),
        segment(bot, vertex, graded_breaks(leg, first, outward=False)),
        segment(vertex, top, graded_breaks(leg, first, outward=True)),
        segment(top, complex(top.real, T), graded_breaks(T - top.imag, first, outward=True)),
    )
    return Contour(pieces, closed=False, truncation=T, kind=kind)


@dataclass(frozen=True)
class PrelimitContours:
    cv: Contour
    cw: Contour
    x_left: float
    w_offset: float


def prelimit_contours(z_star: float, gamma: float, n: int, T: float,
                      leg_v: float | None = None, x_left: float | None = None,
                      leg_w: float | None = None, offset: float | None = None,
                      panels: int = 2) -> PrelimitContours:
    """Admissible steepest-descent pair for the pre-limit kernel.

    ``C^v`` has legs at ``+-2 pi/3`` from ``z_star`` of length ``leg_v`` and
    is closed through the real point ``x_left`` in ``(-1, 0)``; ``C^w`` has
    its vertex at ``z_star + offset`` with legs at ``+-pi/3`` and vertical
    tails.  Defaults keep every sine pole ``w = v + p`` off the region swept
    between these contours and the circle/line pair; see ``admissible``.
    """
    if leg_v is None:
        leg_v = z_star
    if x_left is None:
        x_left = -0.8 * min(gamma, 1.0)
    if leg_w is None:
        leg_w = z_star
    if offset is None:
        offset = min(gamma * n ** (-1.0 / 3.0), 0.5 * (x_left + 1.0 - z_star))
    if not -1.0 < x_left < 0.0:
        raise DomainError("x_left must lie in (-1, 0)")
    if not offset > 0.0:
        raise DomainError("no admissible offset: z_star too far right of x_left + 1")
    up = complex(np.exp(2j * math.pi / 3.0))
    p_up = z_star + leg_v * up
    p_dn = z_star + leg_v * up.conjugate()
    first = leg_v / 8.0
    br_out = graded_breaks(leg_v, first, True)
    br_in = graded_breaks(leg_v, first, False)
    even = tuple(np.linspace(0.0, 1.0, panels + 1))
    cv = polygon([z_star, p_up, x_left, p_dn], closed=True,
                 panels=[br_out, even, even, br_in], kind="cv_prelimit")
    cw = _cw(z_star + offset, leg_w, T, kind="cw_prelimit")
    return PrelimitContours(cv, cw, x_left, offset)


def admissible(cv: Contour, cw: Contour, samples: int = 400) -> bool:
    """True if each ``v`` on ``cv`` lies strictly left of ``cw`` and ``v + 1`` strictly right.

    ``cw`` must be a graph ``x = X(y)`` (monotone in the imaginary part).
    """
    w = cw.sample(samples)
    order = np.argsort(w.imag)
    wy, wx = w.imag[order], w.real[order]
    v = cv.sample(samples)
    X = np.interp(v.imag, wy, wx)
    return bool(np.all(v.real < X) and np.all(X < v.real + 1.0))


_BUILDERS = {
    "circle": lambda p: circle(p["delta"], p.get("center", 0.0), p.get("panels", 4)),
    "line": lambda p: vertical_line(p["x"], p["T"], p.get("first", 0.25)),
    "cv_descent": lambda p: cv_descent(p["z_star"], p["c"], p["gamma"]),
    "cw_descent": lambda p: cw_descent(p["z_star"], p["gamma"], p["n"], p["leg"], p["T"]),
    "wedge_v": lambda p: wedge_v(p["M"]),
    "wedge_w": lambda p: wedge_w(p["M"], p.get("offset", 1.0)),
    "cv_prelimit": lambda p: prelimit_contours(p["z_star"], p["gamma"], p["n"], p.get("T", 3.0)).cv,
    "cw_prelimit": lambda p: prelimit_contours(p["z_star"], p["gamma"], p["n"], p.get("T", 3.0)).cw,
}

CONTOUR_KINDS = tuple(_BUILDERS)


def build_contour(kind: str, **params) -> Contour:
    """Contour of the given ``kind`` (one of ``CONTOUR_KINDS``) from keyword parameters."""
    if kind not in _BUILDERS:
        raise DomainError(f"unknown contour kind {kind!r}")
    try:
        return _BUILDERS[kind](params)
    except KeyError as exc:
        raise DomainError(f"{kind}: missing parameter {exc.args[0]!r}") from None
