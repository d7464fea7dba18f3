"""Fixed-degree quadrature rules on reference triangles and edges.

Triangle rules are symmetric interior rules (no node ever lies on an edge),
which matters here because the generalized barycentric integrands evaluated
elsewhere in the package have poles on the edge lines.  Triangle tables are
the classic symmetric rules of Dunavant; edge rules are Gauss-Legendre.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["QuadRule", "triangle_rule", "edge_rule", "map_to_triangles", "edge_points"]


@dataclass(frozen=True)
class QuadRule:
    """Nodes and weights on a reference element.

    For triangles, ``points`` has shape (n, 2) with coordinates on the
    reference triangle (0,0)-(1,0)-(0,1) and weights summing to 1/2.
    For edges, ``points`` has shape (n,) on [0, 1] and weights summing to 1.
    """

    points: np.ndarray
    weights: np.ndarray
    degree: int


# Dunavant symmetric triangle rules, stored as barycentric orbits:
# ("c", w)           -> centroid
# ("s", w, a)        -> 3 permutations of (a, b, b), b = (1 - a) / 2
# ("p", w, a, b, c)  -> all 6 permutations of (a, b, c)
# Weights are normalized to sum to 1 over the orbit expansion.
_TRI_ORBITS = {
    2: [
        ("s", 0.333333333333333333, 0.666666666666666667),
    ],
    4: [
        ("s", 0.223381589678011, 0.108103018168070),
        ("s", 0.109951743655322, 0.816847572980459),
    ],
    6: [
        ("s", 0.050844906370207, 0.873821971016996),
        ("s", 0.116786275726379, 0.501426509658179),
        ("p", 0.082851075618374, 0.053145049844817, 0.310352451033784, 0.636502499121398),
    ],
    8: [
        ("c", 0.144315607677787),
        ("s", 0.095091634267285, 0.081414823414554),
        ("s", 0.103217370534718, 0.658861384496480),
        ("s", 0.032458497623198, 0.898905543365938),
        ("p", 0.027230314174435, 0.008394777409958, 0.263112829634638, 0.728492392955404),
    ],
    10: [
        ("c", 0.090817990382754),
        ("s", 0.036725957756467, 0.028844733232685),
        ("s", 0.045321059435528, 0.781036849029926),
        ("p", 0.072757916845420, 0.141707219414880, 0.307939838764121, 0.550352941820999),
        ("p", 0.028327242531057, 0.025003534762686, 0.246672560639903, 0.728323904597411),
        ("p", 0.009421666963733, 0.009540815400299, 0.066803251012200, 0.923655933587500),
    ],
}

_EDGE_SIZES = (2, 4, 8)

_tri_cache: dict[int, QuadRule] = {}
_edge_cache: dict[int, QuadRule] = {}


def _expand_orbits(orbits):
    bary = []
    weights = []
    for orbit in orbits:
        kind, w = orbit[0], orbit[1]
        if kind == "c":
            bary.append((1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0))
            weights.append(w)
        elif kind == "s":
            a = orbit[2]
            b = 0.5 * (1.0 - a)
            for coords in ((a, b, b), (b, a, b), (b, b, a)):
                bary.append(coords)
                weights.append(w)
        else:
            a, b, c = orbit[2:]
            for coords in (
                (a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a),
            ):
                bary.append(coords)
                weights.append(w)
    return np.asarray(bary), np.asarray(weights)


def triangle_rule(degree: int) -> QuadRule:
    """Symmetric interior rule on the reference triangle, exact to ``degree``."""
    if degree not in _TRI_ORBITS:
        raise ValueError(
            f"unsupported triangle quadrature degree {degree}; "
            f"available: {sorted(_TRI_ORBITS)}"
        )
    if degree not in _tri_cache:
        bary, w = _expand_orbits(_TRI_ORBITS[degree])
        pts = bary[:, 1:3].copy()  # (l1,l2,l3) -> (x,y) = (l2,l3)
        _tri_cache[degree] = QuadRule(pts, 0.5 * w, degree)
    return _tri_cache[degree]


def edge_rule(n: int) -> QuadRule:
    """n-point Gauss-Legendre rule on [0, 1] (exact to degree 2n-1)."""
    if n not in _EDGE_SIZES:
        raise ValueError(f"unsupported edge rule size {n}; available: {_EDGE_SIZES}")
    if n not in _edge_cache:
        x, w = np.polynomial.legendre.leggauss(n)
        _edge_cache[n] = QuadRule(0.5 * (x + 1.0), 0.5 * w, 2 * n - 1)
    return _edge_cache[n]


def map_to_triangles(rule: QuadRule, tri_verts: np.ndarray):
    """Map a reference triangle rule onto physical triangles.

    tri_verts : (nt, 3, 2) vertex coordinates.
    Returns points (nt, nq, 2) and weights (nt, nq) such that the integral
    over triangle t of f is  sum_q weights[t, q] * f(points[t, q]).
    """
    tri_verts = np.asarray(tri_verts, dtype=float)
    l2 = rule.points[:, 0]
    l3 = rule.points[:, 1]
    l1 = 1.0 - l2 - l3
    bary = np.stack([l1, l2, l3], axis=1)  # (nq, 3)
    pts = np.einsum("qk,tkc->tqc", bary, tri_verts)
    e1 = tri_verts[:, 1] - tri_verts[:, 0]
    e2 = tri_verts[:, 2] - tri_verts[:, 0]
    area = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    w = 2.0 * area[:, None] * rule.weights[None, :]
    return pts, w


def edge_points(rule: QuadRule, v0: np.ndarray, v1: np.ndarray):
    """Map an edge rule onto segments v0 -> v1.

    v0, v1 : (ne, 2).  Returns points (ne, nq, 2) and weights (ne, nq) with
    sum_q weights[e, q] = |e|.
    """
    v0 = np.atleast_2d(np.asarray(v0, dtype=float))
    v1 = np.atleast_2d(np.asarray(v1, dtype=float))
    t = rule.points
    pts = v0[:, None, :] + t[None, :, None] * (v1 - v0)[:, None, :]
    length = np.linalg.norm(v1 - v0, axis=1)
    w = length[:, None] * rule.weights[None, :]
    return pts, w
