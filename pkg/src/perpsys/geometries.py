"""Incidence structures: generalized quadrangles, partial geometries, srg checks.

Also Sylvester's duad/syntheme model of W(2), the W(2) built from the
perp-system, an isomorphism search, and the linear representation.
"""
import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import (NotAGQError, NotAPartialGeometryError,
                     NotAPartialLinearSpaceError, NotSRGError,
                     PipelineInvariantViolated)
from .forms import perp
from .projective import meet, span


class IncidenceStructure:
    """Points 0..n-1 and lines given as sets of point ids.

    The constructor rejects repeated incidences and any pair of points lying
    on two common lines.
    """

    def __init__(self, npoints, lines, point_labels=None, line_labels=None):
        self.npoints = int(npoints)
        out = []
        for ln in lines:
            pts = [int(x) for x in ln]
            if len(set(pts)) != len(pts):
                raise ValueError("repeated incidence pair")
            if any(not 0 <= x < self.npoints for x in pts):
                raise ValueError("point id out of range")
            out.append(tuple(sorted(pts)))
        self.lines = tuple(out)
        self.point_labels = list(point_labels) if point_labels is not None else None
        self.line_labels = list(line_labels) if line_labels is not None else None
        m = np.zeros((self.npoints, len(self.lines)), dtype=np.uint8)
        for j, ln in enumerate(self.lines):
            m[list(ln), j] = 1
        self.matrix = m
        shared = m.astype(np.float64) @ m.T.astype(np.float64)
        np.fill_diagonal(shared, 0)
        if (shared > 1).any():
            a, b = np.argwhere(shared > 1)[0]
            raise NotAPartialLinearSpaceError(f"points {a} and {b} share {int(shared[a, b])} lines")
        self._collinear = shared.astype(np.uint8)

    @property
    def nlines(self):
        return len(self.lines)

    def incidence_pairs(self):
        return [(p, j) for j, ln in enumerate(self.lines) for p in ln]

    def line_sizes(self):
        return self.matrix.sum(axis=0, dtype=np.int64)

    def point_degrees(self):
        return self.matrix.sum(axis=1, dtype=np.int64)

    def collinearity(self):
        """0/1 adjacency of distinct collinear points."""
        return self._collinear

    def line_through(self):
        """(P, P) table of the line id joining two points, -1 if none."""
        tab = -np.ones((self.npoints, self.npoints), dtype=np.int64)
        for j, ln in enumerate(self.lines):
            idx = np.array(ln)
            tab[np.ix_(idx, idx)] = j
        np.fill_diagonal(tab, -1)
        return tab

    def to_json(self):
        out = {"points": self.npoints, "lines": self.nlines,
               "incidence": [list(x) for x in self.incidence_pairs()]}
        if self.point_labels is not None or self.line_labels is not None:
            out["labels"] = {"points": self.point_labels, "lines": self.line_labels}
        return out

    @classmethod
    def from_json(cls, data):
        lines = [[] for _ in range(data["lines"])]
        for p, j in data["incidence"]:
            lines[j].append(p)
        labels = data.get("labels") or {}
        return cls(data["points"], lines, labels.get("points"), labels.get("lines"))

    def __repr__(self):
        return f"IncidenceStructure({self.npoints} points, {self.nlines} lines)"


@dataclass(frozen=True)
class PGParams:
    s: int
    t: int
    alpha: int

    def __post_init__(self):
        if self.s < 1 or self.t < 1 or not 1 <= self.alpha <= min(self.s, self.t) + 1:
            raise ValueError(f"invalid partial geometry parameters {self}")

    def srg(self):
        """Parameters of the collinearity graph."""
        s, t, a = self.s, self.t, self.alpha
        v, r = divmod((s + 1) * (s * t + a), a)
        if r:
            raise ValueError("non-integral vertex count")
        return SRGParams(v, s * (t + 1), s - 1 + t * (a - 1), a * (t + 1))

    def to_json(self):
        return {"s": self.s, "t": self.t, "alpha": self.alpha}


@dataclass(frozen=True)
class SRGParams:
    v: int
    k: int
    lam: int
    mu: int

    def __post_init__(self):
        if self.k * (self.k - self.lam - 1) != (self.v - self.k - 1) * self.mu:
            raise ValueError(f"infeasible srg parameters {self}")

    def as_tuple(self):
        return (self.v, self.k, self.lam, self.mu)

    def to_json(self):
        return {"v": self.v, "k": self.k, "lambda": self.lam, "mu": self.mu}


def _constant(values, what, err):
    vals = np.unique(values)
    if len(vals) != 1:
        raise err(f"{what} is not constant: {vals.tolist()}")
    return int(vals[0])


def _antiflags(inc):
    lines = np.array(inc.lines, dtype=np.int32)
    return _kernels.antiflag_counts(inc.collinearity(), lines)


def check_gq(inc):
    """(s, t) of a generalized quadrangle; NotAGQError names the first bad antiflag.

    The antiflag axiom with one collinear point also rules out triangles.
    """
    if inc.nlines == 0:
        raise NotAGQError("no lines")
    s = _constant(inc.line_sizes(), "line size", NotAGQError) - 1
    t = _constant(inc.point_degrees(), "point degree", NotAGQError) - 1
    counts = _antiflags(inc)
    bad = np.argwhere((counts >= 0) & (counts != 1))
    if len(bad):
        p, j = bad[0]
        raise NotAGQError(f"point {p} and line {j}: {counts[p, j]} collinear points")
    if not (counts >= 0).any():
        raise NotAGQError("no antiflags")
    return s, t


def check_partial_geometry(inc):
    """PGParams after checking the antiflag constant over every antiflag."""
    if inc.nlines == 0:
        raise NotAPartialGeometryError("no lines")
    s = _constant(inc.line_sizes(), "line size", NotAPartialGeometryError) - 1
    t = _constant(inc.point_degrees(), "point degree", NotAPartialGeometryError) - 1
    counts = _antiflags(inc)
    anti = counts[counts >= 0]
    if not len(anti):
        raise NotAPartialGeometryError("no antiflags")
    alpha = int(anti[0])
    bad = np.argwhere((counts >= 0) & (counts != alpha))
    if len(bad):
        p, j = bad[0]
        raise NotAPartialGeometryError(
            f"point {p} and line {j}: {counts[p, j]} collinear points, expected {alpha}")
    try:
        return PGParams(s, t, alpha)
    except ValueError as e:
        raise NotAPartialGeometryError(str(e)) from None


def srg_parameters(adj):
    """Count (v, k, lambda, mu) of a graph; NotSRGError if it is not strongly regular."""
    A = np.ascontiguousarray(adj, dtype=np.uint8)
    v = len(A)
    k = _constant(A.sum(axis=1), "degree", NotSRGError)
    common = _kernels.common_neighbours(A)
    off = ~np.eye(v, dtype=bool)
    adjacent = A.astype(bool) & off
    lam = _constant(common[adjacent], "lambda", NotSRGError)
    mu = _constant(common[~A.astype(bool) & off], "mu", NotSRGError)
    try:
        return SRGParams(v, k, lam, mu)
    except ValueError as e:
        raise NotSRGError(str(e)) from None


def check_srg(inc, params=None):
    """Count the collinearity graph's srg parameters and compare with the pg formula."""
    params = params or check_partial_geometry(inc)
    counted = srg_parameters(inc.collinearity())
    expected = params.srg()
    if counted != expected:
        raise NotSRGError(f"counted {counted.as_tuple()} but formula gives {expected.as_tuple()}")
    return counted


def grid(n=3):
    """n x n grid: rows and columns as lines."""
    rows = [[r * n + c for c in range(n)] for r in range(n)]
    cols = [[r * n + c for r in range(n)] for c in range(n)]
    return IncidenceStructure(n * n, rows + cols)


# Sylvester's model on the labels 1..6

@lru_cache(maxsize=None)
def duads():
    return tuple(itertools.combinations(range(1, 7), 2))


@lru_cache(maxsize=None)
def synthemes():
    """Partitions of {1..6} into three duads, lexicographic."""
    out = []
    for a, b, c in itertools.combinations(duads(), 3):
        if len(set(a + b + c)) == 6:
            out.append((a, b, c))
    return tuple(out)


@lru_cache(maxsize=None)
def spreads():
    """Sets of five synthemes with no common duad (they partition the duads)."""
    syn = synthemes()
    out = []
    for combo in itertools.combinations(syn, 5):
        ds = [d for s in combo for d in s]
        if len(set(ds)) == 15:
            out.append(combo)
    return tuple(out)


def sylvester_model():
    index = {d: i for i, d in enumerate(duads())}
    lines = [[index[d] for d in s] for s in synthemes()]
    return IncidenceStructure(15, lines,
                              ["%d%d" % d for d in duads()],
                              [" ".join("%d%d" % d for d in s) for s in synthemes()])


def complementary_syntheme(spread, a, b):
    """The syntheme outside ``spread`` sharing no duad with spread[a] or spread[b]."""
    used = set(spread[a]) | set(spread[b])
    found = [s for s in synthemes() if s not in spread and not used & set(s)]
    if len(found) != 1:
        raise PipelineInvariantViolated(f"{len(found)} synthemes avoid both")
    return found[0]


# W(2) from the perp-system

def f10(F5, M):
    """perp(span(l, m)) for the ten pairs of F5 lines."""
    from .pipeline import LineSet
    lines = list(F5)
    if len(lines) != 5:
        raise PipelineInvariantViolated("need five lines")
    out = []
    for a, b in itertools.combinations(lines, 2):
        pl = perp(span(a, b), M)
        if pl.vdim != 2:
            raise PipelineInvariantViolated("perp of a span is not a line")
        out.append(pl)
    return LineSet("F10", out)


def w2_incidence(F15, F5, F10, M):
    """Bool matrix (15, 15) with type (i) lines first, then type (ii)."""
    pts = list(F15)
    inc = np.zeros((len(pts), len(F5) + len(F10)), dtype=bool)
    for j, l in enumerate(F5):
        lp = perp(l, M)
        for i, P in enumerate(pts):
            inc[i, j] = meet(P, lp).is_empty()
    for j, l in enumerate(F10, start=len(F5)):
        lp = perp(l, M)
        for i, P in enumerate(pts):
            inc[i, j] = lp.contains(P)
    return inc


def build_w2(F15, F5, F10, M):
    if (len(F15), len(F5), len(F10)) != (15, 5, 10):
        raise ValueError("expected 15 points, 5 and 10 lines")
    inc = w2_incidence(F15, F5, F10, M)
    lines = [np.flatnonzero(inc[:, j]).tolist() for j in range(inc.shape[1])]
    labels = ["i%d" % (j + 1) for j in range(5)] + ["ii%d" % (j + 1) for j in range(10)]
    return IncidenceStructure(15, lines, ["m%d" % (i + 1) for i in range(15)], labels)


def w2_proof_equivalences(F6, F15, F5, M, spread):
    """Both incidence correspondences with Sylvester's model, checked exhaustively.

    ``F15`` is indexed by the duads of F6 in lexicographic order and F5[a]
    corresponds to spread[a]. Returns a dict of booleans.
    """
    F6, F15, F5 = list(F6), list(F15), list(F5)
    dl = duads()
    perp_ok = True
    rule_i = True
    for a, s in enumerate(spread):
        pieces = [meet(perp(F6[u - 1], M), perp(F6[v - 1], M)) for u, v in s]
        joined = pieces[0]
        for x in pieces[1:]:
            joined = span(joined, x)
        lp = perp(F5[a], M)
        perp_ok &= joined == lp
        for k, d in enumerate(dl):
            rule_i &= meet(F15[k], lp).is_empty() == (d in s)
    rule_ii = True
    for a, b in itertools.combinations(range(5), 2):
        sab = complementary_syntheme(spread, a, b)
        plane = span(F5[a], F5[b])
        for k, d in enumerate(dl):
            rule_ii &= plane.contains(F15[k]) == (d in sab)
    return {"perp of l_a spanned by m_u^perp meet m_v^perp": bool(perp_ok),
            "incidence (I)": bool(rule_i), "incidence (II)": bool(rule_ii)}


# isomorphism search

@dataclass(frozen=True)
class Isomorphism:
    points: tuple
    lines: tuple

    def inverse(self):
        pi = [0] * len(self.points)
        for i, j in enumerate(self.points):
            pi[j] = i
        li = [0] * len(self.lines)
        for i, j in enumerate(self.lines):
            li[j] = i
        return Isomorphism(tuple(pi), tuple(li))

    def to_json(self):
        return {"points": list(self.points), "lines": list(self.lines)}


def is_isomorphism(a, b, iso):
    if sorted(iso.points) != list(range(b.npoints)) or sorted(iso.lines) != list(range(b.nlines)):
        return False
    return all(tuple(sorted(iso.points[p] for p in a.lines[j])) == b.lines[iso.lines[j]]
               for j in range(a.nlines))


def _refine(adjs, degs):
    """Joint colour refinement of several graphs; returns a colour list per graph."""
    colors = [list(map(int, d)) for d in degs]
    nbrs = [[np.flatnonzero(A[i]).tolist() for i in range(len(A))] for A in adjs]
    ncols = len(set(itertools.chain.from_iterable(colors)))
    while True:
        sigs = [[(col[i], tuple(sorted(col[j] for j in nb[i]))) for i in range(len(col))]
                for col, nb in zip(colors, nbrs)]
        keys = sorted(set(itertools.chain.from_iterable(sigs)))
        rank = {k: i for i, k in enumerate(keys)}
        new = [[rank[s] for s in sig] for sig in sigs]
        if len(keys) == ncols:
            return new
        colors, ncols = new, len(keys)


def isomorphism(a, b, point_map=None):
    """An incidence-preserving bijection a -> b, or None.

    Points are matched by backtracking inside colour classes of a joint degree
    refinement; each new point is checked against all earlier ones through the
    lines joining them. ``point_map`` fixes the images of some points.
    """
    if (a.npoints, a.nlines) != (b.npoints, b.nlines):
        return None
    if sorted(a.line_sizes().tolist()) != sorted(b.line_sizes().tolist()):
        return None
    if sorted(a.point_degrees().tolist()) != sorted(b.point_degrees().tolist()):
        return None
    n = a.npoints
    if n == 0:
        return _finish(a, b, [])
    ca, cb = _refine([a.collinearity(), b.collinearity()], [a.point_degrees(), b.point_degrees()])
    if sorted(ca) != sorted(cb):
        return None
    la, lb = a.line_through(), b.line_through()
    fixed = dict(point_map or {})
    # visit order: forced points, then BFS along collinearity
    order, seen = [], set()
    adj = a.collinearity()
    for start in list(fixed) + list(range(n)):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            x = queue.pop(0)
            order.append(x)
            for y in np.flatnonzero(adj[x]).tolist():
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    by_color = {}
    for v, c in enumerate(cb):
        by_color.setdefault(c, []).append(v)

    img = [-1] * n
    used = [False] * n
    line_img = {}
    line_used = {}

    def candidates(x):
        if x in fixed:
            return [fixed[x]]
        return by_color.get(ca[x], [])

    def try_assign(depth, y):
        x = order[depth]
        added = []
        for z in order[:depth]:
            lz, mz = la[x, z], lb[y, img[z]]
            if (lz < 0) != (mz < 0):
                break
            if lz < 0:
                continue
            cur = line_img.get(lz)
            if cur is None:
                if mz in line_used:
                    break
                line_img[lz] = mz
                line_used[mz] = lz
                added.append(lz)
            elif cur != mz:
                break
        else:
            return added
        for l in added:
            del line_used[line_img.pop(l)]
        return None

    stack = [(0, iter(candidates(order[0])), [])]
    while stack:
        depth, it, added = stack[-1]
        x = order[depth]
        if img[x] >= 0:
            used[img[x]] = False
            img[x] = -1
            for l in added:
                del line_used[line_img.pop(l)]
            stack[-1] = (depth, it, [])
        for y in it:
            if used[y]:
                continue
            got = try_assign(depth, y)
            if got is None:
                continue
            img[x] = y
            used[y] = True
            stack[-1] = (depth, it, got)
            break
        else:
            stack.pop()
            continue
        if depth + 1 == n:
            result = _finish(a, b, img, line_img)
            if result is not None:
                return result
            continue
        nxt = order[depth + 1]
        stack.append((depth + 1, iter(candidates(nxt)), []))
    return None


def _finish(a, b, img, line_img=None):
    """Complete the line map from point sets and verify."""
    index = {ln: j for j, ln in enumerate(b.lines)}
    lines = []
    for ln in a.lines:
        j = index.get(tuple(sorted(img[p] for p in ln)))
        if j is None:
            return None
        lines.append(j)
    if len(set(lines)) != len(lines):
        return None
    iso = Isomorphism(tuple(img), tuple(lines))
    return iso if is_isomorphism(a, b, iso) else None


# linear representation

def linear_representation(lines, q=3):
    """Points: vectors of GF(q)^n. Lines: the cosets v + U of each line's vector subspace."""
    lines = list(lines)
    if not lines:
        raise ValueError("need at least one subspace")
    if len({l.basis.nrows for l in lines}) != 1:
        raise ValueError("all subspaces must have the same dimension")
    n = lines[0].basis.ncols
    weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    vecs = np.indices((q,) * n).reshape(n, -1).T.astype(np.int64)
    blocks = []
    labels = []
    for k, l in enumerate(lines):
        b = l.basis.array.astype(np.int64)
        coeffs = np.indices((q,) * len(b)).reshape(len(b), -1).T
        sub = (coeffs @ b) % q
        cos = ((vecs[:, None, :] + sub[None, :, :]) % q) @ weights
        cos.sort(axis=1)
        uniq = np.unique(cos, axis=0)
        blocks.append(uniq)
        labels.extend([f"{k}+{int(c[0])}" for c in uniq])
    allc = np.concatenate(blocks)
    return IncidenceStructure(len(vecs), allc.tolist(), line_labels=labels)
