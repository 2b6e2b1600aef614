"""Pair-copula families, vine and cherry-tree copula densities, Gaussian oracle.

Only copula densities (uniform marginals) are evaluated. Vertex ``i`` of a
structure reads coordinate ``u[..., i - 1]`` of a point, and row/column
``i - 1`` of a correlation matrix. All point arguments may be a single
point of shape ``(d,)`` or a batch of shape ``(n, d)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np
from scipy.special import ndtr, ndtri

from . import _linalg
from .exceptions import StructureError
from .structures import CherryTree, JunctionTree, VertexSet
from .vine import EdgeLabel, TruncatedRVine, edge_labels, node_labels

__all__ = [
    "FAMILIES",
    "PairCopulaSpec",
    "CorrelationMatrix",
    "unit_point",
    "pc_density",
    "pc_log_density",
    "h_func",
    "vine_plan",
    "vine_log_density",
    "gaussian_copula_log_density",
    "markov_projection",
    "cherry_log_density",
    "partial_correlation",
    "gaussian_assignment",
]

FAMILIES = ("independence", "gaussian", "clayton")
U_CLAMP = 1e-9
# h-function outputs feed the next tree as (p, 1 - p); keep both off zero
_H_CLAMP = 1e-300


@dataclass(frozen=True)
class PairCopulaSpec:
    """A bivariate copula family with its parameter.

    ``gaussian`` takes a correlation in (-1, 1), ``clayton`` a theta > 0,
    ``independence`` no parameter. All three are exchangeable.
    """

    family: str
    parameter: float | None = None

    def __post_init__(self):
        fam = self.family.lower()
        object.__setattr__(self, "family", fam)
        if fam not in FAMILIES:
            raise ValueError(f"unknown copula family {self.family!r}; expected one of {FAMILIES}")
        if fam == "independence":
            if self.parameter is not None:
                raise ValueError("independence copula takes no parameter")
            return
        if self.parameter is None:
            raise ValueError(f"{fam} copula needs a parameter")
        p = float(self.parameter)
        object.__setattr__(self, "parameter", p)
        if fam == "gaussian" and not -1.0 < p < 1.0:
            raise ValueError(f"gaussian correlation must lie in (-1, 1), got {p}")
        if fam == "clayton" and not (p > 0.0 and math.isfinite(p)):
            raise ValueError(f"clayton theta must be positive, got {p}")

    @classmethod
    def independence(cls) -> "PairCopulaSpec":
        return cls("independence")

    @classmethod
    def gaussian(cls, rho: float) -> "PairCopulaSpec":
        return cls("gaussian", rho)

    @classmethod
    def clayton(cls, theta: float) -> "PairCopulaSpec":
        return cls("clayton", theta)

    def logpdf(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return self.logpdf_tails(u, 1.0 - u, v, 1.0 - v)

    def pdf(self, u, v):
        return np.exp(self.logpdf(u, v))

    def cdf(self, u, v):
        if self.family == "independence":
            return np.asarray(u, dtype=float) * np.asarray(v, dtype=float)
        if self.family == "clayton":
            th = self.parameter
            t = np.expm1(-th * np.log(u)) + np.expm1(-th * np.log(v))
            return np.exp(-np.log1p(t) / th)
        raise NotImplementedError("gaussian copula CDF is not needed by the evaluators")

    def h(self, u, v):
        """Conditional CDF of the first argument given the second, dC(u, v)/dv."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return self.h_tails(u, 1.0 - u, v, 1.0 - v)[0]

    # The *_tails variants take each argument twice, as p and q = 1 - p, both
    # accurate; values near 1 keep their precision through q.

    def logpdf_tails(self, pu, qu, pv, qv):
        if self.family == "independence":
            return np.zeros(np.broadcast(pu, pv).shape)
        if self.family == "gaussian":
            r = self.parameter
            x, y = _score(pu, qu), _score(pv, qv)
            q = 1.0 - r * r
            return -0.5 * math.log(q) - (r * r * (x * x + y * y) - 2.0 * r * x * y) / (2.0 * q)
        th = self.parameter
        lu, lv = _log_p(pu, qu), _log_p(pv, qv)
        t = np.expm1(-th * lu) + np.expm1(-th * lv)
        return math.log1p(th) - (1.0 + th) * (lu + lv) - (2.0 + 1.0 / th) * np.log1p(t)

    def h_tails(self, pu, qu, pv, qv):
        """``(h, 1 - h)`` for ``h = dC(u, v)/dv``."""
        if self.family == "independence":
            shape = np.broadcast(pu, pv).shape
            return np.broadcast_to(pu, shape).astype(float), np.broadcast_to(qu, shape).astype(float)
        if self.family == "gaussian":
            r = self.parameter
            x = (_score(pu, qu) - r * _score(pv, qv)) / math.sqrt(1.0 - r * r)
            return ndtr(x), ndtr(-x)
        th = self.parameter
        lu, lv = _log_p(pu, qu), _log_p(pv, qv)
        t = np.expm1(-th * lu) + np.expm1(-th * lv)
        log_h = -(1.0 + th) * lv - (1.0 / th + 1.0) * np.log1p(t)
        return np.exp(log_h), -np.expm1(log_h)

    def __str__(self) -> str:
        if self.parameter is None:
            return self.family
        return f"{self.family} {self.parameter:.17g}"


def _score(p, q):
    # normal quantile of p, taken from whichever tail is small
    return np.where(p < 0.5, ndtri(p), -ndtri(q))


def _log_p(p, q):
    return np.where(p < 0.5, np.log(p), np.log1p(-q))


def _clip_tail(x):
    return np.clip(x, _H_CLAMP, 1.0)


def pc_density(spec: PairCopulaSpec, u, v):
    return spec.pdf(u, v)


def pc_log_density(spec: PairCopulaSpec, u, v):
    return spec.logpdf(u, v)


def h_func(spec: PairCopulaSpec, u, v):
    return spec.h(u, v)


class CorrelationMatrix:
    """Symmetric positive definite matrix with unit diagonal.

    Row ``i - 1`` belongs to vertex ``i``. Positive definiteness is checked
    by symmetric elimination: every pivot must exceed ``1e-12``.
    """

    def __init__(self, values):
        a = np.array(values, dtype=float, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"correlation matrix must be square, got shape {a.shape}")
        if not np.array_equal(a, a.T):
            raise ValueError("correlation matrix must be exactly symmetric")
        if not np.allclose(np.diag(a), 1.0, rtol=0.0, atol=1e-12):
            raise ValueError("correlation matrix must have a unit diagonal")
        np.fill_diagonal(a, 1.0)
        piv = _linalg.elimination_pivots(a)
        if not np.all(piv > _linalg.PIVOT_TOL):
            raise ValueError("correlation matrix is not positive definite")
        a.setflags(write=False)
        self._a = a

    @classmethod
    def from_covariance(cls, cov) -> "CorrelationMatrix":
        cov = np.asarray(cov, dtype=float)
        s = np.sqrt(np.diag(cov))
        c = cov / np.outer(s, s)
        c = (c + c.T) / 2.0
        np.fill_diagonal(c, 1.0)
        return cls(c)

    @property
    def values(self) -> np.ndarray:
        return self._a

    @property
    def d(self) -> int:
        return self._a.shape[0]

    def block(self, vertices) -> np.ndarray:
        idx = [int(v) - 1 for v in vertices]
        return self._a[np.ix_(idx, idx)]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._a, dtype=dtype)

    def __repr__(self) -> str:
        return f"CorrelationMatrix(d={self.d})"


CorrelationLike = Union[CorrelationMatrix, np.ndarray]


def _corr(S) -> CorrelationMatrix:
    return S if isinstance(S, CorrelationMatrix) else CorrelationMatrix(S)


def unit_point(u, d: int | None = None) -> np.ndarray:
    """Coerce to a float array of points clamped into ``[1e-9, 1 - 1e-9]``."""
    u = np.asarray(u, dtype=float)
    if u.ndim not in (1, 2):
        raise ValueError(f"points must have shape (d,) or (n, d), got {u.shape}")
    if d is not None and u.shape[-1] != d:
        raise ValueError(f"points have {u.shape[-1]} coordinates, expected {d}")
    if np.any(~np.isfinite(u)) or np.any(u < 0.0) or np.any(u > 1.0):
        raise ValueError("point coordinates must lie in [0, 1]")
    return np.clip(u, U_CLAMP, 1.0 - U_CLAMP)


def _gauss_logc(block: np.ndarray, z: np.ndarray):
    """Log Gaussian copula density of correlation ``block`` at normal scores ``z``."""
    m = block.shape[0]
    if m == 0:
        return np.zeros(z.shape[:-1])
    factors = _linalg.lu_factor(block)
    sign, logdet = _linalg.slogdet(block)
    if sign <= 0:
        raise _linalg.SingularMatrixError("correlation block is not positive definite")
    prec = _linalg.lu_solve(factors, np.eye(m)) - np.eye(m)
    quad = np.einsum("...i,ij,...j->...", z, prec, z)
    return -0.5 * logdet - 0.5 * quad


def gaussian_copula_log_density(S: CorrelationLike, u):
    """Log density of the Gaussian copula with correlation ``S`` at ``u``."""
    S = _corr(S)
    z = ndtri(unit_point(u, S.d))
    return _gauss_logc(S.values, z)


def _check_vertices(jt: JunctionTree, d: int) -> None:
    if jt.vertices != VertexSet(range(1, d + 1)):
        raise StructureError(f"structure covers {jt.vertices!r}; expected vertices 1..{d}")


def markov_projection(S: CorrelationLike, jt: JunctionTree | CherryTree) -> CorrelationMatrix:
    """Gaussian correlation that factorizes along ``jt`` with the cluster marginals of ``S``.

    The precision matrix is assembled from padded inverses of the cluster
    blocks minus those of the separator blocks (once per edge).
    """
    S = _corr(S)
    jt = jt.base if isinstance(jt, CherryTree) else jt
    _check_vertices(jt, S.d)
    K = np.zeros((S.d, S.d))
    for c in jt.clusters:
        idx = np.ix_([v - 1 for v in c], [v - 1 for v in c])
        K[idx] += _linalg.inv(S.block(c))
    for sep in jt.separators:
        if sep:
            idx = np.ix_([v - 1 for v in sep], [v - 1 for v in sep])
            K[idx] -= _linalg.inv(S.block(sep))
    cov = _linalg.inv((K + K.T) / 2.0)
    return CorrelationMatrix.from_covariance(cov)


def cherry_log_density(tree: CherryTree | JunctionTree, S: CorrelationLike, u):
    """Log junction-tree copula density: cluster terms minus separator terms.

    Each edge subtracts its separator's Gaussian copula term once, so a
    separator linking ``nu`` clusters is subtracted ``nu - 1`` times.
    """
    S = _corr(S)
    jt = tree.base if isinstance(tree, CherryTree) else tree
    _check_vertices(jt, S.d)
    z = ndtri(unit_point(u, S.d))
    total = np.zeros(z.shape[:-1])
    for c in jt.clusters:
        total = total + _gauss_logc(S.block(c), z[..., [v - 1 for v in c]])
    for sep in jt.separators:
        if sep:
            total = total - _gauss_logc(S.block(sep), z[..., [v - 1 for v in sep]])
    return total


def partial_correlation(S: CorrelationLike, i: int, j: int, given=()) -> float:
    """Partial correlation of vertices ``i`` and ``j`` given the vertex set ``given``."""
    S = _corr(S)
    given = VertexSet(given)
    if i == j or i in given or j in given:
        raise ValueError(f"need distinct i, j outside the conditioning set, got {i}, {j} | {given!r}")
    p = _linalg.inv(S.block([i, j, *given]))
    return float(-p[0, 1] / math.sqrt(p[0, 0] * p[1, 1]))


@dataclass(frozen=True)
class _PlanStep:
    label: EdgeLabel
    # label of the node each conditioned variable comes from; None at level 1
    source_a: EdgeLabel | None
    source_b: EdgeLabel | None


def vine_plan(v: TruncatedRVine) -> tuple[_PlanStep, ...]:
    """Evaluation order for :func:`vine_log_density`.

    For a label ``a, b | S`` of tree ``l`` the argument ``F(a | S)`` is the
    h-function of the tree ``l - 1`` label on node ``S + a``, whose
    conditioned pair is ``a`` and some pivot ``i`` in ``S``. Likewise for
    ``b`` with node ``S + b`` (possibly a different pivot).
    """
    nodes = node_labels(v)
    steps = []
    for lab in edge_labels(v):
        if lab.level == 1:
            steps.append(_PlanStep(lab, None, None))
            continue
        below = nodes[lab.level - 2]
        a, b = lab.conditioned
        srcs = []
        for x in (a, b):
            node = lab.conditioning | VertexSet([x])
            src = below.get(node)
            if src is None or x not in src.conditioned:
                raise StructureError(f"no lower edge provides F({x} | {lab.conditioning.label()}) for {lab}")
            srcs.append(src)
        steps.append(_PlanStep(lab, srcs[0], srcs[1]))
    return tuple(steps)


def vine_log_density(v: TruncatedRVine, assignment: Mapping[EdgeLabel, PairCopulaSpec], u):
    """Log copula density of a simplified vine with the given pair-copulas.

    Every label of :func:`~cherryvine.vine.edge_labels` must be assigned.
    Conditional CDFs are computed tree by tree with h-functions.
    """
    plan = vine_plan(v)
    missing = [str(s.label) for s in plan if s.label not in assignment]
    if missing:
        raise ValueError(f"assignment is missing {len(missing)} label(s): {', '.join(missing)}")
    pts = unit_point(u, v.d)
    V = v.vertices.ids
    col = {x: i for i, x in enumerate(V)}
    args: dict[EdgeLabel, tuple] = {}
    cond: dict[tuple[EdgeLabel, int], tuple] = {}

    def conditional(src: EdgeLabel, x: int):
        # F(x | src.conditioning + other) and its complement, from the arguments of src
        key = (src, x)
        if key not in cond:
            xa, xb = args[src]
            a, _ = src.conditioned
            mine, other = (xa, xb) if x == a else (xb, xa)
            p, q = assignment[src].h_tails(*mine, *other)
            cond[key] = (_clip_tail(p), _clip_tail(q))
        return cond[key]

    total = np.zeros(pts.shape[:-1])
    for step in plan:
        a, b = step.label.conditioned
        if step.source_a is None:
            ua, ub = pts[..., col[a]], pts[..., col[b]]
            xa, xb = (ua, 1.0 - ua), (ub, 1.0 - ub)
        else:
            xa, xb = conditional(step.source_a, a), conditional(step.source_b, b)
        args[step.label] = (xa, xb)
        total = total + assignment[step.label].logpdf_tails(*xa, *xb)
    return total


def gaussian_assignment(v: TruncatedRVine, S: CorrelationLike) -> dict[EdgeLabel, PairCopulaSpec]:
    """Gaussian pair-copulas whose parameters are the partial correlations of ``S``."""
    S = _corr(S)
    return {
        lab: PairCopulaSpec.gaussian(partial_correlation(S, *lab.conditioned, lab.conditioning))
        for lab in edge_labels(v)
    }
