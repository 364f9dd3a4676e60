"""Concrete unimodular groups with element algebra and Haar quadrature.

Every group exposes two views of its elements:

* payloads -- canonical hashable Python values (permutation tuples, residue
  tuples, Euler-angle triples, ...) used by the public ``mul``/``inv`` API;
* points -- numpy arrays used by the vectorized internals (node indices for
  finite groups, coordinate rows for the others).

Haar measure is the probability measure on compact kinds and the counting
measure on discrete kinds.  Finite groups may opt into counting measure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi

# |sin(beta/2)| or |cos(beta/2)| below this is treated as a pole of the Euler chart
_POLE_TOL = 1e-14


class GroupSpecError(ValueError):
    """Malformed, unsupported or non-group specification."""


@dataclass(frozen=True, eq=False)
class QuadratureScheme:
    nodes: tuple
    weights: np.ndarray
    normalization: str  # "probability" | "counting"

    def __len__(self) -> int:
        return len(self.nodes)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


class Group:
    """Common interface.  Subclasses fill in the element algebra."""

    kind: str
    name: str
    order: float
    compact: bool
    discrete: bool  # node tables are exact (finite or windowed discrete)
    spec: dict

    # -- payload API -------------------------------------------------------
    @property
    def identity(self) -> Hashable:
        return self.from_points(self.identity_point[None])[0]

    def canonical(self, x: Any) -> Hashable:
        return self.from_points(self.to_points([x]))[0]

    def mul(self, x: Any, y: Any) -> Hashable:
        P = self.to_points([x])
        Q = self.to_points([y])
        return self.from_points(self.mul_points(P, Q))[0]

    def inv(self, x: Any) -> Hashable:
        return self.from_points(self.inv_points(self.to_points([x])))[0]

    # -- quadrature --------------------------------------------------------
    @property
    def weights(self) -> np.ndarray:
        return self.quadrature.weights

    @property
    def num_nodes(self) -> int:
        return len(self.quadrature.weights)

    def integrate(self, values: Sequence[complex] | np.ndarray) -> complex:
        """Haar integral of node-indexed values."""
        values = np.asarray(values)
        if values.shape[:1] != (self.num_nodes,):
            raise ValueError(
                f"expected {self.num_nodes} node values, got shape {values.shape}"
            )
        return complex(self.weights @ values)

    def locate(self, P: np.ndarray) -> np.ndarray:
        """Node index of every point, -1 when the point is not a node."""
        raise TypeError(f"{self.kind} groups have no exact node lookup")

    @cached_property
    def node_points(self) -> np.ndarray:
        return _readonly(self.to_points(self.quadrature.nodes))

    @cached_property
    def left_division_table(self) -> np.ndarray:
        """T[y, x] = node index of y^-1 x, or -1 outside the node set."""
        if not self.discrete:
            raise TypeError("left division table only exists for discrete kinds")
        n = self.num_nodes
        P = self.node_points
        yinv = self.inv_points(P)
        rows = np.repeat(np.arange(n), n)
        cols = np.tile(np.arange(n), n)
        prod = self.mul_points(yinv[rows], P[cols])
        return _readonly(self.locate(prod).reshape(n, n))

    @cached_property
    def node_inverse(self) -> np.ndarray:
        """Node index of the inverse of every node (-1 if not a node)."""
        return _readonly(self.locate(self.inv_points(self.node_points)))

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} kind={self.kind} nodes={self.num_nodes}>"


# ---------------------------------------------------------------------------
# finite groups given by a Cayley table


def _check_cayley_table(table: np.ndarray) -> tuple[int, np.ndarray]:
    n = table.shape[0]
    if table.ndim != 2 or table.shape != (n, n) or n == 0:
        raise GroupSpecError("Cayley table must be a non-empty square matrix")
    if table.min() < 0 or table.max() >= n:
        raise GroupSpecError("Cayley table entries out of range")
    ar = np.arange(n)
    ident = [i for i in range(n) if np.array_equal(table[i], ar) and np.array_equal(table[:, i], ar)]
    if not ident:
        raise GroupSpecError("Cayley table has no identity element")
    e = ident[0]
    hits = np.argwhere(table == e)
    inverse = np.full(n, -1)
    for x, y in hits:
        if table[y, x] == e:
            inverse[x] = y
    if (inverse < 0).any():
        raise GroupSpecError("Cayley table: some element has no inverse")
    if not np.array_equal(table[table], table[:, table]):
        raise GroupSpecError("Cayley table is not associative")
    return e, inverse


class FiniteGroup(Group):
    """A finite group: elements indexed 0..n-1 with a Cayley table."""

    compact = True
    discrete = True

    def __init__(
        self,
        elements: Sequence[Hashable],
        table: np.ndarray,
        *,
        kind: str = "finite-by-table",
        name: str = "",
        normalization: str = "probability",
        spec: dict | None = None,
        canon: Callable[[Any], Hashable] | None = None,
    ):
        table = np.asarray(table, dtype=np.intp)
        e, inverse = _check_cayley_table(table)
        if len(elements) != table.shape[0]:
            raise GroupSpecError("number of element labels does not match table size")
        if normalization not in ("probability", "counting"):
            raise GroupSpecError(f"unknown normalization {normalization!r}")
        self.kind = kind
        self.name = name or f"table{len(elements)}"
        self.elements = tuple(elements)
        self.table = _readonly(table)
        self.inverse = _readonly(inverse)
        self.identity_index = int(e)
        self.order = len(elements)
        self._index = {x: i for i, x in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise GroupSpecError("element labels are not distinct")
        self._canon = canon
        n = self.order
        w = np.full(n, 1.0 / n) if normalization == "probability" else np.ones(n)
        self.quadrature = QuadratureScheme(self.elements, _readonly(w), normalization)
        self.spec = spec if spec is not None else {"kind": kind, "table": table.tolist()}

    @property
    def identity_point(self) -> np.ndarray:
        return np.array([self.identity_index])

    @property
    def identity(self) -> Hashable:
        return self.elements[self.identity_index]

    def index(self, x: Any) -> int:
        if self._canon is not None:
            x = self._canon(x)
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise ValueError(f"{x!r} is not an element of {self.name}") from None

    def to_points(self, elements: Iterable[Any]) -> np.ndarray:
        return np.array([self.index(x) for x in elements], dtype=np.intp)

    def from_points(self, P: np.ndarray) -> list:
        return [self.elements[int(i)] for i in np.asarray(P)]

    def mul_points(self, P, Q):
        return self.table[np.asarray(P), np.asarray(Q)]

    def inv_points(self, P):
        return self.inverse[np.asarray(P)]

    def locate(self, P):
        return np.asarray(P, dtype=np.intp)

    @cached_property
    def node_points(self) -> np.ndarray:
        return _readonly(np.arange(self.order, dtype=np.intp))


def _compose(x: tuple, y: tuple) -> tuple:
    # (x y)(i) = x(y(i)): apply y first
    return tuple(x[j] for j in y)


def permutation_from_cycles(cycles: Iterable[Sequence[int]], n: int) -> tuple:
    """One-line (0-based) tuple for a product of disjoint 1-based cycles."""
    perm = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            perm[a - 1] = b - 1
    return tuple(perm)


def permutation_group(generators: Sequence[tuple], *, name: str, spec: dict | None = None,
                      normalization: str = "probability") -> FiniteGroup:
    """Closure of permutation generators; elements sorted lexicographically."""
    n = len(generators[0])
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in generators:
                y = _compose(g, x)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    elements = sorted(seen)
    index = {x: i for i, x in enumerate(elements)}
    table = np.array([[index[_compose(x, y)] for y in elements] for x in elements])
    return FiniteGroup(elements, table, name=name, spec=spec, normalization=normalization,
                       canon=lambda x: tuple(int(i) for i in x))


def symmetric_group(n: int, normalization: str = "probability") -> FiniteGroup:
    if n < 1:
        raise GroupSpecError("symmetric group needs n >= 1")
    gens = [tuple(range(n))]
    if n >= 2:
        gens = [permutation_from_cycles([(1, 2)], n), permutation_from_cycles([tuple(range(1, n + 1))], n)]
    spec = {"kind": "finite-by-table", "catalog": f"S{n}"}
    if normalization != "probability":
        spec["measure"] = normalization
    return permutation_group(gens, name=f"S{n}", spec=spec, normalization=normalization)


def dihedral_group(n: int, normalization: str = "probability") -> FiniteGroup:
    """Symmetries of the regular n-gon acting on its vertices 0..n-1 (order 2n)."""
    if n < 3:
        raise GroupSpecError("dihedral group needs n >= 3")
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    spec = {"kind": "finite-by-table", "catalog": f"D{n}"}
    if normalization != "probability":
        spec["measure"] = normalization
    return permutation_group([rot, ref], name=f"D{n}", spec=spec, normalization=normalization)


_QUAT_UNITS = ["1", "i", "j", "k"]
# unit products: (a, b) -> (sign, c)
_QUAT_MUL = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def quaternion_group(normalization: str = "probability") -> FiniteGroup:
    elements = [s + u for s in "+-" for u in _QUAT_UNITS]
    index = {x: i for i, x in enumerate(elements)}

    def mul(x, y):
        s, u = _QUAT_MUL[(x[1], y[1])]
        sign = s * (1 if x[0] == "+" else -1) * (1 if y[0] == "+" else -1)
        return ("+" if sign > 0 else "-") + u

    table = np.array([[index[mul(x, y)] for y in elements] for x in elements])
    spec = {"kind": "finite-by-table", "catalog": "Q8"}
    return FiniteGroup(elements, table, name="Q8", spec=spec, normalization=normalization)


def cyclic_product(orders: Sequence[int], normalization: str = "probability") -> FiniteGroup:
    """Z_{n1} x ... x Z_{nk}; elements are residue tuples."""
    orders = tuple(int(n) for n in orders)
    if not orders or min(orders) < 1:
        raise GroupSpecError("cyclic-product orders must be >= 1")
    elements = list(itertools.product(*(range(n) for n in orders)))
    arr = np.array(elements, dtype=np.intp).reshape(len(elements), len(orders))
    radix = np.array([math.prod(orders[k + 1:]) for k in range(len(orders))], dtype=np.intp)
    summed = (arr[:, None, :] + arr[None, :, :]) % np.array(orders)
    table = summed @ radix
    spec = {"kind": "cyclic-product", "orders": list(orders)}
    if normalization != "probability":
        spec["measure"] = normalization
    name = "x".join(f"Z{n}" for n in orders)

    def canon(x):
        if isinstance(x, (int, np.integer)):
            x = (x,)
        return tuple(int(a) % n for a, n in zip(x, orders))

    g = FiniteGroup(elements, table, kind="cyclic-product", name=name, spec=spec,
                    normalization=normalization, canon=canon)
    g.orders = orders
    return g


def direct_product(*factors: FiniteGroup, normalization: str = "probability") -> FiniteGroup:
    """Direct product of finite groups; elements are tuples of factor elements."""
    if not factors or not all(isinstance(f, FiniteGroup) for f in factors):
        raise GroupSpecError("direct-product is supported for finite factors only")
    sizes = [f.order for f in factors]
    idx = list(itertools.product(*(range(n) for n in sizes)))
    elements = [tuple(f.elements[i] for f, i in zip(factors, t)) for t in idx]
    radix = [math.prod(sizes[k + 1:]) for k in range(len(sizes))]
    I = np.array(idx, dtype=np.intp)
    n = len(idx)
    table = np.zeros((n, n), dtype=np.intp)
    for k, f in enumerate(factors):
        table += f.table[I[:, None, k], I[None, :, k]] * radix[k]
    spec = {"kind": "direct-product", "factors": [f.spec for f in factors]}
    if normalization != "probability":
        spec["measure"] = normalization
    g = FiniteGroup(elements, table, kind="direct-product", name="x".join(f.name for f in factors),
                    spec=spec, normalization=normalization,
                    canon=lambda x: tuple(f.elements[f.index(a)] for f, a in zip(factors, x)))
    g.factors = factors
    return g


def table_group(table: Sequence[Sequence[int]], labels: Sequence[Hashable] | None = None, *,
                name: str = "", normalization: str = "probability") -> FiniteGroup:
    table = np.asarray(table, dtype=np.intp)
    labels = list(range(table.shape[0])) if labels is None else list(labels)
    spec = {"kind": "finite-by-table", "table": table.tolist()}
    if name:
        spec["name"] = name
    if normalization != "probability":
        spec["measure"] = normalization
    canon = (lambda x: int(x)) if all(isinstance(l, int) for l in labels) else None
    return FiniteGroup(labels, table, name=name, spec=spec, normalization=normalization, canon=canon)


# ---------------------------------------------------------------------------
# F x Z^d with a symmetric truncation window


class WindowedAbelianGroup(Group):
    """Discrete abelian group Z_{n1} x ... x Z_{nk} x Z^d, counting measure.

    Payloads are flat integer tuples (a_1..a_k, m_1..m_d).  Quadrature nodes
    are the elements with every free coordinate in [-window, window].
    """

    kind = "discrete-abelian-with-free-part"
    discrete = True

    def __init__(self, orders: Sequence[int], free_rank: int, window: int, spec: dict | None = None):
        self.orders = tuple(int(n) for n in orders)
        self.free_rank = int(free_rank)
        self.window = int(window)
        if any(n < 1 for n in self.orders):
            raise GroupSpecError("torsion orders must be >= 1")
        if self.free_rank < 0 or self.window < 0:
            raise GroupSpecError("free_rank and window must be >= 0")
        self.compact = self.free_rank == 0
        self.order = math.prod(self.orders) if self.compact else math.inf
        tors = "x".join(f"Z{n}" for n in self.orders) or "1"
        self.name = tors + (f"xZ^{self.free_rank}" if self.free_rank else "")
        w = self.window
        ranges = [range(n) for n in self.orders] + [range(-w, w + 1)] * self.free_rank
        nodes = tuple(itertools.product(*ranges))
        self._radices = np.array(list(self.orders) + [2 * w + 1] * self.free_rank, dtype=np.intp)
        self._place = np.array([int(np.prod(self._radices[k + 1:])) for k in range(len(self._radices))],
                               dtype=np.intp)
        self._tmod = np.array(self.orders, dtype=np.intp)
        self.quadrature = QuadratureScheme(nodes, _readonly(np.ones(len(nodes))), "counting")
        self.spec = spec if spec is not None else {
            "kind": self.kind, "orders": list(self.orders), "free_rank": self.free_rank, "window": self.window,
        }

    @property
    def rank(self) -> int:
        return len(self.orders) + self.free_rank

    @property
    def identity_point(self):
        return np.zeros(self.rank, dtype=np.int64)

    def to_points(self, elements):
        P = np.array([tuple(int(a) for a in x) for x in elements], dtype=np.int64).reshape(-1, self.rank)
        return self._reduce(P)

    def _reduce(self, P):
        P = np.array(P, dtype=np.int64)
        k = len(self.orders)
        if k:
            P[:, :k] %= self._tmod
        return P

    def from_points(self, P):
        return [tuple(int(a) for a in row) for row in np.asarray(P)]

    def mul_points(self, P, Q):
        return self._reduce(np.asarray(P) + np.asarray(Q))

    def inv_points(self, P):
        return self._reduce(-np.asarray(P))

    def locate(self, P):
        P = self._reduce(P)
        k = len(self.orders)
        digits = P.copy()
        digits[:, k:] += self.window
        inside = np.all((digits[:, k:] >= 0) & (digits[:, k:] <= 2 * self.window), axis=1)
        idx = digits @ self._place
        return np.where(inside, idx, -1).astype(np.intp)


# ---------------------------------------------------------------------------
# compact connected kinds


class TorusGroup(Group):
    """T^d with angle coordinates in [0, 2pi) and a uniform trapezoid rule."""

    kind = "torus-power"
    compact = True
    discrete = False
    order = math.inf

    def __init__(self, rank: int, nodes: int, degree: int = 2, spec: dict | None = None):
        if rank < 1 or nodes < 2 or degree < 0:
            raise GroupSpecError("torus needs rank >= 1, nodes >= 2, degree >= 0")
        self.rank, self.nodes_per_dim, self.degree = int(rank), int(nodes), int(degree)
        self.name = f"T^{rank}"
        grid = TWO_PI * np.arange(nodes) / nodes
        nodes_ = tuple(itertools.product(*([tuple(float(t) for t in grid)] * rank)))
        w = np.full(len(nodes_), 1.0 / len(nodes_))
        self.quadrature = QuadratureScheme(nodes_, _readonly(w), "probability")
        self.spec = spec if spec is not None else {
            "kind": self.kind, "rank": self.rank, "torus_nodes": self.nodes_per_dim, "degree": self.degree,
        }

    @property
    def identity_point(self):
        return np.zeros(self.rank)

    @staticmethod
    def _wrap(P):
        P = np.mod(P, TWO_PI)
        return np.where(P >= TWO_PI, 0.0, P)

    def to_points(self, elements):
        return self._wrap(np.array([tuple(float(a) for a in x) for x in elements]).reshape(-1, self.rank))

    def from_points(self, P):
        return [tuple(float(a) for a in row) for row in np.asarray(P)]

    def mul_points(self, P, Q):
        return self._wrap(np.asarray(P) + np.asarray(Q))

    def inv_points(self, P):
        return self._wrap(-np.asarray(P))

    def random_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(0.0, TWO_PI, size=(count, self.rank))


def euler_to_su2(E: np.ndarray) -> np.ndarray:
    """ZYZ Euler angles (alpha, beta, gamma) -> SU(2) matrices, shape (..., 2, 2)."""
    E = np.asarray(E, dtype=float)
    a, b, g = E[..., 0], E[..., 1], E[..., 2]
    c, s = np.cos(b / 2), np.sin(b / 2)
    U = np.empty(E.shape[:-1] + (2, 2), dtype=complex)
    U[..., 0, 0] = np.exp(-0.5j * (a + g)) * c
    U[..., 0, 1] = -np.exp(-0.5j * (a - g)) * s
    U[..., 1, 0] = np.exp(0.5j * (a - g)) * s
    U[..., 1, 1] = np.exp(0.5j * (a + g)) * c
    return U


def _wrap_euler(alpha, beta, gamma):
    # alpha -> [0, 2pi) by trading 2pi into gamma, then gamma -> [0, 4pi)
    k = np.floor(alpha / TWO_PI)
    alpha = alpha - TWO_PI * k
    gamma = gamma + TWO_PI * k
    over = alpha >= TWO_PI
    alpha = np.where(over, alpha - TWO_PI, alpha)
    gamma = np.where(over, gamma + TWO_PI, gamma)
    alpha = np.where(alpha < 0, 0.0, alpha)
    gamma = np.mod(gamma, FOUR_PI)
    gamma = np.where(gamma >= FOUR_PI, 0.0, gamma)
    return alpha, beta, gamma


def su2_to_euler(U: np.ndarray) -> np.ndarray:
    """Inverse of :func:`euler_to_su2` onto the canonical chart.

    On the poles beta in {0, pi} only one angle combination is determined;
    there alpha is set to 0 and gamma carries the phase.
    """
    U = np.asarray(U)
    u00, u10 = U[..., 0, 0], U[..., 1, 0]
    c, s = np.abs(u00), np.abs(u10)
    beta = 2.0 * np.arctan2(s, c)
    S = -2.0 * np.angle(u00)
    D = 2.0 * np.angle(u10)
    alpha = 0.5 * (S + D)
    gamma = 0.5 * (S - D)
    north = s < _POLE_TOL
    south = (c < _POLE_TOL) & ~north
    alpha = np.where(north | south, 0.0, alpha)
    gamma = np.where(north, S, np.where(south, -D, gamma))
    beta = np.where(north, 0.0, np.where(south, math.pi, beta))
    alpha, beta, gamma = _wrap_euler(alpha, beta, gamma)
    return np.stack([alpha, beta, gamma], axis=-1)


def canonical_euler(E: np.ndarray) -> np.ndarray:
    """Canonical Euler triples; exact (no matrix round trip) when beta is in range."""
    E = np.array(E, dtype=float).reshape(-1, 3)
    out = np.empty_like(E)
    ok = (E[:, 1] >= 0) & (E[:, 1] <= math.pi)
    if (~ok).any():
        out[~ok] = su2_to_euler(euler_to_su2(E[~ok]))
    a, b, g = E[ok, 0], E[ok, 1], E[ok, 2]
    north, south = b == 0.0, b == math.pi
    g = np.where(north, a + g, np.where(south, g - a, g))
    a = np.where(north | south, 0.0, a)
    a, b, g = _wrap_euler(a, b, g)
    out[ok] = np.stack([a, b, g], axis=-1)
    return out


class SU2Group(Group):
    """SU(2) in ZYZ Euler angles: alpha in [0,2pi), beta in [0,pi], gamma in [0,4pi).

    Product quadrature: trapezoid in alpha and gamma, Gauss-Legendre in cos(beta).
    """

    kind = "su2"
    compact = True
    discrete = False
    order = math.inf
    name = "SU2"

    def __init__(self, nodes: Sequence[int] = (16, 16, 32), j_max: float = 2, spec: dict | None = None):
        na, nb, ng = (int(n) for n in nodes)
        if min(na, nb, ng) < 2:
            raise GroupSpecError("SU(2) node counts must be >= 2 per angle")
        if 2 * j_max != int(2 * j_max) or j_max < 0:
            raise GroupSpecError("j_max must be a non-negative half-integer")
        self.node_counts = (na, nb, ng)
        self.j_max = j_max
        alphas = TWO_PI * np.arange(na) / na
        x, wb = np.polynomial.legendre.leggauss(nb)
        betas = np.arccos(x)
        gammas = FOUR_PI * np.arange(ng) / ng
        A, B, G = np.meshgrid(alphas, betas, gammas, indexing="ij")
        pts = np.stack([A.ravel(), B.ravel(), G.ravel()], axis=-1)
        W = np.einsum("i,j,k->ijk", np.full(na, 1.0 / na), wb / 2.0, np.full(ng, 1.0 / ng)).ravel()
        nodes_ = tuple(tuple(float(v) for v in row) for row in pts)
        self.quadrature = QuadratureScheme(nodes_, _readonly(W), "probability")
        self.spec = spec if spec is not None else {"kind": "su2", "su2_nodes": [na, nb, ng], "j_max": j_max}
        self.__dict__["node_points"] = _readonly(pts)

    @property
    def identity_point(self):
        return np.zeros(3)

    def to_points(self, elements):
        return canonical_euler(np.array([tuple(float(a) for a in x) for x in elements]).reshape(-1, 3))

    def from_points(self, P):
        return [tuple(float(a) for a in row) for row in np.asarray(P).reshape(-1, 3)]

    def matrices(self, P) -> np.ndarray:
        return euler_to_su2(P)

    def mul_points(self, P, Q):
        return su2_to_euler(euler_to_su2(P) @ euler_to_su2(Q))

    def inv_points(self, P):
        P = np.asarray(P, dtype=float).reshape(-1, 3)
        # Ry(-b) = Rz(pi) Ry(b) Rz(-pi)
        return canonical_euler(np.stack([math.pi - P[:, 2], P[:, 1], -math.pi - P[:, 0]], axis=-1))

    def random_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Haar-random elements (normalized Gaussian quaternions)."""
        q = rng.standard_normal((count, 4))
        q /= np.linalg.norm(q, axis=1, keepdims=True)
        U = np.empty((count, 2, 2), dtype=complex)
        a = q[:, 0] + 1j * q[:, 1]
        b = q[:, 2] + 1j * q[:, 3]
        U[:, 0, 0], U[:, 0, 1], U[:, 1, 0], U[:, 1, 1] = a, -b.conj(), b, a.conj()
        return su2_to_euler(U)


def sample_points(G: Group, count: int, rng: np.random.Generator) -> np.ndarray:
    """Random points: Haar-random on continuous kinds, uniform over nodes otherwise."""
    if hasattr(G, "random_points"):
        return G.random_points(count, rng)
    return G.node_points[rng.integers(0, G.num_nodes, size=count)]


# ---------------------------------------------------------------------------
# group-spec documents

_CATALOG = {
    "Q8": quaternion_group,
}


def _catalog_group(name: str, normalization: str) -> FiniteGroup:
    if name in _CATALOG:
        return _CATALOG[name](normalization=normalization)
    if name[:1] == "S" and name[1:].isdigit() and 1 <= int(name[1:]) <= 6:
        return symmetric_group(int(name[1:]), normalization=normalization)
    if name[:1] == "D" and name[1:].isdigit() and 3 <= int(name[1:]) <= 32:
        return dihedral_group(int(name[1:]), normalization=normalization)
    raise GroupSpecError(f"unknown catalog group {name!r}")


def make_group(spec: dict) -> Group:
    """Build a group from a group-spec document (see schemas/group_spec.schema.json)."""
    from .documents import validate

    validate(spec, "group_spec")
    kind = spec["kind"]
    measure = spec.get("measure", "probability")
    if kind == "finite-by-table":
        if "catalog" in spec:
            g = _catalog_group(spec["catalog"], measure)
        else:
            g = table_group(spec["table"], spec.get("labels"), name=spec.get("name", ""), normalization=measure)
        g.spec = dict(spec)
        return g
    if kind == "cyclic-product":
        return cyclic_product(spec["orders"], normalization=measure)
    if kind == "discrete-abelian-with-free-part":
        return WindowedAbelianGroup(spec.get("orders", []), spec.get("free_rank", 0), spec.get("window", 5),
                                    spec=dict(spec))
    if kind == "torus-power":
        return TorusGroup(spec.get("rank", 1), spec.get("torus_nodes", 16), spec.get("degree", 2),
                          spec=dict(spec))
    if kind == "su2":
        return SU2Group(spec.get("su2_nodes", (16, 16, 32)), spec.get("j_max", 2), spec=dict(spec))
    if kind == "direct-product":
        factors = [make_group(f) for f in spec["factors"]]
        g = direct_product(*factors, normalization=measure)
        g.spec = dict(spec)
        return g
    raise GroupSpecError(f"unsupported group kind {kind!r}")
