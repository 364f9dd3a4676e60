"""Finite block families f(x) = sum_i Tr(A_i pi_i(x)) and their *-algebra.

A coefficient x -> <pi(x) xi, eta> is the block A = xi eta^*.  With this
pairing, convolution acts blockwise as C_i = B_i A_i / k_i (f has blocks A,
g has blocks B) and the involution is A_i -> A_i^*.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .documents import decode_matrix, encode_matrix, validate
from .irreps import Dual, IrrepError, dual as dual_of

# blocks with trace norm below this are dropped
PRUNE_TOL = 1e-13


def trace_norm(A: np.ndarray) -> float:
    return float(np.linalg.svd(A, compute_uv=False).sum())


class FourierElement:
    """Immutable finite block family over the irrep catalog of one group."""

    __slots__ = ("dual", "blocks")

    def __init__(self, dual: Dual, blocks: Mapping[str, np.ndarray] | None = None):
        clean = {}
        for label, A in (blocks or {}).items():
            pi = dual[label]
            A = np.array(A, dtype=complex)
            if A.shape != (pi.dim, pi.dim):
                raise ValueError(f"block {label!r} must be {pi.dim}x{pi.dim}, got {A.shape}")
            if trace_norm(A) < PRUNE_TOL:
                continue
            A.setflags(write=False)
            clean[label] = A
        order = {lab: i for i, lab in enumerate(dual.labels)}
        object.__setattr__(self, "dual", dual)
        object.__setattr__(self, "blocks", dict(sorted(clean.items(), key=lambda kv: order[kv[0]])))

    def __setattr__(self, name, value):
        raise AttributeError("FourierElement is immutable")

    @property
    def group(self):
        return self.dual.group

    @property
    def labels(self) -> list[str]:
        return list(self.blocks)

    def block(self, label: str) -> np.ndarray:
        if label in self.blocks:
            return self.blocks[label]
        d = self.dual[label].dim
        return np.zeros((d, d), dtype=complex)

    def is_zero(self) -> bool:
        return not self.blocks

    def _check(self, other: "FourierElement"):
        if not isinstance(other, FourierElement):
            return NotImplemented
        if other.dual is not self.dual:
            raise ValueError("elements live over different groups")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        labels = set(self.blocks) | set(other.blocks)
        return FourierElement(self.dual, {l: self.block(l) + other.block(l) for l in labels})

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        labels = set(self.blocks) | set(other.blocks)
        return FourierElement(self.dual, {l: self.block(l) - other.block(l) for l in labels})

    def __mul__(self, c):
        if not np.isscalar(c):
            return NotImplemented
        return FourierElement(self.dual, {l: c * A for l, A in self.blocks.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return -1 * self

    def at_points(self, P) -> np.ndarray:
        P = np.asarray(P)
        out = np.zeros(len(P), dtype=complex)
        for label, A in self.blocks.items():
            out += np.einsum("ab,nba->n", A, self.dual[label].at_points(P))
        return out

    def __call__(self, x) -> complex:
        return complex(self.at_points(self.group.to_points([x]))[0])

    def __repr__(self) -> str:
        parts = ", ".join(f"{l}:{A.shape[0]}x{A.shape[0]}" for l, A in self.blocks.items())
        return f"FourierElement({self.group.name}; {parts or '0'})"


def zero(dual: Dual) -> FourierElement:
    return FourierElement(dual, {})


def single(dual: Dual, label: str, A: np.ndarray) -> FourierElement:
    return FourierElement(dual, {label: A})


def evaluate(f: FourierElement, x) -> complex:
    """sum_i Tr(A_i pi_i(x))."""
    return f(x)


def convolve(f: FourierElement, g: FourierElement) -> FourierElement:
    f._check(g)
    out = {}
    for label in f.blocks.keys() & g.blocks.keys():
        k = f.dual[label].formal_dimension
        out[label] = g.blocks[label] @ f.blocks[label] / k
    return FourierElement(f.dual, out)


def involution(f: FourierElement) -> FourierElement:
    return FourierElement(f.dual, {l: A.conj().T for l, A in f.blocks.items()})


def bnorm(f: FourierElement) -> float:
    """Fourier-Stieltjes norm: sum of trace norms of the blocks."""
    return float(sum(trace_norm(A) for A in f.blocks.values()))


def l2norm(f: FourierElement) -> float:
    return float(np.sqrt(sum(np.linalg.norm(A) ** 2 / f.dual[l].formal_dimension
                             for l, A in f.blocks.items())))


def inner_l2(f: FourierElement, g: FourierElement) -> complex:
    """<f, g>_2 = int f conj(g) = sum_i Tr(A_i B_i^*) / k_i."""
    f._check(g)
    return complex(sum(np.trace(f.blocks[l] @ g.blocks[l].conj().T) / f.dual[l].formal_dimension
                       for l in f.blocks.keys() & g.blocks.keys()))


def block_distance(f: FourierElement, g: FourierElement) -> float:
    """sum_i |A_i - B_i|_F computed on raw blocks (no pruning)."""
    f._check(g)
    return float(sum(np.linalg.norm(f.block(l) - g.block(l)) for l in set(f.blocks) | set(g.blocks)))


def sigma_min_formal_dimension(*elements: FourierElement) -> float:
    """k_sigma: the smallest formal dimension among the blocks involved."""
    labels = set().union(*(e.blocks for e in elements))
    if not labels:
        return np.inf
    d = elements[0].dual
    return min(d[l].formal_dimension for l in labels)


def random_element(dual: Dual, rng: np.random.Generator, labels: Iterable[str] | None = None,
                   max_blocks: int | None = None) -> FourierElement:
    """Complex Gaussian blocks on a random subset of labels."""
    labels = list(dual.labels if labels is None else labels)
    if max_blocks is not None and len(labels) > max_blocks:
        count = int(rng.integers(1, max_blocks + 1))
        labels = [labels[i] for i in sorted(rng.choice(len(labels), count, replace=False))]
    blocks = {}
    for l in labels:
        d = dual[l].dim
        blocks[l] = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return FourierElement(dual, blocks)


def to_json(f: FourierElement) -> dict:
    return {
        "group": f.group.spec,
        "blocks": [{"irrep": l, "matrix": encode_matrix(A)} for l, A in f.blocks.items()],
    }


def from_json(doc: dict, dual: Dual | None = None) -> FourierElement:
    from .groups import make_group

    validate(doc, "fourier_element")
    if dual is None:
        dual = dual_of(make_group(doc["group"]))
    blocks = {}
    for item in doc["blocks"]:
        if item["irrep"] in blocks:
            raise ValueError(f"repeated irrep {item['irrep']!r}")
        try:
            dual[item["irrep"]]
        except KeyError as exc:
            raise IrrepError(str(exc)) from None
        blocks[item["irrep"]] = decode_matrix(item["matrix"])
    return FourierElement(dual, blocks)
