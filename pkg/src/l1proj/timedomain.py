"""Brute-force oracle: sampled functions and direct Haar-quadrature operations."""

from __future__ import annotations

from functools import cached_property
from typing import Callable

import numpy as np

from .fourier import FourierElement
from .groups import Group
from .irreps import Irrep


class SampledFunction:
    """A function on G known either as a node table or as a vectorized closed form.

    Discrete kinds: ``values`` are exact on the node set and zero elsewhere.
    Continuous kinds: ``func`` evaluates anywhere; a node table alone can be
    integrated but not translated.
    """

    def __init__(self, group: Group, values=None, func: Callable[[np.ndarray], np.ndarray] | None = None,
                 support_hint=None):
        if values is None and func is None:
            raise ValueError("need values or func")
        self.group = group
        self.func = func
        self.support_hint = support_hint
        if values is not None:
            values = np.array(values, dtype=complex)
            if values.shape != (group.num_nodes,):
                raise ValueError(f"expected {group.num_nodes} node values, got {values.shape}")
            values.setflags(write=False)
            self.__dict__["node_values"] = values

    @property
    def closed_form(self) -> bool:
        return self.func is not None or self.group.discrete

    @cached_property
    def node_values(self) -> np.ndarray:
        v = np.asarray(self.func(self.group.node_points), dtype=complex)
        v.setflags(write=False)
        return v

    def at_points(self, P) -> np.ndarray:
        P = np.asarray(P)
        if self.func is not None:
            return np.asarray(self.func(P), dtype=complex)
        if not self.group.discrete:
            raise ValueError("node-table function on a continuous group cannot be evaluated off the nodes")
        idx = self.group.locate(P)
        padded = np.append(self.node_values, 0.0)
        return padded[idx]

    def __call__(self, x) -> complex:
        return complex(self.at_points(self.group.to_points([x]))[0])

    def _binary(self, other, op):
        if isinstance(other, SampledFunction):
            if other.group is not self.group:
                raise ValueError("functions live on different groups")
            if self.func is not None and other.func is not None:
                f, g = self.func, other.func
                return SampledFunction(self.group, func=lambda P: op(f(P), g(P)))
            return SampledFunction(self.group, values=op(self.node_values, other.node_values))
        if np.isscalar(other):
            if self.func is not None:
                f = self.func
                return SampledFunction(self.group, func=lambda P: op(f(P), other))
            return SampledFunction(self.group, values=op(self.node_values, other))
        return NotImplemented

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, c):
        if not np.isscalar(c):
            return NotImplemented
        return self._binary(c, np.multiply)

    __rmul__ = __mul__


def to_time_domain(f: FourierElement) -> SampledFunction:
    G = f.group
    if G.discrete:
        return SampledFunction(G, values=f.at_points(G.node_points))
    return SampledFunction(G, func=f.at_points)


def point_mass(G: Group, x) -> SampledFunction:
    """The unit mass at x: integrates to 1 against the Haar weights."""
    if not G.discrete:
        raise ValueError("point masses are not functions on continuous groups")
    i = int(G.locate(G.to_points([x]))[0])
    if i < 0:
        raise ValueError(f"{x!r} lies outside the node window")
    v = np.zeros(G.num_nodes, dtype=complex)
    v[i] = 1.0 / G.weights[i]
    return SampledFunction(G, values=v, support_hint=frozenset({G.canonical(x)}))


def random_function(G: Group, rng: np.random.Generator, support=None) -> SampledFunction:
    """Independent standard complex Gaussian node values (optionally on a node subset)."""
    n = G.num_nodes
    v = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    if support is not None:
        mask = np.zeros(n, dtype=bool)
        mask[np.asarray(support, dtype=np.intp)] = True
        v = np.where(mask, v, 0.0)
    return SampledFunction(G, values=v)


def _same_group(f: SampledFunction, g: SampledFunction) -> Group:
    if f.group is not g.group:
        raise ValueError("functions live on different groups")
    return f.group


def convolve_direct(f: SampledFunction, g: SampledFunction) -> SampledFunction:
    """(f*g)(x) = int f(y) g(y^-1 x) dy by Haar quadrature.

    Discrete kinds: the full node table, exact.  Continuous kinds: a lazy
    closed form, evaluated on request.
    """
    G = _same_group(f, g)
    w = G.weights
    if G.discrete:
        T = G.left_division_table
        fv = f.node_values
        gpad = np.append(g.node_values, 0.0)
        out = np.zeros(G.num_nodes, dtype=complex)
        # fixed summation order over y
        for y in np.flatnonzero(fv):
            out += (w[y] * fv[y]) * gpad[T[y]]
        return SampledFunction(G, values=out)
    if f.func is None or g.func is None:
        raise ValueError("continuous-group convolution needs closed-form operands")
    Y = G.node_points
    Yinv = G.inv_points(Y)
    wf = w * f.node_values
    gfunc = g.func

    def func(P):
        P = np.asarray(P).reshape(len(P), -1)
        out = np.empty(len(P), dtype=complex)
        for i, x in enumerate(P):
            pts = G.mul_points(Yinv, np.broadcast_to(x, Yinv.shape))
            out[i] = np.sum(wf * gfunc(pts))
        return out

    return SampledFunction(G, func=func)


def involution_direct(f: SampledFunction) -> SampledFunction:
    """x -> conj(f(x^-1))."""
    G = f.group
    if G.discrete:
        inv = G.node_inverse
        if (inv < 0).any():
            raise ValueError("node set is not closed under inversion")
        return SampledFunction(G, values=f.node_values[inv].conj())
    if f.func is None:
        raise ValueError("involution on a continuous group needs a closed form")
    fn = f.func
    return SampledFunction(G, func=lambda P: np.conj(fn(G.inv_points(P))))


def apply_rep(pi: Irrep, f: SampledFunction) -> np.ndarray:
    """pi(f) = int f(x) pi(x) dx."""
    if pi.group is not f.group:
        raise ValueError("irrep and function live on different groups")
    G = f.group
    return np.einsum("n,nab->ab", G.weights * f.node_values, pi.node_matrices)


def lp_norm(f: SampledFunction, exponent: float = 1.0) -> float:
    if exponent < 1:
        raise ValueError("exponent must be >= 1")
    a = np.abs(f.node_values)
    if np.isinf(exponent):
        return float(a.max(initial=0.0))
    return float(f.group.integrate(a ** exponent).real ** (1.0 / exponent))


def inner_product(f: SampledFunction, g: SampledFunction) -> complex:
    """<f, g>_2 = int f conj(g)."""
    G = _same_group(f, g)
    return G.integrate(f.node_values * np.conj(g.node_values))


def sup_distance(f: SampledFunction, g: SampledFunction, points=None) -> float:
    """max |f - g| over the nodes (discrete) or over the given points."""
    _same_group(f, g)
    if points is None:
        return float(np.abs(f.node_values - g.node_values).max(initial=0.0))
    return float(np.abs(f.at_points(points) - g.at_points(points)).max(initial=0.0))
