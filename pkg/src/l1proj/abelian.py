"""Projections of l1(F x Z^d) indexed by clopen subsets of the dual F^ x T^d.

A clopen subset of F^ x T^d is a union of whole torus fibres {chi} x T^d, so
it is named by a subset S of F^.  Its indicator transforms back to

    p(a, n) = [n = 0] (1/|F|) sum_{chi in S} chi(a),

a finitely supported function.  All certificates here are computed by direct
convolution on a window of Z^d large enough to make every product exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .documents import validate
from .groups import WindowedAbelianGroup
from .irreps import root_of_unity
from .timedomain import SampledFunction, convolve_direct, inner_product, involution_direct, point_mass

MAX_DUAL = 16
# probes live on |n| <= PROBE_RADIUS; products of p, f, p then stay inside the window
PROBE_RADIUS = 2
WINDOW = 2 * PROBE_RADIUS + 1
EXACT_TOL = 1e-12
SANDWICH_TOL = 1e-10
RANDOM_PROBES = 16


class ClopenError(ValueError):
    pass


def abelian_group(orders: Sequence[int], free_rank: int, window: int = WINDOW) -> WindowedAbelianGroup:
    return WindowedAbelianGroup(orders, free_rank, window)


def abelian_group_from_json(doc: dict, window: int = WINDOW) -> WindowedAbelianGroup:
    """{"torsion_orders": [n1, ...], "free_rank": d}."""
    validate(doc, "abelian_group")
    return abelian_group(doc["torsion_orders"], doc["free_rank"], window)


def dual_characters(orders: Sequence[int]) -> list[tuple]:
    return list(itertools.product(*(range(n) for n in orders)))


@dataclass(frozen=True)
class ClopenDualSet:
    """S subset of F^; stands for the clopen set union_{chi in S} {chi} x T^d."""

    orders: tuple
    free_rank: int
    chi_set: frozenset

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        chis = frozenset(tuple(int(c) for c in chi) for chi in self.chi_set)
        for chi in chis:
            if len(chi) != len(self.orders) or any(not 0 <= c < n for c, n in zip(chi, self.orders)):
                raise ClopenError(f"character {chi} out of range for orders {self.orders}")
        object.__setattr__(self, "chi_set", chis)

    @property
    def sorted_chis(self) -> list[tuple]:
        return sorted(self.chi_set)

    def label(self) -> str:
        if not self.chi_set:
            return "{}"
        return "{" + ", ".join("(" + ",".join(map(str, c)) + ")" for c in self.sorted_chis) + "}"


def character_values(orders: Sequence[int], chi: tuple, torsion: np.ndarray) -> np.ndarray:
    """chi(a) = prod_k exp(2 pi i chi_k a_k / n_k) for rows a of ``torsion``."""
    out = np.ones(len(torsion), dtype=complex)
    for k, n in enumerate(orders):
        out = out * root_of_unity(chi[k] * torsion[:, k], n)
    return out


def projection_from_clopen(S: ClopenDualSet, group: WindowedAbelianGroup | None = None) -> SampledFunction:
    G = group or abelian_group(S.orders, S.free_rank)
    if G.orders != S.orders or G.free_rank != S.free_rank:
        raise ClopenError("clopen set and group disagree")
    P = G.node_points
    k = len(S.orders)
    on_torsion = np.all(P[:, k:] == 0, axis=1)
    vals = np.zeros(G.num_nodes, dtype=complex)
    for chi in S.sorted_chis:
        vals += character_values(S.orders, chi, P[:, :k])
    vals = np.where(on_torsion, vals / math.prod(S.orders), 0.0)
    return SampledFunction(G, values=vals)


def sup_defect(f: SampledFunction, g: SampledFunction) -> float:
    return float(np.abs(f.node_values - g.node_values).max(initial=0.0))


def projection_defects(p: SampledFunction) -> tuple[float, float]:
    """(|p*p - p|_inf, |p^* - p|_inf) by direct convolution."""
    return sup_defect(convolve_direct(p, p), p), sup_defect(involution_direct(p), p)


@dataclass
class ClopenFamily:
    group: WindowedAbelianGroup
    members: list  # [(ClopenDualSet, SampledFunction), ...]
    order: np.ndarray  # order[i, j] = members[i] <= members[j]
    idempotency_defect: float
    selfadjoint_defect: float
    order_defect: float

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def index(self, chi_set) -> int:
        target = frozenset(tuple(c) for c in chi_set)
        for i, (S, _) in enumerate(self.members):
            if S.chi_set == target:
                return i
        raise KeyError(chi_set)


def enumerate_projections(orders: Sequence[int], free_rank: int, window: int = WINDOW) -> ClopenFamily:
    """All 2^|F^| clopen projections, each certified and pairwise ordered by exact convolution."""
    chis = dual_characters(orders)
    if len(chis) > MAX_DUAL:
        raise ClopenError(f"|F^| = {len(chis)} exceeds {MAX_DUAL}")
    G = abelian_group(orders, free_rank, window)
    members = []
    for r in range(len(chis) + 1):
        for subset in itertools.combinations(chis, r):
            S = ClopenDualSet(tuple(orders), free_rank, frozenset(subset))
            members.append((S, projection_from_clopen(S, G)))
    idem = sa = 0.0
    for _, p in members:
        a, b = projection_defects(p)
        idem, sa = max(idem, a), max(sa, b)
    n = len(members)
    order = np.zeros((n, n), dtype=bool)
    order_defect = 0.0
    for i, (_, q) in enumerate(members):
        for j, (_, p) in enumerate(members):
            d = sup_defect(convolve_direct(q, p), q)
            order[i, j] = d < EXACT_TOL
            # a decided relation is either exact or far from it
            order_defect = max(order_defect, d if order[i, j] else 0.0)
    return ClopenFamily(G, members, order, idem, sa, order_defect)


def is_zero(f: SampledFunction) -> bool:
    return not np.any(np.abs(f.node_values) > EXACT_TOL)


def _probe_sequence(G: WindowedAbelianGroup, seed: int, random_probes: int):
    """Point masses at (a, n) with |n| <= PROBE_RADIUS, n ordered 0, 1, -1, 2, -2, ..., then random probes."""
    steps = [0]
    for r in range(1, PROBE_RADIUS + 1):
        steps += [r, -r]
    torsion = dual_characters(G.orders)  # same index set as F itself
    if G.free_rank:
        shifts = [s for s in itertools.product(steps, repeat=G.free_rank)]
        shifts.sort(key=lambda s: [steps.index(x) for x in s][::-1])
    else:
        shifts = [()]
    for s in shifts:
        for a in torsion:
            x = tuple(a) + tuple(s)
            yield "delta(" + ",".join(map(str, x)) + ")", point_mass(G, x)
    rng = np.random.default_rng(seed)
    k = len(G.orders)
    inner = np.flatnonzero(np.all(np.abs(G.node_points[:, k:]) <= PROBE_RADIUS, axis=1))
    for i in range(random_probes):
        v = np.zeros(G.num_nodes, dtype=complex)
        v[inner] = (rng.standard_normal(len(inner)) + 1j * rng.standard_normal(len(inner))) / np.sqrt(2)
        yield f"random[{i}]", SampledFunction(G, values=v)


@dataclass
class SandwichProbe:
    label: str
    alpha: complex
    residual: float


@dataclass
class MinimalityReport:
    chi_set: str
    nonzero: bool
    minimal: bool
    strongly_minimal: bool
    witness: str | None
    witness_residual: float
    dominates: list = field(default_factory=list)
    probes_run: int = 0
    scope: str = "minimality is certified within the clopen family only"

    def to_dict(self) -> dict:
        return {
            "chi_set": self.chi_set,
            "nonzero": self.nonzero,
            "minimal": self.minimal,
            "strongly_minimal": self.strongly_minimal,
            "witness": self.witness,
            "witness_residual": self.witness_residual,
            "dominates": self.dominates,
            "probes_run": self.probes_run,
            "scope": self.scope,
        }


def sandwich(p: SampledFunction, f: SampledFunction) -> SandwichProbe:
    s = convolve_direct(convolve_direct(p, f), p)
    pp = inner_product(p, p).real
    alpha = inner_product(s, p) / pp
    r = s - alpha * p
    return SandwichProbe("", alpha, float(np.sqrt(inner_product(r, r).real)))


def minimality_report(index: int, family: ClopenFamily, seed: int = 0,
                      random_probes: int = RANDOM_PROBES) -> MinimalityReport:
    S, p = family.members[index]
    nonzero = not is_zero(p)
    below = [j for j in range(len(family)) if family.order[j, index] and j != index
             and not is_zero(family.members[j][1])]
    minimal = nonzero and not below
    witness, res, count = None, 0.0, 0
    if nonzero:
        for label, f in _probe_sequence(family.group, seed, random_probes):
            probe = sandwich(p, f)
            count += 1
            if probe.residual > SANDWICH_TOL:
                witness, res = label, probe.residual
                break
    return MinimalityReport(
        chi_set=S.label(),
        nonzero=nonzero,
        minimal=minimal,
        strongly_minimal=nonzero and witness is None,
        witness=witness,
        witness_residual=res,
        dominates=[family.members[j][0].label() for j in below],
        probes_run=count,
    )


def example_2_2(seed: int = 0) -> dict:
    """Z2 x Z: four clopen projections; the singletons are minimal but not strongly minimal."""
    fam = enumerate_projections((2,), 1)
    G = fam.group
    reports = [minimality_report(i, fam, seed) for i in range(len(fam))]
    triv = fam.members[fam.index({(0,)})][1]
    haar = 0.5 * (point_mass(G, (0, 0)) + point_mass(G, (1, 0)))
    singles = [r for r in reports if r.chi_set.count("(") == 1]
    verdict = (len(fam) == 4 and all(r.minimal and not r.strongly_minimal and r.witness is not None
                                     and r.witness.startswith("delta") for r in singles)
               and fam.idempotency_defect == 0.0 and fam.selfadjoint_defect == 0.0)
    return {
        "group": {"torsion_orders": [2], "free_rank": 1},
        "window": G.window,
        "projection_count": len(fam),
        "idempotency_defect": fam.idempotency_defect,
        "selfadjoint_defect": fam.selfadjoint_defect,
        "order_defect": fam.order_defect,
        "haar_subgroup_projection": {
            "chi_set": fam.members[fam.index({(0,)})][0].label(),
            "equals_half_delta_00_plus_delta_10": sup_defect(triv, haar) == 0.0,
        },
        "order": fam.order.astype(int).tolist(),
        "members": [r.to_dict() for r in reports],
        "minimal": all(r.minimal for r in singles),
        "strongly_minimal": any(r.strongly_minimal for r in singles),
        "passed": bool(verdict),
    }
