"""Synthesis, verification, ordering, support and Wedderburn decomposition of projections.

Every projection handled here has the normal form

    p = sum_i p_i,   block of p_i at pi_i = k_i P_i,

with P_i an orthogonal projection of rank r_i on the carrier space of pi_i.
Blockwise algebra is always cross-checked against the time-domain oracle.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .fourier import FourierElement, block_distance, bnorm, convolve, inner_l2, l2norm, single, zero
from .groups import Group, sample_points
from .irreps import Dual, Irrep, dual as dual_of
from .timedomain import (SampledFunction, apply_rep, convolve_direct, inner_product, involution_direct,
                         lp_norm, random_function, sup_distance, to_time_domain)

FINITE_TOL = 1e-12
QUADRATURE_TOL = 1e-8
# relative residual of p*f*p against the line C p
SANDWICH_TOL = 1e-8
ORACLE_POINTS = 16


class NotAProjectionError(ValueError):
    pass


class InconsistentOrderError(ValueError):
    pass


def default_tol(G: Group) -> float:
    return FINITE_TOL if G.discrete else QUADRATURE_TOL


def random_frame(dim: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """dim x rank matrix with orthonormal columns (QR of a complex Gaussian)."""
    Z = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def _as_frame(frame, dim: int) -> np.ndarray:
    X = np.array(frame, dtype=complex)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] != dim:
        # a list of vectors
        X = X.T
    if X.shape[0] != dim or X.shape[1] == 0 or X.shape[1] > dim:
        raise ValueError(f"frame must be {dim} x r with 1 <= r <= {dim}")
    if np.abs(X.conj().T @ X - np.eye(X.shape[1])).max() > 1e-12:
        raise ValueError("frame is not orthonormal")
    return X


@dataclass(frozen=True, eq=False)
class FramedProjection:
    """An assembled projection together with the orthonormal frames it was built from."""

    dual: Dual
    parts: tuple  # ((label, frame d x r), ...)

    @property
    def labels(self) -> list[str]:
        return [l for l, _ in self.parts]

    @property
    def ranks(self) -> list[int]:
        return [X.shape[1] for _, X in self.parts]

    def frame(self, label: str) -> np.ndarray:
        for l, X in self.parts:
            if l == label:
                return X
        raise KeyError(label)

    @property
    def element(self) -> FourierElement:
        return FourierElement(self.dual, {l: self.dual[l].formal_dimension * (X @ X.conj().T)
                                          for l, X in self.parts})


def frame_projection(parts: Sequence[tuple[Irrep | str, object]], dual: Dual | None = None) -> FramedProjection:
    norm_parts = []
    for pi, frame in parts:
        if isinstance(pi, Irrep):
            dual = dual or dual_of(pi.group)
            if dual.by_label.get(pi.label) is not pi:
                raise ValueError(f"{pi.label} is not a catalog irrep")
            label = pi.label
        else:
            if dual is None:
                raise ValueError("pass a dual when parts are given by label")
            label = pi
        if any(label == l for l, _ in norm_parts):
            raise ValueError(f"repeated irrep {label!r}")
        norm_parts.append((label, _as_frame(frame, dual[label].dim)))
    if dual is None:
        raise ValueError("empty parts need an explicit dual")
    return FramedProjection(dual, tuple(norm_parts))


def strongly_minimal_projection(pi: Irrep, xi) -> FourierElement:
    """(k / |xi|^2) pi_{xi,xi}: the single block (k / |xi|^2) xi xi^*."""
    xi = np.asarray(xi, dtype=complex)
    n2 = float(np.vdot(xi, xi).real)
    if xi.shape != (pi.dim,):
        raise ValueError(f"xi must have length {pi.dim}")
    if n2 == 0.0:
        raise ValueError("xi must be nonzero")
    d = dual_of(pi.group)
    return single(d, pi.label, (pi.formal_dimension / n2) * np.outer(xi, xi.conj()))


def assemble_projection(parts: Sequence[tuple[Irrep | str, object]], twists=None,
                        dual: Dual | None = None) -> FourierElement:
    """p = sum_i sum_j k_i pi_{i, xi_j, xi_j}; optionally twisted by a unitary tuple."""
    if not parts:
        if dual is None:
            raise ValueError("empty parts need an explicit dual")
        return zero(dual)
    framed = frame_projection(parts, dual)
    if twists is None:
        return framed.element
    from .morphisms import act

    return act(twists, framed)


# ---------------------------------------------------------------------------
# verification


@dataclass
class ProjectionReport:
    passed: bool
    tol: float
    idempotency_defect: float
    selfadjoint_defect: float
    block_idempotency_defect: float
    block_selfadjoint_defect: float
    oracle_idempotency_defect: float
    oracle_selfadjoint_defect: float
    l1_norm: float
    l2_norm: float
    b_norm: float
    support: list
    blocks_certified: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _oracle_points(G: Group, count: int, seed: int):
    if G.discrete:
        return None
    return sample_points(G, count, np.random.default_rng(seed))


def is_projection(p: FourierElement, tol: float | None = None, oracle_points: int = ORACLE_POINTS,
                  seed: int = 0) -> ProjectionReport:
    G = p.group
    tol = default_tol(G) if tol is None else tol
    pp = convolve(p, p)
    b_idem = max((float(np.linalg.norm(pp.block(l) - A)) for l, A in p.blocks.items()), default=0.0)
    b_sa = max((float(np.linalg.norm(A.conj().T - A)) for A in p.blocks.values()), default=0.0)
    certified = {}
    for l, A in p.blocks.items():
        Q = A / p.dual[l].formal_dimension
        evals = np.linalg.eigvalsh(0.5 * (Q + Q.conj().T))
        certified[l] = {
            "rank": int((evals > 0.5).sum()),
            "projection_defect": float(max(np.linalg.norm(Q @ Q - Q), np.linalg.norm(Q - Q.conj().T))),
        }
    td = to_time_domain(p)
    pts = _oracle_points(G, oracle_points, seed)
    o_idem = sup_distance(convolve_direct(td, td), td, pts)
    o_sa = sup_distance(involution_direct(td), td, pts)
    idem, sa = max(b_idem, o_idem), max(b_sa, o_sa)
    return ProjectionReport(
        passed=bool(idem < tol and sa < tol),
        tol=tol,
        idempotency_defect=idem,
        selfadjoint_defect=sa,
        block_idempotency_defect=b_idem,
        block_selfadjoint_defect=b_sa,
        oracle_idempotency_defect=o_idem,
        oracle_selfadjoint_defect=o_sa,
        l1_norm=lp_norm(td, 1),
        l2_norm=l2norm(p),
        b_norm=bnorm(p),
        support=support(p),
        blocks_certified=certified,
    )


def leq(q: FourierElement, p: FourierElement, tol: float | None = None) -> bool:
    """q <= p iff q*p = q; the mirror condition p*q = q must agree."""
    tol = default_tol(p.group) if tol is None else tol
    left = block_distance(convolve(q, p), q) < tol
    right = block_distance(convolve(p, q), q) < tol
    if left != right:
        raise InconsistentOrderError("q*p = q and p*q = q disagree; inputs are not projections")
    return left


def support(p: FourierElement, catalog: Dual | Sequence[Irrep] | None = None, tol: float | None = None) -> list[str]:
    """Labels of catalog irreps pi with pi(p) != 0, measured by quadrature."""
    td = to_time_domain(p)
    if tol is None:
        tol = 1e-7 * max(lp_norm(td, 1), 1.0)
    catalog = p.dual if catalog is None else catalog
    return [pi.label for pi in catalog if np.linalg.norm(apply_rep(pi, td)) > tol]


def conjugate_labels(p: FourierElement) -> list[str]:
    """Catalog labels of the conjugates of the irreps carrying p, in catalog order."""
    found = {p.dual.conjugate_label(l) for l in p.blocks}
    return [l for l in p.dual.labels if l in found]


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class Decomposition:
    pieces: list  # [(label, [rank-one FourierElement, ...]), ...]
    ranks: list
    frames: dict
    orthogonality_certificate: float
    reconstruction_error: float
    pieces_strongly_minimal: list

    def all_pieces(self) -> list[FourierElement]:
        return [q for _, qs in self.pieces for q in qs]

    def framed(self, dual: Dual) -> FramedProjection:
        return FramedProjection(dual, tuple((l, X) for l, X in self.frames.items()))

    def reassemble(self) -> FourierElement:
        out = None
        for q in self.all_pieces():
            out = q if out is None else out + q
        return out


def decompose(p: FourierElement, tol: float | None = None, probe_count: int = 4,
              seed: int = 0) -> Decomposition:
    """Split p into mutually orthogonal strongly minimal pieces, one per eigenvector."""
    G = p.group
    tol = default_tol(G) if tol is None else tol
    pieces, ranks, frames = [], [], {}
    for l, A in p.blocks.items():
        pi = p.dual[l]
        Q = A / pi.formal_dimension
        herm = float(np.linalg.norm(Q - Q.conj().T))
        evals, V = np.linalg.eigh(0.5 * (Q + Q.conj().T))
        keep = evals > 0.5
        cert = float(np.abs(evals - keep).max())
        if herm > tol or cert > tol:
            raise NotAProjectionError(
                f"block {l}: eigenvalues {np.round(evals, 6).tolist()} not within {tol:g} of {{0, 1}}")
        X = V[:, keep]
        frames[l] = X
        ranks.append(int(keep.sum()))
        pieces.append((l, [strongly_minimal_projection(pi, X[:, j]) for j in range(X.shape[1])]))
    flat = [q for _, qs in pieces for q in qs]
    ortho = 0.0
    tds = [to_time_domain(q) for q in flat] if G.discrete else None
    for a in range(len(flat)):
        for b in range(len(flat)):
            if a == b:
                continue
            ortho = max(ortho, bnorm(convolve(flat[a], flat[b])))
            if tds is not None:
                z = convolve_direct(tds[a], tds[b])
                ortho = max(ortho, float(np.abs(z.node_values).max()))
    recon = sum(flat[1:], flat[0]) if flat else zero(p.dual)
    sm = [is_strongly_minimal(q, probe_count=probe_count, seed=seed + i, adversarial=False).strongly_minimal
          for i, q in enumerate(flat)] if probe_count > 0 else []
    return Decomposition(pieces, ranks, frames, ortho, block_distance(recon, p), sm)


# ---------------------------------------------------------------------------
# strong minimality


@dataclass
class MinimalityVerdict:
    strongly_minimal: bool
    structural: bool
    behavioral: bool
    witness: SampledFunction | None
    witness_label: str | None
    witness_residual: float
    probes_run: int
    alphas: list

    def to_dict(self) -> dict:
        return {
            "strongly_minimal": self.strongly_minimal,
            "structural": self.structural,
            "behavioral": self.behavioral,
            "witness": self.witness_label,
            "witness_residual": self.witness_residual,
            "probes_run": self.probes_run,
        }


def _sandwich_residual(p: FourierElement, td_p: SampledFunction, f: SampledFunction) -> tuple[complex, float, float]:
    """alpha = <p*f*p, p>/<p, p> and the residual |p*f*p - alpha p|_2 (with |p*f*p|_2)."""
    G = p.group
    if G.discrete:
        s = convolve_direct(convolve_direct(td_p, f), td_p)
        alpha = inner_product(s, td_p) / inner_product(td_p, td_p)
        r = s - alpha * td_p
        return alpha, float(np.sqrt(inner_product(r, r).real)), float(np.sqrt(inner_product(s, s).real))
    # (p*f)_i = M_i A_i with M_i = int f(z) pi_i(z)^* dz; then *p gives A_i M_i A_i / k_i
    wf = G.weights * f.node_values
    blocks = {}
    for l, A in p.blocks.items():
        pi = p.dual[l]
        M = np.einsum("n,nba->ab", wf, pi.node_matrices.conj())
        blocks[l] = A @ M @ A / pi.formal_dimension
    s = FourierElement(p.dual, blocks)
    alpha = inner_l2(s, p) / inner_l2(p, p)
    res = np.sqrt(sum(np.linalg.norm(s.block(l) - alpha * A) ** 2 / p.dual[l].formal_dimension
                      for l, A in p.blocks.items()))
    return alpha, float(res), l2norm(s)


def adversarial_probes(p: FourierElement, decomposition: Decomposition | None = None) -> list:
    """Matrix-unit pullbacks k xi_a xi_b^*: off-diagonal units first, then the diagonal pieces."""
    dec = decomposition or decompose(p, probe_count=0)
    off, diag = [], []
    for l, X in dec.frames.items():
        k = p.dual[l].formal_dimension
        r = X.shape[1]
        for a in range(r):
            for b in range(r):
                f = single(p.dual, l, k * np.outer(X[:, a], X[:, b].conj()))
                (diag if a == b else off).append((f"E[{l}]({a},{b})", to_time_domain(f)))
    return off + diag


def is_strongly_minimal(p: FourierElement, probe_count: int = 64, tol: float = SANDWICH_TOL, seed: int = 0,
                        adversarial: bool = True) -> MinimalityVerdict:
    """Structural (one block of rank one) and behavioral (p*f*p in C p for every probe) test."""
    dec = None
    structural = False
    if len(p.blocks) == 1:
        (l, A), = p.blocks.items()
        Q = A / p.dual[l].formal_dimension
        structural = int((np.linalg.eigvalsh(0.5 * (Q + Q.conj().T)) > 0.5).sum()) == 1
    probes = []
    if adversarial and not p.is_zero():
        dec = decompose(p, probe_count=0)
        probes.extend(adversarial_probes(p, dec))
    rng = np.random.default_rng(seed)
    G = p.group
    for i in range(probe_count):
        probes.append((f"random[{i}]", random_function(G, rng)))
    td_p = to_time_domain(p)
    alphas = []
    witness = None
    for label, f in probes:
        alpha, res, snorm = _sandwich_residual(p, td_p, f)
        alphas.append(alpha)
        if res > tol * max(1.0, snorm):
            witness = (label, f, res)
            break
    behavioral = witness is None and not p.is_zero()
    return MinimalityVerdict(
        strongly_minimal=structural and behavioral,
        structural=structural,
        behavioral=behavioral,
        witness=None if witness is None else witness[1],
        witness_label=None if witness is None else witness[0],
        witness_residual=0.0 if witness is None else witness[2],
        probes_run=len(alphas),
        alphas=alphas,
    )


def analytic_alpha(p: FourierElement, f: SampledFunction) -> complex:
    """alpha_f = int f conj(p) / |p|_2^2 for a strongly minimal p."""
    td = to_time_domain(p)
    return inner_product(f, td) / l2norm(p) ** 2


def minimal_in_family(p: FourierElement, family: Sequence[FourierElement], tol: float | None = None) -> bool:
    """No q in the family with 0 != q < p."""
    tol = default_tol(p.group) if tol is None else tol
    for q in family:
        if q.is_zero() or block_distance(q, p) < tol:
            continue
        if leq(q, p, tol):
            return False
    return not p.is_zero()


__all__ = [
    "FramedProjection", "ProjectionReport", "Decomposition", "MinimalityVerdict", "NotAProjectionError",
    "InconsistentOrderError", "random_frame", "frame_projection", "strongly_minimal_projection",
    "assemble_projection", "is_projection", "leq", "support", "conjugate_labels", "decompose",
    "is_strongly_minimal", "adversarial_probes", "analytic_alpha", "minimal_in_family", "default_tol",
]
