"""Finite-dimensional unitary irreps, coefficient functions and formal dimensions."""

from __future__ import annotations

import itertools
import math
from functools import cached_property, lru_cache
from typing import Any, Callable, Sequence

import numpy as np

from .groups import FiniteGroup, Group, SU2Group, TorusGroup, WindowedAbelianGroup

_QUARTER_TURNS = (1.0 + 0j, 1j, -1.0 + 0j, -1j)

# |<chi_1, chi_2>| above this means equivalent; the true value is 0 or 1
EQUIVALENCE_THRESHOLD = 0.5


class IrrepError(ValueError):
    pass


def root_of_unity(m, n: int):
    """exp(2 pi i m / n), exact at multiples of a quarter turn."""
    m = np.asarray(m) % n
    out = np.exp(2j * np.pi * m / n)
    quarter = (4 * m) % n == 0
    if np.any(quarter):
        q = ((4 * m) // n) % 4
        out = np.where(quarter, np.take(_QUARTER_TURNS, q), out)
    return out


class Irrep:
    """A unitary irrep: ``at_points`` maps an array of points to (M, d, d) matrices."""

    def __init__(self, label: str, dim: int, group: Group,
                 evaluator: Callable[[np.ndarray], np.ndarray] | None = None,
                 matrices: np.ndarray | None = None):
        if (evaluator is None) == (matrices is None):
            raise ValueError("give exactly one of evaluator / matrices")
        self.label = label
        self.dim = int(dim)
        self.group = group
        if matrices is not None:
            mats = np.array(matrices, dtype=complex)
            if mats.shape != (group.num_nodes, dim, dim):
                raise IrrepError(f"{label}: expected matrices of shape {(group.num_nodes, dim, dim)}")
            e = getattr(group, "identity_index", None)
            # pi(e) = I; remove basis-change rounding so point masses at e map exactly
            if e is not None and np.abs(mats[e] - np.eye(dim)).max() < 1e-12:
                mats[e] = np.eye(dim)
            mats.setflags(write=False)
            self.__dict__["node_matrices"] = mats
            evaluator = lambda P: mats[group.locate(P)]
        self._evaluator = evaluator

    def at_points(self, P) -> np.ndarray:
        return self._evaluator(np.asarray(P))

    def __call__(self, x: Any) -> np.ndarray:
        return self.at_points(self.group.to_points([x]))[0]

    @cached_property
    def node_matrices(self) -> np.ndarray:
        m = np.ascontiguousarray(self.at_points(self.group.node_points))
        m.setflags(write=False)
        return m

    @cached_property
    def node_characters(self) -> np.ndarray:
        return np.trace(self.node_matrices, axis1=1, axis2=2)

    @cached_property
    def formal_dimension(self) -> float:
        k, spread = measure_formal_dimension(self)
        if spread > 1e-6:
            raise IrrepError(f"{self.label}: formal dimension spread {spread:.2e}; not irreducible?")
        return k

    def __repr__(self) -> str:
        return f"Irrep({self.label!r}, dim={self.dim}, group={self.group.name})"


def _mass(group: Group) -> float:
    return float(group.weights.sum())


def character_overlap(a: Irrep, b: Irrep) -> complex:
    """Normalized character pairing int chi_a conj(chi_b) / int 1."""
    g = a.group
    return g.integrate(a.node_characters * b.node_characters.conj()) / _mass(g)


def equivalent(a: Irrep, b: Irrep) -> bool:
    return a.dim == b.dim and abs(character_overlap(a, b)) > EQUIVALENCE_THRESHOLD


def measure_formal_dimension(pi: Irrep, n_vectors: int = 5, seed: int = 0) -> tuple[float, float]:
    """k = |xi|^4 / int |pi_{xi,xi}|^2 over random unit xi; returns (mean, relative spread)."""
    rng = np.random.default_rng(seed)
    G = pi.group
    mats = pi.node_matrices
    ks = []
    for _ in range(n_vectors):
        xi = rng.standard_normal(pi.dim) + 1j * rng.standard_normal(pi.dim)
        xi /= np.linalg.norm(xi)
        coeff = np.einsum("a,nab,b->n", xi.conj(), mats, xi)
        integral = G.integrate(np.abs(coeff) ** 2).real
        if integral < 1e-14:
            raise IrrepError(f"{pi.label}: coefficient not square integrable under this quadrature")
        ks.append(1.0 / integral)
    ks = np.array(ks)
    return float(ks.mean()), float((ks.max() - ks.min()) / ks.mean())


def formal_dimension(pi: Irrep, G: Group | None = None) -> float:
    if G is not None and G is not pi.group:
        raise IrrepError("irrep belongs to a different group")
    return pi.formal_dimension


class Coefficient:
    """x -> <pi(x) xi, eta> = eta^* pi(x) xi."""

    def __init__(self, pi: Irrep, xi, eta):
        xi = np.asarray(xi, dtype=complex)
        eta = np.asarray(eta, dtype=complex)
        if xi.shape != (pi.dim,) or eta.shape != (pi.dim,):
            raise IrrepError(f"vectors must have length {pi.dim}")
        self.irrep, self.xi, self.eta = pi, xi, eta

    def at_points(self, P) -> np.ndarray:
        return np.einsum("a,nab,b->n", self.eta.conj(), self.irrep.at_points(P), self.xi)

    def __call__(self, x) -> complex:
        return complex(self.at_points(self.irrep.group.to_points([x]))[0])

    @property
    def block(self) -> np.ndarray:
        """The matrix A with <pi(x) xi, eta> = Tr(A pi(x))."""
        return np.outer(self.xi, self.eta.conj())


def coefficient(pi: Irrep, xi, eta) -> Coefficient:
    return Coefficient(pi, xi, eta)


def conjugate(pi: Irrep) -> Irrep:
    """Entrywise complex conjugate representation."""
    base = getattr(pi, "_conjugate_of", None)
    if base is not None:
        return base
    out = Irrep(f"conj({pi.label})", pi.dim, pi.group, evaluator=lambda P: pi.at_points(P).conj())
    out._conjugate_of = pi
    return out


# ---------------------------------------------------------------------------
# catalog


class Dual:
    """The catalog of pairwise inequivalent irreps of one group."""

    def __init__(self, group: Group, irreps: Sequence[Irrep]):
        self.group = group
        self.irreps = list(irreps)
        self.by_label = {pi.label: pi for pi in self.irreps}
        if len(self.by_label) != len(self.irreps):
            raise IrrepError("duplicate irrep labels")

    def __getitem__(self, label: str) -> Irrep:
        try:
            return self.by_label[label]
        except KeyError:
            raise KeyError(f"no irrep {label!r} in the catalog of {self.group.name}") from None

    def __iter__(self):
        return iter(self.irreps)

    def __len__(self):
        return len(self.irreps)

    @property
    def labels(self) -> list[str]:
        return [pi.label for pi in self.irreps]

    def match(self, pi: Irrep) -> str | None:
        for cand in self.irreps:
            if equivalent(cand, pi):
                return cand.label
        return None

    def conjugate_label(self, label: str) -> str:
        out = self.match(conjugate(self[label]))
        if out is None:
            raise IrrepError(f"conjugate of {label} is not in the catalog")
        return out


# ---------------------------------------------------------------------------
# finite groups


def permutation_matrix(x: Sequence[int]) -> np.ndarray:
    n = len(x)
    P = np.zeros((n, n))
    P[list(x), range(n)] = 1.0
    return P


def permutation_sign(x: Sequence[int]) -> int:
    inv = sum(1 for i, j in itertools.combinations(range(len(x)), 2) if x[i] > x[j])
    return -1 if inv % 2 else 1


def _helmert_basis(n: int) -> np.ndarray:
    """Orthonormal basis of the sum-zero subspace of R^n, as columns."""
    B = np.zeros((n, n - 1))
    for k in range(1, n):
        B[:k, k - 1] = 1.0
        B[k, k - 1] = -k
        B[:, k - 1] /= math.sqrt(k * (k + 1))
    return B


def _standard(x) -> np.ndarray:
    B = _helmert_basis(len(x))
    return B.T @ permutation_matrix(x) @ B


_PAIR_PARTITIONS = (frozenset({frozenset({0, 1}), frozenset({2, 3})}),
                    frozenset({frozenset({0, 2}), frozenset({1, 3})}),
                    frozenset({frozenset({0, 3}), frozenset({1, 2})}))


def _s4_to_s3(x) -> tuple:
    img = []
    for P in _PAIR_PARTITIONS:
        moved = frozenset(frozenset(x[i] for i in block) for block in P)
        img.append(_PAIR_PARTITIONS.index(moved))
    return tuple(img)


def _from_table(group: FiniteGroup, label: str, fn) -> Irrep:
    mats = np.array([np.atleast_2d(fn(x)) for x in group.elements], dtype=complex)
    return Irrep(label, mats.shape[1], group, matrices=mats)


def _symmetric_irreps(group: FiniteGroup) -> list[Irrep]:
    n = len(group.elements[0])
    triv = _from_table(group, "triv", lambda x: 1.0)
    sgn = _from_table(group, "sgn", lambda x: float(permutation_sign(x)))
    if n == 3:
        return [triv, sgn, _from_table(group, "std", _standard)]
    if n == 4:
        return [triv, sgn,
                _from_table(group, "rho2", lambda x: _standard(_s4_to_s3(x))),
                _from_table(group, "std", _standard),
                _from_table(group, "std_sgn", lambda x: permutation_sign(x) * _standard(x))]
    raise KeyError(n)


def _d4_irreps(group: FiniteGroup) -> list[Irrep]:
    verts = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}

    def rot(x):
        return np.array([verts[x[0]], verts[x[1]]], dtype=float).T

    def det(x):
        return float(round(np.linalg.det(rot(x))))

    return [
        _from_table(group, "triv", lambda x: 1.0),
        _from_table(group, "det", det),
        _from_table(group, "sgn", lambda x: float(permutation_sign(x))),
        _from_table(group, "det_sgn", lambda x: det(x) * permutation_sign(x)),
        _from_table(group, "rho2", rot),
    ]


def cyclic_characters(group: FiniteGroup) -> list[Irrep]:
    orders = group.orders
    N = math.lcm(*orders)
    A = np.array(group.elements, dtype=np.int64).reshape(group.order, len(orders))
    out = []
    for c in itertools.product(*(range(n) for n in orders)):
        m = A @ np.array([ck * (N // nk) for ck, nk in zip(c, orders)], dtype=np.int64)
        vals = root_of_unity(m, N)
        label = f"chi{c[0]}" if len(c) == 1 else "chi(" + ",".join(map(str, c)) + ")"
        out.append(Irrep(label, 1, group, matrices=vals.reshape(-1, 1, 1)))
    return out


def _product_irreps(group: FiniteGroup) -> list[Irrep]:
    duals = [dual(f) for f in group.factors]
    out = []
    for combo in itertools.product(*duals):
        mats = None
        for k, pi in enumerate(combo):
            sub = pi.node_matrices[[group.factors[k].index(x[k]) for x in group.elements]]
            mats = sub if mats is None else np.einsum("nab,ncd->nacbd", mats, sub).reshape(
                len(sub), mats.shape[1] * sub.shape[1], -1)
        label = "(" + ",".join(pi.label for pi in combo) + ")"
        out.append(Irrep(label, mats.shape[1], group, matrices=mats))
    return out


def decompose_regular(group: FiniteGroup, seed: int = 0, attempts: int = 8) -> list[Irrep]:
    """Irreps of a finite group from its regular representation.

    A random self-adjoint element of the commutant (right translations) has,
    generically, exactly the irreducible subrepresentations of the left
    regular representation as eigenspaces.
    """
    n = group.order
    T = group.table
    inv = group.inverse
    # L(g) e_h = e_{gh}; R(g) e_h = e_{h g^-1}
    L = np.zeros((n, n, n))
    R = np.zeros((n, n, n))
    for g in range(n):
        L[g, T[g], np.arange(n)] = 1.0
        R[g, T[np.arange(n), inv[g]], np.arange(n)] = 1.0
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        c = 0.5 * (c + c[inv].conj())
        H = np.einsum("g,gab->ab", c, R)
        evals, evecs = np.linalg.eigh(0.5 * (H + H.conj().T))
        cuts = np.flatnonzero(np.diff(evals) > 1e-7 * max(1.0, np.abs(evals).max())) + 1
        pieces = np.split(np.arange(n), cuts)
        reps: list[Irrep] = []
        ok = True
        for idx in pieces:
            V = evecs[:, idx]
            mats = np.einsum("ai,gab,bj->gij", V.conj(), L, V)
            cand = Irrep("_", len(idx), group, matrices=mats)
            norm = group.integrate(np.abs(cand.node_characters) ** 2).real / _mass(group)
            if abs(norm - 1.0) > 1e-8:
                ok = False
                break
            if not any(equivalent(cand, r) for r in reps):
                reps.append(cand)
        if ok and sum(r.dim ** 2 for r in reps) == n:
            break
    else:
        raise IrrepError(f"regular decomposition of {group.name} failed")
    triv = np.ones(n)
    reps.sort(key=lambda r: (r.dim, -abs(r.node_characters @ triv)))
    return [Irrep(f"rho{i}", r.dim, group, matrices=r.node_matrices) for i, r in enumerate(reps)]


_FINITE_OVERRIDES = {"S3": _symmetric_irreps, "S4": _symmetric_irreps, "D4": _d4_irreps}


# ---------------------------------------------------------------------------
# SU(2)


def spin_label(twoj: int) -> str:
    return f"D{twoj // 2}" if twoj % 2 == 0 else f"D{twoj}/2"


@lru_cache(maxsize=None)
def _wigner_terms(twoj: int):
    """Per (row, col) lists of (coefficient, cos power, sin power) for d^j(beta)."""
    f = math.factorial
    d = twoj + 1
    terms = [[[] for _ in range(d)] for _ in range(d)]
    for r in range(d):
        for c in range(d):
            tmp, tm = twoj - 2 * r, twoj - 2 * c  # 2m', 2m
            jpm_, jmm_ = (twoj + tmp) // 2, (twoj - tmp) // 2
            jpm, jmm = (twoj + tm) // 2, (twoj - tm) // 2
            diff = (tmp - tm) // 2  # m' - m
            pref = math.sqrt(f(jpm_) * f(jmm_) * f(jpm) * f(jmm))
            for s in range(0, twoj + 1):
                a1, a2, a3, a4 = jpm - s, s, diff + s, jmm_ - s
                if min(a1, a2, a3, a4) < 0:
                    continue
                coef = (-1) ** (diff + s) * pref / (f(a1) * f(a2) * f(a3) * f(a4))
                terms[r][c].append((coef, twoj - diff - 2 * s, diff + 2 * s))
    return terms


def wigner_small_d(twoj: int, beta) -> np.ndarray:
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    c, s = np.cos(beta / 2), np.sin(beta / 2)
    d = twoj + 1
    out = np.zeros(beta.shape + (d, d))
    for r, row in enumerate(_wigner_terms(twoj)):
        for col, terms in enumerate(row):
            acc = np.zeros(beta.shape)
            for coef, pc, ps in terms:
                acc = acc + coef * c ** pc * s ** ps
            out[..., r, col] = acc
    return out


def wigner_D(twoj: int, E) -> np.ndarray:
    """D^j(alpha, beta, gamma)_{m'm} = e^{-i m' alpha} d^j_{m'm}(beta) e^{-i m gamma}, m from j down to -j."""
    E = np.asarray(E, dtype=float).reshape(-1, 3)
    m = (twoj - 2 * np.arange(twoj + 1)) / 2.0
    left = np.exp(-1j * E[:, 0:1] * m)
    right = np.exp(-1j * E[:, 2:3] * m)
    return left[:, :, None] * wigner_small_d(twoj, E[:, 1]) * right[:, None, :]


def su2_irreps(group: SU2Group, j_max: float | None = None) -> list[Irrep]:
    j_max = group.j_max if j_max is None else j_max
    return [Irrep(spin_label(tj), tj + 1, group, evaluator=lambda P, tj=tj: wigner_D(tj, P))
            for tj in range(int(round(2 * j_max)) + 1)]


def torus_characters(group: TorusGroup, degree: int | None = None) -> list[Irrep]:
    degree = group.degree if degree is None else degree
    out = []
    for k in itertools.product(range(-degree, degree + 1), repeat=group.rank):
        kk = np.array(k, dtype=float)
        label = "e(" + ",".join(map(str, k)) + ")"
        out.append(Irrep(label, 1, group,
                         evaluator=lambda P, kk=kk: np.exp(1j * (np.asarray(P).reshape(-1, len(kk)) @ kk))
                         .reshape(-1, 1, 1)))
    return out


def irreps_of(G: Group) -> list[Irrep]:
    """The finite-dimensional catalog of pairwise inequivalent irreps of G."""
    return list(dual(G).irreps)


_DUALS: dict[int, tuple[Group, Dual]] = {}


def dual(G: Group) -> Dual:
    hit = _DUALS.get(id(G))
    if hit is not None and hit[0] is G:
        return hit[1]
    out = Dual(G, _build_irreps(G))
    _DUALS[id(G)] = (G, out)
    return out


def _build_irreps(G: Group) -> list[Irrep]:
    if isinstance(G, SU2Group):
        return su2_irreps(G)
    if isinstance(G, TorusGroup):
        return torus_characters(G)
    if isinstance(G, WindowedAbelianGroup):
        raise IrrepError("discrete groups with a free part have no finite irrep catalog; "
                         "use the abelian duality module")
    if isinstance(G, FiniteGroup):
        if G.kind == "cyclic-product":
            return cyclic_characters(G)
        if G.kind == "direct-product":
            return _product_irreps(G)
        override = _FINITE_OVERRIDES.get(G.name)
        if override is not None:
            return override(G)
        return decompose_regular(G)
    raise IrrepError(f"no dual implemented for {G.kind}")


# ---------------------------------------------------------------------------
# generator images


def extend_from_generators(group: FiniteGroup, generators: Sequence[Any], images: Sequence[np.ndarray],
                           label: str = "rep", tol: float = 1e-9) -> Irrep:
    """Extend generator images to a representation by breadth-first search, then check it."""
    gens = [group.index(g) for g in generators]
    imgs = [np.asarray(M, dtype=complex) for M in images]
    if len(gens) != len(imgs) or not imgs:
        raise IrrepError("need one image per generator")
    d = imgs[0].shape[0]
    mats: dict[int, np.ndarray] = {group.identity_index: np.eye(d, dtype=complex)}
    frontier = [group.identity_index]
    while frontier:
        nxt = []
        for x in frontier:
            for g, M in zip(gens, imgs):
                y = int(group.table[g, x])
                if y not in mats:
                    mats[y] = M @ mats[x]
                    nxt.append(y)
        frontier = nxt
    if len(mats) != group.order:
        raise IrrepError("generators do not generate the group")
    arr = np.array([mats[i] for i in range(group.order)])
    prod = np.einsum("xab,ybc->xyac", arr, arr)
    err = np.abs(prod - arr[group.table]).max()
    if err > tol:
        raise IrrepError(f"generator images do not define a homomorphism (defect {err:.2e})")
    return Irrep(label, d, group, matrices=arr)


def load_irrep_catalog(doc: dict, group: FiniteGroup, key: str | None = None) -> Dual:
    """Irreps from an irrep-catalog document (group label -> generators and images)."""
    from .documents import decode_matrix, validate

    validate(doc, "irrep_catalog")
    key = key or group.name
    if key not in doc:
        raise IrrepError(f"catalog has no entry for {key!r}")
    entry = doc[key]
    gens = [tuple(g) if isinstance(g, list) else g for g in entry["generators"]]
    out = []
    for item in entry["irreps"]:
        imgs = [decode_matrix(M) for M in item["matrices"]]
        pi = extend_from_generators(group, gens, imgs, label=item["label"])
        if pi.dim != item["dim"]:
            raise IrrepError(f"{item['label']}: declared dim {item['dim']} != {pi.dim}")
        out.append(pi)
    return Dual(group, out)
