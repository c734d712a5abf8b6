"""Katalan functions K(Psi; M; gamma) and closed k-Schur Katalan functions.

A Katalan function is expanded as

    prod_{z in M} (1 - L_z)  prod_{(i,j) not in Psi} (1 - R_ij)  k_gamma

with the raising/lowering operators acting on index vectors only.  The
index-vector bookkeeping is a sparse ``dict`` that is merged after every
factor; the last step turns each surviving index vector into an HPoly.

Two equivalent routes are provided.  ``method="operator"`` applies every
factor literally.  The default ``method="superscript"`` uses
``(1 - L_z) k_m^{(r)} = k_m^{(r-1)}`` to fold all lowering factors into the
superscripts of ``k_gamma``, which leaves only the raising factors to
enumerate.
"""

from __future__ import annotations

import bisect
import functools
import itertools
import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from . import cache as _cache
from .rootideal import RootIdeal, all_root_ideals, delta_k, second_components
from .symfunc import ONE, ZERO, HPoly, series_coeff, k_inhom_shifted

IndexVector = tuple[int, ...]


@dataclass(frozen=True)
class KatalanSpec:
    """The triple (Psi, M, gamma); ``mults[a-1]`` is the multiplicity of a in M."""

    psi: RootIdeal
    mults: tuple[int, ...]
    gamma: IndexVector

    def __post_init__(self):
        ell = self.psi.ell
        object.__setattr__(self, "mults", tuple(self.mults))
        object.__setattr__(self, "gamma", tuple(self.gamma))
        if len(self.mults) != ell or len(self.gamma) != ell:
            raise ValueError(f"lengths disagree: l={ell}, M has {len(self.mults)}, gamma has {len(self.gamma)}")
        if any(m < 0 for m in self.mults):
            raise ValueError("negative multiplicity in M")

    @property
    def ell(self) -> int:
        return self.psi.ell

    @classmethod
    def make(cls, psi: RootIdeal, multiset: Iterable[int], gamma: Sequence[int]) -> "KatalanSpec":
        mults = [0] * psi.ell
        for a in multiset:
            if not 1 <= a <= psi.ell:
                raise ValueError(f"M element {a} outside [1, {psi.ell}]")
            mults[a - 1] += 1
        return cls(psi, tuple(mults), tuple(gamma))

    def with_gamma(self, gamma: Sequence[int]) -> "KatalanSpec":
        return KatalanSpec(self.psi, self.mults, tuple(gamma))

    def with_psi(self, psi: RootIdeal) -> "KatalanSpec":
        return KatalanSpec(psi, self.mults, self.gamma)

    def with_mult(self, a: int, delta: int) -> "KatalanSpec":
        mults = list(self.mults)
        mults[a - 1] += delta
        return KatalanSpec(self.psi, tuple(mults), self.gamma)

    def __str__(self) -> str:
        return f"K({self.psi}; {list(self.mults)}; {list(self.gamma)})"


def unit(ell: int, i: int) -> IndexVector:
    return tuple(1 if x == i else 0 for x in range(1, ell + 1))


def vadd(a: Sequence[int], *rest: Sequence[int]) -> IndexVector:
    out = list(a)
    for b in rest:
        for x, v in enumerate(b):
            out[x] += v
    return tuple(out)


def vsub(a: Sequence[int], b: Sequence[int]) -> IndexVector:
    return tuple(x - y for x, y in zip(a, b))


# --------------------------------------------------------------------------
# index-vector expansion


def _apply_raising(states: dict[IndexVector, int], roots: Sequence[tuple[int, int]], ell: int,
                   prune: bool = True) -> dict[IndexVector, int]:
    # Entry x can still grow by at most the number of remaining factors R_{x,*};
    # a state below -(that count) is provably annihilated.  Lowering factors
    # only decrease entries, so they never rescue a state.
    raises = [0] * (ell + 1)
    for i, _ in roots:
        raises[i] += 1
    for i, j in roots:
        raises[i] -= 1
        nxt: dict[IndexVector, int] = {}
        get = nxt.get
        for g, c in states.items():
            nxt[g] = get(g, 0) + c
            lst = list(g)
            lst[i - 1] += 1
            lst[j - 1] -= 1
            g2 = tuple(lst)
            nxt[g2] = get(g2, 0) - c
        states = {g: c for g, c in nxt.items()
                  if c and (not prune or all(g[x] + raises[x + 1] >= 0 for x in range(ell)))}
    return states


def _apply_lowering(states: dict[IndexVector, int], mults: Sequence[int], ell: int) -> dict[IndexVector, int]:
    for z, m in enumerate(mults, start=1):
        for _ in range(m):
            nxt: dict[IndexVector, int] = {}
            get = nxt.get
            for g, c in states.items():
                nxt[g] = get(g, 0) + c
                lst = list(g)
                lst[z - 1] -= 1
                g2 = tuple(lst)
                nxt[g2] = get(g2, 0) - c
            states = {g: c for g, c in nxt.items() if c}
    return states


def _sum_k_vectors(states: dict[IndexVector, int], supers: Sequence[int]) -> HPoly:
    """sum_gamma c_gamma prod_x k^{(supers[x])}_{gamma_x}, factored like a trie."""
    items = [(g, c) for g, c in states.items() if c and min(g, default=0) >= 0]
    if not items:
        return ZERO
    ell = len(supers)
    if ell == 0:
        return ONE.scale(sum(c for _, c in items))

    def rec(pos: int, group: list[tuple[IndexVector, int]]) -> HPoly:
        # group all vectors by their last `ell - pos` entries... processed from the end
        if pos < 0:
            return HPoly.constant(sum(c for _, c in group))
        by: dict[int, list] = {}
        for g, c in group:
            by.setdefault(g[pos], []).append((g, c))
        total = ZERO
        r = supers[pos]
        for a, sub in by.items():
            kk = k_inhom_shifted(a, r)
            if kk.is_zero():
                continue
            inner = rec(pos - 1, sub)
            if not inner.is_zero():
                total = total + kk * inner
        return total

    return rec(ell - 1, items)


def index_expansion(spec: KatalanSpec, method: str = "superscript",
                    order: Optional[Sequence[tuple[int, int]]] = None) -> tuple[dict[IndexVector, int], tuple[int, ...]]:
    """Index vectors and the superscripts they are to be evaluated with."""
    ell = spec.ell
    roots = list(spec.psi.complement()) if order is None else list(order)
    states = {spec.gamma: 1}
    if method == "superscript":
        supers = tuple(x - m for x, m in enumerate(spec.mults))
        states = _apply_raising(states, roots, ell)
    elif method == "operator":
        supers = tuple(range(ell))
        # the reference route prunes nothing until the final evaluation
        states = _apply_raising(states, roots, ell, prune=False)
        states = _apply_lowering(states, spec.mults, ell)
    else:
        raise ValueError(f"unknown method {method!r}")
    return {g: c for g, c in states.items() if min(g, default=0) >= 0}, supers


def expand_katalan(spec: KatalanSpec, method: str = "superscript",
                   order: Optional[Sequence[tuple[int, int]]] = None) -> HPoly:
    """K(Psi; M; gamma) as an exact HPoly.

    ``order`` permutes the raising factors; the result does not depend on it.
    """
    states, supers = index_expansion(spec, method, order)
    return _sum_k_vectors(_canonical(states, supers), supers)


def _canonical(states: dict[IndexVector, int], supers: Sequence[int]) -> dict[IndexVector, int]:
    # positions sharing a superscript contribute a symmetric product, so their
    # entries can be sorted; vectors with a negative entry vanish
    groups: dict[int, list[int]] = {}
    for x, r in enumerate(supers):
        groups.setdefault(r, []).append(x)
    multi = [g for g in groups.values() if len(g) > 1]
    out: dict[IndexVector, int] = {}
    for w, c in states.items():
        if not c or min(w, default=0) < 0:
            continue
        if multi:
            lst = list(w)
            for g in multi:
                for x, v in zip(g, sorted((lst[x] for x in g), reverse=True)):
                    lst[x] = v
            w = tuple(lst)
        out[w] = out.get(w, 0) + c
    return {w: c for w, c in out.items() if c}


def _normal_form(states: dict[IndexVector, int], supers: Sequence[int], top: int) -> dict[IndexVector, int]:
    """Rewrite sum c_w prod_x k^(supers[x])_{w_x} with every superscript equal to ``top``.

    Uses k^(r)_m = sum_{j <= top-r} (-1)^j C(top-r, j) k^(top)_{m-j}.  With a
    common superscript the product is symmetric, and the products indexed by
    sorted nonnegative vectors are linearly independent (their top degree
    parts are distinct h-monomials).  So the result, keyed by ascending
    vectors, is empty exactly when the combination is zero.
    """
    order = sorted(range(len(supers)), key=lambda x: top - supers[x])
    shifts = [top - supers[x] for x in order]
    ready = sum(1 for d in shifts if d == 0)
    blocks = [(a, b) for a, b in _runs(shifts) if b - a > 1]
    cur: dict[IndexVector, int] = {}
    # positions sharing a superscript commute, so each block is kept ascending;
    # the block at the top superscript is the prefix everything else merges into
    for w, c in states.items():
        if min(w, default=0) < 0:
            continue
        lst = [w[x] for x in order]
        for a, b in blocks:
            lst[a:b] = sorted(lst[a:b])
        key = tuple(lst)
        cur[key] = cur.get(key, 0) + c
    cur = {w: c for w, c in cur.items() if c}
    for p in range(ready, len(order)):
        d = shifts[p]
        weights = [series_coeff(-d, j) for j in range(d + 1)]
        nxt: dict[IndexVector, int] = {}
        for w, c in cur.items():
            if not c:
                continue
            prefix, v, rest = w[:p], w[p], w[p + 1:]
            for j in range(min(d, v) + 1):
                lst = list(prefix)
                bisect.insort(lst, v - j)
                key = tuple(lst) + rest
                nxt[key] = nxt.get(key, 0) + c * weights[j]
        cur = {w: c for w, c in nxt.items() if c}
    return cur


def _runs(values: Sequence[int]) -> Iterator[tuple[int, int]]:
    """Half-open index ranges of maximal runs of equal entries."""
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] != values[start]:
            yield start, i
            start = i


@functools.lru_cache(maxsize=1 << 18)
def _raised(psi: RootIdeal, gamma: IndexVector) -> dict[IndexVector, int]:
    # shared by every M: the multiset only changes the superscripts; callers must not mutate
    return _apply_raising({gamma: 1}, psi.complement(), psi.ell)


def _grouped_states(terms: Iterable[tuple[int, KatalanSpec]]) -> list[tuple[dict[IndexVector, int], IndexVector]]:
    grouped: dict[tuple[RootIdeal, IndexVector], dict[IndexVector, int]] = {}
    for c, spec in terms:
        if c:
            start = grouped.setdefault((spec.psi, spec.mults), {})
            start[spec.gamma] = start.get(spec.gamma, 0) + c
    out = []
    for (psi, mults), start in grouped.items():
        states: dict[IndexVector, int] = {}
        for g, c in start.items():
            if c:
                for w, v in _raised(psi, g).items():
                    states[w] = states.get(w, 0) + c * v
        states = {w: c for w, c in states.items() if c}
        if states:
            out.append((states, _supers(mults)))
    return out


def _supers(mults: IndexVector) -> IndexVector:
    return tuple(x - m for x, m in enumerate(mults))


def combination_normal_form(terms: Iterable[tuple[int, KatalanSpec]]) -> dict[IndexVector, int]:
    """sum c * K(spec) as coefficients on prod_x k^(top)_{w_x}, w weakly increasing."""
    terms = [(c, s) for c, s in terms if c]
    if not terms:
        return {}
    top = max(max(_supers(s.mults), default=0) for _, s in terms)
    # merging before normalizing lets opposite terms cancel early
    by_mults: dict[IndexVector, dict[IndexVector, int]] = {}
    for c, s in terms:
        states = by_mults.setdefault(s.mults, {})
        for w, v in _raised(s.psi, s.gamma).items():
            states[w] = states.get(w, 0) + c * v
    total: dict[IndexVector, int] = {}
    for mults, states in by_mults.items():
        for w, v in _normal_form(states, _supers(mults), top).items():
            total[w] = total.get(w, 0) + v
    return {w: c for w, c in total.items() if c}


def expand_combination(terms: Iterable[tuple[int, KatalanSpec]]) -> HPoly:
    """sum c * K(spec) as an HPoly."""
    total = ZERO
    for states, supers in _grouped_states(terms):
        total = total + _sum_k_vectors(_canonical(states, supers), supers)
    return total


def combination_vanishes(terms: Iterable[tuple[int, KatalanSpec]]) -> bool:
    """Exact test of sum c * K(spec) == 0 that never leaves index vectors."""
    return not combination_normal_form(terms)


# --------------------------------------------------------------------------
# closed k-Schur Katalan functions


def trim(parts: Sequence[int]) -> IndexVector:
    parts = list(parts)
    while parts and parts[-1] == 0:
        parts.pop()
    return tuple(parts)


def pad(parts: Sequence[int], ell: int) -> IndexVector:
    parts = tuple(parts)
    if len(parts) > ell:
        if any(parts[ell:]):
            raise ValueError(f"{parts} does not fit in length {ell}")
        return parts[:ell]
    return parts + (0,) * (ell - len(parts))


def is_partition(parts: Sequence[int]) -> bool:
    return all(p >= 0 for p in parts) and all(a >= b for a, b in zip(parts, parts[1:]))


def in_ptilde(mu: Sequence[int], k: int) -> bool:
    """mu_i <= k and mu_i + 1 >= mu_{i+1} for all i."""
    return all(p <= k for p in mu) and all(a + 1 >= b for a, b in zip(mu, mu[1:]))


def closed_spec(mu: Sequence[int], k: int, ell: Optional[int] = None) -> KatalanSpec:
    """(Delta^k(mu); L(Delta^k(mu)); mu) for an index padded to ``ell``."""
    if ell is None:
        ell = len(mu)
    mu = pad(mu, ell)
    psi = delta_k(mu, k, ell)
    return KatalanSpec(psi, second_components(psi), mu)


_memo: dict[tuple[IndexVector, int, int], HPoly] = {}
_memo_lock = threading.Lock()


def closed_kschur(lam: Sequence[int], k: int, ell: Optional[int] = None) -> HPoly:
    """The closed k-Schur Katalan function of a k-bounded partition.

    ``ell`` is the ambient length (defaults to the number of nonzero parts).
    """
    lam = tuple(lam)
    if any(p > k for p in lam):
        raise ValueError(f"part exceeds k={k} in {lam}")
    if not is_partition(lam):
        raise ValueError(f"{lam} is not a partition")
    if ell is None:
        ell = len(trim(lam))
    lam = pad(lam, ell)
    key = (lam, k, ell)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    val = _cache.load(lam, k, ell)
    if val is None:
        val = expand_katalan(closed_spec(lam, k, ell))
        _cache.store(lam, k, ell, val)
    with _memo_lock:
        _memo[key] = val
    return val


def generalized_closed(mu: Sequence[int], k: int, ell: Optional[int] = None) -> HPoly:
    """K(Delta^k(mu); Delta^k(mu); mu) for mu in the relaxed set P-tilde."""
    if ell is None:
        ell = len(mu)
    mu = pad(mu, ell)
    if not in_ptilde(mu, k):
        raise ValueError(f"{mu} is not in P-tilde for k={k}")
    if is_partition(mu):
        return closed_kschur(mu, k, ell)
    return expand_katalan(closed_spec(mu, k, ell))


def clear_memo() -> None:
    with _memo_lock:
        _memo.clear()
    _raised.cache_clear()


# --------------------------------------------------------------------------
# identity verification


@dataclass(frozen=True)
class Verdict:
    """Outcome of checking one identity on one instance."""

    lemma: str
    status: str  # "holds" | "fails" | "not_applicable"
    spec: Optional[KatalanSpec] = None
    branch: Optional[str] = None
    detail: dict = field(default_factory=dict, compare=False)

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    @property
    def applicable(self) -> bool:
        return self.status != "not_applicable"


def _judge(lemma: str, spec: KatalanSpec, lhs: Iterable[tuple[int, KatalanSpec]],
           rhs: Iterable[tuple[int, KatalanSpec]], branch: Optional[str] = None) -> Verdict:
    terms = list(lhs) + [(-c, s) for c, s in rhs]
    if combination_vanishes(terms):
        return Verdict(lemma, "holds", spec, branch)
    return Verdict(lemma, "fails", spec, branch, {"difference": str(expand_combination(terms))})


def _na(lemma: str, spec: KatalanSpec, why: str) -> Verdict:
    return Verdict(lemma, "not_applicable", spec, None, {"reason": why})


def lower_spec(spec: KatalanSpec, z: int, times: int = 1) -> KatalanSpec:
    if not 1 <= z <= spec.ell:
        raise ValueError(f"z={z} outside [1, {spec.ell}]")
    g = list(spec.gamma)
    g[z - 1] -= times
    return spec.with_gamma(g)


def verify_relations(spec: KatalanSpec, relation: str, arg) -> Verdict:
    """The four linear relations between Katalan functions.

    ``relation`` is one of ``"a"`` (arg: removable root), ``"b"`` (addable
    root), ``"c"`` (an element of M), ``"d"`` (any index in [l]).
    """
    ell = spec.ell
    name = f"relation_{relation}"
    if relation == "a":
        beta = tuple(arg)
        if beta not in spec.psi.removable_roots():
            raise ValueError(f"{beta} is not removable in {spec.psi}")
        i, j = beta
        shifted = vadd(spec.gamma, unit(ell, i), [-v for v in unit(ell, j)])
        rhs = [(1, spec.with_psi(spec.psi.remove(beta))), (1, spec.with_gamma(shifted))]
    elif relation == "b":
        alpha = tuple(arg)
        if alpha not in spec.psi.addable_roots():
            raise ValueError(f"{alpha} is not addable in {spec.psi}")
        i, j = alpha
        bigger = spec.with_psi(spec.psi.add(alpha))
        shifted = vadd(spec.gamma, unit(ell, i), [-v for v in unit(ell, j)])
        rhs = [(1, bigger), (-1, bigger.with_gamma(shifted))]
    elif relation == "c":
        m = int(arg)
        if not 1 <= m <= ell or spec.mults[m - 1] == 0:
            raise ValueError(f"{m} is not in M")
        smaller = spec.with_mult(m, -1)
        rhs = [(1, smaller), (-1, lower_spec(smaller, m))]
    elif relation == "d":
        m = int(arg)
        if not 1 <= m <= ell:
            raise ValueError(f"{m} outside [1, {ell}]")
        rhs = [(1, spec.with_mult(m, +1)), (1, lower_spec(spec, m))]
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return _judge(name, spec, [(1, spec)], rhs)


def kk_zero_hypotheses(spec: KatalanSpec, z: int) -> Optional[str]:
    """None if the ceiling/wall/multiplicity hypotheses hold at z, else the failing one."""
    psi = spec.psi
    if not 1 <= z < spec.ell:
        return "z out of range"
    if not psi.has_ceiling(z):
        return "no ceiling in columns z, z+1"
    if not psi.has_wall(z):
        return "no wall in rows z, z+1"
    if spec.mults[z - 1] + 1 != spec.mults[z]:
        return "m_M(z) + 1 != m_M(z+1)"
    return None


def swap_shift(gamma: Sequence[int], z: int) -> IndexVector:
    """s_z gamma - e_z + e_{z+1}."""
    g = list(gamma)
    g[z - 1], g[z] = g[z] - 1, g[z - 1] + 1
    return tuple(g)


def verify_kk_zero(spec: KatalanSpec, z: int) -> Verdict:
    why = kk_zero_hypotheses(spec, z)
    if why:
        return _na("kk_zero", spec, why)
    other = spec.with_gamma(swap_shift(spec.gamma, z))
    return _judge("kk_zero", spec, [(1, spec), (1, other)], [])


def _mirror_common(spec: KatalanSpec, y: int, z: int) -> Optional[str]:
    psi = spec.psi
    ell = spec.ell
    if not 1 <= y <= z < ell:
        return "need 1 <= y <= z < l"
    if not psi.same_path(y, z):
        return "y, z not on one bounce path"
    upz = psi.up(z)
    if y < z and upz is None:
        return "up(z) undefined"
    mirror_rows = psi.path(y, upz) if y < z else ()
    if not all(psi.has_mirror(x) for x in mirror_rows):
        return "missing mirror along path(y, up(z))"
    if not psi.has_wall(z):
        return "no wall in rows z, z+1"
    g = spec.gamma
    if not all(g[x - 1] == g[x] for x in mirror_rows):
        return "gamma_x != gamma_{x+1} along path(y, up(z))"
    if g[z - 1] + 1 != g[z]:
        return "gamma_z + 1 != gamma_{z+1}"
    return None


def mirror_hypotheses(spec: KatalanSpec, y: int, z: int) -> Optional[str]:
    why = _mirror_common(spec, y, z)
    if why:
        return why
    psi = spec.psi
    if not psi.has_ceiling(y):
        return "no ceiling in columns y, y+1"
    m = spec.mults
    dy = psi.down(y)
    tail = psi.path(dy, z) if dy is not None and dy <= z else ()
    if not all(m[x - 1] + 1 == m[x] for x in tail):
        return "m_M(x) + 1 != m_M(x+1) along path(down(y), z)"
    return None


def verify_mirror(spec: KatalanSpec, y: int, z: int) -> Verdict:
    """First mirror lemma: branch ``zero`` (K = 0) or ``shift`` (K = K(gamma - e_{z+1}))."""
    why = mirror_hypotheses(spec, y, z)
    if why:
        return _na("mirror", spec, why)
    m = spec.mults
    if m[y - 1] + 1 == m[y]:
        return _judge("mirror", spec, [(1, spec)], [], branch="zero")
    if m[y - 1] == m[y]:
        return _judge("mirror", spec, [(1, spec)], [(1, lower_spec(spec, z + 1))], branch="shift")
    return _na("mirror", spec, "m_M(y), m_M(y+1) match neither branch")


def mirror2_hypotheses(spec: KatalanSpec, y: int, z: int) -> Optional[str]:
    psi = spec.psi
    if not 1 <= y <= z < spec.ell:
        return "need 1 <= y <= z < l"
    u = psi.up(y + 1)
    if u is None:
        return "up(y+1) undefined"
    if (u, y) not in psi.addable_roots():
        return "alpha = (up(y+1), y) not addable"
    if (u, y + 1) not in psi.removable_roots():
        return "beta = (up(y+1), y+1) not removable"
    why = _mirror_common(spec, y, z)
    if why:
        return why
    m = spec.mults
    if not all(m[x - 1] + 1 == m[x] for x in psi.path(y, z)):
        return "m_M(x) + 1 != m_M(x+1) along path(y, z)"
    return None


def verify_mirror2(spec: KatalanSpec, y: int, z: int) -> Verdict:
    """Second mirror lemma: K(Psi;M;gamma) = K(Psi + alpha; M + y; gamma + e_{up(y+1)} - e_{z+1})."""
    why = mirror2_hypotheses(spec, y, z)
    if why:
        return _na("mirror2", spec, why)
    psi = spec.psi
    u = psi.up(y + 1)
    ell = spec.ell
    g = vadd(spec.gamma, unit(ell, u), [-v for v in unit(ell, z + 1)])
    rhs = KatalanSpec(psi.add((u, y)), spec.mults, g).with_mult(y, +1)
    return _judge("mirror2", spec, [(1, spec)], [(1, rhs)])


def verify_nilpotence(spec: KatalanSpec, z: int, n: int) -> Verdict:
    """L_z^n K = 0 once n > gamma_z + l - z."""
    if n <= spec.gamma[z - 1] + spec.ell - z:
        raise ValueError(f"n={n} is not above gamma_z + l - z = {spec.gamma[z - 1] + spec.ell - z}")
    return _judge("nilpotence", spec, [(1, lower_spec(spec, z, n))], [])


def lowering_sum(spec: KatalanSpec, d: int) -> list[KatalanSpec]:
    """The specs K(Psi; M; gamma - e_S) for |S| = d."""
    return [spec.with_gamma(vsub(spec.gamma, [1 if x in S else 0 for x in range(1, spec.ell + 1)]))
            for S in itertools.combinations(range(1, spec.ell + 1), d)]


# --------------------------------------------------------------------------
# exhaustive instance enumeration for the identity suites


def _mult_vectors(ell: int, mult_max: int, fixed: Optional[dict[int, int]] = None):
    fixed = fixed or {}
    ranges = [(fixed[a],) if a in fixed else range(mult_max + 1) for a in range(1, ell + 1)]
    return itertools.product(*ranges)


def _gammas(ell: int, values: Sequence[int], equal_pairs: Sequence[int] = (), step: Optional[int] = None):
    """Index vectors over ``values`` with gamma_x = gamma_{x+1} for x in equal_pairs
    and gamma_step + 1 = gamma_{step+1}."""
    for g in itertools.product(values, repeat=ell):
        if all(g[x - 1] == g[x] for x in equal_pairs) and (step is None or g[step - 1] + 1 == g[step]):
            yield g


def _chain_ok(m: Sequence[int], rows: Sequence[int]) -> bool:
    return all(m[x - 1] + 1 == m[x] for x in rows)


def kk_zero_instances(ell: int, values: Sequence[int] = range(5), mult_max: int = 1):
    """Every (spec, z) meeting the hypotheses of the K + K = 0 identity."""
    for psi in all_root_ideals(ell):
        for z in range(1, ell):
            if not (psi.has_ceiling(z) and psi.has_wall(z)):
                continue
            for m in _mult_vectors(ell, mult_max):
                if m[z - 1] + 1 != m[z]:
                    continue
                for g in _gammas(ell, values):
                    yield KatalanSpec(psi, m, g), z


def _mirror_rows(psi: RootIdeal, y: int, z: int) -> Optional[tuple[int, ...]]:
    if y == z:
        return ()
    upz = psi.up(z)
    return None if upz is None else psi.path(y, upz)


def mirror_instances(ell: int, values: Sequence[int] = range(5), mult_max: int = 2):
    """Every (spec, y, z) meeting the first mirror lemma's hypotheses and one of its branches."""
    for psi in all_root_ideals(ell):
        for z in range(1, ell):
            if not psi.has_wall(z):
                continue
            for y in range(1, z + 1):
                if not psi.same_path(y, z) or not psi.has_ceiling(y):
                    continue
                rows = _mirror_rows(psi, y, z)
                if rows is None or not all(psi.has_mirror(x) for x in rows):
                    continue
                dy = psi.down(y)
                chain = psi.path(dy, z) if dy is not None and dy <= z else ()
                for m in _mult_vectors(ell, mult_max):
                    if not _chain_ok(m, chain) or m[y] - m[y - 1] not in (0, 1):
                        continue
                    for g in _gammas(ell, values, rows, z):
                        yield KatalanSpec(psi, m, g), y, z


def mirror2_instances(ell: int, values: Sequence[int] = range(5), mult_max: int = 2):
    """Every (spec, y, z) meeting the second mirror lemma's hypotheses."""
    for psi in all_root_ideals(ell):
        add, rem = psi.addable_roots(), psi.removable_roots()
        for z in range(1, ell):
            if not psi.has_wall(z):
                continue
            for y in range(1, z + 1):
                u = psi.up(y + 1)
                if u is None or (u, y) not in add or (u, y + 1) not in rem or not psi.same_path(y, z):
                    continue
                rows = _mirror_rows(psi, y, z)
                if rows is None or not all(psi.has_mirror(x) for x in rows):
                    continue
                chain = psi.path(y, z)
                for m in _mult_vectors(ell, mult_max):
                    if not _chain_ok(m, chain):
                        continue
                    for g in _gammas(ell, values, rows, z):
                        yield KatalanSpec(psi, m, g), y, z
