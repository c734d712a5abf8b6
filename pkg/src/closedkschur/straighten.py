"""Straightening lowering operators on closed k-Schur Katalan functions.

``lower_closed`` rewrites L_z g~_lambda as an integer combination of closed
k-Schur Katalan functions at the same level, and the functions built on it
compose those rewrites into products of lowering operators and into the
skew action of G_{1^m}.
"""

from __future__ import annotations

import itertools
import json
import threading
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .katalan import (
    IndexVector,
    KatalanSpec,
    closed_kschur,
    closed_spec,
    combination_vanishes,
    expand_combination,
    is_partition,
    pad,
    trim,
)
from .rootideal import delta_k
from .symfunc import ZERO, HPoly, binomial


class StraightenError(RuntimeError):
    """An internal invariant of the straightening recursion was violated."""


@dataclass
class SignedExpansion:
    """Integer combination of basis functions indexed by trimmed partitions."""

    k: int
    ell: int
    terms: dict[IndexVector, int] = field(default_factory=dict)
    basis: str = "gtilde"
    provenance: str = "structural"
    flags: list[str] = field(default_factory=list, compare=False)

    def __post_init__(self):
        clean: dict[IndexVector, int | Fraction] = {}
        for idx, c in self.terms.items():
            idx = trim(idx)
            if self.basis == "gtilde" and idx and idx[0] > self.k:
                raise ValueError(f"index {idx} exceeds level k={self.k}")
            clean[idx] = clean.get(idx, 0) + c
        # exact rationals stay as Fractions only when they are not integers
        self.terms = {i: (int(c) if Fraction(c).denominator == 1 else Fraction(c))
                      for i, c in clean.items() if c}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedExpansion):
            return NotImplemented
        return (self.k, self.basis, self.terms) == (other.k, other.basis, other.terms)

    def coeff(self, idx: Sequence[int]) -> int:
        return self.terms.get(trim(idx), 0)

    def sorted_terms(self) -> list[tuple[IndexVector, int]]:
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-p for p in t[0]), len(t[0])))

    def to_dict(self) -> dict:
        return {
            "basis": self.basis,
            "k": self.k,
            "terms": [{"index": list(i), "coeff": str(c)} for i, c in self.sorted_terms()],
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping, ell: Optional[int] = None) -> "SignedExpansion":
        terms = {tuple(int(p) for p in t["index"]): Fraction(t["coeff"]) for t in data["terms"]}
        if ell is None:
            ell = max((len(i) for i in terms), default=0)
        return cls(int(data["k"]), ell, terms, data.get("basis", "gtilde"), data.get("provenance", "structural"))

    def evaluate(self) -> HPoly:
        """sum c_mu * g~_mu as an HPoly (each term at its own trimmed length)."""
        if self.basis != "gtilde":
            raise ValueError("only the gtilde basis can be evaluated")
        total = ZERO
        for idx, c in self.sorted_terms():
            total = total + closed_kschur(idx, self.k).scale(c)
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " ".join(f"{'+' if c > 0 else '-'}{abs(c) if abs(c) != 1 else ''}({','.join(map(str, i))})"
                        for i, c in self.sorted_terms())


# --------------------------------------------------------------------------
# straightening of indices with a single unit ascent


def unit_ascent(mu: Sequence[int]) -> Optional[int]:
    """The position z of the only ascent, which must satisfy mu_z + 1 = mu_{z+1}.

    Returns None for weakly decreasing input and raises on anything else.
    """
    ascents = [z for z in range(1, len(mu)) if mu[z - 1] < mu[z]]
    if not ascents:
        return None
    if len(ascents) > 1:
        raise ValueError(f"{tuple(mu)} has ascents at {ascents}")
    z = ascents[0]
    if mu[z - 1] + 1 != mu[z]:
        raise ValueError(f"ascent of {tuple(mu)} at position {z} has gap {mu[z] - mu[z - 1]}")
    return z


def straighten_once(mu: Sequence[int], k: int) -> IndexVector:
    mu = tuple(mu)
    z = unit_ascent(mu)
    if z is None:
        raise ValueError(f"{mu} has no ascent to straighten")
    if max(mu) > k:
        raise ValueError(f"part exceeds k={k} in {mu}")
    psi = delta_k(mu, k, len(mu))
    out = list(mu)
    top_z, top_next = psi.top(z), psi.top(z + 1)
    if top_next > top_z:
        out[z] -= 1
        return tuple(out)
    if top_next == top_z:
        raise StraightenError(f"rows {z} and {z + 1} of {mu} share a bounce path")
    y = top_z
    u = psi.up(y + 1) if y + 1 <= len(mu) else None
    if u is None:
        raise StraightenError(f"up({y + 1}) is undefined in Delta^{k}{mu}")
    out[u - 1] += 1
    out[z] -= 1
    return tuple(out)


def straighten_full(mu: Sequence[int], k: int) -> IndexVector:
    """Iterate :func:`straighten_once` until the index is weakly decreasing."""
    mu = tuple(mu)
    for _ in range(len(mu) + 1):
        if unit_ascent(mu) is None:
            return mu
        mu = straighten_once(mu, k)
    raise StraightenError(f"straightening did not terminate within {len(mu)} steps")


# --------------------------------------------------------------------------
# lowering operators


def _check_partition(lam: Sequence[int], k: int, ell: int) -> IndexVector:
    lam = pad(lam, ell)
    if not is_partition(lam):
        raise ValueError(f"{lam} is not a partition")
    if lam and lam[0] > k:
        raise ValueError(f"part exceeds k={k} in {lam}")
    return lam


_lower_memo: dict[tuple[IndexVector, int, int, int], dict[IndexVector, int]] = {}
_lower_lock = threading.Lock()


def _add_into(acc: dict, src: Mapping, c: int) -> None:
    for idx, v in src.items():
        acc[idx] = acc.get(idx, 0) + c * v


def _lower(lam: IndexVector, k: int, ell: int, z: int) -> dict[IndexVector, int]:
    key = (lam, k, ell, z)
    hit = _lower_memo.get(key)
    if hit is not None:
        return hit
    mu = list(lam)
    mu[z - 1] -= 1
    nu = straighten_full(mu, k)
    # a weakly decreasing index with a negative entry ends negatively; that function is 0
    nu_terms = {} if min(nu) < 0 else {nu: 1}
    psi = delta_k(lam, k, ell)
    if z > psi.bottom():
        out = dict(nu_terms)
    else:
        d = psi.down(z)
        if d is None:
            raise StraightenError(f"row {z} of Delta^{k}{lam} has no removable root")
        out = dict(nu_terms)
        if nu_terms:
            _add_into(out, _lower(nu, k, ell, d), -1)
        _add_into(out, _lower(lam, k, ell, d), 1)
    out = {i: c for i, c in out.items() if c}
    with _lower_lock:
        _lower_memo[key] = out
    return out


def lower_closed(lam: Sequence[int], k: int, ell: int, z: int) -> SignedExpansion:
    """L_z g~_lambda^(k) as a signed combination of closed k-Schur Katalan functions."""
    lam = _check_partition(lam, k, ell)
    if not 1 <= z <= ell:
        raise ValueError(f"z={z} outside [1, {ell}]")
    exp = SignedExpansion(k, ell, _lower(lam, k, ell, z))
    if z not in strict_positions(lam):
        exp.flags.append(f"unverified: lambda_{z} = lambda_{z + 1}, compare with lower_closed_checked")
    return exp


def lower_closed_checked(lam: Sequence[int], k: int, ell: int, z: int) -> tuple[SignedExpansion, bool]:
    """lower_closed together with whether it matches direct expansion of the lowered function."""
    exp = lower_closed(lam, k, ell, z)
    ok = exp.evaluate() == lowered_value(lam, k, ell, [z])
    exp.flags = [] if ok else [f"disagrees with direct expansion of L_{z} g~_{trim(pad(lam, ell))}"]
    return exp, ok


def strict_positions(lam: Sequence[int]) -> set[int]:
    """Positions z with lambda_z > lambda_{z+1}, reading lambda_{l+1} as 0."""
    ext = tuple(lam) + (0,)
    return {z for z in range(1, len(lam) + 1) if ext[z - 1] > ext[z]}


def _lower_product_terms(S: Sequence[int], lam: IndexVector, k: int, ell: int) -> dict[IndexVector, int]:
    current = {lam: 1}
    for z in sorted(S, reverse=True):
        nxt: dict[IndexVector, int] = {}
        for idx, c in current.items():
            _add_into(nxt, _lower(pad(idx, ell), k, ell, z), c)
        current = {pad(i, ell): c for i, c in nxt.items() if c}
    return current


def lower_product(S: Iterable[int], lam: Sequence[int], k: int, ell: int) -> SignedExpansion:
    """prod_{z in S} L_z g~_lambda, applying the largest position first."""
    lam = _check_partition(lam, k, ell)
    S = sorted(set(S))
    if not S:
        raise ValueError("S must be nonempty")
    if not all(1 <= z <= ell for z in S):
        raise ValueError(f"positions {S} outside [1, {ell}]")
    bad = [z for z in S if z not in strict_positions(lam)]
    if bad:
        raise ValueError(f"lambda_z = lambda_(z+1) at positions {bad} of {lam}")
    return SignedExpansion(k, ell, _lower_product_terms(S, lam, k, ell))


def is_strict(lam: Sequence[int]) -> bool:
    return all(a > b for a, b in zip(lam, lam[1:])) and all(p >= 1 for p in lam)


def dual_pieri(lam: Sequence[int], k: int, ell: int, m: int) -> SignedExpansion:
    """G_{1^m}^perp g~_lambda for strictly decreasing lambda with all l parts positive."""
    lam = _check_partition(lam, k, ell)
    if m < 0:
        raise ValueError("m must be nonnegative")
    if not is_strict(lam):
        raise ValueError(f"{lam} is not strictly decreasing with {ell} positive parts; use the oracle")
    if m == 0:
        return SignedExpansion(k, ell, {lam: 1})
    total: dict[IndexVector, int] = {}
    for i in range(ell - m + 1):
        weight = (-1) ** i * binomial(m - 1 + i, m - 1)
        for S in itertools.combinations(range(1, ell + 1), m + i):
            _add_into(total, _lower_product_terms(S, lam, k, ell), weight)
    return SignedExpansion(k, ell, total)


# --------------------------------------------------------------------------
# direct left-hand sides, for soundness checks


def lowered_spec(lam: Sequence[int], k: int, ell: int, S: Iterable[int]) -> KatalanSpec:
    """K(Delta^k(lambda); Delta^k(lambda); lambda - e_S)."""
    spec = closed_spec(pad(lam, ell), k, ell)
    g = list(spec.gamma)
    for z in S:
        g[z - 1] -= 1
    return spec.with_gamma(g)


def lowered_value(lam: Sequence[int], k: int, ell: int, S: Iterable[int]) -> HPoly:
    return expand_combination([(1, lowered_spec(lam, k, ell, S))])


def dual_pieri_value(lam: Sequence[int], k: int, ell: int, m: int) -> HPoly:
    """G_{1^m}^perp g~_lambda expanded through the index-vector sum, without straightening."""
    lam = pad(lam, ell)
    if m == 0:
        return closed_kschur(lam, k, ell)
    terms = []
    for i in range(ell - m + 1):
        weight = (-1) ** i * binomial(m - 1 + i, m - 1)
        for S in itertools.combinations(range(1, ell + 1), m + i):
            terms.append((weight, lowered_spec(lam, k, ell, S)))
    return expand_combination(terms)


# --------------------------------------------------------------------------
# coefficient structure


def down_iterates(lam: Sequence[int], k: int, ell: int, z: int) -> tuple[int, ...]:
    """(d^1(z), d^2(z), ...) along the bounce path of z in Delta^k(lambda)."""
    psi = delta_k(pad(lam, ell), k, ell)
    return psi.path(z, psi.bot(z))[1:]


def indkey_hypotheses(lam: Sequence[int], k: int, ell: int, z: int, a: int) -> Optional[str]:
    lam = pad(lam, ell)
    psi = delta_k(lam, k, ell)
    if not 1 <= z <= ell:
        return "z out of range"
    if z > psi.bottom():
        return "z below the bottom"
    if z not in strict_positions(lam):
        return "lambda_z = lambda_{z+1}"
    ds = down_iterates(lam, k, ell, z)
    if not ds or ds[0] >= ell:
        return "d^1(z) = l"
    c = len(ds) + 1
    if not 1 <= a <= c - 1:
        return f"a outside [1, {c - 1}]"
    da = ds[a - 1]
    if da >= ell or lam[da - 1] != lam[da]:
        return "lambda_{d^a} != lambda_{d^a + 1}"
    return None


def _indkey_side(lam: IndexVector, k: int, ell: int, z: int, pos: int) -> list[tuple[int, KatalanSpec]]:
    lower_z = list(lam)
    lower_z[z - 1] -= 1
    first = closed_spec(lam, k, ell)
    second = closed_spec(lower_z, k, ell)

    def shifted(spec: KatalanSpec) -> KatalanSpec:
        g = list(spec.gamma)
        g[pos - 1] -= 1
        return spec.with_gamma(g)

    return [(1, shifted(first)), (-1, shifted(second))]


def indkey_check(lam: Sequence[int], k: int, ell: int, z: int, a: int):
    """Telescoping identity between L_{d^a(z)} and L_{d^{a+1}(z)} differences.

    Returns a :class:`~closedkschur.katalan.Verdict`.
    """
    from .katalan import Verdict

    lam = pad(lam, ell)
    why = indkey_hypotheses(lam, k, ell, z, a)
    if why:
        return Verdict("indkey", "not_applicable", None, None, {"reason": why})
    ds = down_iterates(lam, k, ell, z)
    c = len(ds) + 1
    lhs = _indkey_side(lam, k, ell, z, ds[a - 1])
    rhs = [] if a == c - 1 else _indkey_side(lam, k, ell, z, ds[a])
    terms = lhs + [(-w, s) for w, s in rhs]
    branch = "zero" if a == c - 1 else "telescope"
    if combination_vanishes(terms):
        return Verdict("indkey", "holds", None, branch, {"lambda": lam, "z": z, "a": a})
    diff = expand_combination(terms)
    return Verdict("indkey", "fails", None, branch, {"lambda": lam, "z": z, "a": a, "difference": str(diff)})


def expected_sign(lam: Sequence[int], mu: Sequence[int], shift: int) -> int:
    return -1 if (sum(lam) - sum(mu) - shift) % 2 else 1


def sign_violations(expansion: SignedExpansion, lam: Sequence[int], shift: int) -> list[tuple[IndexVector, int]]:
    """Terms whose coefficient does not have sign (-1)^{|lambda| - |mu| - shift}."""
    return [(mu, c) for mu, c in expansion.sorted_terms() if c * expected_sign(lam, mu, shift) < 0]


def single_lowering_structure(lam: Sequence[int], k: int, ell: int, z: int) -> list[str]:
    """Problems with lower_closed(lambda, z) against the 0 / +-1 sign and prefix pattern."""
    lam = pad(lam, ell)
    exp = lower_closed(lam, k, ell, z)
    problems = []
    for mu, c in exp.sorted_terms():
        if c != expected_sign(lam, mu, 1):
            problems.append(f"coefficient {c} at {mu}, expected {expected_sign(lam, mu, 1)}")
        if pad(mu, ell)[: z - 1] != lam[: z - 1]:
            problems.append(f"{mu} differs from {lam} before position {z}")
    return problems
