"""Symmetric functions in the complete homogeneous basis.

Every symmetric function is stored as a sparse integer combination of
monomials ``h_{p1} h_{p2} ... h_{pr}``; a monomial is the weakly decreasing
tuple ``(p1, ..., pr)`` of positive subscripts and ``()`` is the constant 1.
Since the ``h_i`` are algebraically independent, this representation is
canonical and equality of values is equality of term maps.
"""

from __future__ import annotations

import functools
import itertools
import json
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

Monomial = tuple[int, ...]


def binomial(n: int, k: int) -> int:
    """``C(n, k)`` for integers, zero when ``k < 0`` or ``k > n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def _merge(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, reverse=True))


class HPoly:
    """Immutable sparse polynomial in the generators h_1, h_2, ...

    >>> h(2) + h(1) * h(1)
    HPoly(h2 + h1^2)
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean: dict[Monomial, int] = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    if any(p <= 0 for p in mono):
                        raise ValueError(f"monomial {mono!r} has a non-positive subscript")
                    key = tuple(sorted(mono, reverse=True))
                    clean[key] = clean.get(key, 0) + int(c)
            clean = {m: c for m, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, int]) -> "HPoly":
        # trusted constructor: canonical keys, no zero coefficients
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return self._terms

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, mono: Sequence[int]) -> int:
        return self._terms.get(tuple(sorted(mono, reverse=True)), 0)

    def degree(self) -> int:
        """Largest total degree of a monomial; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def max_factors(self) -> int:
        """Largest number of h-factors in a monomial; 0 for constants and zero."""
        return max((len(m) for m in self._terms), default=0)

    def max_part(self) -> int:
        return max((m[0] for m in self._terms if m), default=0)

    def homogeneous_part(self, d: int) -> "HPoly":
        return HPoly._raw({m: c for m, c in self._terms.items() if sum(m) == d})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = HPoly.constant(other)
        if not isinstance(other, HPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "HPoly | int") -> "HPoly":
        if isinstance(other, int):
            other = HPoly.constant(other)
        if not isinstance(other, HPoly):
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return HPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "HPoly":
        return HPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "HPoly | int") -> "HPoly":
        if isinstance(other, int):
            other = HPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other: int) -> "HPoly":
        return HPoly.constant(other) - self

    def scale(self, c: int) -> "HPoly":
        if not c:
            return ZERO
        return HPoly._raw({m: c * v for m, v in self._terms.items()})

    def __mul__(self, other: "HPoly | int") -> "HPoly":
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, HPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Monomial, int] = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                key = _merge(ma, mb)
                out[key] = get(key, 0) + ca * cb
        return HPoly._raw({m: c for m, c in out.items() if c})

    def __rmul__(self, other: int) -> "HPoly":
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "HPoly":
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    @staticmethod
    def constant(c: int) -> "HPoly":
        return HPoly._raw({(): c} if c else {})

    @staticmethod
    def monomial(parts: Iterable[int], coeff: int = 1) -> "HPoly":
        """``coeff * h_{p1} h_{p2} ...``; zero if any part is negative, h_0 = 1."""
        parts = tuple(parts)
        if any(p < 0 for p in parts):
            return ZERO
        return HPoly({tuple(p for p in parts if p): coeff})

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms by degree descending, then lexicographically descending key."""
        return sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-p for p in t[0]), len(t[0])))

    def to_dict(self) -> dict:
        return {"terms": [{"mono": list(m), "coeff": str(c)} for m, c in self.sorted_terms()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> "HPoly":
        return cls({tuple(int(p) for p in t["mono"]): int(t["coeff"]) for t in data["terms"]})

    @classmethod
    def from_json(cls, text: str) -> "HPoly":
        return cls.from_dict(json.loads(text))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for mono, c in self.sorted_terms():
            if mono:
                body = " ".join(
                    f"h{p}" if e == 1 else f"h{p}^{e}"
                    for p, e in ((p, len(list(g))) for p, g in itertools.groupby(mono))
                )
                if c == 1:
                    s = body
                elif c == -1:
                    s = "-" + body
                else:
                    s = f"{c}*{body}"
            else:
                s = str(c)
            pieces.append(s)
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"HPoly({self})"


ZERO = HPoly._raw({})
ONE = HPoly._raw({(): 1})


def h(n: int) -> HPoly:
    """The complete homogeneous generator h_n (h_0 = 1, h_n = 0 for n < 0)."""
    if n < 0:
        return ZERO
    return ONE if n == 0 else HPoly._raw({(n,): 1})


def series_coeff(r: int, i: int) -> int:
    # coefficient of t^i in (1 - t)^(-r)
    if r >= 0:
        return 1 if i == 0 else (comb(r + i - 1, i) if r > 0 else 0)
    return (-1) ** i * binomial(-r, i)


@functools.lru_cache(maxsize=None)
def _k_general(m: int, r: int) -> HPoly:
    if m < 0:
        return ZERO
    terms: dict[Monomial, int] = {}
    for i in range(m + 1):
        c = series_coeff(r, i)
        if c:
            terms[(m - i,) if m - i else ()] = c
    return HPoly._raw(terms)


def k_inhom(m: int, r: int) -> HPoly:
    """``k_m^{(r)} = sum_{i=0}^{m} C(r+i-1, i) h_{m-i}``.

    ``k_m^{(r)} = 0`` for ``m < 0`` and ``k_m^{(0)} = h_m``.
    """
    if r < 0:
        raise ValueError(f"k_inhom needs r >= 0, got r={r}")
    return _k_general(m, r)


def k_inhom_shifted(m: int, r: int) -> HPoly:
    """k_m^{(r)} for any integer r, via the series H(t) (1-t)^(-r).

    For r >= 0 this is :func:`k_inhom`.  Lowering the superscript by one is
    the same as applying ``(1 - L)`` to the subscript:
    ``k_m^{(r-1)} = k_m^{(r)} - k_{m-1}^{(r)}``.
    """
    return _k_general(m, r)


def k_vector(gamma: Sequence[int], supers: Sequence[int] | None = None) -> HPoly:
    """``k_gamma = k_{gamma_1}^{(0)} k_{gamma_2}^{(1)} ... k_{gamma_l}^{(l-1)}``.

    ``supers`` overrides the superscripts (default ``0, 1, ..., l-1``).
    """
    if supers is None:
        supers = range(len(gamma))
    if any(g < 0 for g in gamma):
        return ZERO
    out = ONE
    for g, r in zip(gamma, supers):
        out = out * _k_general(g, r)
    return out


def g_det(gamma: Sequence[int]) -> HPoly:
    """``g_gamma = det(k^{(i-1)}_{gamma_i + j - i})`` by Laplace expansion with memoized minors."""
    gamma = tuple(gamma)
    ell = len(gamma)
    if ell == 0:
        return ONE

    def entry(i: int, j: int) -> HPoly:
        return _k_general(gamma[i] + j - i, i)

    @functools.lru_cache(maxsize=None)
    def minor(row: int, cols: frozenset) -> HPoly:
        # determinant of rows row..ell-1 against the sorted column set cols
        if row == ell:
            return ONE
        total = ZERO
        for pos, j in enumerate(sorted(cols)):
            e = entry(row, j)
            if e.is_zero():
                continue
            sub = minor(row + 1, cols - {j})
            if sub.is_zero():
                continue
            term = e * sub
            total = total - term if pos % 2 else total + term
        return total

    return minor(0, frozenset(range(ell)))


def _perp_monomial(d: int, mono: Monomial) -> dict[Monomial, int]:
    # choose d distinct factor positions and decrement each; group equal subscripts
    if d == 0:
        return {mono: 1}
    if d > len(mono):
        return {}
    groups = [(p, len(list(g))) for p, g in itertools.groupby(mono)]
    out: dict[Monomial, int] = {}

    def rec(idx: int, left: int, parts: list[int], coeff: int) -> None:
        if idx == len(groups):
            if left == 0:
                key = tuple(sorted((p for p in parts if p), reverse=True))
                out[key] = out.get(key, 0) + coeff
            return
        p, mult = groups[idx]
        for take in range(min(mult, left) + 1):
            rec(idx + 1, left - take, parts + [p - 1] * take + [p] * (mult - take), coeff * comb(mult, take))

    rec(0, d, [], 1)
    return out


def e_perp(d: int, f: HPoly) -> HPoly:
    """Skewing by e_d: on h_{m1}...h_{mr}, sum over d-subsets of factors of the
    monomial with each chosen subscript lowered by one."""
    if d < 0:
        raise ValueError("e_perp needs d >= 0")
    if d == 0:
        return f
    out: dict[Monomial, int] = {}
    for mono, c in f:
        for m2, c2 in _perp_monomial(d, mono).items():
            out[m2] = out.get(m2, 0) + c * c2
    return HPoly._raw({m: c for m, c in out.items() if c})


def g_perp(m: int, f: HPoly) -> HPoly:
    """Skewing by the column stable Grothendieck G_{1^m} = sum_i (-1)^i C(m-1+i, m-1) e_{m+i}."""
    if m < 1:
        raise ValueError("g_perp needs m >= 1")
    top = f.max_factors()
    out = ZERO
    for i in range(max(0, top - m + 1)):
        coeff = (-1) ** i * comb(m - 1 + i, m - 1)
        out = out + e_perp(m + i, f).scale(coeff)
    return out
