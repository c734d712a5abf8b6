"""Root ideals in the staircase poset {(i, j) : 1 <= i < j <= l}.

A root ideal is stored row by row: ``firsts[i-1]`` is the first shaded
column of row ``i`` (rows are right-justified intervals) or ``None``.
Rows and columns are 1-based throughout, matching the usual matrix
picture of a Katalan function.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

Root = tuple[int, int]


@dataclass(frozen=True)
class RootIdeal:
    ell: int
    firsts: tuple[Optional[int], ...]

    def __post_init__(self):
        if len(self.firsts) != self.ell:
            raise ValueError(f"need {self.ell} row entries, got {len(self.firsts)}")
        prev = None
        seen_empty = False
        for i, c in enumerate(self.firsts, start=1):
            if c is None:
                seen_empty = True
                continue
            if seen_empty:
                raise ValueError(f"row {i} is nonempty below an empty row")
            if not i + 1 <= c <= self.ell:
                raise ValueError(f"row {i}: first column {c} outside [{i + 1}, {self.ell}]")
            if prev is not None and c < prev:
                raise ValueError(f"row {i} starts left of row {i - 1}; not an upper ideal")
            prev = c

    # construction ---------------------------------------------------------

    @classmethod
    def empty(cls, ell: int) -> "RootIdeal":
        return cls(ell, (None,) * ell)

    @classmethod
    def full(cls, ell: int) -> "RootIdeal":
        return cls(ell, tuple(i + 1 if i < ell else None for i in range(1, ell + 1)))

    @classmethod
    def from_roots(cls, ell: int, roots: Iterable[Root]) -> "RootIdeal":
        roots = set(roots)
        for i, j in roots:
            if not 1 <= i < j <= ell:
                raise ValueError(f"({i},{j}) is not a positive root for l={ell}")
        firsts = []
        for i in range(1, ell + 1):
            cols = [j for (a, j) in roots if a == i]
            firsts.append(min(cols) if cols else None)
        ideal = cls(ell, tuple(firsts))
        if ideal.roots() != roots:
            raise ValueError("root set is not an upper order ideal")
        return ideal

    # basic queries --------------------------------------------------------

    def __contains__(self, root: Root) -> bool:
        i, j = root
        if not 1 <= i < j <= self.ell:
            return False
        c = self.firsts[i - 1]
        return c is not None and c <= j

    def roots(self) -> set[Root]:
        return {(i, j) for i, c in enumerate(self.firsts, start=1) if c is not None
                for j in range(c, self.ell + 1)}

    def __len__(self) -> int:
        return sum(self.row_length(i) for i in range(1, self.ell + 1))

    def row_length(self, i: int) -> int:
        c = self.firsts[i - 1]
        return 0 if c is None else self.ell - c + 1

    def col_length(self, j: int) -> int:
        return sum(1 for c in self.firsts if c is not None and c <= j)

    def complement(self) -> list[Root]:
        """Roots of the staircase not in the ideal, in row-major order."""
        return [(i, j) for i in range(1, self.ell + 1) for j in range(i + 1, self.ell + 1)
                if (i, j) not in self]

    # removable / addable --------------------------------------------------

    def removable_roots(self) -> set[Root]:
        out = set()
        for i, c in enumerate(self.firsts, start=1):
            if c is None:
                continue
            below = self.firsts[i] if i < self.ell else None
            if below is None or below > c:
                out.add((i, c))
        return out

    def addable_roots(self) -> set[Root]:
        out = set()
        for i in range(1, self.ell + 1):
            c = self.firsts[i - 1]
            j = self.ell if c is None else c - 1
            if j < i + 1:
                continue
            above = self.firsts[i - 2] if i > 1 else 1
            if above is not None and above <= j:
                out.add((i, j))
        return out

    def remove(self, root: Root) -> "RootIdeal":
        if root not in self.removable_roots():
            raise ValueError(f"{root} is not removable")
        i, j = root
        firsts = list(self.firsts)
        firsts[i - 1] = j + 1 if j < self.ell else None
        return RootIdeal(self.ell, tuple(firsts))

    def add(self, root: Root) -> "RootIdeal":
        if root not in self.addable_roots():
            raise ValueError(f"{root} is not addable")
        i, j = root
        firsts = list(self.firsts)
        firsts[i - 1] = j
        return RootIdeal(self.ell, tuple(firsts))

    # bounce graph ---------------------------------------------------------

    def down(self, x: int) -> Optional[int]:
        """Column of the removable root in row x, or None."""
        c = self.firsts[x - 1]
        if c is None:
            return None
        below = self.firsts[x] if x < self.ell else None
        return c if below is None or below > c else None

    def up(self, x: int) -> Optional[int]:
        """Row of the removable root in column x, or None."""
        for i in range(1, x):
            if self.firsts[i - 1] == x and self.down(i) == x:
                return i
        return None

    def top(self, x: int) -> int:
        while (u := self.up(x)) is not None:
            x = u
        return x

    def bot(self, x: int) -> int:
        while (d := self.down(x)) is not None:
            x = d
        return x

    def bounce_path(self, x: int) -> tuple[int, ...]:
        return self.path(self.top(x), self.bot(x))

    def path(self, a: int, b: int) -> tuple[int, ...]:
        """``(a, down(a), down^2(a), ..., b)``; empty when ``b < a``."""
        if b < a:
            return ()
        out = [a]
        x = a
        while x != b:
            x = self.down(x)
            if x is None or x > b:
                raise ValueError(f"{a} and {b} are not on one bounce path")
            out.append(x)
        return tuple(out)

    def uppath(self, x: int) -> tuple[int, ...]:
        return self.path(self.top(x), x)

    def same_path(self, a: int, b: int) -> bool:
        return self.top(a) == self.top(b)

    # predicates -----------------------------------------------------------

    def has_wall(self, r: int) -> bool:
        return 1 <= r < self.ell and self.row_length(r) == self.row_length(r + 1)

    def has_ceiling(self, c: int) -> bool:
        return 1 <= c < self.ell and self.col_length(c) == self.col_length(c + 1)

    def has_mirror(self, r: int) -> bool:
        if not 1 <= r < self.ell:
            return False
        rem = self.removable_roots()
        return any((r, c) in rem and (r + 1, c + 1) in rem for c in range(r + 2, self.ell))

    def bottom(self) -> int:
        """Largest nonempty row, 0 for the empty ideal."""
        for i in range(self.ell, 0, -1):
            if self.firsts[i - 1] is not None:
                return i
        return 0

    # notation -------------------------------------------------------------

    def to_text(self) -> str:
        return "rows:" + ",".join("-" if c is None else str(c) for c in self.firsts)

    def __str__(self) -> str:
        return self.to_text()


def delta_k(mu: Sequence[int], k: int, ell: Optional[int] = None) -> RootIdeal:
    """The root ideal {(i, j) : k - mu_i + i < j} for mu padded to length ell.

    Accepts any index vector with entries <= k (generalized indices too).
    """
    mu = tuple(mu)
    if ell is None:
        ell = len(mu)
    if len(mu) > ell:
        raise ValueError(f"index {mu} longer than l={ell}")
    mu = mu + (0,) * (ell - len(mu))
    if any(p > k for p in mu):
        raise ValueError(f"part exceeds k={k} in {mu}")
    firsts = []
    for i, p in enumerate(mu, start=1):
        c = max(i + 1, k - p + i + 1)
        firsts.append(c if c <= ell else None)
    return RootIdeal(ell, tuple(firsts))


def second_components(roots: Iterable[Root] | RootIdeal, ell: Optional[int] = None) -> tuple[int, ...]:
    """Multiplicity vector of the multiset {j : (i, j) in roots}, indexed 1..l."""
    if isinstance(roots, RootIdeal):
        ell = roots.ell
        return tuple(roots.col_length(j) for j in range(1, ell + 1))
    cnt = Counter(j for _, j in roots)
    if ell is None:
        ell = max(cnt, default=0)
    return tuple(cnt.get(j, 0) for j in range(1, ell + 1))


def multiset_from_mults(mults: Sequence[int]) -> list[int]:
    return [a for a, m in enumerate(mults, start=1) for _ in range(m)]


def mults_from_multiset(elems: Iterable[int], ell: int) -> tuple[int, ...]:
    cnt = Counter(elems)
    if any(not 1 <= a <= ell for a in cnt):
        raise ValueError(f"multiset support outside [1, {ell}]")
    return tuple(cnt.get(a, 0) for a in range(1, ell + 1))


def all_root_ideals(ell: int) -> list[RootIdeal]:
    """Every root ideal of the staircase of size l (Catalan-many)."""
    out = []

    def rec(i: int, prev: int, acc: tuple):
        if i > ell:
            out.append(RootIdeal(ell, acc))
            return
        out.append(RootIdeal(ell, acc + (None,) * (ell - i + 1)))
        for c in range(max(i + 1, prev), ell + 1):
            rec(i + 1, c, acc + (c,))

    rec(1, 2, ())
    return sorted(set(out), key=lambda r: tuple(99 if c is None else c for c in r.firsts))


_ROOT_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_ideal(text: str, ell: Optional[int] = None) -> RootIdeal:
    """Parse ``rows:c1,c2,...`` ('-' for an empty row) or ``(1,3)(1,4)(2,4)``."""
    text = text.strip()
    if text.startswith("rows:"):
        body = text[5:].strip()
        items = [s.strip() for s in body.split(",")] if body else []
        firsts = []
        for pos, s in enumerate(items, start=1):
            if s == "-":
                firsts.append(None)
            elif s.isdigit():
                firsts.append(int(s))
            else:
                raise ValueError(f"row entry {pos}: expected a column or '-', got {s!r}")
        if ell is not None and ell != len(firsts):
            raise ValueError(f"ideal has {len(firsts)} rows but l={ell}")
        return RootIdeal(len(firsts), tuple(firsts))
    roots = [(int(a), int(b)) for a, b in _ROOT_RE.findall(text)]
    leftover = _ROOT_RE.sub("", text).strip()
    if leftover:
        raise ValueError(f"cannot parse root list near {leftover!r}")
    if ell is None:
        ell = max((j for _, j in roots), default=0)
    return RootIdeal.from_roots(ell, roots)


def parse_multiset(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return sorted(int(s) for s in text.split(","))


def format_multiset(mults: Sequence[int]) -> str:
    return ",".join(str(a) for a in multiset_from_mults(mults))
