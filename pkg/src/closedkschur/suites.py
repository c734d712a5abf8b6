"""Enumerated identity suites shared by the self-test command and the tests.

Each suite yields :class:`~closedkschur.katalan.Verdict` objects; ``run``
tallies them by status.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .katalan import (
    KatalanSpec,
    Verdict,
    kk_zero_instances,
    mirror2_instances,
    mirror_instances,
    pad,
    verify_kk_zero,
    verify_mirror,
    verify_mirror2,
    verify_nilpotence,
    verify_relations,
)
from .oracle import enumerate_partitions
from .rootideal import all_root_ideals
from .straighten import down_iterates, indkey_check, indkey_hypotheses

# multiplicity bound per suite; see README for why these ranges
KK_MULT_MAX = 1
MIRROR_MULT_MAX = 1
MIRROR2_MULT_MAX = 2


def random_spec(rng: random.Random, ell: int, gamma_max: int = 3, mult_max: int = 2, gamma_min: int = -3) -> KatalanSpec:
    psi = rng.choice(all_root_ideals(ell))
    mults = tuple(rng.randint(0, mult_max) for _ in range(ell))
    gamma = tuple(rng.randint(gamma_min, gamma_max) for _ in range(ell))
    return KatalanSpec(psi, mults, gamma)


def relation_verdicts(seed: int = 0, count: int = 250, ell_max: int = 4) -> Iterator[Verdict]:
    """``count`` distinct random specs with 1 <= l <= ell_max; every applicable relation on each."""
    rng = random.Random(seed)
    seen: set[KatalanSpec] = set()
    while len(seen) < count:
        spec = random_spec(rng, rng.randint(1, ell_max))
        if spec in seen:
            continue
        seen.add(spec)
        for beta in sorted(spec.psi.removable_roots()):
            yield verify_relations(spec, "a", beta)
        for alpha in sorted(spec.psi.addable_roots()):
            yield verify_relations(spec, "b", alpha)
        for m in range(1, spec.ell + 1):
            if spec.mults[m - 1]:
                yield verify_relations(spec, "c", m)
            yield verify_relations(spec, "d", m)


def kk_zero_verdicts(ell: int) -> Iterator[Verdict]:
    for spec, z in kk_zero_instances(ell, mult_max=KK_MULT_MAX):
        yield verify_kk_zero(spec, z)


def mirror_verdicts(ell: int) -> Iterator[Verdict]:
    for spec, y, z in mirror_instances(ell, mult_max=MIRROR_MULT_MAX):
        yield verify_mirror(spec, y, z)


def mirror2_verdicts(ell: int) -> Iterator[Verdict]:
    for spec, y, z in mirror2_instances(ell, mult_max=MIRROR2_MULT_MAX):
        yield verify_mirror2(spec, y, z)


def nilpotence_verdicts(ell: int, gamma_max: int = 3, seed: int = 0, count: int = 200) -> Iterator[Verdict]:
    """L_z^n K at the smallest n the bound allows, on random specs of length ell."""
    rng = random.Random(seed)
    for _ in range(count):
        spec = random_spec(rng, ell, gamma_max)
        spec = spec.with_gamma(tuple(max(g, 0) for g in spec.gamma))
        for z in range(1, ell + 1):
            yield verify_nilpotence(spec, z, spec.gamma[z - 1] + ell - z + 1)


def indkey_verdicts(ell: int, k_max: int = 4) -> Iterator[Verdict]:
    """Every (lambda, z, a) with k <= k_max, lambda in P^k_l, meeting the telescoping hypotheses."""
    for k in range(1, k_max + 1):
        for lam in enumerate_partitions(k, k * ell, max_length=ell):
            lam = pad(lam, ell)
            for z in range(1, ell + 1):
                if indkey_hypotheses(lam, k, ell, z, 1) == "z out of range":
                    continue
                c = len(down_iterates(lam, k, ell, z)) + 1
                for a in range(1, max(c, 2)):
                    if indkey_hypotheses(lam, k, ell, z, a) is None:
                        yield indkey_check(lam, k, ell, z, a)


SUITES: dict[str, Callable[[int], Iterator[Verdict]]] = {
    "kk_zero": kk_zero_verdicts,
    "mirror": mirror_verdicts,
    "mirror2": mirror2_verdicts,
    "indkey": indkey_verdicts,
    "nilpotence": nilpotence_verdicts,
}


@dataclass
class Tally:
    counts: Counter = field(default_factory=Counter)
    failures: list[Verdict] = field(default_factory=list)

    def add(self, v: Verdict) -> None:
        self.counts[v.status] += 1
        if v.status == "fails":
            self.failures.append(v)

    @property
    def instances(self) -> int:
        return sum(self.counts.values())

    def summary(self) -> dict:
        return {"instances": self.instances, "holds": self.counts["holds"],
                "fails": self.counts["fails"], "not_applicable": self.counts["not_applicable"]}


def run(verdicts: Iterator[Verdict], limit: Optional[int] = None) -> Tally:
    tally = Tally()
    for i, v in enumerate(verdicts):
        if limit is not None and i >= limit:
            break
        tally.add(v)
    return tally
