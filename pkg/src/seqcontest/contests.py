"""Disclosure structures as integer compositions.

A contest with n players is a composition ``(n_1, ..., n_T)``. Its integer
ID is the disclosure bitmask: bit ``j - 1`` is set when efforts are
disclosed right after player ``j`` (``j = 1..n-1``).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import accumulate
from typing import Iterator, Sequence

from seqcontest.errors import InvalidContest

MAX_PLAYERS = 64
DEFAULT_EXHAUSTIVE_CAP = 16


def exhaustive_cap() -> int:
    """Largest n for exhaustive enumeration (``CONTEST_MAX_N`` overrides)."""
    raw = os.environ.get("CONTEST_MAX_N")
    if raw is None:
        return DEFAULT_EXHAUSTIVE_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InvalidContest(f"CONTEST_MAX_N={raw!r} is not an integer") from exc
    return max(1, min(cap, MAX_PLAYERS))


@dataclass(frozen=True, order=True)
class Contest:
    periods: tuple[int, ...]

    def __post_init__(self):
        periods = tuple(int(p) for p in self.periods)
        if not periods:
            raise InvalidContest("a contest needs at least one period")
        if any(p < 1 for p in periods):
            raise InvalidContest(f"period sizes must be positive: {periods}")
        if sum(periods) > MAX_PLAYERS:
            raise InvalidContest(f"{sum(periods)} players exceeds the cap of {MAX_PLAYERS}")
        object.__setattr__(self, "periods", periods)

    @property
    def n(self) -> int:
        return sum(self.periods)

    @property
    def T(self) -> int:
        return len(self.periods)

    def __len__(self) -> int:
        return len(self.periods)

    def __iter__(self):
        return iter(self.periods)

    def __str__(self) -> str:
        return ",".join(map(str, self.periods))

    @property
    def contest_id(self) -> int:
        cid = 0
        for cut in list(accumulate(self.periods))[:-1]:
            cid |= 1 << (cut - 1)
        return cid

    @classmethod
    def from_id(cls, n: int, cid: int) -> "Contest":
        if n < 1 or not 0 <= cid < (1 << (n - 1)):
            raise InvalidContest(f"id {cid} out of range for n = {n}")
        periods, run = [], 1
        for j in range(1, n):
            if cid >> (j - 1) & 1:
                periods.append(run)
                run = 1
            else:
                run += 1
        periods.append(run)
        return cls(tuple(periods))

    @classmethod
    def parse(cls, literal: str) -> "Contest":
        try:
            return cls(tuple(int(p) for p in literal.replace(" ", "").split(",") if p))
        except ValueError as exc:
            raise InvalidContest(f"cannot parse contest literal {literal!r}") from exc

    # canonical structures

    @classmethod
    def simultaneous(cls, n: int) -> "Contest":
        return cls((n,))

    @classmethod
    def sequential(cls, n: int) -> "Contest":
        return cls((1,) * n)

    @classmethod
    def first_mover(cls, n: int) -> "Contest":
        if n < 2:
            raise InvalidContest("first-mover contest needs n >= 2")
        return cls((1, n - 1))

    @classmethod
    def leader_pairwise(cls, n: int) -> "Contest":
        """(1, 2, ..., 2) for odd n, (1, 2, ..., 2, 1) for even n."""
        if n < 2:
            raise InvalidContest("needs n >= 2")
        rest = (2,) * ((n - 1) // 2)
        return cls((1,) + rest + ((1,) if n % 2 == 0 else ()))

    @classmethod
    def two_then_singletons(cls, n: int) -> "Contest":
        """(2, 1, ..., 1); for n = 2 this is the simultaneous contest."""
        if n < 2:
            raise InvalidContest("needs n >= 2")
        return cls((2,) + (1,) * (n - 2))

    def is_sequential(self) -> bool:
        return all(p == 1 for p in self.periods)

    def is_simultaneous(self) -> bool:
        return self.T == 1

    def is_first_mover(self) -> bool:
        return self.n >= 2 and self.periods == (1, self.n - 1)

    def is_single_leader(self) -> bool:
        return self.periods[0] == 1


def as_periods(c: Contest | Sequence[int]) -> tuple[int, ...]:
    return c.periods if isinstance(c, Contest) else tuple(int(p) for p in c)


def info_measures(c: Contest | Sequence[int]) -> tuple[int, ...]:
    """Elementary symmetric polynomials (S_1, ..., S_T) of the period sizes.

    Built from the coefficients of prod_t (z + n_t) in exact integers.
    """
    periods = as_periods(c)
    if sum(periods) > MAX_PLAYERS:
        raise InvalidContest(f"total {sum(periods)} exceeds the cap of {MAX_PLAYERS}")
    e = [1] + [0] * len(periods)
    for i, p in enumerate(periods, start=1):
        for k in range(i, 0, -1):
            e[k] += p * e[k - 1]
    return tuple(e[1:])


def subcontest(c: Contest, t: int) -> tuple[int, ...]:
    """Periods after period t, i.e. (n_{t+1}, ..., n_T); empty when t = T."""
    if not 0 <= t <= c.T:
        raise InvalidContest(f"period index {t} outside 0..{c.T}")
    return c.periods[t:]


def refines(finer: Contest, coarser: Contest) -> bool:
    """True iff ``finer`` is at least as informative as ``coarser``.

    Every disclosure of ``coarser`` must also be a disclosure of ``finer``;
    equivalently, coarser's periods are merges of consecutive periods of
    finer. Reflexive.
    """
    if finer.n != coarser.n:
        raise InvalidContest(f"cannot compare contests with {finer.n} and {coarser.n} players")
    return coarser.contest_id & ~finer.contest_id == 0


def strictly_refines(finer: Contest, coarser: Contest) -> bool:
    return finer != coarser and refines(finer, coarser)


def enumerate_contests(n: int, cap: int | None = None) -> Iterator[Contest]:
    """All 2^(n-1) compositions of n in ascending contest-ID order."""
    cap = exhaustive_cap() if cap is None else cap
    if not 1 <= n <= cap:
        raise InvalidContest(f"n = {n} outside 1..{cap}")
    for cid in range(1 << (n - 1)):
        yield Contest.from_id(n, cid)
