"""Model dynamical systems: symbolic shifts and interval/circle maps.

Points are either eventually-constant symbol sequences (``Word``) or real
vectors (``RealPoint``).  Every system knows its map, its base metric, the
induced orbit (Bowen) metric, and how to generate a finite candidate set
that is dense enough for scale-``eps`` estimates.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np


class BudgetExceededError(RuntimeError):
    """Candidate generation would exceed the point budget."""

    def __init__(self, message: str, achieved_mesh: float | None = None):
        super().__init__(message)
        self.achieved_mesh = achieved_mesh


@dataclass(frozen=True)
class Word:
    """Eventually-constant symbol sequence: explicit prefix, then ``tail`` forever."""

    symbols: tuple[int, ...]
    tail: int = 0

    def coord(self, i: int) -> int:
        return self.symbols[i] if i < len(self.symbols) else self.tail

    def shift(self) -> "Word":
        if not self.symbols:
            return self
        return Word(self.symbols[1:], self.tail)

    def prefix(self, length: int) -> tuple[int, ...]:
        return tuple(self.coord(i) for i in range(length))


@dataclass(frozen=True)
class RealPoint:
    coords: tuple[float, ...]

    @property
    def x(self) -> float:
        return self.coords[0]


def real(x: float | Sequence[float]) -> RealPoint:
    """Build a RealPoint from a scalar or a coordinate sequence."""
    if isinstance(x, (int, float)):
        return RealPoint((float(x),))
    return RealPoint(tuple(float(c) for c in x))


Point = Word | RealPoint


def shift_metric(x: Word, y: Word) -> float:
    """Distance sum(d(x_i, y_i) / 2^i); exact because terms are dyadic."""
    L = max(len(x.symbols), len(y.symbols))
    d = 0.0
    for i in range(L):
        if x.coord(i) != y.coord(i):
            d += 2.0 ** (-i)
    if x.tail != y.tail:
        # all coordinates from L on disagree: geometric tail sums to 2^-(L-1)
        d += 2.0 ** (-(L - 1))
    return d


def circle_metric(x: float, y: float) -> float:
    d = abs(x - y)
    return min(d, 1.0 - d)


@dataclass
class CandidateSet:
    """Finite point family used by the estimators, with density bookkeeping."""

    points: list
    certified: bool = True
    capped: bool = False
    mesh: float | None = None


class System:
    """Base interface shared by all model systems."""

    label: str = "system"

    def apply(self, x: Point) -> Point:
        raise NotImplementedError

    def metric(self, x: Point, y: Point) -> float:
        raise NotImplementedError

    def iterate(self, x: Point, j: int) -> Point:
        for _ in range(j):
            x = self.apply(x)
        return x

    def orbit(self, x: Point, n: int) -> list[Point]:
        out = [x]
        for _ in range(n - 1):
            out.append(self.apply(out[-1]))
        return out

    def bowen_metric(self, n: int, x: Point, y: Point) -> float:
        """max of metric(T^j x, T^j y) over 0 <= j < n."""
        if n < 1:
            raise ValueError("bowen_metric needs n >= 1")
        best = 0.0
        for _ in range(n):
            d = self.metric(x, y)
            if d > best:
                best = d
            x = self.apply(x)
            y = self.apply(y)
        return best

    def candidate_set(self, n: int, eps: float, budget: int = 2_000_000) -> CandidateSet:
        raise NotImplementedError

    def validate_point(self, x: Point) -> None:
        raise NotImplementedError

    def sample_points(self, count: int, rng: np.random.Generator) -> list[Point]:
        raise NotImplementedError

    def inverse(self) -> "System":
        raise NotImplementedError(f"{self.label} is not invertible here")


def scale_index(eps: float) -> int:
    """Number of extra symbol coordinates needed to resolve scale eps."""
    return max(0, math.ceil(math.log2(1.0 / eps))) + 1


class ShiftSystem(System):
    """Common machinery for the full shift and subshifts of finite type."""

    k: int  # alphabet size

    def is_admissible_pair(self, a: int, b: int) -> bool:
        raise NotImplementedError

    def is_admissible_word(self, w: Sequence[int]) -> bool:
        return all(self.is_admissible_pair(w[i], w[i + 1]) for i in range(len(w) - 1))

    def admissible_words(self, length: int) -> Iterator[tuple[int, ...]]:
        if length == 0:
            yield ()
            return
        stack: list[tuple[int, ...]] = [(s,) for s in range(self.k)]
        while stack:
            w = stack.pop()
            if len(w) == length:
                yield w
                continue
            for s in range(self.k - 1, -1, -1):
                if self.is_admissible_pair(w[-1], s):
                    stack.append(w + (s,))

    @property
    def tail_symbol(self) -> int:
        raise NotImplementedError

    def bridge_to_tail(self, last: int) -> tuple[int, ...]:
        """Shortest admissible path from ``last`` into the constant tail symbol."""
        raise NotImplementedError

    def representative(self, word: Sequence[int]) -> Word:
        """Canonical point of the cylinder [word]: bridge to the tail, then constant."""
        w = tuple(word)
        t = self.tail_symbol
        if not w:
            return Word((), t)
        bridge = self.bridge_to_tail(w[-1])
        return Word(w + bridge, t)

    def apply(self, x: Word) -> Word:
        return x.shift()

    def metric(self, x: Word, y: Word) -> float:
        return shift_metric(x, y)

    def candidate_set(self, n: int, eps: float, budget: int = 2_000_000) -> CandidateSet:
        k_extra = scale_index(eps)
        length = n + k_extra
        total = word_total(self, length)
        if total > budget:
            raise BudgetExceededError(
                f"{total} admissible words of length {length} exceed budget {budget}"
            )
        pts = [self.representative(w) for w in self.admissible_words(length)]
        return CandidateSet(points=pts, certified=True, capped=False, mesh=None)

    def validate_point(self, x: Point) -> None:
        if not isinstance(x, Word):
            raise TypeError("shift systems take Word points")
        for s in x.symbols + (x.tail,):
            if not 0 <= s < self.k:
                raise ValueError(f"symbol {s} outside alphabet of size {self.k}")
        full = x.symbols + (x.tail, x.tail)
        if not self.is_admissible_word(full):
            raise ValueError("word hits a forbidden transition")

    def sample_points(self, count: int, rng: np.random.Generator, length: int = 24) -> list[Point]:
        out = []
        for _ in range(count):
            w = [int(rng.integers(self.k))]
            while len(w) < length:
                options = [s for s in range(self.k) if self.is_admissible_pair(w[-1], s)]
                w.append(int(options[rng.integers(len(options))]))
            out.append(self.representative(tuple(w)))
        return out


@dataclass(frozen=True)
class FullShift(ShiftSystem):
    k: int = 2

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("alphabet needs at least 2 symbols")

    @property
    def label(self) -> str:
        return f"full_shift({self.k})"

    def is_admissible_pair(self, a: int, b: int) -> bool:
        return True

    @property
    def tail_symbol(self) -> int:
        return 0

    def bridge_to_tail(self, last: int) -> tuple[int, ...]:
        return ()


@dataclass(frozen=True)
class SFT(ShiftSystem):
    """Subshift of finite type given by a 0/1 transition matrix."""

    matrix: tuple[tuple[int, ...], ...]
    _tail: int = field(init=False, repr=False, compare=False, default=0)
    _bridges: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False, default=())

    def __post_init__(self):
        m = tuple(tuple(int(v) for v in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        size = len(m)
        if size == 0 or any(len(row) != size for row in m):
            raise ValueError("transition matrix must be square")
        if any(not any(row) for row in m):
            raise ValueError("transition matrix has a dead state (all-zero row)")
        loops = [s for s in range(size) if m[s][s]]
        if not loops:
            raise ValueError("need at least one symbol with a self-loop for constant tails")
        tail = loops[0]
        # BFS from every symbol toward the tail symbol; shortest admissible bridge.
        bridges: list[tuple[int, ...] | None] = [None] * size
        bridges[tail] = ()
        frontier = [tail]
        while frontier:
            nxt = []
            for t in frontier:
                for s in range(size):
                    if bridges[s] is None and m[s][t]:
                        bridges[s] = (t,) + bridges[t]
                        nxt.append(s)
            frontier = nxt
        if any(b is None for b in bridges):
            raise ValueError("some symbol cannot reach the tail symbol")
        object.__setattr__(self, "_tail", tail)
        object.__setattr__(self, "_bridges", tuple(bridges))

    @property
    def k(self) -> int:
        return len(self.matrix)

    @property
    def label(self) -> str:
        return f"sft({self.k})"

    def is_admissible_pair(self, a: int, b: int) -> bool:
        return bool(self.matrix[a][b])

    @property
    def tail_symbol(self) -> int:
        return self._tail

    def bridge_to_tail(self, last: int) -> tuple[int, ...]:
        return self._bridges[last]


def golden_mean_sft() -> SFT:
    """Two symbols, the pair 11 forbidden."""
    return SFT(((1, 1), (1, 0)))


def word_total(system: ShiftSystem, length: int) -> int:
    """Exact number of admissible words (Python ints, no overflow)."""
    if length == 0:
        return 1
    if isinstance(system, FullShift):
        return system.k**length
    counts = [1] * system.k
    for _ in range(length - 1):
        counts = [
            sum(counts[b] for b in range(system.k) if system.is_admissible_pair(a, b))
            for a in range(system.k)
        ]
    return sum(counts)


class CircleSystem(System):
    """Maps of the circle R/Z with the arc-length metric."""

    lipschitz: float = 1.0

    def metric(self, x: RealPoint, y: RealPoint) -> float:
        return circle_metric(x.x, y.x)

    def validate_point(self, x: Point) -> None:
        if not isinstance(x, RealPoint):
            raise TypeError("circle systems take RealPoint points")
        if not 0.0 <= x.x < 1.0:
            raise ValueError("circle coordinate outside [0, 1)")

    def candidate_set(self, n: int, eps: float, budget: int = 2_000_000) -> CandidateSet:
        # Uniform grid; mesh eps / (2 Lip^(n-1)) keeps the orbit error under eps/2.
        target = eps / (2.0 * self.lipschitz ** (n - 1))
        m = max(1, math.ceil(1.0 / target))
        capped = m > budget
        if capped:
            m = budget
        achieved = 1.0 / m
        pts = [real(i / m) for i in range(m)]
        return CandidateSet(points=pts, certified=not capped or achieved <= target,
                            capped=capped, mesh=achieved)

    def sample_points(self, count: int, rng: np.random.Generator) -> list[Point]:
        return [real(float(v)) for v in rng.random(count)]


@dataclass(frozen=True)
class DoublingMap(CircleSystem):
    @property
    def label(self) -> str:
        return "doubling"

    @property
    def lipschitz(self) -> float:
        return 2.0

    def apply(self, x: RealPoint) -> RealPoint:
        return real((2.0 * x.x) % 1.0)


@dataclass(frozen=True)
class Rotation(CircleSystem):
    theta: float = 0.125

    @property
    def label(self) -> str:
        return f"rotation({self.theta})"

    @property
    def lipschitz(self) -> float:
        return 1.0

    def apply(self, x: RealPoint) -> RealPoint:
        return real((x.x + self.theta) % 1.0)

    def inverse(self) -> "Rotation":
        return Rotation((-self.theta) % 1.0)


@dataclass(frozen=True)
class Contraction(System):
    """x -> fixed + c (x - fixed) on the interval [0, 1]."""

    c: float = 0.5
    fixed: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise ValueError("contraction factor must lie in (0, 1)")

    @property
    def label(self) -> str:
        return f"contraction({self.c})"

    def apply(self, x: RealPoint) -> RealPoint:
        return real(self.fixed + self.c * (x.x - self.fixed))

    def metric(self, x: RealPoint, y: RealPoint) -> float:
        return abs(x.x - y.x)

    def validate_point(self, x: Point) -> None:
        if not isinstance(x, RealPoint):
            raise TypeError("contraction takes RealPoint points")
        if not 0.0 <= x.x <= 1.0:
            raise ValueError("interval coordinate outside [0, 1]")

    def candidate_set(self, n: int, eps: float, budget: int = 2_000_000) -> CandidateSet:
        mesh = eps / 2.0
        m = math.ceil(1.0 / mesh)
        capped = m > budget
        if capped:
            m = budget
        achieved = 1.0 / m
        pts = [real(min(1.0, i * achieved)) for i in range(m + 1)]
        return CandidateSet(points=pts, certified=not capped, capped=capped, mesh=achieved)

    def sample_points(self, count: int, rng: np.random.Generator) -> list[Point]:
        return [real(float(v)) for v in rng.random(count)]


@dataclass(frozen=True)
class PowerSystem(System):
    """Same space, map iterated ``power`` times."""

    base: System
    power: int

    def __post_init__(self):
        if self.power < 1:
            raise ValueError("power must be >= 1")

    @property
    def label(self) -> str:
        return f"{self.base.label}^({self.power})"

    def apply(self, x: Point) -> Point:
        return self.base.iterate(x, self.power)

    def metric(self, x: Point, y: Point) -> float:
        return self.base.metric(x, y)

    def validate_point(self, x: Point) -> None:
        self.base.validate_point(x)

    def candidate_set(self, n: int, eps: float, budget: int = 2_000_000) -> CandidateSet:
        # n steps of T^power read at most (n-1) power + 1 steps of T.
        return self.base.candidate_set((n - 1) * self.power + 1, eps, budget)

    def sample_points(self, count: int, rng: np.random.Generator) -> list[Point]:
        return self.base.sample_points(count, rng)


@dataclass(frozen=True)
class FactorMap:
    """Semi-conjugacy pi: source -> target with a uniform continuity modulus.

    ``modulus(eps)`` returns delta such that d(x, y) < delta forces
    d(pi x, pi y) < eps; checked empirically by the verification suites.
    """

    source: System
    target: System
    transform: Callable[[Point], Point]
    modulus: Callable[[float], float]
    label: str = "factor"

    def apply(self, x: Point) -> Point:
        return self.transform(x)


def _binary_value(x: Word) -> float:
    L = len(x.symbols)
    v = 0.0
    for i, s in enumerate(x.symbols):
        if s:
            v += 2.0 ** (-(i + 1))
    if x.tail:
        v += 2.0 ** (-L)
    return v % 1.0


def binary_expansion_map(source: FullShift | None = None) -> FactorMap:
    """Binary-digit reading map from the 2-shift onto the doubling map."""
    src = source or FullShift(2)
    if src.k != 2:
        raise ValueError("binary expansion needs a 2-symbol shift")
    return FactorMap(
        source=src,
        target=DoublingMap(),
        transform=lambda w: real(_binary_value(w)),
        modulus=lambda eps: eps / 2.0,
        label="binary_expansion",
    )


def identity_factor(system: System) -> FactorMap:
    return FactorMap(system, system, lambda x: x, lambda eps: eps, label="identity")


def semiconjugacy_defect(pi: FactorMap, points: Iterable[Point]) -> float:
    """max distance between pi(T x) and S(pi x) over the sample."""
    worst = 0.0
    for x in points:
        a = pi.apply(pi.source.apply(x))
        b = pi.target.apply(pi.apply(x))
        worst = max(worst, pi.target.metric(a, b))
    return worst
