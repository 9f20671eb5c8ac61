"""
Walters-class potentials on the full 2-shift.

A potential is given by four sequences a_n (n >= 2), b_n (n >= 1), c_n (n >= 2)
and d_n (n >= 1) with limits a, b, c, d:

    f(0^p 1 z) = a_p,   f(0 1^q 0 z) = b_q,   f(1^p 0 z) = c_p,   f(1 0^q 1 z) = d_q,
    f(0^inf) = a,       f(0 1^inf) = b,       f(1^inf) = c,       f(1 0^inf) = d.

Each sequence is stored as exact prefix values plus an analytic tail so that the
infinite series built from it can be summed with controlled error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Optional, Union

import numpy as np

from walters_thermo.errors import SpecValidationError


@dataclass(frozen=True)
class ConstantTail:
    """s_n = limit beyond the prefix."""

    limit: float

    def excess(self, n: int) -> float:
        return 0.0

    def to_dict(self) -> dict:
        return {"type": "constant", "limit": self.limit}


@dataclass(frozen=True)
class GeometricTail:
    """s_n = limit + coeff * ratio**n beyond the prefix."""

    limit: float
    coeff: float
    ratio: float

    def __post_init__(self):
        if not 0 < abs(self.ratio) < 1:
            raise SpecValidationError(
                f"geometric tail ratio must satisfy 0 < |ratio| < 1, got {self.ratio}",
                module="potential",
            )

    def excess(self, n: int) -> float:
        return self.coeff * self.ratio ** n

    def to_dict(self) -> dict:
        return {"type": "geometric", "limit": self.limit, "coeff": self.coeff, "ratio": self.ratio}


Tail = Union[ConstantTail, GeometricTail]


def _geometric_block(coeff: float, ratio: float, lo: int, count: int) -> float:
    """Sum of coeff * ratio**n for n = lo .. lo + count - 1."""
    if count <= 0 or coeff == 0.0:
        return 0.0
    return coeff * ratio ** lo * (1.0 - ratio ** count) / (1.0 - ratio)


@dataclass(frozen=True)
class SequenceSpec:
    """
    One defining sequence: exact values s_start, ..., s_N and a tail model for n > N.

    Attributes:
        start_index: 2 for the a- and c-sequences, 1 for the b- and d-sequences
        prefix: Exact values starting at start_index (may be empty)
        tail: ConstantTail or GeometricTail governing every index past the prefix
    """

    start_index: int
    prefix: tuple = ()
    tail: Tail = field(default_factory=lambda: ConstantTail(0.0))

    def __post_init__(self):
        if self.start_index not in (1, 2):
            raise SpecValidationError(
                f"start_index must be 1 or 2, got {self.start_index}", module="potential"
            )
        values = tuple(float(v) for v in self.prefix)
        if not all(math.isfinite(v) for v in values):
            raise SpecValidationError("prefix values must be finite", module="potential")
        if not math.isfinite(self.tail.limit):
            raise SpecValidationError("tail limit must be finite", module="potential")
        object.__setattr__(self, "prefix", values)

    @property
    def limit(self) -> float:
        return self.tail.limit

    @property
    def last_prefix_index(self) -> int:
        """Index N of the last exact value (start_index - 1 when the prefix is empty)."""
        return self.start_index + len(self.prefix) - 1

    @property
    def tail_coeff(self) -> float:
        return getattr(self.tail, "coeff", 0.0)

    @property
    def tail_ratio(self) -> float:
        return getattr(self.tail, "ratio", 0.0)

    def value_at(self, n: int) -> float:
        """Return s_n for n >= start_index."""
        if n < self.start_index:
            raise ValueError(f"index {n} below start index {self.start_index}")
        if n <= self.last_prefix_index:
            return self.prefix[n - self.start_index]
        return self.tail.limit + self.tail.excess(n)

    def values(self, lo: int, hi: int) -> np.ndarray:
        """Vector of s_n for lo <= n < hi."""
        return np.array([self.value_at(n) for n in range(lo, hi)], dtype=float)

    def partial_sum(self, q: int, j: int) -> float:
        """s_{q+1} + ... + s_{q+j}; zero when j == 0."""
        if q < self.start_index - 1:
            raise ValueError(f"q={q} reaches below start index {self.start_index}")
        if j < 0:
            raise ValueError(f"j must be non-negative, got {j}")
        lo, hi = q + 1, q + j
        if hi < lo:
            return 0.0
        exact_hi = min(hi, self.last_prefix_index)
        exact = [self.prefix[n - self.start_index] for n in range(lo, exact_hi + 1)]
        tail_lo = max(lo, self.last_prefix_index + 1)
        count = hi - tail_lo + 1
        tail = 0.0
        if count > 0:
            tail = count * self.limit + _geometric_block(self.tail_coeff, self.tail_ratio, tail_lo, count)
        return math.fsum(exact) + tail

    def deviation_sum(self, q: int, j: int) -> float:
        """(s_{q+1} - limit) + ... + (s_{q+j} - limit), exact."""
        if j <= 0:
            return 0.0
        lo, hi = q + 1, q + j
        exact = [self.prefix[n - self.start_index] - self.limit
                 for n in range(lo, min(hi, self.last_prefix_index) + 1)]
        tail_lo = max(lo, self.last_prefix_index + 1)
        return math.fsum(exact) + _geometric_block(self.tail_coeff, self.tail_ratio, tail_lo, hi - tail_lo + 1)

    def tail_sum(self, q: int) -> float:
        """Sum over j >= 1 of (s_{q+j} - limit), in closed form."""
        if q < self.start_index - 1:
            raise ValueError(f"q={q} reaches below start index {self.start_index}")
        lo = q + 1
        exact = [self.prefix[n - self.start_index] - self.limit
                 for n in range(lo, self.last_prefix_index + 1)]
        tail_lo = max(lo, self.last_prefix_index + 1)
        tail = 0.0
        if self.tail_coeff != 0.0:
            tail = self.tail_coeff * self.tail_ratio ** tail_lo / (1.0 - self.tail_ratio)
        return math.fsum(exact) + tail

    def correction_bound(self, n: int) -> float:
        """Bound on |s_m - limit| for all m >= n, valid once n is past the prefix."""
        if n <= self.last_prefix_index:
            return math.inf
        return abs(self.tail_coeff) * abs(self.tail_ratio) ** n

    def remainder_bound(self, n: int) -> float:
        """Bound on the sum over m >= n of |s_m - limit|, valid once n is past the prefix."""
        if n <= self.last_prefix_index:
            return math.inf
        if self.tail_coeff == 0.0:
            return 0.0
        r = abs(self.tail_ratio)
        return abs(self.tail_coeff) * r ** n / (1.0 - r)

    def supremum(self) -> float:
        """Supremum of all values and the limit."""
        first_tail = self.last_prefix_index + 1
        tail_sup = self.limit + max(
            0.0, self.tail.excess(first_tail), self.tail.excess(first_tail + 1)
        )
        return max(list(self.prefix) + [tail_sup])

    def is_constant(self) -> bool:
        """True when s_n equals the limit for every n."""
        return self.tail_coeff == 0.0 and all(v == self.limit for v in self.prefix)

    def all_below(self, bound: float) -> bool:
        """True when every s_n is strictly below bound (the limit itself may equal it)."""
        if any(v >= bound for v in self.prefix):
            return False
        if self.tail_coeff == 0.0:
            return self.limit < bound
        if self.limit > bound:
            return False
        first_tail = self.last_prefix_index + 1
        peak = max(self.tail.excess(first_tail), self.tail.excess(first_tail + 1))
        return self.limit + peak < bound

    def to_dict(self) -> dict:
        return {"start_index": self.start_index, "prefix": list(self.prefix), "tail": self.tail.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> tuple["SequenceSpec", Optional[str]]:
        """
        Build a sequence from its JSON form.

        Returns:
            The sequence and an interpretation note when the tail was inferred
        """
        note = None
        tail_data = data.get("tail")
        if tail_data is None:
            if "limit" not in data:
                raise SpecValidationError("sequence needs a 'tail' or a 'limit'", module="potential")
            tail: Tail = ConstantTail(float(data["limit"]))
            note = "constant tail at the stated limit assumed beyond the prefix"
        else:
            kind = tail_data.get("type", "constant")
            if kind == "constant":
                tail = ConstantTail(float(tail_data["limit"]))
            elif kind == "geometric":
                tail = GeometricTail(
                    float(tail_data["limit"]), float(tail_data["coeff"]), float(tail_data["ratio"])
                )
            else:
                raise SpecValidationError(f"unknown tail type {kind!r}", module="potential")
        try:
            start_index = int(data["start_index"])
        except KeyError:
            raise SpecValidationError("sequence needs a 'start_index'", module="potential")
        return cls(start_index, tuple(data.get("prefix", ())), tail), note


class Side(str, Enum):
    """Which of the two pattern series: D pairs (d, a), B pairs (b, c)."""

    D = "D"
    B = "B"


@dataclass(frozen=True)
class WaltersPotential:
    """
    A summable Walters potential.

    Attributes:
        a_seq, b_seq, c_seq, d_seq: The four defining sequences
        name: Label used in reports
        notes: Interpretation notes recorded while building the potential
    """

    a_seq: SequenceSpec
    b_seq: SequenceSpec
    c_seq: SequenceSpec
    d_seq: SequenceSpec
    name: str = "custom"
    notes: tuple = ()

    def __post_init__(self):
        for label, seq, start in (("a", self.a_seq, 2), ("b", self.b_seq, 1),
                                  ("c", self.c_seq, 2), ("d", self.d_seq, 1)):
            if seq.start_index != start:
                raise SpecValidationError(
                    f"{label}-sequence must start at n={start}, got {seq.start_index}",
                    module="potential",
                )

    @property
    def a(self) -> float:
        return self.a_seq.limit

    @property
    def b(self) -> float:
        return self.b_seq.limit

    @property
    def c(self) -> float:
        return self.c_seq.limit

    @property
    def d(self) -> float:
        return self.d_seq.limit

    @property
    def max_ac(self) -> float:
        return max(self.a, self.c)

    def branch(self, side: Side) -> tuple[SequenceSpec, SequenceSpec]:
        """(head, run) sequences of a pattern series: (d, a) for D, (b, c) for B."""
        if side == Side.D:
            return self.d_seq, self.a_seq
        return self.b_seq, self.c_seq

    def sequences(self) -> dict:
        return {"a": self.a_seq, "b": self.b_seq, "c": self.c_seq, "d": self.d_seq}

    def shifted(self, kappa: float) -> "WaltersPotential":
        """f + kappa: kappa added to every value and limit."""
        def shift(seq: SequenceSpec) -> SequenceSpec:
            tail = seq.tail
            if isinstance(tail, GeometricTail):
                new_tail: Tail = GeometricTail(tail.limit + kappa, tail.coeff, tail.ratio)
            else:
                new_tail = ConstantTail(tail.limit + kappa)
            return SequenceSpec(seq.start_index, tuple(v + kappa for v in seq.prefix), new_tail)

        return replace(
            self,
            a_seq=shift(self.a_seq), b_seq=shift(self.b_seq),
            c_seq=shift(self.c_seq), d_seq=shift(self.d_seq),
            name=f"{self.name}{kappa:+g}",
        )

    def mirrored(self) -> "WaltersPotential":
        """The potential composed with the symbol flip 0 <-> 1 (a <-> c, b <-> d)."""
        return replace(
            self,
            a_seq=self.c_seq, b_seq=self.d_seq, c_seq=self.a_seq, d_seq=self.b_seq,
            name=f"{self.name}-mirror",
        )

    def to_dict(self) -> dict:
        return {key: seq.to_dict() for key, seq in self.sequences().items()}

    @classmethod
    def from_dict(cls, data: dict, name: str = "custom") -> "WaltersPotential":
        seqs = {}
        notes = []
        for key in ("a", "b", "c", "d"):
            if key not in data:
                raise SpecValidationError(f"potential spec is missing key {key!r}", module="potential")
            seqs[key], note = SequenceSpec.from_dict(data[key])
            if note:
                notes.append(f"{key}: {note}")
        return cls(seqs["a"], seqs["b"], seqs["c"], seqs["d"], name=name, notes=tuple(notes))


class PatternKind(str, Enum):
    ZERO_INF = "0^inf"
    ONE_INF = "1^inf"
    ZERO_RUN = "0^p1z"
    ONE_RUN = "1^p0z"
    ZERO_ONE_RUN = "01^q0z"
    ONE_ZERO_RUN = "10^q1z"
    ZERO_ONE_INF = "01^inf"
    ONE_ZERO_INF = "10^inf"


_RUN_KINDS = (PatternKind.ZERO_RUN, PatternKind.ONE_RUN,
              PatternKind.ZERO_ONE_RUN, PatternKind.ONE_ZERO_RUN)


@dataclass(frozen=True)
class PatternPoint:
    """
    An orbit-pattern class on which f and the eigenfunction are constant.

    ZERO_RUN(p) stands for 0^p 1 z and ONE_RUN(p) for 1^p 0 z. For p = 1 these
    classes still determine the eigenfunction (first run) but not f, which then
    depends on the second run.
    """

    kind: PatternKind
    n: Optional[int] = None

    def __post_init__(self):
        if self.kind in _RUN_KINDS:
            if self.n is None or self.n < 1:
                raise ValueError(f"{self.kind.value} needs a run length >= 1, got {self.n}")
        elif self.n is not None:
            raise ValueError(f"{self.kind.value} takes no run length")

    @classmethod
    def zero_inf(cls) -> "PatternPoint":
        return cls(PatternKind.ZERO_INF)

    @classmethod
    def one_inf(cls) -> "PatternPoint":
        return cls(PatternKind.ONE_INF)

    @classmethod
    def zero_run(cls, p: int) -> "PatternPoint":
        return cls(PatternKind.ZERO_RUN, p)

    @classmethod
    def one_run(cls, p: int) -> "PatternPoint":
        return cls(PatternKind.ONE_RUN, p)

    @classmethod
    def zero_one_run(cls, q: int) -> "PatternPoint":
        return cls(PatternKind.ZERO_ONE_RUN, q)

    @classmethod
    def one_zero_run(cls, q: int) -> "PatternPoint":
        return cls(PatternKind.ONE_ZERO_RUN, q)

    def first_run(self) -> tuple[int, Optional[int]]:
        """Symbol and length of the first run (None for an infinite run)."""
        kind = self.kind
        if kind == PatternKind.ZERO_INF:
            return 0, None
        if kind == PatternKind.ONE_INF:
            return 1, None
        if kind == PatternKind.ZERO_RUN:
            return 0, self.n
        if kind == PatternKind.ONE_RUN:
            return 1, self.n
        if kind in (PatternKind.ZERO_ONE_RUN, PatternKind.ZERO_ONE_INF):
            return 0, 1
        return 1, 1

    def prepend(self, symbol: int) -> "PatternPoint":
        """Pattern class of symbol·x for x in this class."""
        kind = self.kind
        if kind == PatternKind.ZERO_INF:
            return self if symbol == 0 else PatternPoint(PatternKind.ONE_ZERO_INF)
        if kind == PatternKind.ONE_INF:
            return PatternPoint(PatternKind.ZERO_ONE_INF) if symbol == 0 else self
        if kind == PatternKind.ZERO_RUN:
            if symbol == 0:
                return PatternPoint.zero_run(self.n + 1)
            return PatternPoint.one_zero_run(self.n)
        if kind == PatternKind.ONE_RUN:
            if symbol == 0:
                return PatternPoint.zero_one_run(self.n)
            return PatternPoint.one_run(self.n + 1)
        raise ValueError(f"prepend is only defined on 0^inf, 1^inf and run classes, not {kind.value}")

    def label(self) -> str:
        if self.n is None:
            return self.kind.value
        return self.kind.value.replace("^p", f"^{self.n}").replace("^q", f"^{self.n}")


def pattern_value(f: WaltersPotential, p: PatternPoint) -> float:
    """
    Value of f on a pattern class.

    Args:
        f: The potential
        p: A pattern class on which f is constant

    Returns:
        The corresponding sequence value or limit

    Raises:
        ValueError: For ZERO_RUN(1) / ONE_RUN(1), where f is not constant
    """
    kind = p.kind
    if kind == PatternKind.ZERO_INF:
        return f.a
    if kind == PatternKind.ONE_INF:
        return f.c
    if kind == PatternKind.ZERO_ONE_INF:
        return f.b
    if kind == PatternKind.ONE_ZERO_INF:
        return f.d
    if kind == PatternKind.ZERO_ONE_RUN:
        return f.b_seq.value_at(p.n)
    if kind == PatternKind.ONE_ZERO_RUN:
        return f.d_seq.value_at(p.n)
    if p.n < 2:
        raise ValueError(f"f is not constant on {p.label()}; use the 01^q0z / 10^q1z classes")
    if kind == PatternKind.ZERO_RUN:
        return f.a_seq.value_at(p.n)
    return f.c_seq.value_at(p.n)


@dataclass(frozen=True)
class Word:
    """A finite binary word naming the cylinder [w]."""

    bits: str

    def __post_init__(self):
        if not self.bits or set(self.bits) - {"0", "1"}:
            raise ValueError(f"a word must be a non-empty binary string, got {self.bits!r}")

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return self.bits

    @cached_property
    def runs(self) -> tuple:
        """Run-length decomposition as ((symbol, length), ...)."""
        runs = []
        for ch in self.bits:
            symbol = int(ch)
            if runs and runs[-1][0] == symbol:
                runs[-1][1] += 1
            else:
                runs.append([symbol, 1])
        return tuple((symbol, length) for symbol, length in runs)

    @classmethod
    def from_runs(cls, runs) -> "Word":
        return cls("".join(str(symbol) * length for symbol, length in runs))

    def is_pure_run(self) -> bool:
        return len(self.runs) == 1

    def first_run(self) -> tuple[int, int]:
        return self.runs[0]

    def shift(self) -> "Word":
        """sigma(w): the word with its first symbol dropped."""
        if len(self.bits) < 2:
            raise ValueError("cannot shift a word of length 1")
        return Word(self.bits[1:])

    def extend(self, symbol: int) -> "Word":
        return Word(self.bits + str(symbol))


def f_on_word(f: WaltersPotential, w: Word) -> Optional[float]:
    """
    Value of f on the cylinder [w] when f is constant there.

    Returns:
        The constant value, or None when [w] meets more than one pattern class
    """
    runs = w.runs
    if len(runs) == 1:
        return None
    symbol, first_len = runs[0]
    if first_len >= 2:
        return pattern_value(f, PatternPoint(PatternKind.ZERO_RUN if symbol == 0 else PatternKind.ONE_RUN, first_len))
    if len(runs) >= 3:
        second_len = runs[1][1]
        if symbol == 0:
            return f.b_seq.value_at(second_len)
        return f.d_seq.value_at(second_len)
    return None


def partial_sum(s: SequenceSpec, q: int, j: int) -> float:
    """s_{q+1} + ... + s_{q+j} (zero for j = 0)."""
    return s.partial_sum(q, j)


def tail_sum(s: SequenceSpec, q: int) -> float:
    """Sum over j >= 1 of (s_{q+j} - limit)."""
    return s.tail_sum(q)


def sup_f(f: WaltersPotential) -> float:
    """Supremum of f: the largest sequence value or limit."""
    return max(seq.supremum() for seq in f.sequences().values())
