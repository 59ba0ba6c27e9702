"""Exact rational distributions, joint tables and permutations.

Everything here works on :class:`fractions.Fraction`; floats are refused so
that classical certificates replay bit-for-bit.  Multi-indices flatten
row-major with subsystem 0 slowest.
"""

from __future__ import annotations

import itertools
import numbers
import re
from fractions import Fraction
from math import lcm, prod
from typing import Iterable, Sequence


class ExactError(ValueError):
    """Invalid exact distribution or permutation."""


def as_fraction(value) -> Fraction:
    """Coerce ints, rationals and "num/den" strings to a Fraction.

    Floats are rejected on purpose; use :func:`rationalize` for them.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ExactError("booleans are not probabilities")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ExactError(f"cannot parse rational {value!r}") from exc
    raise ExactError(f"expected an exact rational, got {type(value).__name__} {value!r}")


def rationalize(values: Sequence[float], max_denominator: int = 10**4) -> list[Fraction]:
    """Continued-fraction approximation of a float probability vector.

    Negative round-off is clamped to zero and the largest entry absorbs the
    remainder, so the result sums to exactly one.
    """
    if not values:
        raise ExactError("empty vector")
    approx = [Fraction(max(float(v), 0.0)).limit_denominator(max_denominator) for v in values]
    top = max(range(len(approx)), key=lambda i: (approx[i], -i))
    approx[top] += 1 - sum(approx)
    if approx[top] < 0:
        raise ExactError("vector too far from normalized to rationalize")
    return approx


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class JointDist:
    """Probability table over a product of finite subsystems."""

    __slots__ = ("entries", "shape")

    def __init__(self, entries: Iterable, shape: Sequence[int] | None = None):
        entries = tuple(as_fraction(e) for e in entries)
        if shape is None:
            shape = (len(entries),)
        shape = tuple(int(s) for s in shape)
        if not shape or any(s < 1 for s in shape):
            raise ExactError(f"invalid shape {shape}")
        if prod(shape) != len(entries):
            raise ExactError(f"shape {shape} does not match {len(entries)} entries")
        if any(e < 0 for e in entries):
            raise ExactError("negative probability")
        if sum(entries) != 1:
            raise ExactError(f"entries sum to {sum(entries)}, not 1")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "shape", shape)

    def __setattr__(self, name, value):
        raise AttributeError("distributions are immutable")

    def __eq__(self, other):
        if not isinstance(other, JointDist):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, index):
        if isinstance(index, tuple):
            return self.entries[flat_index(index, self.shape)]
        return self.entries[index]

    def __repr__(self):
        body = ", ".join(format_fraction(e) for e in self.entries)
        return f"{type(self).__name__}([{body}], shape={list(self.shape)})"

    @property
    def dimension(self) -> int:
        return len(self.entries)

    @property
    def rank(self) -> int:
        return sum(1 for e in self.entries if e != 0)

    def sorted_desc(self) -> list[Fraction]:
        return sorted(self.entries, reverse=True)

    def denominator(self) -> int:
        return lcm(*(e.denominator for e in self.entries))

    def as_floats(self) -> list[float]:
        return [float(e) for e in self.entries]

    def reshape(self, shape: Sequence[int]) -> "JointDist":
        shape = tuple(shape)
        if len(shape) == 1:
            return ProbVector(self.entries)
        return JointDist(self.entries, shape)


class ProbVector(JointDist):
    """A single-subsystem distribution."""

    __slots__ = ()

    def __init__(self, entries: Iterable):
        entries = tuple(entries)
        super().__init__(entries, (len(entries),))

    def __repr__(self):
        return f"ProbVector([{', '.join(format_fraction(e) for e in self.entries)}])"


def uniform(d: int) -> ProbVector:
    if d < 1:
        raise ExactError("dimension must be positive")
    return ProbVector([Fraction(1, d)] * d)


def point_mass(d: int, k: int = 0) -> ProbVector:
    return ProbVector([Fraction(int(i == k)) for i in range(d)])


def flat_index(index: Sequence[int], shape: Sequence[int]) -> int:
    flat = 0
    for i, s in zip(index, shape, strict=True):
        if not 0 <= i < s:
            raise IndexError(f"index {tuple(index)} out of range for shape {tuple(shape)}")
        flat = flat * s + i
    return flat


def tensor_dist(a: JointDist, b: JointDist) -> JointDist:
    entries = [x * y for x in a.entries for y in b.entries]
    return JointDist(entries, a.shape + b.shape)


def tensor_all(*dists: JointDist) -> JointDist:
    out = dists[0]
    for d in dists[1:]:
        out = tensor_dist(out, d)
    return out


def marginalize(j: JointDist, keep: Iterable[int]) -> JointDist:
    """Sum out every subsystem not in ``keep``; kept axes stay in ascending order."""
    keep = sorted(set(keep))
    if not keep:
        raise ExactError("keep set must be non-empty")
    if keep[0] < 0 or keep[-1] >= len(j.shape):
        raise ExactError(f"keep {keep} out of range for shape {list(j.shape)}")
    out_shape = tuple(j.shape[k] for k in keep)
    sums = [Fraction(0)] * prod(out_shape)
    for index, value in zip(itertools.product(*map(range, j.shape)), j.entries):
        if value:
            sums[flat_index([index[k] for k in keep], out_shape)] += value
    if len(out_shape) == 1:
        return ProbVector(sums)
    return JointDist(sums, out_shape)


class Permutation:
    """Bijection of {0..N-1}; ``mapping[i]`` is where entry i is sent."""

    __slots__ = ("mapping",)

    def __init__(self, mapping: Iterable[int]):
        mapping = tuple(int(m) for m in mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ExactError("mapping is not a bijection")
        object.__setattr__(self, "mapping", mapping)

    def __setattr__(self, name, value):
        raise AttributeError("permutations are immutable")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        m = list(range(n))
        m[i], m[j] = m[j], m[i]
        return cls(m)

    @classmethod
    def from_cycles(cls, size: int, text: str) -> "Permutation":
        """Parse cycle notation such as ``"(0 3)(2 5)"``."""
        mapping = list(range(size))
        seen = set()
        for body in re.findall(r"\(([^()]*)\)", text):
            cycle = [int(t) for t in body.replace(",", " ").split()]
            if seen.intersection(cycle) or len(set(cycle)) != len(cycle):
                raise ExactError(f"overlapping cycles in {text!r}")
            seen.update(cycle)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                if not (0 <= a < size and 0 <= b < size):
                    raise ExactError(f"cycle entry out of range in {text!r}")
                mapping[a] = b
        if re.sub(r"\([^()]*\)", "", text).strip():
            raise ExactError(f"malformed cycle string {text!r}")
        return cls(mapping)

    @property
    def size(self) -> int:
        return len(self.mapping)

    def __len__(self):
        return len(self.mapping)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.mapping == other.mapping

    def __hash__(self):
        return hash(self.mapping)

    def __repr__(self):
        return f"Permutation({self.size}, {self.cycles()!r})"

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def compose(self, inner: "Permutation") -> "Permutation":
        """``self ∘ inner``: apply ``inner`` first."""
        if inner.size != self.size:
            raise ExactError("size mismatch in composition")
        return Permutation(self.mapping[k] for k in inner.mapping)

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, m in enumerate(self.mapping):
            inv[m] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(i == m for i, m in enumerate(self.mapping))

    def cycles(self) -> str:
        seen = [False] * self.size
        parts = []
        for start in range(self.size):
            if seen[start] or self.mapping[start] == start:
                seen[start] = True
                continue
            cycle = []
            k = start
            while not seen[k]:
                seen[k] = True
                cycle.append(k)
                k = self.mapping[k]
            parts.append("(" + " ".join(map(str, cycle)) + ")")
        return "".join(parts)

    def permute_list(self, values: Sequence) -> list:
        if len(values) != self.size:
            raise ExactError(f"permutation of size {self.size} applied to {len(values)} entries")
        out = [None] * self.size
        for i, v in enumerate(values):
            out[self.mapping[i]] = v
        return out


def apply_permutation(p: Permutation, j: JointDist) -> JointDist:
    return JointDist(p.permute_list(j.entries), j.shape)


def cycle_shift(d: int, power: int = 1) -> Permutation:
    if d < 1:
        raise ExactError("cycle length must be positive")
    return Permutation((k + power) % d for k in range(d))


def l1_distance(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise ExactError("length mismatch")
    return sum((abs(x - y) for x, y in zip(a, b)), Fraction(0))
