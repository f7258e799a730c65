"""Totally ordered commutative monoids with finite lower intervals.

Three families are supported:

* ``nat``      nonnegative integers under addition,
* ``truth(N)`` levels 0..N-1 under max (N-valued logic; level k stands for k/(N-1)),
* ``free(d)``  vectors in Z_+^d, ordered by a positive rational weight vector.

Elements are plain Python values (int, int, tuple of ints) so they hash and
compare structurally.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class MonoidError(ValueError):
    pass


@dataclass(frozen=True)
class MonoidSpec:
    kind: str
    levels: int = 0
    weights: tuple = ()

    def __post_init__(self):
        if self.kind == "nat":
            return
        if self.kind == "truth":
            if self.levels < 2:
                raise MonoidError("truth monoid needs at least 2 levels")
            return
        if self.kind == "free":
            ws = tuple(Fraction(w) for w in self.weights)
            if not ws:
                raise MonoidError("free monoid needs a weight vector")
            if any(w <= 0 for w in ws):
                raise MonoidError("weights must be strictly positive")
            sums = {}
            for mask in itertools.product((0, 1), repeat=len(ws)):
                s = sum(w for w, b in zip(ws, mask) if b)
                if s in sums:
                    raise MonoidError("weights must have pairwise distinct subset sums")
                sums[s] = mask
            object.__setattr__(self, "weights", ws)
            return
        raise MonoidError(f"unknown monoid kind {self.kind!r}")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def nat(cls):
        return cls("nat")

    @classmethod
    def truth(cls, levels=2):
        return cls("truth", levels=levels)

    @classmethod
    def free(cls, weights):
        return cls("free", weights=tuple(weights))

    @property
    def rank(self):
        return len(self.weights)

    @classmethod
    def parse(cls, text):
        """Parse ``nat``, ``truth:N`` or ``free:w1,w2,...`` (weights as p/q)."""
        head, _, rest = text.partition(":")
        if head == "nat" and not rest:
            return cls.nat()
        if head == "truth":
            return cls.truth(int(rest or 2))
        if head == "free" and rest:
            return cls.free(Fraction(w) for w in rest.split(","))
        raise MonoidError(f"cannot parse monoid {text!r}")

    def to_json(self):
        if self.kind == "nat":
            return {"kind": "nat"}
        if self.kind == "truth":
            return {"kind": "truth", "levels": self.levels}
        return {
            "kind": "free",
            "rank": self.rank,
            "weights": [[str(w.numerator), str(w.denominator)] for w in self.weights],
        }

    @classmethod
    def from_json(cls, obj):
        kind = obj.get("kind")
        if kind == "nat":
            return cls.nat()
        if kind == "truth":
            return cls.truth(int(obj["levels"]))
        if kind == "free":
            ws = [Fraction(int(p), int(q)) for p, q in obj["weights"]]
            if "rank" in obj and int(obj["rank"]) != len(ws):
                raise MonoidError("rank does not match weight count")
            return cls.free(ws)
        raise MonoidError(f"unknown monoid kind {kind!r}")

    def __str__(self):
        if self.kind == "nat":
            return "nat"
        if self.kind == "truth":
            return f"truth:{self.levels}"
        return "free:" + ",".join(str(w) for w in self.weights)

    # -- elements -------------------------------------------------------------

    def zero(self):
        if self.kind == "free":
            return (0,) * self.rank
        return 0

    def validate(self, a):
        if self.kind == "free":
            ok = isinstance(a, tuple) and len(a) == self.rank and all(
                isinstance(x, int) and x >= 0 for x in a
            )
        else:
            ok = isinstance(a, int) and not isinstance(a, bool) and a >= 0
            if ok and self.kind == "truth":
                ok = a < self.levels
        if not ok:
            raise MonoidError(f"{a!r} is not an element of {self}")
        return a

    def element_from_json(self, obj):
        if self.kind == "free":
            return self.validate(tuple(int(x) for x in obj))
        return self.validate(int(obj))

    def element_to_json(self, a):
        return list(a) if self.kind == "free" else a

    def add(self, a, b):
        if self.kind == "nat":
            return a + b
        if self.kind == "truth":
            return a if a >= b else b
        return tuple(x + y for x, y in zip(a, b))

    def total(self, items):
        acc = self.zero()
        for x in items:
            acc = self.add(acc, x)
        return acc

    def is_zero(self, a):
        return a == self.zero()

    def weight(self, a):
        """Sort key realizing the total order."""
        if self.kind == "free":
            return sum(w * x for w, x in zip(self.weights, a))
        return a

    def leq(self, a, b):
        return self.weight(a) <= self.weight(b)

    def elements_leq(self, n):
        return _elements_leq(self, n)

    def decompose2(self, n):
        """All ordered pairs (a, b) with a + b == n."""
        return _decompose2(self, n)

    def sequences(self, n, k):
        """All k-tuples of elements summing to n (k >= 1)."""
        return _sequences(self, n, k)


@lru_cache(maxsize=None)
def _elements_leq(spec, n):
    if spec.kind == "nat":
        return tuple(range(n + 1))
    if spec.kind == "truth":
        return tuple(range(n + 1))
    bound = spec.weight(n)
    ranges = [range(int(bound // w) + 1) for w in spec.weights]
    out = [v for v in itertools.product(*ranges) if spec.weight(v) <= bound]
    out.sort(key=spec.weight)
    keys = [spec.weight(v) for v in out]
    if len(set(keys)) != len(keys):
        # distinct subset sums do not guarantee distinct weights for larger
        # coefficients; refuse rather than silently break the total order
        raise MonoidError(f"weights {spec.weights} do not separate elements below {n}")
    return tuple(out)


@lru_cache(maxsize=None)
def _decompose2(spec, n):
    lower = spec.elements_leq(n)
    return tuple((a, b) for a in lower for b in lower if spec.add(a, b) == n)


@lru_cache(maxsize=None)
def _sequences(spec, n, k):
    if k == 1:
        return ((n,),)
    out = []
    for a, b in spec.decompose2(n):
        for rest in spec.sequences(b, k - 1):
            out.append((a,) + rest)
    return tuple(out)
