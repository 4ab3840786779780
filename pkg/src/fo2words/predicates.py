"""Numerical predicates: catalogue, degree queries, neighbor enumeration.

A numerical predicate of arity k is a length-indexed family
``P_n ⊆ {0..n-1}^k``; a *uniform* predicate is the truncation of a single
relation on the naturals.  Binary uniform predicates whose underlying
infinite graph has finite degree carry a neighbor oracle enumerating, for
a position k, every j related to k in either argument order.  Oracles may
also carry exact straddle bounds: the span of edges crossing a position,
used to keep interval computations closed-form for far positions.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable, Iterable, Optional


class PredicateError(ValueError):
    pass


def _int_kth_root(n: int, k: int) -> int:
    """Largest r with r**k <= n (n >= 0, k >= 1); Newton from above."""
    if n < 0:
        raise ValueError("negative radicand")
    if n in (0, 1) or k == 1:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)  # >= true root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


@dataclass(frozen=True)
class PredicateInterpretation:
    """An evaluable numerical predicate.

    ``query(tup, n)`` decides membership in the level-n interpretation;
    components outside {0..n-1} are never members.  ``relation(tup)`` is
    the untruncated integer relation and exists only for uniform
    predicates.  ``neighbor_oracle(k)`` returns the sorted tuple of all
    positions related to k in either order, and is present exactly for
    the declared finite-degree predicates.
    """

    name: str
    arity: int
    uniform: bool
    query: Callable[[tuple, int], bool]
    relation: Optional[Callable[[tuple], bool]] = None
    neighbor_oracle: Optional[Callable[[int], tuple]] = None
    straddle: Optional[Callable[[int], tuple]] = None
    monotone_straddle: bool = False

    def membership(self, tup: tuple, n: int) -> bool:
        if any(t < 0 or t >= n for t in tup):
            return False
        return self.query(tup, n)

    def __repr__(self):
        return f"PredicateInterpretation({self.name!r})"


def degree(p: PredicateInterpretation, k: int) -> int:
    """Number of neighbors of position k in p's infinite graph."""
    if p.neighbor_oracle is None:
        raise PredicateError(f"predicate {p.name!r} has no neighbor oracle")
    return len(p.neighbor_oracle(k))


def _uniform(name, arity, rel, oracle=None, straddle=None, monotone=False):
    def query(tup, n, _rel=rel):
        return _rel(tup)

    return PredicateInterpretation(
        name=name,
        arity=arity,
        uniform=True,
        query=query,
        relation=rel,
        neighbor_oracle=oracle,
        straddle=straddle,
        monotone_straddle=monotone,
    )


# ---------------------------------------------------------------------------
# Catalogue


def _less():
    return _uniform("less", 2, lambda t: t[0] < t[1])


def _succ():
    def oracle(k):
        return (k + 1,) if k == 0 else (k - 1, k + 1)

    def straddle(k):
        return (max(k - 1, 0), k + 1)

    return _uniform("succ", 2, lambda t: t[1] == t[0] + 1, oracle, straddle, monotone=True)


def _eq(name="eq"):
    def oracle(k):
        return (k,)

    return _uniform(name, 2, lambda t: t[0] == t[1], oracle, lambda k: (k, k), monotone=True)


def _bit():
    # (x, y): the y-th bit of x is one
    return _uniform("bit", 2, lambda t: t[1] >= 0 and (t[0] >> t[1]) & 1 == 1)


def _tbit():
    # (x, y): the (y-x)-th bit of x is one; false when y < x
    def rel(t):
        x, y = t
        return y >= x and (x >> (y - x)) & 1 == 1

    def oracle(k):
        out = set()
        d = 0
        x = k
        while x:
            if x & 1:
                out.add(k + d)
            x >>= 1
            d += 1
        lo = max(0, k - (k.bit_length() + 2))
        for x in range(lo, k + 1):
            if rel((x, k)):
                out.add(x)
        return tuple(sorted(out))

    def straddle(k):
        lo = hi = k
        start = max(0, k - (k.bit_length() + 2))
        for x in range(start, k + 1):
            x2 = x
            d = 0
            while x2:
                if x2 & 1 and x + d >= k:
                    lo = min(lo, x)
                    hi = max(hi, x + d)
                x2 >>= 1
                d += 1
        return (lo, hi)

    return _uniform("tbit", 2, rel, oracle, straddle, monotone=False)


def _msb0():
    def rel(t):
        x, y = t
        return x >= 1 and y == x - (1 << (x.bit_length() - 1))

    return _uniform("msb0", 2, rel)


def _msb10():
    def rel(t):
        x, y = t
        return x >= 1 and y == x + (1 << (x.bit_length() - 1))

    return _uniform("msb10", 2, rel)


def _msb11():
    def rel(t):
        x, y = t
        return x >= 1 and y == x + (1 << x.bit_length())

    return _uniform("msb11", 2, rel)


def _linmul(k: int):
    if k <= 0:
        raise PredicateError("linmul requires k >= 1")

    def rel(t):
        return t[1] == k * t[0]

    def oracle(j):
        out = {k * j}
        if j % k == 0:
            out.add(j // k)
        return tuple(sorted(out))

    def straddle(j):
        if j == 0:
            return (0, 0)
        return (-(-j // k), k * j)

    return _uniform(f"linmul:{k}", 2, rel, oracle, straddle, monotone=True)


def _power(k: int):
    if k <= 0:
        raise PredicateError("power requires k >= 1")

    def rel(t):
        return t[1] == t[0] ** k

    def oracle(j):
        out = {j**k}
        r = _int_kth_root(j, k)
        if r**k == j:
            out.add(r)
        return tuple(sorted(out))

    def straddle(j):
        if j <= 1:
            return (j, j)
        r = _int_kth_root(j - 1, k) + 1  # smallest x with x**k >= j
        return (min(r, j), j**k)

    return _uniform(f"power:{k}", 2, rel, oracle, straddle, monotone=True)


def _is_pow2(x: int) -> bool:
    return x >= 1 and x & (x - 1) == 0


def _pow2diag():
    def rel(t):
        return t[0] == t[1] and _is_pow2(t[0])

    def oracle(k):
        return (k,) if _is_pow2(k) else ()

    return _uniform("pow2diag", 2, rel, oracle, lambda k: (k, k), monotone=True)


def diagonal_predicate(members: Callable[[int], bool] | Iterable[int], name: str = "diag") -> PredicateInterpretation:
    """Encode a monadic set as the finite-degree diagonal {(x, x) | x in q}."""
    if not callable(members):
        members_set = frozenset(members)
        members = members_set.__contains__

    def rel(t, q=members):
        return t[0] == t[1] and q(t[0])

    def oracle(k, q=members):
        return (k,) if q(k) else ()

    return _uniform(name, 2, rel, oracle, lambda k: (k, k), monotone=True)


# Kept for the catalogue's sake; uniform monadic sets enter signatures this way.
encode_monadic = diagonal_predicate


def _plus3():
    return _uniform("plus3", 2, lambda t: t[1] == t[0] + 3)


def _maxsum():
    def query(tup, n):
        return tup[0] + tup[1] == n - 1

    return PredicateInterpretation(name="maxsum", arity=2, uniform=False, query=query)


def _rand(seed: int, density: float):
    if not 0.0 <= density <= 1.0:
        raise PredicateError("density must be in [0, 1]")
    threshold = int(density * 2**32)
    prefix = f"{seed}:".encode()

    def rel(t):
        h = hashlib.blake2b(prefix + f"{t[0]},{t[1]}".encode(), digest_size=4).digest()
        return int.from_bytes(h, "big") < threshold

    return _uniform(f"rand:{seed}:{density:g}", 2, rel)


def from_relation_file(path: str, name: Optional[str] = None) -> PredicateInterpretation:
    """Explicit uniform binary predicate from a file of 'x y' pairs."""
    pairs = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise PredicateError(f"{path}:{lineno}: expected 'x y', got {line!r}")
            try:
                x, y = int(parts[0]), int(parts[1])
            except ValueError:
                raise PredicateError(f"{path}:{lineno}: non-integer pair {line!r}") from None
            if x < 0 or y < 0:
                raise PredicateError(f"{path}:{lineno}: negative position")
            pairs.add((x, y))
    return from_pairs(pairs, name or f"rel:{path}")


def from_pairs(pairs: Iterable[tuple], name: str = "rel") -> PredicateInterpretation:
    pairs = frozenset(pairs)
    nbrs: dict = {}
    for x, y in pairs:
        nbrs.setdefault(x, set()).add(y)
        nbrs.setdefault(y, set()).add(x)
    nbrs = {k: tuple(sorted(v)) for k, v in nbrs.items()}

    def oracle(k):
        return nbrs.get(k, ())

    def straddle(k):
        lo = hi = k
        for x, y in pairs:
            a, b = min(x, y), max(x, y)
            if a <= k <= b:
                lo, hi = min(lo, a), max(hi, b)
        return (lo, hi)

    return _uniform(name, 2, lambda t: t in pairs, oracle, straddle, monotone=False)


def _monadic_file(path: str) -> PredicateInterpretation:
    members = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                members.add(int(line))
            except ValueError:
                raise PredicateError(f"{path}:{lineno}: expected a natural, got {line!r}") from None
    return diagonal_predicate(members, name=f"diag:{path}")


def builtin(spec: str) -> PredicateInterpretation:
    """Instantiate a catalogue predicate from its identifier.

    Identifiers: less, succ, eq, bit, tbit, msb0, msb10, msb11, pow2diag,
    plus3, maxsum, linmul:k, power:k, diag:<file>, rel:<file>,
    rand:<seed>:<density>.
    """
    head, _, rest = spec.partition(":")
    try:
        if head == "linmul":
            return _linmul(int(rest))
        if head == "power":
            return _power(int(rest))
        if head == "diag":
            return _monadic_file(rest)
        if head == "rel":
            return from_relation_file(rest)
        if head == "rand":
            seed, _, dens = rest.partition(":")
            return _rand(int(seed), float(dens))
    except ValueError as exc:
        raise PredicateError(f"bad parameter in {spec!r}: {exc}") from None
    simple = {
        "less": _less,
        "succ": _succ,
        "eq": _eq,
        "bit": _bit,
        "tbit": _tbit,
        "msb0": _msb0,
        "msb10": _msb10,
        "msb11": _msb11,
        "pow2diag": _pow2diag,
        "plus3": _plus3,
        "maxsum": _maxsum,
    }
    if head not in simple or rest:
        raise PredicateError(f"unknown predicate {spec!r}")
    return simple[head]()


CATALOGUE = (
    "less",
    "succ",
    "eq",
    "bit",
    "tbit",
    "msb0",
    "msb10",
    "msb11",
    "pow2diag",
    "plus3",
    "maxsum",
    "linmul:k",
    "power:k",
    "diag:<file>",
    "rel:<file>",
    "rand:<seed>:<density>",
)


# ---------------------------------------------------------------------------
# Signatures


@dataclass(frozen=True)
class Signature:
    preds: tuple

    def __post_init__(self):
        names = [p.name for p in self.preds]
        if len(set(names)) != len(names):
            raise PredicateError(f"duplicate predicate names in signature: {names}")

    def get(self, name: str) -> PredicateInterpretation:
        for p in self.preds:
            if p.name == name:
                return p
        raise PredicateError(f"predicate {name!r} not in signature")

    def has(self, name: str) -> bool:
        return any(p.name == name for p in self.preds)

    def names(self) -> tuple:
        return tuple(p.name for p in self.preds)

    def __iter__(self):
        return iter(self.preds)

    def __len__(self):
        return len(self.preds)


def signature(*preds: PredicateInterpretation) -> Signature:
    return Signature(tuple(preds))


def parse_signature(spec: str) -> Signature:
    """Parse a '+'-joined list of catalogue identifiers, e.g. 'less+linmul:2'."""
    spec = spec.strip()
    if not spec:
        return Signature(())
    return Signature(tuple(builtin(tok) for tok in spec.split("+")))
