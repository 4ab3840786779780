"""Evaluate formulas on words, enumerate languages, check neutral letters.

Two evaluation routes exist: `evaluate` is a direct recursive Tarskian
evaluator (the reference), and `TableEvaluator` computes truth tables for
subformulas bottom-up with numpy, which is what the batch harnesses use.
They are property-tested against each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from . import formula as F
from .predicates import Signature


class EvalError(ValueError):
    pass


ENUMERATION_GUARD = 10**7


def _resolve(f: F.Formula, sig: Signature) -> None:
    for name in F.predicate_names(f):
        if not sig.has(name):
            raise EvalError(f"unresolved predicate {name!r}")


def evaluate(f: F.Formula, w: str, sig: Signature) -> bool:
    """Truth of a closed formula on a word, universe {0..len(w)-1}."""
    _resolve(f, sig)
    if not F.is_closed(f):
        raise EvalError(f"formula has free variables {sorted(F.free_variables(f))}")
    return _eval(f, w, sig, {})


def evaluate_open(f: F.Formula, w: str, i: int, sig: Signature) -> bool:
    """Truth of a one-free-variable formula with the variable bound to i."""
    _resolve(f, sig)
    fv = F.free_variables(f)
    if len(fv) != 1:
        raise EvalError(f"expected exactly one free variable, found {sorted(fv)}")
    if not 0 <= i < len(w):
        raise EvalError(f"position {i} out of range for word of length {len(w)}")
    return _eval(f, w, sig, {next(iter(fv)): i})


def _eval(f, w, sig, env) -> bool:
    if isinstance(f, F.TrueAtom):
        return True
    if isinstance(f, F.FalseAtom):
        return False
    if isinstance(f, F.LetterAtom):
        return w[env[f.var]] == f.letter
    if isinstance(f, F.PredAtom):
        tup = tuple(env[v] for v in f.args)
        return sig.get(f.name).membership(tup, len(w))
    if isinstance(f, F.Not):
        return not _eval(f.child, w, sig, env)
    if isinstance(f, F.And):
        return all(_eval(c, w, sig, env) for c in f.children)
    if isinstance(f, F.Or):
        return any(_eval(c, w, sig, env) for c in f.children)
    if isinstance(f, F.Exists):
        return any(_eval(f.child, w, sig, {**env, f.var: i}) for i in range(len(w)))
    if isinstance(f, F.Forall):
        return all(_eval(f.child, w, sig, {**env, f.var: i}) for i in range(len(w)))
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Table-based evaluation (fast path for batch work)


class TableEvaluator:
    """Bottom-up truth tables per subformula; predicate tables cached per length.

    Sound for formulas with at most two live variables at any node, which
    covers everything this package produces; arbitrary variable NAMES are
    fine since tables are indexed by the node's free variables.
    """

    def __init__(self, sig: Signature):
        self.sig = sig
        self._pred_cache: dict = {}
        self._node_memo: dict = {}

    def _pred_table(self, name: str, arity: int, n: int) -> np.ndarray:
        key = (name, arity, n)
        t = self._pred_cache.get(key)
        if t is None:
            p = self.sig.get(name)
            if arity == 1:
                t = np.fromiter((p.membership((i,), n) for i in range(n)), dtype=bool, count=n)
            else:
                t = np.empty((n, n), dtype=bool)
                for i in range(n):
                    for j in range(n):
                        t[i, j] = p.membership((i, j), n)
            self._pred_cache[key] = t
        return t

    def evaluate(self, f: F.Formula, w: str) -> bool:
        _resolve(f, self.sig)
        if not F.is_closed(f):
            raise EvalError(f"formula has free variables {sorted(F.free_variables(f))}")
        self._node_memo: dict = {}
        val, vars_ = self._table(f, w)
        assert vars_ == ()
        return bool(val)

    def _table(self, f, w):
        """Return (array, vars) where vars is a tuple of at most 2 names.

        For vars == (): a scalar bool; (v,): shape (n,); (v1, v2): shape
        (n, n) indexed in vars order.  Shared subtrees (same object) are
        computed once per word.
        """
        memo_key = id(f)
        hit = self._node_memo.get(memo_key)
        if hit is not None:
            return hit
        got = self._table_raw(f, w)
        self._node_memo[memo_key] = got
        return got

    def _table_raw(self, f, w):
        n = len(w)
        if isinstance(f, F.TrueAtom):
            return True, ()
        if isinstance(f, F.FalseAtom):
            return False, ()
        if isinstance(f, F.LetterAtom):
            arr = np.fromiter((ch == f.letter for ch in w), dtype=bool, count=n)
            return arr, (f.var,)
        if isinstance(f, F.PredAtom):
            if len(f.args) == 1:
                return self._pred_table(f.name, 1, n).copy(), (f.args[0],)
            a, b = f.args
            t = self._pred_table(f.name, 2, n)
            if a == b:
                return np.diagonal(t).copy(), (a,)
            return t, (a, b)
        if isinstance(f, F.Not):
            val, vs = self._table(f.child, w)
            return (not val, vs) if vs == () else (~val, vs)
        if isinstance(f, (F.And, F.Or)):
            conj = isinstance(f, F.And)
            acc, avs = (True, ()) if conj else (False, ())
            for c in f.children:
                val, vs = self._table(c, w)
                acc, avs = _combine(acc, avs, val, vs, conj, n)
            return acc, avs
        if isinstance(f, (F.Exists, F.Forall)):
            val, vs = self._table(f.child, w)
            if f.var not in vs:
                # vacuous quantifier: non-empty domain keeps value, empty flips
                if n > 0:
                    return val, vs
                return (isinstance(f, F.Forall), vs) if vs == () else (
                    np.full_like(val, isinstance(f, F.Forall)), vs)
            axis = vs.index(f.var)
            rest = tuple(v for v in vs if v != f.var)
            if isinstance(val, np.ndarray) and val.ndim >= 1:
                red = val.any(axis=axis) if isinstance(f, F.Exists) else val.all(axis=axis)
                if rest == ():
                    return bool(red), ()
                return red, rest
            return val, rest
        raise TypeError(f"not a formula: {f!r}")


def _combine(a, avs, b, bvs, conj: bool, n: int):
    """Pointwise AND/OR of two tables over possibly different variables."""
    if avs == ():
        if conj:
            return (False, ()) if not a else (b, bvs)
        return (True, ()) if a else (b, bvs)
    if bvs == ():
        return _combine(b, bvs, a, avs, conj, n)
    allvs = list(avs) + [v for v in bvs if v not in avs]
    if len(allvs) > 2:
        raise EvalError("more than two live variables at a boolean node")
    ta = _broadcast(a, avs, tuple(allvs), n)
    tb = _broadcast(b, bvs, tuple(allvs), n)
    return (ta & tb if conj else ta | tb), tuple(allvs)


def _broadcast(val, vs, target, n):
    if vs == target:
        return val
    if len(target) == 1:
        return val
    v1, v2 = target
    if vs == (v2, v1):
        return val.T
    if vs == (v1,):
        return np.broadcast_to(val[:, None], (n, n))
    if vs == (v2,):
        return np.broadcast_to(val[None, :], (n, n))
    raise AssertionError(f"cannot broadcast {vs} to {target}")


# ---------------------------------------------------------------------------
# Languages


@dataclass
class LanguageOracle:
    """Deterministic membership oracle for a language over a fixed alphabet."""

    alphabet: tuple
    membership: Callable[[str], bool]
    name: str = "language"

    @classmethod
    def from_formula(cls, f: F.Formula, sig: Signature, alphabet: Iterable[str], fast: bool = True):
        alphabet = tuple(alphabet)
        if fast:
            te = TableEvaluator(sig)
            member = lambda w: te.evaluate(f, w)  # noqa: E731
        else:
            member = lambda w: evaluate(f, w, sig)  # noqa: E731
        return cls(alphabet=alphabet, membership=member, name=F.to_text(f))


def words_upto(alphabet: tuple, n: int) -> Iterator[str]:
    """All words of length <= n, by increasing length then lexicographically."""
    for length in range(n + 1):
        for tup in itertools.product(alphabet, repeat=length):
            yield "".join(tup)


def _guard(alphabet: tuple, n: int) -> None:
    if len(alphabet) ** max(n, 1) > ENUMERATION_GUARD:
        raise EvalError(f"enumeration of {len(alphabet)}^{n} words exceeds the guard")


def language_upto(oracle: LanguageOracle, n: int) -> set:
    """Members of the language of length <= n."""
    _guard(oracle.alphabet, n)
    return {w for w in words_upto(oracle.alphabet, n) if oracle.membership(w)}


@dataclass(frozen=True)
class NeutralVerdict:
    neutral_up_to: Optional[int]  # None when a counterexample was found
    counterexample: Optional[tuple]  # (u, v) with ucv vs uv disagreeing

    @property
    def is_neutral(self) -> bool:
        return self.counterexample is None


def check_neutral(oracle: LanguageOracle, c: str, n: int) -> NeutralVerdict:
    """Search for (u, v), |uv| < n, with ucv and uv classified differently.

    Scan order: increasing |uv|, then by split point, then lexicographic,
    so reports are deterministic.  A verdict of neutral-up-to-n is a
    bounded claim only.
    """
    if c not in oracle.alphabet:
        raise EvalError(f"letter {c!r} not in alphabet")
    _guard(oracle.alphabet, n)
    member = oracle.membership
    for total in range(n):
        for k in range(total + 1):
            for u_t in itertools.product(oracle.alphabet, repeat=k):
                u = "".join(u_t)
                for v_t in itertools.product(oracle.alphabet, repeat=total - k):
                    v = "".join(v_t)
                    if member(u + c + v) != member(u + v):
                        return NeutralVerdict(None, (u, v))
    return NeutralVerdict(n, None)
