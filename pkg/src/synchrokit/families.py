"""Generators for the benchmark families used across the package.

Family codes (also the CLI tokens):

* ``cerny``   -- cycle plus a single merging edge; two letters.
* ``cb``      -- cycle, merging edge, and one adjacent swap; three letters.
* ``v``       -- chain of adjacent swaps plus one merging letter; n letters.
* ``rystsov`` -- the ``v`` family without its first swap; n - 1 letters.
* ``f``       -- two permutation letters on an odd number of states,
  built recursively from the 7-state base automaton.

States are 0-based internally.  Families customarily written with 1-based
state names carry labels ``q1..qn``; the ``v``/``rystsov`` families carry
``q0..q{n-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Dfa, Transformation

FAMILY_CODES = ("cerny", "cb", "v", "rystsov", "f")


@dataclass(frozen=True)
class FamilySpec:
    """Validated family parameters (the CLI-facing record)."""

    family: str
    n: int
    k: int | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILY_CODES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILY_CODES}")
        if self.family == "cb":
            if self.n < 3:
                raise ValueError("cb needs n >= 3")
            if self.k is None or not 1 <= self.k <= self.n - 1:
                raise ValueError("cb needs 1 <= k <= n - 1")
        else:
            if self.k is not None:
                raise ValueError(f"family {self.family!r} takes no k parameter")
            if self.family == "f":
                if self.n < 7 or self.n % 2 == 0:
                    raise ValueError("f needs odd n >= 7")
            elif self.n < 2:
                raise ValueError(f"{self.family} needs n >= 2")

    def build(self) -> Dfa:
        if self.family == "cerny":
            return cerny(self.n)
        if self.family == "cb":
            assert self.k is not None
            return cb(self.n, self.k)
        if self.family == "v":
            return v(self.n)
        if self.family == "rystsov":
            return rystsov(self.n)
        return f(self.n)


def _one_based_labels(n: int) -> tuple[str, ...]:
    return tuple(f"q{i + 1}" for i in range(n))


def _zero_based_labels(n: int) -> tuple[str, ...]:
    return tuple(f"q{i}" for i in range(n))


def cerny(n: int) -> Dfa:
    """Cycle letter ``a`` and a letter ``b`` merging the first two states."""
    if n < 2:
        raise ValueError("cerny needs n >= 2")
    a = Transformation(tuple((i + 1) % n for i in range(n)))
    b_images = list(range(n))
    b_images[0] = 1
    b = Transformation(tuple(b_images))
    return Dfa(n, (("a", a), ("b", b)), _one_based_labels(n))


def cb(n: int, k: int) -> Dfa:
    """Cycle ``a``, merging edge ``b``, and swap ``c`` of states k-1 and k.

    With 1-based display names: ``b`` sends q1 to q2 and ``c`` exchanges
    q_k with q_{k+1}.
    """
    if n < 3:
        raise ValueError("cb needs n >= 3")
    if not 1 <= k <= n - 1:
        raise ValueError("cb needs 1 <= k <= n - 1")
    a = Transformation(tuple((i + 1) % n for i in range(n)))
    b_images = list(range(n))
    b_images[0] = 1
    b = Transformation(tuple(b_images))
    c_images = list(range(n))
    c_images[k - 1], c_images[k] = k, k - 1
    c = Transformation(tuple(c_images))
    return Dfa(n, (("a", a), ("b", b), ("c", c)), _one_based_labels(n))


def v(n: int) -> Dfa:
    """Adjacent swaps ``a1..a{n-1}`` plus the merging letter ``an``.

    Letter ``aj`` (1 <= j <= n-1) exchanges states j-1 and j; letter ``an``
    sends both 0 and 1 to 0 and fixes everything else.
    """
    if n < 2:
        raise ValueError("v needs n >= 2")
    letters = []
    for j in range(1, n):
        images = list(range(n))
        images[j - 1], images[j] = j, j - 1
        letters.append((f"a{j}", Transformation(tuple(images))))
    merge = list(range(n))
    merge[1] = 0
    letters.append((f"a{n}", Transformation(tuple(merge))))
    return Dfa(n, tuple(letters), _zero_based_labels(n))


def rystsov(n: int) -> Dfa:
    """The ``v`` family with the first swap removed; state 0 becomes a sink."""
    if n < 2:
        raise ValueError("rystsov needs n >= 2")
    base = v(n)
    return Dfa(n, base.letters[1:], _zero_based_labels(n))


# -- the two-permutation-letter family -------------------------------------

# 7-state base automaton (0-based images).
_F7_A = (1, 2, 3, 0, 6, 5, 4)
_F7_B = (5, 1, 4, 3, 2, 0, 6)


def _validate_f_step(a: list[int], b: list[int], size: int) -> None:
    """Structural checks applied after every growth step (and to the base).

    Checks, in order: both letters stay permutations; the four outermost
    states carry the expected loop/exchange/descent pattern; and (when the
    certificate machinery applies, ``size % 4 == 3``) the descent
    certificate for the pair digraph is valid.
    """
    for images in (a, b):
        if sorted(images) != list(range(size)):
            raise AssertionError(f"recursion broke permutation-ness at size {size}")
    if size >= 9:
        if a[size - 2] == size - 2 and b[size - 1] == size - 1:
            alpha, beta = a, b
        elif b[size - 2] == size - 2 and a[size - 1] == size - 1:
            alpha, beta = b, a
        else:
            raise AssertionError(f"top-state loops missing at size {size}")
        ok = (
            alpha[size - 1] == size - 3
            and alpha[size - 3] == size - 1
            and beta[size - 2] == size - 4
            and beta[size - 4] == size - 2
        )
        if size >= 11:
            ok = ok and alpha[size - 4] == size - 6 and beta[size - 3] == size - 5
        if not ok:
            raise AssertionError(f"outer exchange pattern broken at size {size}")
    if size % 4 == 3:
        from . import pairgraph

        d = Dfa(size, (("a", Transformation(tuple(a))), ("b", Transformation(tuple(b)))))
        cert = pairgraph.pair_certificate(size)
        check = pairgraph.verify_certificate(pairgraph.build_pair_digraph(d), cert)
        if not check.valid:
            raise AssertionError(f"descent certificate failed at size {size}: {check.counterexample}")


def f(n: int) -> Dfa:
    """Automaton with two permutation letters and a large pair diameter.

    Built by repeatedly adding two states: the letter that fixed the old
    next-to-top state gets an exchange with the first new state, the letter
    that fixed the old top state gets an exchange with the second, and each
    letter fixes the new state the other one moves.  Every step is validated
    structurally and, where applicable, against the descent certificate.
    """
    if n < 7 or n % 2 == 0:
        raise ValueError("f needs odd n >= 7")
    a = list(_F7_A)
    b = list(_F7_B)
    _validate_f_step(a, b, 7)
    for size in range(7, n, 2):
        a.extend((size, size + 1))
        b.extend((size, size + 1))
        if a[size - 2] == size - 2:
            alpha, beta = a, b
        else:
            alpha, beta = b, a
        assert alpha[size - 2] == size - 2 and beta[size - 1] == size - 1
        alpha[size - 2] = size
        alpha[size] = size - 2
        beta[size - 1] = size + 1
        beta[size + 1] = size - 1
        _validate_f_step(a, b, size + 2)
    return Dfa(
        n,
        (("a", Transformation(tuple(a))), ("b", Transformation(tuple(b)))),
        _one_based_labels(n),
    )


def build_family(family: str, n: int, k: int | None = None) -> Dfa:
    return FamilySpec(family, n, k).build()
