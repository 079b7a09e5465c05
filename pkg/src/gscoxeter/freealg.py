"""
Words over an ordered alphabet and polynomials in the free associative algebra.

Generators are the integers ``1..n`` and print as ``s1 .. sn``; a word is a
plain tuple of generator indices, so ``()`` is the empty word (printed ``e``).
Words are compared by the deg-lex order: length first, then left to right by
generator index.

Polynomials carry exact rational coefficients (``fractions.Fraction``) and are
immutable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping

Word = tuple[int, ...]

EMPTY: Word = ()

_TOKEN = re.compile(r"s(\d+)")


def deglex_key(u: Word) -> tuple[int, Word]:
    """Sort key realising the deg-lex order on words."""
    return (len(u), u)


def compare_deglex(u: Word, v: Word) -> int:
    """Return -1, 0 or 1 as ``u`` is less than, equal to or greater than ``v``."""
    ku, kv = deglex_key(u), deglex_key(v)
    return (ku > kv) - (ku < kv)


def format_word(u: Word) -> str:
    if not u:
        return "e"
    return " ".join(f"s{g}" for g in u)


def parse_word(text: str, n: int | None = None) -> Word:
    """Parse ``"s1 s2 s1"`` (or the compact ``"s1s2s1"``); ``"e"`` is the empty word.

    With ``n`` given, generators outside ``1..n`` are rejected.
    """
    text = text.strip()
    if text in ("e", ""):
        return EMPTY
    compact = text.replace(" ", "")
    tokens = _TOKEN.findall(compact)
    if "".join(f"s{t}" for t in tokens) != compact:
        raise ValueError(f"cannot parse word {text!r}")
    word = tuple(int(t) for t in tokens)
    for g in word:
        if g < 1 or (n is not None and g > n):
            raise ValueError(f"generator s{g} outside the alphabet s1..s{n}")
    return word


def find_occurrences(u: Word, pattern: Word) -> list[int]:
    """Start offsets of every (possibly overlapping) occurrence of ``pattern`` in ``u``."""
    if not pattern:
        raise ValueError("empty pattern")
    k = len(pattern)
    return [p for p in range(len(u) - k + 1) if u[p:p + k] == pattern]


def contains(u: Word, pattern: Word) -> bool:
    k = len(pattern)
    return any(u[p:p + k] == pattern for p in range(len(u) - k + 1))


def _coerce(c) -> Fraction:
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not allowed")
    if not isinstance(c, (int, Rational)):
        raise TypeError(f"unsupported coefficient {c!r}")
    return Fraction(c)


def _format_coefficient(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Polynomial:
    """Finite linear combination of words with nonzero rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Word, object] | Iterable[tuple[Word, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, Fraction] = {}
        for word, c in items:
            word = tuple(word)
            acc[word] = acc.get(word, Fraction(0)) + _coerce(c)
        self._terms = {w: c for w, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: dict[Word, Fraction]) -> Polynomial:
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def monomial(cls, word: Word, coefficient=1) -> Polynomial:
        return cls({tuple(word): coefficient})

    @classmethod
    def binomial(cls, lhs: Word, rhs: Word) -> Polynomial:
        """The relation ``lhs = rhs`` as the polynomial ``lhs - rhs``."""
        return cls([(lhs, 1), (rhs, -1)])

    @classmethod
    def zero(cls) -> Polynomial:
        return cls._from_clean({})

    @property
    def terms(self) -> dict[Word, Fraction]:
        return dict(self._terms)

    def __iter__(self) -> Iterator[tuple[Word, Fraction]]:
        """Terms in descending deg-lex order."""
        for w in sorted(self._terms, key=deglex_key, reverse=True):
            yield w, self._terms[w]

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, word: Word) -> Fraction:
        return self._terms.get(tuple(word), Fraction(0))

    def support(self) -> list[Word]:
        return sorted(self._terms, key=deglex_key, reverse=True)

    def leading_term(self) -> tuple[Word, Fraction]:
        if not self._terms:
            raise ValueError("no leading term")
        w = max(self._terms, key=deglex_key)
        return w, self._terms[w]

    @property
    def leading_word(self) -> Word:
        return self.leading_term()[0]

    def is_monic(self) -> bool:
        return bool(self._terms) and self.leading_term()[1] == 1

    def monic(self) -> Polynomial:
        _, c = self.leading_term()
        if c == 1:
            return self
        return self.scale(1 / c)

    def scale(self, c) -> Polynomial:
        c = _coerce(c)
        if not c:
            return Polynomial.zero()
        return Polynomial._from_clean({w: c * a for w, a in self._terms.items()})

    def combine(self, c, other: Polynomial) -> Polynomial:
        """``self + c*other`` with exact cancellation."""
        c = _coerce(c)
        terms = dict(self._terms)
        if c:
            for w, a in other._terms.items():
                v = terms.get(w, 0) + c * a
                if v:
                    terms[w] = v
                else:
                    terms.pop(w, None)
        return Polynomial._from_clean(terms)

    def sandwich(self, left: Word, right: Word) -> Polynomial:
        """The two-sided multiple ``left * self * right``."""
        left, right = tuple(left), tuple(right)
        return Polynomial._from_clean({left + w + right: a for w, a in self._terms.items()})

    def __add__(self, other: Polynomial) -> Polynomial:
        return self.combine(1, other)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self.combine(-1, other)

    def __neg__(self) -> Polynomial:
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            terms: dict[Word, Fraction] = {}
            for u, a in self._terms.items():
                for v, b in other._terms.items():
                    terms[u + v] = terms.get(u + v, 0) + a * b
            return Polynomial(terms)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{_format_coefficient(c)}*{format_word(w)}" for w, c in self)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


def parse_polynomial(text: str, n: int | None = None) -> Polynomial:
    """Inverse of ``str(Polynomial)``: terms ``c*W`` joined by ``" + "``."""
    text = text.strip()
    if text == "0":
        return Polynomial.zero()
    terms = []
    for part in text.split(" + "):
        coefficient, _, word = part.partition("*")
        if not word:
            raise ValueError(f"cannot parse term {part!r}")
        terms.append((parse_word(word, n), Fraction(coefficient.strip())))
    return Polynomial(terms)


# Function forms of the polynomial operations.

def leading_term(f: Polynomial) -> tuple[Word, Fraction]:
    return f.leading_term()


def normalize_monic(f: Polynomial) -> Polynomial:
    return f.monic()


def combine(f: Polynomial, c, g: Polynomial) -> Polynomial:
    return f.combine(c, g)


def sandwich(a: Word, f: Polynomial, b: Word) -> Polynomial:
    return f.sandwich(a, b)
