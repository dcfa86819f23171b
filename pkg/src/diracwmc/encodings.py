"""q-state variables realised with Boolean variables.

Three encodings are provided:

* ``log``    -- ceil(log2 q) bits holding the binary expansion of the value;
* ``order``  -- q-1 bits, bit i set iff the value is strictly larger than i;
* ``onehot`` -- q bits, exactly one set.

An :class:`EncodingString` is a sequence of same-kind encodings read as a
base-q number with digit ``i`` carrying weight ``q**i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import EncodingError
from .logic import FALSE, TRUE, Formula, Lit, VarPool, conj, disj, iff, implies

KINDS = ("log", "order", "onehot")
_ALIASES = {"logarithmic": "log", "one-hot": "onehot", "direct": "onehot"}
DEFAULT_KIND = "log"


def normalize_kind(kind: str) -> str:
    kind = _ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise EncodingError(f"unknown encoding kind {kind!r}; expected one of {KINDS}")
    return kind


def bits_needed(q: int, kind: str) -> int:
    if q < 2:
        raise EncodingError(f"base must be at least 2, got {q}")
    kind = normalize_kind(kind)
    if kind == "log":
        return (q - 1).bit_length()
    if kind == "order":
        return q - 1
    return q


@dataclass(frozen=True)
class QStateEncoding:
    q: int
    kind: str
    vars: tuple[int, ...]

    def __post_init__(self):
        if len(self.vars) != bits_needed(self.q, self.kind):
            raise EncodingError(
                f"{self.kind} encoding of base {self.q} needs "
                f"{bits_needed(self.q, self.kind)} variables, got {len(self.vars)}"
            )
        if len(set(self.vars)) != len(self.vars):
            raise EncodingError("encoding variables must be distinct")

    @classmethod
    def new(cls, q: int, kind: str, pool: VarPool) -> "QStateEncoding":
        kind = normalize_kind(kind)
        return cls(q, kind, tuple(pool.fresh_many(bits_needed(q, kind))))

    def equals(self, n: int) -> Formula:
        return enc_equals(self, n)

    def validity(self) -> Formula:
        return enc_validity(self)

    def renamed(self, mapping) -> "QStateEncoding":
        return QStateEncoding(self.q, self.kind, tuple(mapping.get(v, v) for v in self.vars))


def enc_equals(v: QStateEncoding, n: int) -> Formula:
    """Formula fixing the encoding ``v`` to the value ``n``."""
    if not 0 <= n < v.q:
        raise EncodingError(f"value {n} out of range for base {v.q}")
    if v.kind == "log":
        return conj(*(Lit(b, bool((n >> i) & 1)) for i, b in enumerate(v.vars)))
    if v.kind == "order":
        return conj(*(Lit(b, i < n) for i, b in enumerate(v.vars)))
    return conj(*(Lit(b, i == n) for i, b in enumerate(v.vars)))


def enc_validity(v: QStateEncoding) -> Formula:
    """Formula equivalent to ``OR_n (v = n)``, in simplified form."""
    bits = v.vars
    if v.kind == "log":
        top = v.q - 1
        clauses = []
        for i in range(len(bits)):
            if (top >> i) & 1:
                continue
            higher = [Lit(bits[j], False) for j in range(i + 1, len(bits)) if (top >> j) & 1]
            clauses.append(disj(Lit(bits[i], False), *higher))
        return conj(*clauses)
    if v.kind == "order":
        return conj(*(implies(Lit(bits[i]), Lit(bits[i - 1])) for i in range(1, len(bits))))
    at_least = disj(*(Lit(b) for b in bits))
    at_most = [
        disj(Lit(bits[i], False), Lit(bits[j], False))
        for i in range(len(bits))
        for j in range(i + 1, len(bits))
    ]
    return conj(at_least, *at_most)


def _check_like(v: QStateEncoding, w: QStateEncoding) -> None:
    if v.q != w.q or v.kind != w.kind:
        raise EncodingError(
            f"cannot compare {v.kind}/q={v.q} with {w.kind}/q={w.q}; mixed kinds are not supported"
        )


def enc_equiv(v, w) -> Formula:
    """Formula stating that two encodings (or strings) hold the same value."""
    if isinstance(v, EncodingString) or isinstance(w, EncodingString):
        if not (isinstance(v, EncodingString) and isinstance(w, EncodingString)):
            raise EncodingError("cannot compare an encoding with a string")
        if len(v) != len(w):
            raise EncodingError(f"string lengths differ: {len(v)} vs {len(w)}")
        return conj(*(enc_equiv(a, b) for a, b in zip(v, w)))
    _check_like(v, w)
    if v.vars == w.vars:
        return TRUE
    return conj(*(iff(Lit(a), Lit(b)) for a, b in zip(v.vars, w.vars)))


@dataclass(frozen=True)
class EncodingString:
    """Digits of a base-q number; ``digits[i]`` carries weight ``q**i``."""

    digits: tuple[QStateEncoding, ...] = ()

    def __post_init__(self):
        if self.digits:
            q, kind = self.digits[0].q, self.digits[0].kind
            if any(d.q != q or d.kind != kind for d in self.digits):
                raise EncodingError("all digits of a string must share base and kind")

    @classmethod
    def new(cls, q: int, kind: str, length: int, pool: VarPool) -> "EncodingString":
        return cls(tuple(QStateEncoding.new(q, kind, pool) for _ in range(length)))

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[QStateEncoding]:
        return iter(self.digits)

    def __getitem__(self, i: int) -> QStateEncoding:
        return self.digits[i]

    def __add__(self, other: "EncodingString") -> "EncodingString":
        return EncodingString(self.digits + other.digits)

    @property
    def vars(self) -> tuple[int, ...]:
        return tuple(b for d in self.digits for b in d.vars)

    def size(self, q: int) -> int:
        return q ** len(self.digits)

    def equals(self, n: int) -> Formula:
        if not self.digits:
            if n != 0:
                raise EncodingError(f"value {n} out of range for an empty string")
            return TRUE
        q = self.digits[0].q
        if not 0 <= n < q ** len(self.digits):
            raise EncodingError(f"value {n} out of range for {len(self.digits)} digits of base {q}")
        parts = []
        for d in self.digits:
            parts.append(enc_equals(d, n % q))
            n //= q
        return conj(*parts)

    def validity(self) -> Formula:
        return conj(*(enc_validity(d) for d in self.digits))

    def equiv(self, other: "EncodingString") -> Formula:
        return enc_equiv(self, other)

    def renamed(self, mapping) -> "EncodingString":
        return EncodingString(tuple(d.renamed(mapping) for d in self.digits))


def string_of(digits: Sequence[QStateEncoding]) -> EncodingString:
    return EncodingString(tuple(digits))


__all__ = [
    "DEFAULT_KIND",
    "FALSE",
    "KINDS",
    "EncodingString",
    "QStateEncoding",
    "bits_needed",
    "enc_equals",
    "enc_equiv",
    "enc_validity",
    "normalize_kind",
]
