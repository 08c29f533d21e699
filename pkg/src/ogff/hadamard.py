"""Sylvester and regular (order 4^s) Hadamard matrices, kept in exact integers."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, ParseError

# order-4 regular seed: -1 on the diagonal, +1 elsewhere, every row sum +2
REGULAR_SEED = np.ones((4, 4), dtype=np.int64) - 2 * np.eye(4, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class SignMatrix:
    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise InvalidArgument(f"sign matrix must be square and non-empty, got shape {a.shape}")
        if not np.all((a == 1) | (a == -1)):
            raise InvalidArgument("sign matrix entries must be +1 or -1")
        a = a.astype(np.int64)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other):
        return isinstance(other, SignMatrix) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def to_json(self) -> str:
        return json.dumps(self.entries.tolist())

    @classmethod
    def from_json(cls, text: str) -> "SignMatrix":
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from exc
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ParseError("expected an array of rows", field="rows")
        if any(not isinstance(v, int) or isinstance(v, bool) for r in rows for v in r):
            raise ParseError("entries must be the integers 1 or -1", field="rows")
        if len({len(r) for r in rows}) > 1:
            raise ParseError("rows have different lengths", field="rows")
        try:
            return cls(np.array(rows, dtype=np.int64))
        except InvalidArgument as exc:
            raise ParseError(str(exc), field="rows") from exc


def kron(a: SignMatrix, b: SignMatrix) -> SignMatrix:
    return SignMatrix(np.kron(a.entries, b.entries))


def sylvester(k: int) -> SignMatrix:
    """Order 2^k Sylvester matrix, H(k) = [[H, H], [H, -H]]."""
    if k < 0:
        raise InvalidArgument("k must be non-negative")
    h = np.ones((1, 1), dtype=np.int64)
    for _ in range(k):
        h = np.block([[h, h], [h, -h]])
    return SignMatrix(h)


def regular_hadamard_power4(s: int) -> SignMatrix:
    """s-fold tensor power of the regular order-4 seed; row and column sums are 2^s."""
    if s < 1:
        raise InvalidArgument("s must be positive")
    h = SignMatrix(REGULAR_SEED)
    out = h
    for _ in range(s - 1):
        out = kron(out, h)
    return out


def is_hadamard(h: SignMatrix) -> dict:
    a = h.entries
    n = h.order
    hadamard = bool(np.array_equal(a @ a.T, n * np.eye(n, dtype=np.int64)))
    rows, cols = a.sum(axis=1), a.sum(axis=0)
    regular = bool(np.all(rows == rows[0]) and np.all(cols == rows[0]))
    return {"hadamard": hadamard, "regular": regular, "row_sum": int(rows[0]) if regular else None}


def normalize(h: SignMatrix) -> SignMatrix:
    """Negate rows and columns so the first row and first column are all +1."""
    a = h.entries.copy()
    a = a * a[:, :1]
    a = a * a[:1, :]
    return SignMatrix(a)
