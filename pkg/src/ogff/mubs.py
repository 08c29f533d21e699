"""Mutually unbiased bases: construction, verification and the DGS cardinality bound.

Odd prime powers use the trace-phase construction over GF(q); powers of two
use the analogous construction over the Galois ring GR(4, k), whose arithmetic
lives here rather than in :mod:`ogff.galois`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import hadamard
from .errors import (
    ConstructionDefect,
    InvalidArgument,
    ParseError,
    UnsupportedParameters,
    VerificationFailed,
)
from .galois import FieldSpec, field_of_order

DEFAULT_TOL = 1e-9
FIELDS = ("real", "complex")


def _check_field(fld: str) -> str:
    if fld not in FIELDS:
        raise InvalidArgument(f"field must be 'real' or 'complex', got {fld!r}")
    return fld


def dgs_bound(m: int, fld: str) -> int:
    """Largest possible number of MUBs in F^m (m + 1 complex, m/2 + 1 real)."""
    if m < 1:
        raise InvalidArgument("m must be positive")
    return m + 1 if _check_field(fld) == "complex" else m // 2 + 1


@dataclass(frozen=True, eq=False)
class MubFamily:
    """K orthonormal bases of F^m; the columns of each m x m array are the basis vectors."""

    field: str
    m: int
    bases: tuple[np.ndarray, ...]
    provenance: Mapping = field(default_factory=dict)

    def __post_init__(self):
        _check_field(self.field)
        dtype = np.complex128 if self.field == "complex" else np.float64
        bases = []
        for B in self.bases:
            B = np.array(B, dtype=dtype)
            if B.shape != (self.m, self.m):
                raise InvalidArgument(f"each basis must be {self.m}x{self.m}, got {B.shape}")
            B.setflags(write=False)
            bases.append(B)
        if not bases:
            raise InvalidArgument("a MUB family needs at least one basis")
        object.__setattr__(self, "bases", tuple(bases))
        object.__setattr__(self, "provenance", dict(self.provenance or {}))

    @property
    def K(self) -> int:
        return len(self.bases)

    def __eq__(self, other):
        return (
            isinstance(other, MubFamily)
            and (self.field, self.m, self.K) == (other.field, other.m, other.K)
            and all(np.array_equal(a, b) for a, b in zip(self.bases, other.bases))
        )

    def subset(self, indices: Sequence[int]) -> "MubFamily":
        return MubFamily(self.field, self.m, tuple(self.bases[i] for i in indices),
                         {**self.provenance, "subset": list(indices)})

    def to_dict(self) -> dict:
        def entry(z):
            return [float(z.real), float(z.imag)] if self.field == "complex" else float(z)

        out = {
            "field": self.field,
            "m": self.m,
            "bases": [[[entry(z) for z in B[:, j]] for j in range(self.m)] for B in self.bases],
        }
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data) -> "MubFamily":
        if not isinstance(data, dict):
            raise ParseError("expected a JSON object")
        fld = data.get("field")
        if fld not in FIELDS:
            raise ParseError("must be 'real' or 'complex'", field="field")
        m = data.get("m")
        if not isinstance(m, int) or m < 1:
            raise ParseError("must be a positive integer", field="m")
        raw = data.get("bases")
        if not isinstance(raw, list) or not raw:
            raise ParseError("expected a non-empty list of bases", field="bases")
        bases = []
        for k, basis in enumerate(raw):
            if not isinstance(basis, list) or len(basis) != m:
                raise ParseError(f"basis {k} must list {m} columns", field="bases")
            cols = []
            for col in basis:
                if not isinstance(col, list) or len(col) != m:
                    raise ParseError(f"basis {k} has a column without {m} entries", field="bases")
                try:
                    if fld == "complex":
                        cols.append([complex(float(re), float(im)) for re, im in col])
                    else:
                        cols.append([float(x) for x in col])
                except (TypeError, ValueError):
                    raise ParseError(f"basis {k} has a malformed {fld} entry", field="bases") from None
            bases.append(np.array(cols).T)
        return cls(fld, m, tuple(bases), data.get("provenance") or {})

    @classmethod
    def from_json(cls, text: str) -> "MubFamily":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from exc
        return cls.from_dict(data)


def verify_mubs(fam: MubFamily, tol: float = DEFAULT_TOL) -> dict:
    """Check the trace table tr(pi_j^s pi_k^t) in {1/m, 0, 1} for every column pair."""
    if tol <= 0:
        raise InvalidArgument("tol must be positive")
    m = fam.m
    ortho_dev = 0.0
    unbiased_dev = 0.0
    for s, A in enumerate(fam.bases):
        for t in range(s, fam.K):
            overlaps = np.abs(A.conj().T @ fam.bases[t]) ** 2
            if s == t:
                ortho_dev = max(ortho_dev, float(np.max(np.abs(overlaps - np.eye(m)))))
            else:
                unbiased_dev = max(unbiased_dev, float(np.max(np.abs(overlaps - 1.0 / m))))
    return {
        "orthonormal": ortho_dev < tol,
        "unbiased": unbiased_dev < tol,
        "max_deviation": max(ortho_dev, unbiased_dev),
        "K": fam.K,
        "bound_ok": fam.K <= dgs_bound(m, fam.field),
    }


def _checked(fam: MubFamily, tol: float = DEFAULT_TOL) -> MubFamily:
    rep = verify_mubs(fam, tol)
    if not (rep["orthonormal"] and rep["unbiased"] and rep["bound_ok"]):
        raise ConstructionDefect(
            f"generated MUB family fails verification (max deviation {rep['max_deviation']:.3e})"
        )
    return fam


# -- Galois ring GR(4, k) = Z4[x] / (f), f monic with irreducible reduction mod 2 --

def _gr4_mul(u: np.ndarray, v: np.ndarray, f: Sequence[int]) -> np.ndarray:
    k = len(f) - 1
    prod = np.convolve(u, v) % 4
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c:
            prod[i - k:i + 1] = (prod[i - k:i + 1] - c * np.asarray(f)) % 4
    return prod[:k]


def _gr4_trace_of_monomials(f: Sequence[int]) -> np.ndarray:
    """Z4 trace of x^j: trace of the multiplication-by-x^j matrix on the basis 1..x^(k-1)."""
    k = len(f) - 1
    out = np.zeros(k, dtype=np.int64)
    for j in range(k):
        xj = np.zeros(k, dtype=np.int64)
        xj[j] = 1
        total = 0
        for i in range(k):
            e = np.zeros(k, dtype=np.int64)
            e[i] = 1
            total += _gr4_mul(xj, e, f)[i]
        out[j] = total % 4
    return out


def _teichmuller(fld: FieldSpec) -> list[np.ndarray]:
    """Teichmuller lifts of the field elements, in field enumeration order.

    Any lift u of a residue satisfies u^(2^k) = Teichmuller representative.
    """
    f = fld.modulus
    lifts = []
    for e in fld.elements():
        u = np.array(e.coeffs, dtype=np.int64)
        for _ in range(fld.k):
            u = _gr4_mul(u, u, f)
        lifts.append(u)
    return lifts


def _even_phases(fld: FieldSpec) -> np.ndarray:
    """Exponents E[a, x, b] = Tr((a + 2b) x) in Z4 over Teichmuller elements."""
    q, f = fld.q, fld.modulus
    T = _teichmuller(fld)
    tr_mono = _gr4_trace_of_monomials(f)
    tr_prod = np.array([[int(_gr4_mul(a, x, f) @ tr_mono) % 4 for x in T] for a in T])
    return (tr_prod[:, :, None] + 2 * tr_prod.T[None, :, :]) % 4


def _odd_phases(fld: FieldSpec) -> np.ndarray:
    """Exponents E[a, x, b] = tr(a x^2 + b x) in Z_p."""
    mul, tr = fld.mul_table(), fld.trace_table()
    sq = mul[np.arange(fld.q), np.arange(fld.q)]
    quad = tr[mul[:, sq]]      # quad[a, x] = tr(a x^2)
    lin = tr[mul]              # lin[b, x] = tr(b x)
    return (quad[:, :, None] + lin.T[None, :, :]) % fld.p


def gen_complex_mubs(q: int) -> MubFamily:
    """q + 1 MUBs of C^q for a prime power q: the standard basis, then one per a in GF(q)."""
    fld = field_of_order(q)
    if fld.p == 2:
        expo, order = _even_phases(fld), 4
    else:
        expo, order = _odd_phases(fld), fld.p
    if order == 4:
        roots = np.array([1, 1j, -1, -1j])
    else:
        roots = np.exp(2j * np.pi * np.arange(order) / order)
    bases = [np.eye(q, dtype=np.complex128)]
    bases.extend(roots[expo[a]] / np.sqrt(q) for a in range(q))
    fam = MubFamily("complex", q, tuple(bases), {"generator": "complex", "q": q})
    return _checked(fam)


def gen_real_mubs(m: int) -> MubFamily:
    """Three real MUBs of R^4: standard, Sylvester/2 and regular-seed/2."""
    if m != 4:
        raise UnsupportedParameters(
            f"real MUBs are only built in for m = 4 (got {m}); use import_mubs for other powers of four"
        )
    bases = (
        np.eye(4),
        hadamard.sylvester(2).entries / 2.0,
        hadamard.REGULAR_SEED / 2.0,
    )
    return _checked(MubFamily("real", 4, bases, {"generator": "real", "m": 4}))


def import_mubs(source: str | Path, tol: float = DEFAULT_TOL) -> MubFamily:
    """Load a family from JSON text or a file path; reject it unless it verifies."""
    text = source
    if isinstance(source, Path) or not str(source).lstrip().startswith("{"):
        text = Path(source).read_text(encoding="utf-8")
    fam = MubFamily.from_json(text)
    rep = verify_mubs(fam, tol)
    if not (rep["orthonormal"] and rep["unbiased"]):
        raise VerificationFailed(
            f"imported family is not mutually unbiased (max deviation {rep['max_deviation']:.3e})",
            max_deviation=rep["max_deviation"],
        )
    if not rep["bound_ok"]:
        raise VerificationFailed(
            f"{fam.K} bases exceed the bound {dgs_bound(fam.m, fam.field)}",
            max_deviation=rep["max_deviation"],
        )
    return fam


def export_mubs(fam: MubFamily) -> str:
    return fam.to_json()
