"""Fusion-frame numerics for packings of rank-l projections.

All pairwise quantities go through the trace Gram matrix ``G[j, k] = tr(P_j P_k)``,
computed as inner products of the flattened projections (``P_k`` is Hermitian,
so ``tr(P_j P_k) = sum(P_j * conj(P_k))``).
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import ConstructionDefect, DomainError, InvalidArgument, ParseError

DEFAULT_TOL = 1e-9
ENTRY_TOL = 1e-12
RANK_RTOL = 1e-8
FIELDS = ("real", "complex")

CLASSIFICATIONS = (
    "ETFF",
    "tight-maximal-OGFF",
    "tight-OGFF",
    "OGFF",
    "tight-fusion-frame",
    "packing",
)
CSV_COLUMNS = ("field", "m", "l", "n", "coherence", "simplex", "orthoplex",
               "tight", "equiangular", "classification", "tolerance")


def _dtype(fld: str):
    if fld not in FIELDS:
        raise InvalidArgument(f"field must be 'real' or 'complex', got {fld!r}")
    return np.complex128 if fld == "complex" else np.float64


def _projection_defects(mat: np.ndarray) -> tuple[float, float]:
    herm = float(np.max(np.abs(mat - mat.conj().T)))
    idem = float(np.max(np.abs(mat @ mat - mat)))
    return herm, idem


@dataclass(frozen=True, eq=False)
class Projection:
    """Orthogonal projection of rank l on F^m."""

    matrix: np.ndarray
    field: str = "complex"

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=_dtype(self.field))
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InvalidArgument(f"projection must be square, got shape {mat.shape}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    @property
    def l(self) -> int:  # noqa: E743
        return int(round(float(np.trace(self.matrix).real)))

    def check(self, tol: float = DEFAULT_TOL) -> None:
        herm, idem = _projection_defects(self.matrix)
        tr = float(np.trace(self.matrix).real)
        if herm > tol or idem > tol or abs(tr - round(tr)) > tol:
            raise InvalidArgument(
                f"not an orthogonal projection (hermitian {herm:.2e}, idempotent {idem:.2e}, trace {tr})"
            )


@dataclass(frozen=True, eq=False)
class Packing:
    """n rank-l projections on F^m, stored as an (n, m, m) array."""

    field: str
    mats: np.ndarray
    provenance: Mapping = field(default_factory=dict)

    def __post_init__(self):
        mats = np.array(self.mats, dtype=_dtype(self.field))
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2] or mats.shape[0] == 0:
            raise InvalidArgument(f"packing must be an (n, m, m) array, got shape {mats.shape}")
        ranks = {int(round(float(np.trace(P).real))) for P in mats}
        if len(ranks) != 1:
            raise InvalidArgument(f"projections have differing ranks {sorted(ranks)}")
        mats.setflags(write=False)
        object.__setattr__(self, "mats", mats)
        object.__setattr__(self, "provenance", dict(self.provenance or {}))

    @classmethod
    def from_projections(cls, projections: Sequence[Projection], provenance=None) -> "Packing":
        if not projections:
            raise InvalidArgument("a packing needs at least one projection")
        fields = {p.field for p in projections}
        fld = "complex" if "complex" in fields else "real"
        return cls(fld, np.stack([p.matrix for p in projections]), provenance or {})

    @property
    def n(self) -> int:
        return self.mats.shape[0]

    @property
    def m(self) -> int:
        return self.mats.shape[1]

    @property
    def l(self) -> int:  # noqa: E743
        return int(round(float(np.trace(self.mats[0]).real)))

    @property
    def projections(self) -> list[Projection]:
        return [Projection(P, self.field) for P in self.mats]

    def check(self, tol: float = DEFAULT_TOL) -> None:
        for j, P in enumerate(self.mats):
            herm, idem = _projection_defects(P)
            if herm > tol or idem > tol:
                raise InvalidArgument(
                    f"element {j} is not an orthogonal projection "
                    f"(hermitian {herm:.2e}, idempotent {idem:.2e})"
                )

    def with_provenance(self, **extra) -> "Packing":
        return Packing(self.field, self.mats, {**self.provenance, **extra})

    def to_dict(self) -> dict:
        if self.field == "complex":
            mats = np.stack([self.mats.real, self.mats.imag], axis=-1).tolist()
        else:
            mats = self.mats.tolist()
        out = {"field": self.field, "m": self.m, "l": self.l, "projections": mats}
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data, tol: float = DEFAULT_TOL) -> "Packing":
        if not isinstance(data, dict):
            raise ParseError("expected a JSON object")
        fld = data.get("field")
        if fld not in FIELDS:
            raise ParseError("must be 'real' or 'complex'", field="field")
        for key in ("m", "l"):
            if not isinstance(data.get(key), int):
                raise ParseError("missing or non-integer", field=key)
        m = data["m"]
        try:
            arr = np.array(data.get("projections"), dtype=np.float64)
        except (TypeError, ValueError):
            raise ParseError("ragged or non-numeric matrices", field="projections") from None
        want = 4 if fld == "complex" else 3
        if arr.ndim != want or arr.shape[1:3] != (m, m) or (fld == "complex" and arr.shape[3] != 2):
            raise ParseError(f"expected n matrices of shape {m}x{m}"
                             + (" with [re, im] entries" if fld == "complex" else ""),
                             field="projections")
        mats = arr[..., 0] + 1j * arr[..., 1] if fld == "complex" else arr
        try:
            pk = cls(fld, mats, data.get("provenance") or {})
            pk.check(tol)
        except InvalidArgument as exc:
            raise ParseError(str(exc), field="projections") from exc
        if pk.l != data["l"]:
            raise ParseError(f"declared rank {data['l']} but projections have rank {pk.l}", field="l")
        return pk

    @classmethod
    def from_json(cls, text: str, tol: float = DEFAULT_TOL) -> "Packing":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from exc
        return cls.from_dict(data, tol)


# -- construction helpers ---------------------------------------------------

def projection_from_columns(cols, fld: str | None = None, tol: float = DEFAULT_TOL) -> Projection:
    """P = sum of x x* over the columns of an m x l array (which must be orthonormal)."""
    X = np.asarray(cols)
    if X.ndim == 1:
        X = X[:, None]
    if fld is None:
        fld = "complex" if np.iscomplexobj(X) else "real"
    X = X.astype(_dtype(fld))
    gram_dev = float(np.max(np.abs(X.conj().T @ X - np.eye(X.shape[1]))))
    if gram_dev > tol:
        raise InvalidArgument(f"columns are not orthonormal (Gram deviation {gram_dev:.3e})")
    return Projection(X @ X.conj().T, fld)


def block_projection(basis, block: Sequence[int], fld: str | None = None) -> Projection:
    """Sum of the rank-one projections onto the basis columns indexed by ``block`` (1-based)."""
    B = np.asarray(basis)
    m = B.shape[0]
    idx = [int(j) for j in block]
    if not idx:
        raise InvalidArgument("block must be non-empty")
    if len(set(idx)) != len(idx):
        raise InvalidArgument(f"block {idx} repeats an index")
    if min(idx) < 1 or max(idx) > m:
        raise InvalidArgument(f"block {idx} has indices outside 1..{m}")
    X = B[:, np.array(idx) - 1]
    if fld is None:
        fld = "complex" if np.iscomplexobj(B) else "real"
    return Projection(X @ X.conj().T, fld)


# -- pairwise quantities --------------------------------------------------------

def pair_traces(p: Packing, tol: float = DEFAULT_TOL) -> np.ndarray:
    """n x n matrix of tr(P_j P_k)."""
    X = p.mats.reshape(p.n, -1)
    G = X @ X.conj().T
    if np.iscomplexobj(G):
        imag = float(np.max(np.abs(G.imag)))
        if imag >= tol:
            raise DomainError(f"trace inner products have imaginary part {imag:.3e}")
        G = G.real
    return G


@dataclass(frozen=True)
class Coherence:
    mu: float
    argmax_pair: tuple[int, int]


def coherence(p: Packing, tol: float = DEFAULT_TOL) -> Coherence:
    """Maximum of tr(P_j P_k) over j < k.

    Ties (values within ``tol`` of the maximum) resolve to the lexicographically
    smallest pair, so near-equal floating values do not change the reported pair.
    """
    if p.n < 2:
        raise DomainError("coherence needs at least two projections")
    G = pair_traces(p, tol)
    iu = np.triu_indices(p.n, 1)
    vals = G[iu]
    mu = float(vals.max())
    first = int(np.flatnonzero(vals >= mu - tol)[0])
    return Coherence(mu, (int(iu[0][first]), int(iu[1][first])))


@dataclass(frozen=True)
class FrameOperator:
    S: np.ndarray
    tight: bool
    frame_constant: float
    deviation: float


def frame_operator(p: Packing, tol: float = DEFAULT_TOL) -> FrameOperator:
    S = p.mats.sum(axis=0)
    c = p.n * p.l / p.m
    dev = float(np.max(np.abs(S - c * np.eye(p.m))))
    return FrameOperator(S, dev < tol, c, dev)


@dataclass(frozen=True)
class Equiangularity:
    equiangular: bool
    common_value: float | None
    spread: float


def is_equiangular(p: Packing, tol: float = DEFAULT_TOL) -> Equiangularity:
    if p.n < 2:
        raise DomainError("equiangularity needs at least two projections")
    vals = pair_traces(p, tol)[np.triu_indices(p.n, 1)]
    spread = float(vals.max() - vals.min())
    eq = spread < tol
    return Equiangularity(eq, float(vals.mean()) if eq else None, spread)


def span_rank(p: Packing, rtol: float = RANK_RTOL) -> int:
    """Numerical rank of the m x (n l) matrix of concatenated subspace bases."""
    l = p.l
    bases = []
    for P in p.mats:
        _, vecs = np.linalg.eigh(P)
        bases.append(vecs[:, p.m - l:])
    s = np.linalg.svd(np.concatenate(bases, axis=1), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


# -- the traceless embedding -------------------------------------------------------

def ambient_traceless_dim(m: int, fld: str) -> int:
    """Real dimension of the traceless symmetric (real) or Hermitian (complex) m x m matrices."""
    _dtype(fld)
    if m < 1:
        raise InvalidArgument("m must be positive")
    return (m + 2) * (m - 1) // 2 if fld == "real" else m * m - 1


def _helmert(m: int) -> np.ndarray:
    """(m-1) x m orthonormal basis of the zero-sum vectors."""
    H = np.zeros((m - 1, m))
    for k in range(1, m):
        H[k - 1, :k] = 1.0
        H[k - 1, k] = -k
        H[k - 1] /= np.sqrt(k * (k + 1))
    return H


def vectorize_traceless(A: np.ndarray, fld: str) -> np.ndarray:
    """Isometric coordinates of a traceless Hermitian matrix.

    Off-diagonal pairs i < j contribute sqrt(2) Re A_ij (and sqrt(2) Im A_ij in
    the complex case, interleaved); the diagonal is expanded in the Helmert basis.
    """
    m = A.shape[0]
    iu = np.triu_indices(m, 1)
    off = A[iu]
    if fld == "complex":
        off_coords = np.sqrt(2) * np.stack([off.real, off.imag], axis=1).ravel()
    else:
        off_coords = np.sqrt(2) * np.real(off)
    diag = _helmert(m) @ np.real(np.diag(A))
    return np.concatenate([off_coords, diag])


@dataclass(frozen=True, eq=False)
class TracelessVector:
    dim: int
    coords: np.ndarray
    unit: bool


def traceless_map(P: Projection) -> TracelessVector:
    """Unnormalized image of P - (l/m) I."""
    m, l = P.m, P.l
    coords = vectorize_traceless(P.matrix - (l / m) * np.eye(m), P.field)
    return TracelessVector(ambient_traceless_dim(m, P.field), coords, False)


def traceless_embed(P: Projection) -> TracelessVector:
    m, l = P.m, P.l
    if l == 0 or l == m:
        raise DomainError(f"rank {l} projection on F^{m} maps to zero; no unit vector exists")
    raw = traceless_map(P)
    return TracelessVector(raw.dim, raw.coords / np.linalg.norm(raw.coords), True)


def embed_packing(p: Packing) -> np.ndarray:
    """n x d array of unit traceless vectors."""
    return np.stack([traceless_embed(P).coords for P in p.projections])


# -- bounds -------------------------------------------------------------------------

@dataclass(frozen=True)
class RankinTau:
    regime: str
    tau: float | None


def rankin_tau(n: int, d: int) -> RankinTau:
    """Optimal max inner product of n points on the sphere in R^d, where known."""
    if n < 2:
        raise DomainError("n must be at least 2")
    if d < 1:
        raise InvalidArgument("d must be positive")
    if n <= d + 1:
        return RankinTau("simplex", -1.0 / (n - 1))
    if n <= 2 * d:
        return RankinTau("orthoplex", 0.0)
    return RankinTau("open", None)


def lift(sigma: Fraction | float, l: int, m: int):
    """Chordal coherence from a restricted-code value: l^2/m + l(m-l)/m * sigma."""
    return Fraction(l * l, m) + Fraction(l * (m - l), m) * sigma


@dataclass(frozen=True)
class ChordalBounds:
    simplex: float
    orthoplex: float | None
    eligible: bool
    maximal_n: int
    simplex_exact: Fraction
    orthoplex_exact: Fraction | None


def chordal_lower_bound(n: int, l: int, m: int, fld: str) -> ChordalBounds:
    if not 1 <= l <= m:
        raise InvalidArgument(f"need 1 <= l <= m, got l={l}, m={m}")
    if n < 2:
        raise InvalidArgument("need n >= 2")
    d = ambient_traceless_dim(m, fld)
    simplex = Fraction(n * l * l - m * l, m * (n - 1))
    if simplex != lift(Fraction(-1, n - 1), l, m):
        raise AssertionError("simplex bound disagrees with its traceless lifting")
    eligible = n > d + 1
    ortho = Fraction(l * l, m) if eligible else None
    if eligible and ortho != lift(Fraction(0), l, m):
        raise AssertionError("orthoplex bound disagrees with its traceless lifting")
    return ChordalBounds(float(simplex), None if ortho is None else float(ortho),
                         eligible, 2 * d, simplex, ortho)


# -- complements ----------------------------------------------------------------

def spatial_complement(p: Packing, tol: float = DEFAULT_TOL) -> Packing:
    """The packing {I - P_j}, checked against mu(complement) = m - 2l + mu(P)."""
    if p.l >= p.m:
        raise DomainError("the complement of a rank-m packing has rank 0")
    comp = Packing(p.field, np.eye(p.m)[None, :, :] - p.mats,
                   {**p.provenance, "complement": not p.provenance.get("complement", False)})
    if p.n >= 2:
        mu, mu_c = coherence(p, tol), coherence(comp, tol)
        if abs(mu_c.mu - (p.m - 2 * p.l + mu.mu)) >= tol:
            raise ConstructionDefect(
                f"complement coherence {mu_c.mu} differs from m - 2l + mu = {p.m - 2 * p.l + mu.mu}"
            )
    return comp


# -- certification -------------------------------------------------------------------

def _fmt(x: Fraction | None) -> str | None:
    return None if x is None else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PackingCertificate:
    n: int
    l: int  # noqa: E741
    m: int
    field: str
    coherence: float
    argmax_pair: tuple[int, int]
    simplex_bound: float
    simplex_exact: str
    orthoplex_bound: float | None
    orthoplex_exact: str | None
    orthoplex_eligible: bool
    maximal: bool
    tight: bool
    frame_constant: float
    frame_deviation: float
    equiangular: bool
    span_rank: int
    classification: str
    tolerance: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["argmax_pair"] = list(self.argmax_pair)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def csv_row(self) -> dict:
        return {
            "field": self.field, "m": self.m, "l": self.l, "n": self.n,
            "coherence": repr(self.coherence), "simplex": repr(self.simplex_bound),
            "orthoplex": "" if self.orthoplex_bound is None else repr(self.orthoplex_bound),
            "tight": str(self.tight).lower(), "equiangular": str(self.equiangular).lower(),
            "classification": self.classification, "tolerance": repr(self.tolerance),
        }

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        if header:
            w.writeheader()
        w.writerow(self.csv_row())
        return buf.getvalue()

    @property
    def is_ogff(self) -> bool:
        return self.classification.endswith("OGFF")


def certify(p: Packing, tol: float = DEFAULT_TOL) -> PackingCertificate:
    if p.n < 2:
        raise DomainError("certification needs at least two projections")
    coh = coherence(p, tol)
    bounds = chordal_lower_bound(p.n, p.l, p.m, p.field)
    frame = frame_operator(p, tol)
    eq = is_equiangular(p, tol)
    maximal = p.n == bounds.maximal_n

    at_simplex = abs(coh.mu - bounds.simplex) < tol
    at_orthoplex = bounds.eligible and abs(coh.mu - bounds.orthoplex) < tol
    if at_simplex and eq.equiangular and frame.tight:
        cls = "ETFF"
    elif at_orthoplex and frame.tight and maximal:
        cls = "tight-maximal-OGFF"
    elif at_orthoplex and frame.tight:
        cls = "tight-OGFF"
    elif at_orthoplex:
        cls = "OGFF"
    elif frame.tight:
        cls = "tight-fusion-frame"
    else:
        cls = "packing"

    return PackingCertificate(
        n=p.n, l=p.l, m=p.m, field=p.field,
        coherence=coh.mu, argmax_pair=coh.argmax_pair,
        simplex_bound=bounds.simplex, simplex_exact=_fmt(bounds.simplex_exact),
        orthoplex_bound=bounds.orthoplex, orthoplex_exact=_fmt(bounds.orthoplex_exact),
        orthoplex_eligible=bounds.eligible, maximal=maximal,
        tight=frame.tight, frame_constant=frame.frame_constant, frame_deviation=frame.deviation,
        equiangular=eq.equiangular, span_rank=span_rank(p),
        classification=cls, tolerance=tol,
    )
