"""Tight OGFFs from MUBs and cohesive block designs, ETFFs from symmetric designs."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import designs as dz
from .designs import BlockDesign
from .errors import ConstructionDefect, InvalidArgument, UnsupportedParameters
from .galois import is_power_of_four, is_prime, prime_power
from .mubs import MubFamily, dgs_bound, gen_complex_mubs, gen_real_mubs
from .packing import (
    DEFAULT_TOL,
    Packing,
    ambient_traceless_dim,
    block_projection,
    pair_traces,
)


@dataclass(frozen=True)
class RecipeInput:
    mubs: MubFamily
    design: BlockDesign
    bases: tuple[int, ...] | None = None

    def selected(self) -> MubFamily:
        return self.mubs if self.bases is None else self.mubs.subset(self.bases)


def _intersections(design: BlockDesign) -> np.ndarray:
    inc = design.incidence()
    return inc.T @ inc


def assemble_ogff(
    mubs: MubFamily | RecipeInput,
    design: BlockDesign | None = None,
    bases: Sequence[int] | None = None,
    override_cardinality: bool = False,
    tol: float = DEFAULT_TOL,
) -> Packing:
    """Block projections of every design block over every selected basis.

    Ordering is basis-major, then the design's canonical block order.  Raises
    unless the design is l^2/m-cohesive and K b > d + 1; the cardinality check
    can be waived with ``override_cardinality``, in which case the result is a
    tight fusion frame that makes no orthoplex claim.
    """
    if isinstance(mubs, RecipeInput):
        inp = mubs
    else:
        inp = RecipeInput(mubs, design, None if bases is None else tuple(bases))
    fam, design = inp.selected(), inp.design
    m, l, b, K = fam.m, design.l, design.b, fam.K
    if design.m != m:
        raise InvalidArgument(f"design has {design.m} points but the MUBs live in dimension {m}")
    r = dz.replication(design)
    coh = dz.cohesion(design) if b >= 2 else 0
    if coh * m > l * l:
        raise InvalidArgument(
            f"design is not l^2/m-cohesive: cohesion {coh} exceeds {l * l}/{m}"
        )
    n = K * b
    d = ambient_traceless_dim(m, fam.field)
    eligible = n > d + 1
    if not eligible and not override_cardinality:
        raise InvalidArgument(
            f"cardinality shortfall: K*b = {n} must exceed d + 1 = {d + 1} for the orthoplex bound"
        )

    mats = [block_projection(B, blk, fam.field).matrix for B in fam.bases for blk in design.blocks]
    packing = Packing(fam.field, np.stack(mats), {
        "construction": "ogff",
        "mubs": dict(fam.provenance),
        "design": dict(design.provenance),
        "claim": "OGFF" if eligible else "tight-fusion-frame",
    })

    # self-check against the exact trace values
    G = pair_traces(packing, tol)
    expected = np.full((n, n), l * l / m)
    inter = _intersections(design)
    for k in range(K):
        sl = slice(k * b, (k + 1) * b)
        expected[sl, sl] = inter
    dev = float(np.max(np.abs(G - expected)))
    S = packing.mats.sum(axis=0)
    tight_dev = float(np.max(np.abs(S - K * r * np.eye(m))))
    if dev >= tol or tight_dev >= tol:
        raise ConstructionDefect(
            f"assembled packing deviates from its exact traces by {dev:.3e} "
            f"and from tightness by {tight_dev:.3e}"
        )
    return packing


def etff_from_symmetric(design: BlockDesign, basis=None, fld: str = "complex",
                        tol: float = DEFAULT_TOL) -> Packing:
    """Block packing of a symmetric design over one orthonormal basis (standard by default)."""
    if design.m != design.b:
        raise InvalidArgument(f"design is not symmetric: m = {design.m}, b = {design.b}")
    m = design.m
    if basis is None:
        basis = np.eye(m)
    basis = np.asarray(basis)
    if basis.shape != (m, m):
        raise InvalidArgument(f"basis must be {m}x{m}, got {basis.shape}")
    if np.iscomplexobj(basis):
        fld = "complex"
    r = dz.replication(design)
    mats = [block_projection(basis, blk, fld).matrix for blk in design.blocks]
    packing = Packing(fld, np.stack(mats), {
        "construction": "etff", "design": dict(design.provenance), "claim": "ETFF",
    })

    G = pair_traces(packing, tol)
    dev = float(np.max(np.abs(G - _intersections(design))))
    off = G[np.triu_indices(m, 1)]
    spread = float(off.max() - off.min()) if off.size else 0.0
    tight_dev = float(np.max(np.abs(packing.mats.sum(axis=0) - r * np.eye(m))))
    if dev >= tol or spread >= tol or tight_dev >= tol:
        raise ConstructionDefect(
            f"symmetric block packing is not an ETFF (trace deviation {dev:.3e}, "
            f"spread {spread:.3e}, tightness {tight_dev:.3e})"
        )
    return packing


def min_blocks_required(m: int, fld: str) -> int:
    """Smallest b with b > (d + 1) / k for a maximal MUB family in F^m."""
    if m < 2:
        raise InvalidArgument("m must be at least 2")
    d = ambient_traceless_dim(m, fld)
    k = dgs_bound(m, fld)
    return (d + 1) // k + 1


# -- catalog ---------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    family: str
    params: dict
    field: str
    m: int
    l: int  # noqa: E741
    b: int
    n: int
    coherence_target: Fraction
    maximal: bool
    constructible_in_v1: bool

    @property
    def classification(self) -> str:
        return "tight-maximal-OGFF" if self.maximal else "tight-OGFF"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["coherence_target"] = float(self.coherence_target)
        d["coherence_target_exact"] = f"{self.coherence_target.numerator}/{self.coherence_target.denominator}"
        d["classification"] = self.classification
        return d


CATALOG_COLUMNS = ("family", "params", "field", "m", "l", "b", "n", "coherence_target",
                   "coherence_target_exact", "maximal", "constructible_in_v1", "classification")


def _entry(family, params, fld, rec, cohesion, constructible):
    m, l, b = rec["m"], rec["l"], rec["b"]
    if fld == "complex" and prime_power(m) is None:
        return None
    if fld == "real" and not is_power_of_four(m):
        return None
    if not 1 < l < m - 1 or cohesion * m > l * l:
        return None
    d = ambient_traceless_dim(m, fld)
    n = dgs_bound(m, fld) * b
    if n <= d + 1:
        return None
    return CatalogEntry(family, params, fld, m, l, b, n, Fraction(l * l, m), n == 2 * d, constructible)


def family_catalog(max_m: int) -> list[CatalogEntry]:
    """Every OGFF parameter set with m <= max_m that the named families provide."""
    if max_m < 2:
        raise InvalidArgument("max_m must be at least 2")
    pps = [q for q in range(2, max_m + 1) if prime_power(q)]
    out: list[CatalogEntry | None] = []

    for q in pps:
        t = 2
        while (rec := dz.family_params("point_hyperplane", q, t))["m"] <= max_m:
            out.append(_entry("point_hyperplane", {"q": q, "t": t}, "complex", rec, rec["lambda"], True))
            t += 1

    t = 1
    while (rec := dz.family_params("hadamard", t))["m"] <= max_m:
        out.append(_entry("hadamard", {"t": t}, "complex", rec, rec["lambda"], True))
        t += 1

    s = 1
    while (rec := dz.family_params("menon", s))["m"] <= max_m:
        out.append(_entry("menon", {"s": s}, "complex", rec, rec["lambda"], True))
        out.append(_entry("menon", {"s": s}, "real", rec, rec["lambda"], rec["m"] == 4))
        s += 1

    t = 1
    while (rec := dz.family_params("wallis", 2, t))["m"] <= max_m:
        for fld in ("complex", "real"):
            out.append(_entry("wallis", {"q": 2, "t": t}, fld, rec, rec["lambda"], False))
        t += 1

    for q in pps:
        if q % 2 == 0:
            continue
        t = 1
        while (rec := dz.family_params("wilson_brouwer", q, t))["m"] <= max_m:
            out.append(_entry("wilson_brouwer", {"q": q, "t": t}, "complex", rec, rec["lambda"], False))
            t += 1

    for p in (x for x in range(2, max_m + 1) if is_prime(x)):
        t = 1
        while (rec := dz.family_params("affine", p, t))["m"] <= max_m:
            cross = p ** (t - 1)
            out.append(_entry("affine", {"p": p, "t": t}, "complex", rec, cross, True))
            if p == 2:
                out.append(_entry("affine", {"p": p, "t": t}, "real", rec, cross, rec["m"] == 4))
            t += 1

    return [e for e in out if e is not None]


def construct_entry(entry: CatalogEntry, tol: float = DEFAULT_TOL) -> Packing:
    """Build the packing a constructible catalog entry advertises."""
    if not entry.constructible_in_v1:
        raise UnsupportedParameters(f"{entry.family} {entry.params} ({entry.field}) has no built-in construction")
    design = dz.generate(entry.family, *entry.params.values())
    fam = gen_complex_mubs(entry.m) if entry.field == "complex" else gen_real_mubs(entry.m)
    return assemble_ogff(fam, design, tol=tol)
