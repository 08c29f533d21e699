"""Block designs: validation, cohesion, resolvability and the built-in families."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import hadamard
from .errors import DomainError, InvalidArgument, NotADesign, ParseError, UnsupportedParameters
from .galois import field_of_order, is_prime, prime_power

# beyond this many blocks, resolvability is only trusted from stored classes
RESOLUTION_SEARCH_LIMIT = 64


@dataclass(frozen=True)
class BlockDesign:
    """Blocks over the points 1..m, stored canonically.

    Each block is sorted and the block list is sorted lexicographically;
    ``parallel_classes`` (if given) index into the canonical block list.
    """

    m: int
    blocks: tuple[tuple[int, ...], ...]
    parallel_classes: tuple[tuple[int, ...], ...] | None = None
    provenance: Mapping = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.m < 1:
            raise InvalidArgument("a design needs at least one point")
        raw = [tuple(sorted(int(x) for x in blk)) for blk in self.blocks]
        if not raw:
            raise InvalidArgument("a design needs at least one block")
        for blk in raw:
            if len(set(blk)) != len(blk):
                raise InvalidArgument(f"block {list(blk)} repeats a point")
            if blk[0] < 1 or blk[-1] > self.m:
                raise InvalidArgument(f"block {list(blk)} has points outside 1..{self.m}")
        sizes = {len(blk) for blk in raw}
        if len(sizes) != 1:
            raise InvalidArgument(f"blocks have differing sizes {sorted(sizes)}")
        if len(set(raw)) != len(raw):
            raise InvalidArgument("blocks must be pairwise distinct")
        order = sorted(range(len(raw)), key=lambda i: raw[i])
        new_index = {old: new for new, old in enumerate(order)}
        object.__setattr__(self, "blocks", tuple(raw[i] for i in order))
        if self.parallel_classes is not None:
            classes = []
            for cls in self.parallel_classes:
                try:
                    classes.append(tuple(sorted(new_index[int(i)] for i in cls)))
                except KeyError as exc:
                    raise InvalidArgument(f"parallel class refers to missing block {exc}") from None
            used = [i for cls in classes for i in cls]
            if sorted(used) != list(range(len(raw))):
                raise InvalidArgument("parallel classes must partition the block indices")
            object.__setattr__(self, "parallel_classes", tuple(sorted(classes)))
        object.__setattr__(self, "provenance", dict(self.provenance or {}))

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.blocks[0])

    def incidence(self) -> np.ndarray:
        """m x b 0/1 incidence matrix."""
        n = np.zeros((self.m, self.b), dtype=np.int64)
        for j, blk in enumerate(self.blocks):
            n[np.array(blk) - 1, j] = 1
        return n

    def to_dict(self) -> dict:
        out: dict = {"m": self.m, "blocks": [list(b) for b in self.blocks]}
        if self.parallel_classes is not None:
            out["parallel_classes"] = [list(c) for c in self.parallel_classes]
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data) -> "BlockDesign":
        if not isinstance(data, dict):
            raise ParseError("expected a JSON object")
        if not isinstance(data.get("m"), int):
            raise ParseError("missing or non-integer", field="m")
        blocks = data.get("blocks")
        if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
            raise ParseError("expected a list of integer lists", field="blocks")
        if any(not isinstance(x, int) for b in blocks for x in b):
            raise ParseError("points must be integers", field="blocks")
        classes = data.get("parallel_classes")
        if classes is not None and (
            not isinstance(classes, list) or not all(isinstance(c, list) for c in classes)
        ):
            raise ParseError("expected a list of integer lists", field="parallel_classes")
        try:
            return cls(data["m"], tuple(map(tuple, blocks)),
                       None if classes is None else tuple(map(tuple, classes)),
                       data.get("provenance") or {})
        except InvalidArgument as exc:
            raise ParseError(str(exc), field="blocks") from exc

    @classmethod
    def from_json(cls, text: str) -> "BlockDesign":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class DesignReport:
    m: int
    l: int  # noqa: E741
    b: int
    r: int
    lambda2: int | None
    cohesion: int
    symmetric: bool
    resolvable: bool
    affine: bool
    bose_tight: bool
    cross_class_intersection: int | None = None
    parallel_classes: tuple[tuple[int, ...], ...] | None = None

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["parallel_classes"] = None if self.parallel_classes is None else [list(c) for c in self.parallel_classes]
        return d


def replication(d: BlockDesign) -> int:
    counts = d.incidence().sum(axis=1)
    if not np.all(counts == counts[0]):
        raise NotADesign(
            f"not a 1-design: point replication ranges from {counts.min()} to {counts.max()}"
        )
    return int(counts[0])


def cohesion(d: BlockDesign) -> int:
    """Largest intersection between two distinct blocks."""
    if d.b < 2:
        raise DomainError("cohesion needs at least two blocks")
    n = d.incidence()
    g = n.T @ n
    np.fill_diagonal(g, -1)
    return int(g.max())


def pair_coverage(d: BlockDesign) -> int | None:
    """Number of blocks containing each pair of points, if that number is constant."""
    if d.m < 2:
        return None
    n = d.incidence()
    cover = (n @ n.T)[np.triu_indices(d.m, 1)]
    return int(cover[0]) if np.all(cover == cover[0]) else None


def _is_parallel_class(d: BlockDesign, cls: Sequence[int]) -> bool:
    pts = [x for i in cls for x in d.blocks[i]]
    return sorted(pts) == list(range(1, d.m + 1))


def find_resolution(d: BlockDesign) -> tuple[tuple[int, ...], ...] | None:
    """Exact search for a partition of the blocks into parallel classes."""
    m, l = d.m, d.l
    if m % l:
        return None
    full = (1 << m) - 1
    masks = [sum(1 << (x - 1) for x in blk) for blk in d.blocks]

    def classes_through(remaining, covered, chosen):
        if covered == full:
            yield chosen
            return
        pt = (~covered & (covered + 1)).bit_length() - 1
        for j in sorted(remaining):
            if masks[j] >> pt & 1 and not masks[j] & covered:
                yield from classes_through(remaining - {j}, covered | masks[j], chosen + [j])

    def solve(remaining: frozenset):
        if not remaining:
            return []
        first = min(remaining)
        for cls in classes_through(remaining - {first}, masks[first], [first]):
            rest = solve(remaining - set(cls))
            if rest is not None:
                return [tuple(sorted(cls))] + rest
        return None

    found = solve(frozenset(range(d.b)))
    return None if found is None else tuple(sorted(found))


def _cross_class_intersection(d: BlockDesign, classes) -> int | None:
    n = d.incidence()
    g = n.T @ n
    label = np.empty(d.b, dtype=np.int64)
    for c, cls in enumerate(classes):
        label[list(cls)] = c
    cross = g[label[:, None] != label[None, :]]
    if cross.size == 0:
        return None
    return int(cross[0]) if np.all(cross == cross[0]) else None


def validate_design(d: BlockDesign) -> DesignReport:
    r = replication(d)
    m, l, b = d.m, d.l, d.b
    if m * r != b * l:
        raise NotADesign(f"mr = {m * r} differs from bl = {b * l}")
    lam = pair_coverage(d)
    if lam is not None and r * (l - 1) != lam * (m - 1):
        raise NotADesign(f"r(l-1) = {r * (l - 1)} differs from lambda(m-1) = {lam * (m - 1)}")
    coh = cohesion(d) if b >= 2 else 0

    classes = None
    if d.parallel_classes is not None:
        if all(_is_parallel_class(d, c) for c in d.parallel_classes):
            classes = d.parallel_classes
    elif b <= RESOLUTION_SEARCH_LIMIT:
        classes = find_resolution(d)
    resolvable = classes is not None
    cross = _cross_class_intersection(d, classes) if resolvable else None
    affine = resolvable and cross is not None

    return DesignReport(
        m=m, l=l, b=b, r=r, lambda2=lam, cohesion=coh,
        symmetric=m == b, resolvable=resolvable, affine=affine,
        bose_tight=b == m + r - 1,
        cross_class_intersection=cross, parallel_classes=classes,
    )


# -- generators ---------------------------------------------------------------

def _projective_points(q: int, dim: int) -> list[tuple[int, ...]]:
    """Canonical representatives (first nonzero coordinate 1) of the 1-spaces of GF(q)^dim."""
    pts = []
    for v in product(range(q), repeat=dim):
        nz = next((c for c in v if c), None)
        if nz == 1:
            pts.append(v)
    return pts


def gen_point_hyperplane(q: int, t: int) -> BlockDesign:
    """Points and hyperplanes of PG(t, q)."""
    if t < 2:
        raise InvalidArgument("point-hyperplane designs need t >= 2")
    fld = field_of_order(q)
    add, mul = fld.add_table(), fld.mul_table()
    pts = np.array(_projective_points(q, t + 1), dtype=np.int64)
    blocks = []
    for a in pts:
        terms = mul[a[None, :], pts]
        dot = terms[:, 0]
        for c in range(1, t + 1):
            dot = add[dot, terms[:, c]]
        blocks.append(tuple(int(i) + 1 for i in np.flatnonzero(dot == 0)))
    return BlockDesign(len(pts), tuple(blocks),
                       provenance={"family": "point_hyperplane", "q": q, "t": t})


def gen_hadamard_design(t: int) -> BlockDesign:
    """Paley difference-set design on GF(4t-1): translates of the nonzero squares."""
    if t < 1:
        raise InvalidArgument("t must be positive")
    m = 4 * t - 1
    if prime_power(m) is None:
        raise UnsupportedParameters(
            f"4t-1 = {m} is not a prime power; import a Hadamard design from a file instead"
        )
    fld = field_of_order(m)
    add, mul = fld.add_table(), fld.mul_table()
    squares = sorted({int(mul[x, x]) for x in range(1, m)})
    blocks = [tuple(int(add[s, a]) + 1 for s in squares) for a in range(m)]
    return BlockDesign(m, tuple(blocks), provenance={"family": "hadamard", "t": t})


def gen_menon_design(s: int) -> BlockDesign:
    """Menon design with t = 2^s from the -1 entries of a regular Hadamard matrix."""
    if s < 1:
        raise InvalidArgument("s must be positive")
    h = hadamard.regular_hadamard_power4(s + 1).entries
    blocks = [tuple(int(j) + 1 for j in np.flatnonzero(row == -1)) for row in h]
    return BlockDesign(h.shape[0], tuple(blocks), provenance={"family": "menon", "s": s})


def gen_affine(p: int, t: int) -> BlockDesign:
    """Hyperplanes of AG(t+1, p), resolved by direction."""
    if not is_prime(p):
        raise InvalidArgument(f"p={p} is not prime")
    if t < 1:
        raise InvalidArgument("t must be positive")
    pts = np.array(list(product(range(p), repeat=t + 1)), dtype=np.int64)
    blocks, classes = [], []
    for a in _projective_points(p, t + 1):
        values = (pts @ np.array(a)) % p
        cls = []
        for c in range(p):
            cls.append(len(blocks))
            blocks.append(tuple(int(i) + 1 for i in np.flatnonzero(values == c)))
        classes.append(tuple(cls))
    return BlockDesign(len(pts), tuple(blocks), tuple(classes),
                       provenance={"family": "affine", "p": p, "t": t})


def _geom(q: int, lo: int, hi: int) -> int:
    return sum(q ** i for i in range(lo, hi + 1))


FAMILIES = ("point_hyperplane", "hadamard", "menon", "affine", "wallis", "wilson_brouwer")


def family_params(family: str, *params: int) -> dict:
    """Parameter record {m, l, lambda, b, r} of a named family.

    Arguments per family: point_hyperplane (q, t), hadamard (t,), menon (s,),
    affine (p, t), wallis (q, t), wilson_brouwer (q, t).
    """
    def need(n):
        if len(params) != n or any(not isinstance(x, (int, np.integer)) for x in params):
            raise InvalidArgument(f"{family} takes {n} integer parameter(s)")

    if family == "point_hyperplane":
        need(2)
        q, t = params
        if prime_power(q) is None or t < 2:
            raise InvalidArgument("point_hyperplane needs a prime power q and t >= 2")
        m, l, lam = _geom(q, 0, t), _geom(q, 0, t - 1), _geom(q, 0, t - 2)
        return {"m": m, "l": l, "lambda": lam, "b": m, "r": l}
    if family == "hadamard":
        need(1)
        (t,) = params
        if t < 1:
            raise InvalidArgument("hadamard needs t >= 1")
        return {"m": 4 * t - 1, "l": 2 * t - 1, "lambda": t - 1, "b": 4 * t - 1, "r": 2 * t - 1}
    if family == "menon":
        need(1)
        (s,) = params
        if s < 1:
            raise InvalidArgument("menon needs s >= 1")
        t = 2 ** s
        return {"m": 4 * t * t, "l": 2 * t * t - t, "lambda": t * t - t, "b": 4 * t * t, "r": 2 * t * t - t}
    if family == "affine":
        need(2)
        p, t = params
        if not is_prime(p) or t < 1:
            raise InvalidArgument("affine needs a prime p and t >= 1")
        return {"m": p ** (t + 1), "l": p ** t, "lambda": _geom(p, 0, t - 1),
                "b": _geom(p, 1, t + 1), "r": _geom(p, 0, t)}
    if family == "wallis":
        need(2)
        q, t = params
        if prime_power(q) is None or t < 1:
            raise InvalidArgument("wallis needs a prime power q and t >= 1")
        m = q ** (t + 1) * (_geom(q, 1, t) + 2)
        l = q ** t * _geom(q, 0, t)
        lam = q ** t * _geom(q, 0, t - 1)
        return {"m": m, "l": l, "lambda": lam, "b": m, "r": l}
    if family == "wilson_brouwer":
        need(2)
        q, t = params
        if prime_power(q) is None or q % 2 == 0 or t < 1:
            raise InvalidArgument("wilson_brouwer needs an odd prime power q and t >= 1")
        m = 2 * _geom(q, 1, t) + 1
        l = q ** t
        lam = q ** (t - 1) * (q - 1) // 2
        return {"m": m, "l": l, "lambda": lam, "b": m, "r": l}
    raise InvalidArgument(f"unknown design family {family!r}")


GENERATORS = {
    "point_hyperplane": gen_point_hyperplane,
    "hadamard": gen_hadamard_design,
    "menon": gen_menon_design,
    "affine": gen_affine,
}


def generate(family: str, *params: int) -> BlockDesign:
    if family not in GENERATORS:
        if family in FAMILIES:
            raise UnsupportedParameters(f"no generator for {family}; import the design from a file")
        raise InvalidArgument(f"unknown design family {family!r}")
    return GENERATORS[family](*params)


def single_block(m: int) -> BlockDesign:
    return BlockDesign(m, (tuple(range(1, m + 1)),))


def blocks_from(m: int, blocks: Iterable[Iterable[int]]) -> BlockDesign:
    return BlockDesign(m, tuple(tuple(b) for b in blocks))
