from fractions import Fraction

import numpy as np
import pytest

from ogff import designs as dz
from ogff import mubs as mb
from ogff import packing as pk
from ogff import recipe as rc
from ogff.errors import InvalidArgument, UnsupportedParameters


def test_c4_recipe(c4_ogff):
    assert (c4_ogff.n, c4_ogff.l, c4_ogff.m) == (30, 2, 4)
    cert = pk.certify(c4_ogff)
    assert cert.coherence == pytest.approx(1.0, abs=1e-9)
    assert cert.classification == "tight-maximal-OGFF"
    assert c4_ogff.provenance["claim"] == "OGFF"


def test_c7_recipe(c7_ogff):
    cert = pk.certify(c7_ogff)
    assert c7_ogff.n == 56
    assert cert.coherence == pytest.approx(9 / 7, abs=1e-9)
    assert cert.frame_constant == 24 and cert.tight
    assert cert.classification == "tight-OGFF"


def test_r4_recipe(r4_ogff):
    cert = pk.certify(r4_ogff)
    assert r4_ogff.field == "real" and r4_ogff.n == 18
    assert cert.coherence == pytest.approx(1.0, abs=1e-9)
    assert cert.frame_constant == 9


def test_assembly_order_is_basis_major(c4_ogff):
    fam, d = mb.gen_complex_mubs(4), dz.gen_affine(2, 1)
    P = pk.block_projection(fam.bases[2], d.blocks[4]).matrix
    assert np.allclose(c4_ogff.mats[2 * 6 + 4], P, atol=1e-15)


def test_trace_structure_matches_design(c7_ogff):
    G = pk.pair_traces(c7_ogff)
    d = dz.gen_hadamard_design(2)
    for k in range(8):
        blk = G[7 * k:7 * k + 7, 7 * k:7 * k + 7]
        assert np.allclose(blk - np.diag(np.diag(blk)), np.ones((7, 7)) - np.eye(7), atol=1e-12)
    assert np.allclose(G[:7, 7:], 9 / 7, atol=1e-12)


def test_assemble_errors():
    fam = mb.gen_complex_mubs(4)
    with pytest.raises(InvalidArgument, match="dimension"):
        rc.assemble_ogff(fam, dz.gen_hadamard_design(2))
    # a 5-cycle of pairs: neighbouring blocks meet in 1 > 4/5
    cycle = dz.blocks_from(5, [[1, 2], [2, 3], [3, 4], [4, 5], [5, 1]])
    with pytest.raises(InvalidArgument, match="cohesive"):
        rc.assemble_ogff(mb.gen_complex_mubs(5), cycle)
    with pytest.raises(InvalidArgument, match="cardinality"):
        rc.assemble_ogff(fam, dz.gen_affine(2, 1), bases=[0, 1])


def test_override_cardinality_gives_unclaimed_tight_frame():
    p = rc.assemble_ogff(mb.gen_complex_mubs(4), dz.gen_affine(2, 1), bases=[0, 1],
                         override_cardinality=True)
    assert p.n == 12 and p.provenance["claim"] == "tight-fusion-frame"
    cert = pk.certify(p)
    assert cert.tight and not cert.is_ogff


def test_recipe_input_form():
    inp = rc.RecipeInput(mb.gen_complex_mubs(4), dz.gen_affine(2, 1))
    assert rc.assemble_ogff(inp).n == 30


def test_etff_examples(fano_etff):
    assert fano_etff.n == 7 and fano_etff.l == 3
    eq = pk.is_equiangular(fano_etff)
    assert eq.common_value == pytest.approx(1)
    assert pk.coherence(fano_etff).mu == pytest.approx(pk.chordal_lower_bound(7, 3, 7, "complex").simplex)
    menon = rc.etff_from_symmetric(dz.gen_menon_design(1))
    assert (menon.n, menon.l) == (16, 6)
    assert pk.is_equiangular(menon).common_value == pytest.approx(2)
    pg = rc.etff_from_symmetric(dz.gen_point_hyperplane(3, 2))
    assert (pg.n, pg.l) == (13, 4)
    assert pk.is_equiangular(pg).common_value == pytest.approx(1)
    with pytest.raises(InvalidArgument, match="symmetric"):
        rc.etff_from_symmetric(dz.gen_affine(2, 1))


def test_etff_over_a_fourier_basis_is_still_an_etff():
    B = mb.gen_complex_mubs(7).bases[3]
    p = rc.etff_from_symmetric(dz.gen_hadamard_design(2), B)
    assert pk.certify(p).classification == "ETFF"


def test_min_blocks_required():
    assert rc.min_blocks_required(4, "complex") == 4
    assert rc.min_blocks_required(4, "real") == 4
    assert rc.min_blocks_required(7, "complex") == 7
    for m in range(2, 30):
        d, k = pk.ambient_traceless_dim(m, "complex"), mb.dgs_bound(m, "complex")
        b = rc.min_blocks_required(m, "complex")
        assert k * b > d + 1 >= k * (b - 1)


def test_catalog_contents():
    cat = rc.family_catalog(16)
    keys = {(e.family, tuple(e.params.values()), e.field) for e in cat}
    assert ("affine", (2, 1), "complex") in keys
    assert ("affine", (2, 1), "real") in keys
    assert ("hadamard", (2,), "complex") in keys
    assert ("menon", (1,), "complex") in keys
    assert ("hadamard", (1,), "complex") not in keys  # l = 1
    for e in cat:
        assert 1 < e.l < e.m - 1
        assert e.coherence_target == Fraction(e.l * e.l, e.m)
        assert e.n > pk.ambient_traceless_dim(e.m, e.field) + 1
        assert e.maximal == (e.n == 2 * pk.ambient_traceless_dim(e.m, e.field))
    c4 = next(e for e in cat if e.family == "affine" and e.params == {"p": 2, "t": 1} and e.field == "complex")
    assert c4.maximal and c4.n == 30
    with pytest.raises(InvalidArgument):
        rc.family_catalog(1)


@pytest.mark.parametrize("entry", [e for e in rc.family_catalog(16) if e.constructible_in_v1],
                         ids=lambda e: f"{e.family}-{'-'.join(map(str, e.params.values()))}-{e.field}")
def test_constructible_catalog_entries_deliver_their_classification(entry):
    p = rc.construct_entry(entry)
    cert = pk.certify(p)
    assert p.n == entry.n and p.l == entry.l and p.m == entry.m
    assert cert.coherence == pytest.approx(float(entry.coherence_target), abs=1e-9)
    assert cert.classification == entry.classification


def test_non_constructible_entry_raises():
    entry = next(e for e in rc.family_catalog(16) if not e.constructible_in_v1)
    with pytest.raises(UnsupportedParameters):
        rc.construct_entry(entry)


def test_family_cardinalities_follow_closed_forms():
    cat = rc.family_catalog(64)
    for e in cat:
        if e.field != "complex":
            continue
        if e.family == "hadamard":
            t = e.params["t"]
            assert e.n == 4 * t * (4 * t - 1)
        elif e.family == "menon":
            t = 2 ** e.params["s"]
            assert e.n == 16 * t ** 4 + 4 * t ** 2
        elif e.family == "affine":
            p, t = e.params["p"], e.params["t"]
            assert e.n == (p ** (t + 1) + 1) * sum(p ** i for i in range(1, t + 2))
    # 4t - 1 is odd, so the Hadamard family has no real members
    assert not [e for e in cat if e.family == "hadamard" and e.field == "real"]
    assert {e.family for e in cat} >= {"hadamard", "menon", "affine", "point_hyperplane"}
