"""Optimally spread subspace packings (tight OGFFs and ETFFs) from MUBs and block designs."""

from .designs import (
    BlockDesign,
    DesignReport,
    cohesion,
    family_params,
    gen_affine,
    gen_hadamard_design,
    gen_menon_design,
    gen_point_hyperplane,
    validate_design,
)
from .errors import (
    CapacityError,
    ConstructionDefect,
    DomainError,
    InvalidArgument,
    NotADesign,
    OgffError,
    ParseError,
    UnsupportedParameters,
    VerificationFailed,
)
from .galois import FieldSpec, GfElement, make_field
from .hadamard import SignMatrix, is_hadamard, kron, regular_hadamard_power4, sylvester
from .mubs import MubFamily, dgs_bound, gen_complex_mubs, gen_real_mubs, import_mubs, verify_mubs
from .packing import (
    Packing,
    PackingCertificate,
    Projection,
    ambient_traceless_dim,
    block_projection,
    certify,
    chordal_lower_bound,
    coherence,
    frame_operator,
    is_equiangular,
    projection_from_columns,
    rankin_tau,
    span_rank,
    spatial_complement,
    traceless_embed,
)
from .recipe import (
    RecipeInput,
    assemble_ogff,
    etff_from_symmetric,
    family_catalog,
    min_blocks_required,
)

__version__ = "0.1.0"
