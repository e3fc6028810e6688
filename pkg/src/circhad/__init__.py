"""Exact circulant Hadamard toolkit.

Circulant algebra and Hadamard predicates live alongside an identity-by-identity
audit of the stochastic matrix argument.  Pruned exhaustive searches cover
circulant Hadamard rows as well as Barker sequences."""

from .circulant import (
    Circulant,
    CirculantError,
    DimensionError,
    InvalidInputError,
    circ,
    conj_transpose,
    constant,
    linear_combine,
    materialize,
    mul,
    row_sum,
)
from .hadamard import (
    CatalogEntry,
    PreconditionError,
    RegularProfile,
    build_S,
    catalog,
    catalog_json,
    is_doubly_stochastic,
    is_hadamard,
    normalize_sign,
    parse_row,
    regular_profile,
    sign_vector,
)
from .audit import AuditReport, AuditStep, audit_what_if, full_audit
from .search import (
    FilterVerdict,
    PartialResultError,
    SearchOptions,
    SearchReport,
    apacf,
    barker_canonical_form,
    canonical_form,
    pacf,
    search_barker,
    search_circulant_hadamard,
    theoretical_filter,
)

__version__ = "0.1.0"
