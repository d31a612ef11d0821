"""Quantum ramp secret sharing: evaluation-based strongly secure codec,
the coefficient-based baseline, and a strong-security auditor."""

from .audit import (
    AuditCase,
    AuditReport,
    LinearLeak,
    audit_case,
    audit_scheme,
    find_linear_leak,
    purify_and_encode,
    run_attack,
)
from .gf import FieldCtx, FieldElement
from .qsim import (
    DensityOperator,
    IndexMap,
    PureState,
    apply_index_map,
    basis_state,
    density,
    partial_trace,
    reduced_density,
    superpose,
    trace_distance,
)
from .scheme import (
    OgawaParams,
    Params,
    decode,
    encode,
    encode_basis,
    ogawa_encode_basis,
    parse_params,
)

__version__ = "0.1.0"
