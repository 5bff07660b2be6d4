"""eacc-lab: entanglement-assisted classical erasure codes.

Builds the rate-optimal constructions (plain MDS, superdense, space-shared,
and separate-encoder), certifies them by exhaustive erasure simulation,
evaluates both rate caps exactly, and numerically audits the entropy chains
behind the separate-encoder cap on concrete code states.
"""

from eacc_lab.bounds import (
    BoundValue,
    admissible,
    eacc_singleton,
    separate_singleton,
)
from eacc_lab.codes import (
    AsymptoticReport,
    CodeParams,
    EaccCode,
    RearrangeSchedule,
    SpaceShareParams,
    Subcode,
    build_asymptotic,
    build_separate,
    build_spaceshared,
    build_superdense,
    build_unassisted,
    code_from_dict,
    default_qbar,
    load_code,
    rearrange_schedule,
    separate_from_generator,
    spaceshare_params,
)
from eacc_lab.densim import (
    CqEnsemble,
    CqQuantities,
    DensityMatrix,
    cq_quantities,
    partial_trace,
    to_density,
    vn_entropy,
)
from eacc_lab.entropy_audit import (
    AuditInstance,
    Step,
    StepReport,
    audit_code,
    audit_regime1,
    audit_regime2,
    check_no_signaling,
)
from eacc_lab.gf import FieldElem, FieldSpec, field_arith, field_new
from eacc_lab.mds import (
    BINARY_PARITY_G,
    ERASED,
    DecodingError,
    ErasedWord,
    GeneratorMatrix,
    is_mds,
    mds_encode,
    mds_erasure_decode,
    rs_generator,
)
from eacc_lab.qsym import Slot, SlotLayout, SymbolicState, register_new
from eacc_lab.report import SCHEMA_VERSION
from eacc_lab.verify import (
    GapReport,
    SeparateCheck,
    VerifyReport,
    check_rate_against_bounds,
    check_separate_encoders,
    verify_code,
)

__version__ = "0.1.0"
