"""Exact-arithmetic non-existence certificates for perfect p-ary sequences.

The package decides, for concrete period shapes, whether a perfect p-ary or
perfect almost p-ary sequence can exist, and emits a machine-replayable
certificate for every verdict it produces.
"""

from ppscert.certifier import (
    INCONCLUSIVE,
    NON_EXISTENT,
    PAPER_ASSUMPTIONS,
    PAPS,
    PPS,
    STRICT,
    Certificate,
    SequenceType,
    certify_paps,
    certify_pps,
    certify_pps_3mod4,
    certify_pps_5mod8,
    density_bound,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "SequenceType",
    "PPS",
    "PAPS",
    "STRICT",
    "PAPER_ASSUMPTIONS",
    "NON_EXISTENT",
    "INCONCLUSIVE",
    "certify_pps",
    "certify_pps_3mod4",
    "certify_pps_5mod8",
    "certify_paps",
    "density_bound",
    "verify_certificate",
    "__version__",
]
