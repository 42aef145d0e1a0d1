"""Matrix-based key pre-distribution schemes with exact resource metering."""

from ._matrixkpd import (  # noqa: F401
    SchemeKind,
    SchemeParams,
    NodeShare,
    Deployment,
    setup,
    validate_params,
    derive_key,
    encode_message,
    handshake,
    run_all_pairs,
    recover,
    security_experiment,
    InvalidParamsError,
    WireError,
    InconsistentTranscriptError,
)

__all__ = [
    "SchemeKind",
    "SchemeParams",
    "NodeShare",
    "Deployment",
    "setup",
    "validate_params",
    "derive_key",
    "encode_message",
    "handshake",
    "run_all_pairs",
    "recover",
    "security_experiment",
    "InvalidParamsError",
    "WireError",
    "InconsistentTranscriptError",
]
