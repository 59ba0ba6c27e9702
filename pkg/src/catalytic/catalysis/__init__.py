"""Certificates, witness search and certificate builders."""

from .builders import (
    RationalSpectra,
    build_classical_lemma3,
    build_lemma2_certificate,
    build_theorem1_certificate,
    rational_spectra,
)
from .certificate import (
    MODES,
    CertificateError,
    TransitionCertificate,
    VerificationReport,
    verify_certificate,
)
from .witness import (
    SearchBudget,
    SearchResult,
    SearchStats,
    WitnessError,
    WitnessPair,
    find_correlating_witness,
    impossibility_reason,
    search_conjecture_certificate,
)

__all__ = [
    "MODES", "CertificateError", "RationalSpectra", "SearchBudget", "SearchResult", "SearchStats",
    "TransitionCertificate", "VerificationReport", "WitnessError", "WitnessPair", "build_classical_lemma3",
    "build_lemma2_certificate", "build_theorem1_certificate", "find_correlating_witness",
    "impossibility_reason", "rational_spectra", "search_conjecture_certificate", "verify_certificate",
]
