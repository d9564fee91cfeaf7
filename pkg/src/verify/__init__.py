from src.verify.certificate import ThresholdCertificate, certify_threshold
from src.verify.report import Equalizer, VerificationReport, critical_frequencies, verify_design

__all__ = [
    "Equalizer",
    "ThresholdCertificate",
    "VerificationReport",
    "certify_threshold",
    "critical_frequencies",
    "verify_design",
]
