"""Zero condensed form, semisimplicity tests and stabilizing perturbations."""

from .completion import GammaCertificate, gamma_certificate, min_norm_annihilator, psd_completion
from .perturbation import SWEEP_VALUES, StabilizingPerturbation, stabilize
from .zero_form import ZeroForm, ZeroSemisimpleReport, zero_condensed_form, zero_semisimple_test

__all__ = [
    "SWEEP_VALUES",
    "GammaCertificate",
    "StabilizingPerturbation",
    "ZeroForm",
    "ZeroSemisimpleReport",
    "gamma_certificate",
    "min_norm_annihilator",
    "psd_completion",
    "stabilize",
    "zero_condensed_form",
    "zero_semisimple_test",
]
