"""Certified survival analysis for competitive Lotka-Volterra systems."""

from .analyzer import Certificate, Verdict, analyze, replay_certificate
from .bounds import cascade_V, compute_U, compute_Y
from .core import LVSystem, ModelError
from .equilibria import enumerate_equilibria

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "LVSystem",
    "ModelError",
    "Verdict",
    "analyze",
    "cascade_V",
    "compute_U",
    "compute_Y",
    "enumerate_equilibria",
    "replay_certificate",
]
