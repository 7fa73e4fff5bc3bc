"""Bacon-Shor fault-tolerance toolkit.

Builds the error-correction gadgets and extended rectangles for the
Bacon-Shor code family, counts malignant fault sets by exhaustive and
Monte-Carlo Pauli-frame simulation, and evaluates the threshold and
distillation recursions.
"""

__version__ = "0.1.0"

from .pauli import PauliOp
from .codes import SubsystemCode, bacon_shor, css_construct, shor_code, steane_code

__all__ = [
    "PauliOp",
    "SubsystemCode",
    "bacon_shor",
    "css_construct",
    "shor_code",
    "steane_code",
    "__version__",
]
