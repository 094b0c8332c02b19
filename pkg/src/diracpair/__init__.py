"""Numerical workbench for the two potential couplings of the free Dirac equation.

Subpackages cover exact operator identities (``algebra``), one-dimensional
piecewise-constant scattering and bound states (``scatter1d``), hydrogenic
bound-pair spectra (``hydrogenic``), free wave-packet currents
(``wavepacket``), pair-emission kinematics (``kinematics``), experiment-table
matching (``matcher``), and the metastable-decay counting model
(``decaymodel``).  The ``diracpair`` CLI exposes every operation.
"""

from .core import Alternative, Constants, DEFAULT_CONSTANTS, energy_of_momentum, load_constants

__all__ = [
    "Alternative",
    "Constants",
    "DEFAULT_CONSTANTS",
    "energy_of_momentum",
    "load_constants",
]

__version__ = "0.1.0"
