"""Desk-scale simulator of a two-hop high-speed-railway radio system.

Subpackages cover the mobility-aware channel model (:mod:`hsrsim.channel`,
:mod:`hsrsim.mcs`), minimum-power resource allocation
(:mod:`hsrsim.allocation`), call admission control
(:mod:`hsrsim.admission`), the discrete-event system simulator
(:mod:`hsrsim.simulator`) and the experiment/CSV front end
(:mod:`hsrsim.experiments`, :mod:`hsrsim.cli`).
"""

from .allocation import solver_backend

__version__ = "0.1.0"

__all__ = ["solver_backend", "__version__"]
