"""plotkit: static figures from torusq CSV result sets.

The renderer never recomputes the underlying mathematics; it reads the
CSV values emitted by the primary component and adds display-level
overlays (reference densities, fitted slopes, empirical CDF distances).
"""

__version__ = "0.1.0"
