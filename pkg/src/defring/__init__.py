"""defring: exact minimal A-infinity structures on cohomology over F_p and
the truncated presentations of (pseudo)deformation rings they determine."""

__version__ = "0.1.0"
