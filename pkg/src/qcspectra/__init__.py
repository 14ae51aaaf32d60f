"""Integral means spectra of conformal maps with quasiconformal extensions."""
from .errors import QCError
from .maps import DiskPowerMap, HalfPlanePowerMap, Identity, NormalizedDiskMap, power_spectrum
from .means import RadiusSchedule, beta_estimate, circle_integral, reference_spectra
from .pick import RegionWk, boundary_polyline, contains
from .twist import dim_bound, gamma_max, spiral_exponent
from .weld import WeldedStretch, sigma_of

__version__ = "0.1.0"

__all__ = [
    "QCError", "DiskPowerMap", "HalfPlanePowerMap", "Identity", "NormalizedDiskMap",
    "power_spectrum", "RadiusSchedule", "beta_estimate", "circle_integral", "reference_spectra",
    "RegionWk", "boundary_polyline", "contains", "dim_bound", "gamma_max", "spiral_exponent",
    "WeldedStretch", "sigma_of", "__version__",
]
