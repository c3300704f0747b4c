"""Characteristic-form and spectral index diagnostics for gauge fields with
a codimension-one jump on flat tori."""

from .grids import Grid
from .forms import (Form, CutForm, MixedForm, wedge, ext_d, integrate,
                    restrict_to_wall)
from .charclasses import (chern_character, a_hat, chern_character_polynomial,
                          a_hat_polynomial, curvature, transgression)
from .eta import (EtaResult, PotentialPath, circle_spectrum,
                  eta_circle_spectral, eta_relative_seeley_1d)
from .rsa import WallData, RSAReport, generalized_rsa, flat_wall_report, \
    wall_connections
from .dirac import IndexReport, build_dirac, spectrum, index_predicted, \
    index_report
from .cylinder import (CylinderConfig, SmoothProfile, smoothing_profile,
                       cylinder_integral, collar_limit, paste_cylinder,
                       rsa_via_cylinders)
from .presets import build_wall

__version__ = "0.1.0"

__all__ = [
    "Grid",
    "Form",
    "CutForm",
    "MixedForm",
    "wedge",
    "ext_d",
    "integrate",
    "restrict_to_wall",
    "chern_character",
    "a_hat",
    "chern_character_polynomial",
    "a_hat_polynomial",
    "curvature",
    "transgression",
    "EtaResult",
    "PotentialPath",
    "circle_spectrum",
    "eta_circle_spectral",
    "eta_relative_seeley_1d",
    "WallData",
    "RSAReport",
    "generalized_rsa",
    "flat_wall_report",
    "wall_connections",
    "IndexReport",
    "build_dirac",
    "spectrum",
    "index_predicted",
    "index_report",
    "CylinderConfig",
    "SmoothProfile",
    "smoothing_profile",
    "cylinder_integral",
    "collar_limit",
    "paste_cylinder",
    "rsa_via_cylinders",
    "build_wall",
    "__version__",
]
