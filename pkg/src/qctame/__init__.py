"""Tameness obstructions for closed discrete planar point sets.

The library computes certified covering-radius functionals and the window
ratio extent/d whose unboundedness obstructs quasiconformal equivalence
with the complement of a subset of a line; cluster-count scans whose
exhaustion (against a registered analytic bound) obstructs equivalence
with the complement of the integer row; and the supporting
extremal-distance machinery (analytic modulus bounds, a finite-difference
condenser solver, explicit quasiconformal test maps).
"""

from .clustering import (
    ClusterWitness,
    EmptyWindowError,
    NotASetPointError,
    ScanResult,
    cluster_count,
    cluster_scan,
    max_cluster,
)
from .covering import (
    GrowthReport,
    RatioSample,
    RefinementBudgetError,
    covering_radius,
    covering_ratio,
    ratio_scan,
)
from .geometry import Point, Window, disk, square
from .intervals import CertifiedInterval
from .modulus import (
    CondenserEstimate,
    CondenserProblem,
    Continuum,
    PlatesMergeError,
    SolverConvergenceError,
    annulus_condenser,
    circle_continuum,
    condenser_modulus,
    continuum,
    interval_condenser,
    qc_modulus_bounds,
    rectangle_condenser,
    ring_upper,
    vuorinen_lower,
)
from .pointsets import (
    Explicit,
    FamilyAs,
    FamilyAsPrime,
    GaussInt,
    Geometric,
    Integers,
    Mapped,
    MissingPeriodError,
    PointFileError,
    SetSpec,
    ShrinkingRings,
    enumerate_points,
    load_points,
    load_spec,
    nearest_distance,
    nearest_distances,
    normalize_period,
    save_points,
    spec_from_json,
)
from .qcmaps import (
    Affine,
    Curve,
    DiameterRatioReport,
    HorizontalStretch,
    Identity,
    MapSpec,
    OrientationError,
    PiecewiseAffine,
    UniformDomainReport,
    diameter_ratio_check,
    dilatation_estimate,
    qc_diameter_bound,
    small_diameter_search,
    uniform_domain_check,
)
from .verdict import ClassifyBudget, Verdict, classify

__version__ = "0.1.0"
