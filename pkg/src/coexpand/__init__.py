"""coexpand: certified analysis of scalar maps under the coexpansion functional."""

from .errors import (
    BudgetExceeded,
    CoexpandError,
    CriticalPoint,
    DegenerateAffine,
    DiagonalInput,
    DomainViolation,
    NotGlueable,
    ParseError,
    PreconditionUnmet,
    SeamPoint,
    TheoremViolation,
    ValueCollision,
)
from .expr import (
    X,
    AffineMap,
    FunctionExpr,
    Glue,
    GlueParams,
    affine_conjugate,
    compose,
    const,
    glue,
)
from .interval import Box2, Interval, split
from .jets import Jet3, eval_point, interval_eval, jet_eval
from .parser import format_expr, parse, reparse

__version__ = "0.1.0"

from .certify import CERTIFIED, FALSIFIED, UNKNOWN, Certificate, CertifyParams, certify_membership  # noqa: E402
from .chi import chi, chi_interval, schwarzian, u_f  # noqa: E402
from .classify import FixSetClass, classify_fixed_set, identity_regions  # noqa: E402
from .glueable import GlueableResult, glueable_check  # noqa: E402
from .roots import CritReport, FixedPoint, Stability, critical_points, fixed_points, fixed_points_ex  # noqa: E402
from .singer import PeriodicOrbit, SingerReport, singer_check  # noqa: E402
