"""Reliability analysis of wireless transmissions modelled as block diagrams
of fading components (pathloss, shadowing, multipath)."""

from linkrel.errors import (
    DomainError,
    HazardUndefinedError,
    ModelValidationError,
    NoSolutionError,
    QuadratureError,
    ReliabilityError,
    UnknownComponentError,
)
from linkrel.lifedist import Exponential, Kind, LifeDistribution, LogNormal, Moments, Rayleigh, from_moments
from linkrel.metrics import (
    AnalysisReport,
    ImportanceRow,
    SurvivalCurve,
    analyze,
    birnbaum,
    importance_ranking,
    improvement,
    mean_tttf,
)
from linkrel.numerics import Grid, QuadratureResult, derivative, integrate_survival
from linkrel.rbd import (
    Component,
    Leaf,
    Parallel,
    Series,
    SystemModel,
    failure_before,
    system_hazard,
    system_pdf,
    system_survival,
    validate,
    with_retransmission,
)

__version__ = "0.1.0"


def fading_link_model() -> SystemModel:
    """Series system of unit-rate pathloss, LogNormal(1, 2) shadowing and
    Rayleigh(2) multipath fading."""
    return SystemModel(
        (
            Component("pathloss", Exponential(rate=1.0)),
            Component("shadowing", LogNormal(mu=1.0, sigma=2.0)),
            Component("multipath", Rayleigh(scale=2.0)),
        ),
        Series(Leaf("pathloss"), Leaf("shadowing"), Leaf("multipath")),
    )
