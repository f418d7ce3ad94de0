"""Invariants of explicit four-dimensional almost hypercomplex pseudo-Hermitian manifolds."""

from ._kernels import BACKEND
from .catalog import ExampleSpec, build, expected, list_examples, load_file
from .chart import ChartMetric, Embedding, FrameField, FrameSnapshot, snapshot, snapshots
from .classify import ClassVerdict, classify, theorem_crosschecks
from .errors import (
    DegenerateSection, DomainError, GeometryError, IncompatibleStructure, NotClosed,
    SingularFrame, SingularMetric, TheoremViolation, UnknownExample, ValidationError,
)
from .homogeneous import LieAlgebraBasis, lie_snapshot
from .hstructure import HTriple, standard_h
from .invariants import InvariantReport, invariant_report
from .jet import Jet2
from .runner import RunConfig, run, verify_all

__version__ = "0.1.0"
