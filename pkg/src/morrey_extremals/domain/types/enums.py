from enum import StrEnum


class TransformKind(StrEnum):
    """Enum for the transformations under which both seminorms are invariant."""

    NEGATE = "negate"
    ADD_CONSTANT = "add_constant"
    SCALE = "scale"
    TRANSLATE = "translate"
    REFLECT_AXIS = "reflect_axis"
    ROTATE90 = "rotate90"
    PERMUTE_AXES = "permute_axes"


class ExteriorRule(StrEnum):
    """Enum for the rules computing the node to far-field interaction weights."""

    LATTICE = "lattice"
    QUADRATURE = "quadrature"


class NearRule(StrEnum):
    """Enum for the rules weighting pairs of neighboring cells."""

    MOMENT = "moment"
    SUBCELL = "subcell"


class OptimizerMode(StrEnum):
    """Enum for the supported energy minimizers."""

    GRADIENT = "gradient"
    NEWTON = "newton"
    LBFGS = "lbfgs"
    LINEAR = "linear"


class FarFieldMode(StrEnum):
    """Enum for the treatment of the far-field value during minimization."""

    FIXED = "fixed"
    FREE = "free"


class InitialGuess(StrEnum):
    """Enum for the initial iterates of the extremal solver."""

    ZERO = "zero"
    LINEAR = "linear"
    RANDOM = "random"


class DirichletMethod(StrEnum):
    """Enum for the solvers of the discrete Dirichlet problem."""

    GAUSS_SEIDEL = "gauss_seidel"
    JACOBI = "jacobi"
    NEWTON = "newton"


class Experiment(StrEnum):
    """Enum for the experiments the command line can run."""

    EXTREMAL = "extremal"
    VERIFY = "verify"
    SWEEP = "sweep"
    PERRON = "perron"
    BARRIER = "barrier"


class SweepAxis(StrEnum):
    """Enum for the configuration axes a sweep can vary."""

    S = "s"
    P = "p"
    H = "h"
    L = "L"
