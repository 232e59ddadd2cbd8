from collections.abc import Iterable, Mapping
from pathlib import Path
from typing import Annotated, Any

import pydantic
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field

from adapters.exceptions import ConfigFileError
from domain.types.enums import (
    DirichletMethod,
    Experiment,
    ExteriorRule,
    FarFieldMode,
    InitialGuess,
    NearRule,
    OptimizerMode,
    SweepAxis,
)


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


FloatList = Annotated[list[float], BeforeValidator(_split_list)]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ParamsSection(_Section):
    """Fractional parameters (n, s, p)."""

    n: int = Field(1, description="Space dimension (1 or 2).")
    s: float = Field(0.8, description="Fractional order in (0, 1).")
    p: float = Field(2.0, description="Integrability exponent, > 1.")


class GeometrySection(_Section):
    """Truncation box and lattice spacing."""

    L: float = Field(4.0, description="Half-width of the truncation box.")
    h: float = Field(0.25, description="Lattice spacing; 1/h and L/h are integers.")
    exterior_rule: ExteriorRule = Field(
        ExteriorRule.QUADRATURE,
        description="Rule for the node to far-field weights.",
    )
    near_rule: NearRule = Field(
        NearRule.MOMENT,
        description="Rule for the weights of neighboring nodes.",
    )


class PinsSection(_Section):
    """Prescribed point values; canonical nodes +e_n and -e_n when unset."""

    a: float = Field(1.0, description="Value at x0.")
    b: float = Field(-1.0, description="Value at y0.")
    x0: FloatList | None = Field(None, description="Coordinates of x0.")
    y0: FloatList | None = Field(None, description="Coordinates of y0.")


class SolverSection(_Section):
    """Energy minimization settings."""

    tol: float = Field(1e-8, gt=0, description="Gradient max-norm tolerance.")
    max_iter: int = Field(500, gt=0, description="Iteration budget.")
    optimizer: OptimizerMode = Field(OptimizerMode.NEWTON, description="Minimizer.")
    initial: InitialGuess = Field(InitialGuess.LINEAR, description="Initial iterate.")
    far_field_mode: FarFieldMode = Field(
        FarFieldMode.FIXED,
        description="Whether the far-field value is optimized.",
    )
    floor_ratio: float = Field(
        1e-3,
        gt=0,
        description="Newton difference floor relative to the value spread (p < 2).",
    )


class VerifySection(_Section):
    """Sample sizes and tolerances of the property suite."""

    extremal: Path | None = Field(
        None,
        description="Stored extremal to check instead of solving one.",
    )
    morrey_samples: int = Field(500, ge=1, description="Random functions tested.")
    clarkson_pairs: int = Field(200, ge=1, description="Random pairs tested.")
    stability_samples: int = Field(100, ge=1, description="Random v tested.")
    uniqueness_seeds: int = Field(2, ge=2, description="Random initial iterates.")
    allowance: float = Field(2e-2, ge=0, description="Relative Morrey allowance.")


class SweepSection(_Section):
    """One-parameter study."""

    axis: SweepAxis = Field(SweepAxis.H, description="Swept parameter.")
    values: FloatList = Field(
        default_factory=list,
        description="Values of the swept parameter.",
    )


class PerronSection(_Section):
    """Slit Dirichlet problem and barrier bound, always in the plane."""

    s: float = Field(0.9, description="Fractional order.")
    p: float = Field(4.0, description="Integrability exponent.")
    L: float = Field(2.0, description="Half-width of the truncation box.")
    h: float = Field(0.125, description="Lattice spacing.")
    method: DirichletMethod = Field(DirichletMethod.NEWTON, description="Solver.")
    max_iter: int = Field(10_000, gt=0, description="Iteration or sweep budget.")
    refinements: int = Field(
        1, ge=0, description="Halvings of h in the slit tip refinement."
    )
    x0: FloatList = Field(
        default_factory=lambda: [0.5, 0.0],
        description="Boundary point of the barrier bound.",
    )
    r0: float = Field(0.4, gt=0, description="Radius on which the data vanish.")
    r1: float = Field(0.2, gt=0, description="Radius of the bound, below r0.")
    M: float = Field(1.0, gt=0, description="Upper bound of the data.")


class BarrierSection(_Section):
    """Barrier residual refinement pair."""

    coarse_h: float = Field(0.25, description="Spacing of the coarse lattice.")
    coarse_L: float = Field(4.0, description="Extent of the coarse lattice.")
    fine_h: float = Field(0.125, description="Spacing of the fine lattice.")
    fine_L: float = Field(8.0, description="Extent of the fine lattice.")
    r_min: float = Field(1.0, description="Inner radius of the test annulus.")
    r_max: float = Field(2.0, description="Outer radius of the test annulus.")


class RunConfig(_Section):
    """Configuration of one run of the experiment runner."""

    params: ParamsSection = Field(default_factory=ParamsSection)
    geometry: GeometrySection = Field(default_factory=GeometrySection)
    pins: PinsSection = Field(default_factory=PinsSection)
    solver: SolverSection = Field(default_factory=SolverSection)
    experiment: Experiment = Field(Experiment.EXTREMAL, description="Experiment.")
    verify: VerifySection = Field(default_factory=VerifySection)
    sweep: SweepSection = Field(default_factory=SweepSection)
    perron: PerronSection = Field(default_factory=PerronSection)
    barrier: BarrierSection = Field(default_factory=BarrierSection)
    rng_seed: int = Field(0, ge=0, lt=2**64, description="Root random seed.")
    output_dir: Path | None = Field(None, description="Artifact directory.")

    def with_overrides(self, overrides: Mapping[str, Any]) -> "RunConfig":
        """A copy with dotted-key overrides applied.

        Raises:
            ConfigFileError: If a key is unknown or a value is invalid.
        """
        return build_run_config(
            [self.model_dump(mode="json", exclude_none=True), overrides]
        )


def _nest(flat: Mapping[str, Any]) -> dict[str, Any]:
    nested: dict[str, Any] = {}
    for key, value in flat.items():
        if isinstance(value, Mapping):
            _merge(nested, {key: dict(value)})
            continue
        parts = key.split(".")
        if not all(parts):
            raise ConfigFileError(f"Malformed configuration key: '{key}'")
        target = nested
        for part in parts[:-1]:
            child = target.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigFileError(f"Key '{key}' conflicts with '{part}'")
            target = child
        target[parts[-1]] = value
    return nested


def _merge(base: dict[str, Any], update: Mapping[str, Any]) -> None:
    for key, value in update.items():
        if isinstance(value, Mapping) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = dict(value) if isinstance(value, Mapping) else value


def build_run_config(layers: Iterable[Mapping[str, Any]]) -> RunConfig:
    """Merges flat or nested layers, later ones winning, into a RunConfig.

    Raises:
        ConfigFileError: If a key is unknown or a value is invalid.
    """
    merged: dict[str, Any] = {}
    for layer in layers:
        _merge(merged, _nest(layer))
    try:
        return RunConfig.model_validate(merged)
    except pydantic.ValidationError as e:
        raise ConfigFileError(f"Invalid run configuration: {e}") from e


def parse_flat_config(text: str, source: str = "<config>") -> dict[str, str]:
    """Parses 'dotted.key = value' lines; '#' starts a comment.

    Raises:
        ConfigFileError: If a line has no '=' or a key repeats.
    """
    entries: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, separator, value = line.partition("=")
        if not separator:
            raise ConfigFileError(f"{source}:{number}: expected 'key=value'")
        key = key.strip()
        if key in entries:
            raise ConfigFileError(f"{source}:{number}: duplicate key '{key}'")
        entries[key] = value.strip()
    return entries


def load_run_config(
    path: Path | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> RunConfig:
    """Reads a flat configuration file and applies command-line overrides.

    Args:
        path (Path | None): Configuration file; defaults only when None.
        overrides (Mapping[str, Any] | None): Dotted-key overrides.

    Raises:
        ConfigFileError: If the file cannot be read or the result is invalid.

    Returns:
        RunConfig: The validated configuration.
    """
    layers: list[Mapping[str, Any]] = []
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigFileError(f"Cannot read configuration '{path}': {e}") from e
        layers.append(parse_flat_config(text, str(path)))
    layers.append(overrides or {})
    return build_run_config(layers)
