import math
from collections.abc import Callable
from pathlib import Path
from typing import Any

from logger import LoggerContract

from adapters.cli.dependencies import (
    DENSE_OPTIMIZERS,
    get_extremal_service,
    get_perron_service,
    get_repository,
)
from adapters.cli.exception_handler import (
    EXIT_ERROR,
    EXIT_NOT_CONVERGED,
    EXIT_OK,
)
from adapters.exceptions import AdapterError, ConfigFileError
from adapters.infrastructure.config.run_config import RunConfig
from adapters.infrastructure.storage.filesystem import to_jsonable
from domain.contracts.repository import ArtifactRepositoryContract
from domain.exceptions import DomainError, NonConvergenceError
from domain.services.extremal_service import ExtremalService
from domain.services.grid import build_lattice
from domain.services.operator import barrier_refinement, euler_lagrange_residual
from domain.services.perron_service import PerronService
from domain.services.sampling import RandomStreams, random_grid_function
from domain.services.seminorm import (
    build_weights,
    campanato_ratio,
    check_clarkson,
    verify_morrey_bound,
)
from domain.types.enums import (
    DirichletMethod,
    Experiment,
    InitialGuess,
    SweepAxis,
)
from domain.types.lattice import Lattice
from domain.types.params import FracParams
from domain.types.pins import PinSpec
from domain.types.results import ExtremalResult
from domain.types.weights import KernelWeights

type RepositoryFactory = Callable[[Path, LoggerContract], ArtifactRepositoryContract]

SWEEP_KEYS: dict[SweepAxis, str] = {
    SweepAxis.S: "params.s",
    SweepAxis.P: "params.p",
    SweepAxis.H: "geometry.h",
    SweepAxis.L: "geometry.L",
}
SWEEP_HEADER = ("value", "c_star_hat", "gagliardo", "holder", "max_el_residual")
CLARKSON_SLACK = 1e-10
# Relative gap allowed between the magnitudes of the two pin masses.
PIN_MASS_RTOL = 1e-6
SLIT_DIMENSION = 2


class CommandRunner:
    """Runs the experiment subcommands and writes their artifacts."""

    def __init__(
        self,
        config: RunConfig,
        logger: LoggerContract,
        root: Path,
        max_dense_nodes: int,
        repository_factory: RepositoryFactory = get_repository,
    ) -> None:
        """Initialize the CommandRunner.

        Args:
            config (RunConfig): The validated run configuration.
            logger (LoggerContract): The logger instance for logging.
            root (Path): Output directory of the run.
            max_dense_nodes (int): Largest lattice solved with dense matrices.
            repository_factory (RepositoryFactory): Creates the artifact
                repository of an output directory.
        """
        self.config = config
        self.logger = logger
        self.root = Path(root)
        self.max_dense_nodes = max_dense_nodes
        self.repository_factory = repository_factory
        self.repository = repository_factory(self.root, logger)
        self.streams = RandomStreams(config.rng_seed)

    def run(self, command: Experiment) -> int:
        """Runs one subcommand and returns its exit code."""
        handlers: dict[Experiment, Callable[[], int]] = {
            Experiment.EXTREMAL: self.cmd_extremal,
            Experiment.VERIFY: self.cmd_verify,
            Experiment.SWEEP: self.cmd_sweep,
            Experiment.PERRON: self.cmd_perron,
            Experiment.BARRIER: self.cmd_barrier,
        }
        self.logger.info(
            "Running command",
            {"command": command.value, "output_dir": str(self.root)},
        )
        return handlers[command]()

    def _check_dense(self, lattice: Lattice, dense: bool) -> None:  # noqa: FBT001
        if dense and lattice.node_count > self.max_dense_nodes:
            raise ConfigFileError(
                f"The lattice has {lattice.node_count} nodes, above the dense limit "
                f"{self.max_dense_nodes}; raise MORREY_MAX_DENSE_NODES or use "
                "solver.optimizer=lbfgs"
            )

    def _setup(
        self,
        config: RunConfig,
        extent: float | None = None,
    ) -> tuple[Lattice, KernelWeights]:
        params = FracParams(config.params.n, config.params.s, config.params.p)
        geometry = config.geometry
        lattice = build_lattice(
            params,
            geometry.L if extent is None else extent,
            geometry.h,
        )
        self._check_dense(lattice, config.solver.optimizer in DENSE_OPTIMIZERS)
        return lattice, build_weights(
            lattice, geometry.exterior_rule, geometry.near_rule
        )

    @staticmethod
    def _pins(config: RunConfig, lattice: Lattice) -> PinSpec:
        section = config.pins
        if section.x0 is None and section.y0 is None:
            return PinSpec.canonical(lattice, section.a, section.b)
        if section.x0 is None or section.y0 is None:
            raise ConfigFileError("pins.x0 and pins.y0 must be given together")
        return PinSpec(
            lattice.index_of(section.x0),
            lattice.index_of(section.y0),
            section.a,
            section.b,
        )

    def _solve(
        self,
        service: ExtremalService,
        config: RunConfig,
        lattice: Lattice,
        weights: KernelWeights,
        pins: PinSpec,
    ) -> ExtremalResult:
        solver = config.solver
        rng = (
            self.streams.generator("initial")
            if solver.initial is InitialGuess.RANDOM
            else None
        )
        res = service.solve_extremal(
            lattice,
            weights,
            pins,
            solver.tol,
            solver.max_iter,
            initial=solver.initial,
            far_field_mode=solver.far_field_mode,
            rng=rng,
        )
        self.logger.info(
            "Extremal computed",
            {
                "nodes": lattice.node_count,
                "c_star_hat": res.c_star_hat,
                "iterations": res.iterations,
                "grad_norm": res.final_grad_norm,
            },
        )
        return res

    def cmd_extremal(self) -> int:
        """Solves the configured extremal and writes it with its residual.

        Returns:
            int: 0 on convergence.
        """
        config = self.config
        lattice, weights = self._setup(config)
        service = get_extremal_service(config, self.logger)
        pins = self._pins(config, lattice)
        res = self._solve(service, config, lattice, weights, pins)
        self.repository.save_extremal("extremal", res)
        self.repository.save_residual(
            "euler_lagrange", euler_lagrange_residual(res, weights)
        )
        self.repository.save_table(
            "energy_history",
            ("iteration", "energy"),
            list(enumerate(res.energy_history)),
        )
        return EXIT_OK

    def cmd_verify(self) -> int:  # noqa: C901, PLR0915
        """Runs the whole property suite and writes verify_report.json.

        Every check runs even when an earlier one fails; a check that raises a
        domain or adapter error is reported as failed with the error message.
        The lattice and the extremal under test are computed on first use, so
        a failed solve fails the checks that need it and spares the others.

        Returns:
            int: 0 when every check passes, 2 when a failure comes from a
            solver running out of budget, 1 otherwise.
        """
        config = self.config
        tol = config.solver.tol
        max_iter = config.solver.max_iter
        params = FracParams(config.params.n, config.params.s, config.params.p)
        service = get_extremal_service(config, self.logger)
        cache: dict[str, Any] = {}

        def memo(key: str, compute: Callable[[], Any]) -> Any:
            if key not in cache:
                try:
                    cache[key] = compute()
                except (DomainError, AdapterError) as e:
                    cache[key] = e
            if isinstance(cache[key], DomainError | AdapterError):
                raise cache[key]
            return cache[key]

        def load_geometry() -> tuple[Lattice, KernelWeights]:
            if config.verify.extremal is None:
                return self._setup(config)
            stored = self.repository.load_extremal(str(config.verify.extremal))
            cache["primary"] = stored
            lattice = stored.u.lattice
            weights = build_weights(
                lattice, config.geometry.exterior_rule, config.geometry.near_rule
            )
            return lattice, weights

        def geometry() -> tuple[Lattice, KernelWeights]:
            return memo("geometry", load_geometry)

        def primary() -> ExtremalResult:
            lattice, weights = geometry()
            return memo(
                "primary",
                lambda: self._solve(
                    service, config, lattice, weights, self._pins(config, lattice)
                ),
            )

        def canonical() -> ExtremalResult:
            lattice, weights = geometry()
            res = primary()
            pins = PinSpec.canonical(lattice)
            return memo(
                "canonical",
                lambda: res
                if res.pins == pins
                else service.solve_extremal(lattice, weights, pins, tol, max_iter),
            )

        def symmetries() -> Any:
            return memo(
                "symmetries", lambda: service.verify_symmetries(canonical(), tol)
            )

        def morrey_bound() -> dict[str, Any]:
            lattice, weights = geometry()
            res = primary()
            rng = self.streams.generator("morrey")
            allowance = config.verify.allowance
            own = verify_morrey_bound(res.u, weights, res.c_star_hat, allowance)
            worst, violations = 0.0, 0
            for _ in range(config.verify.morrey_samples):
                u = random_grid_function(lattice, rng)
                report = verify_morrey_bound(u, weights, res.c_star_hat, allowance)
                worst = max(worst, report.ratio)
                violations += not report.within_bound
            return {
                "passed": violations == 0 and bool(own.within_bound),
                "c_star_hat": res.c_star_hat,
                "allowance": allowance,
                "samples": config.verify.morrey_samples,
                "worst_ratio": worst,
                "violations": violations,
                "extremal": own,
                "campanato_ratio": campanato_ratio(res.u),
            }

        def clarkson() -> dict[str, Any]:
            lattice, weights = geometry()
            rng = self.streams.generator("clarkson")
            slack = math.inf
            exponent = None
            for _ in range(config.verify.clarkson_pairs):
                report = check_clarkson(
                    random_grid_function(lattice, rng),
                    random_grid_function(lattice, rng),
                    weights,
                )
                slack = min(slack, report.slack)
                exponent = report.exponent
            return {
                "passed": slack >= -CLARKSON_SLACK,
                "exponent": exponent,
                "pairs": config.verify.clarkson_pairs,
                "min_slack": slack,
            }

        def uniqueness() -> dict[str, Any]:
            lattice, weights = geometry()
            res = primary()
            seeds = [InitialGuess.LINEAR] + [InitialGuess.RANDOM] * (
                config.verify.uniqueness_seeds - 1
            )
            report = service.verify_uniqueness(
                lattice,
                weights,
                res.pins,
                seeds,
                tol,
                max_iter,
                self.streams.generator("uniqueness"),
            )
            return {"passed": report.passed, **to_jsonable(report)}

        def rotational_symmetry() -> dict[str, Any]:
            report = symmetries()
            defects = report.axis_symmetry_defects
            return {
                "passed": max(defects.values(), default=0.0) <= report.tolerance,
                "axis_symmetry_defects": defects,
                "tolerance": report.tolerance,
            }

        def anti_symmetry() -> dict[str, Any]:
            report = symmetries()
            return {
                "passed": max(report.anti_symmetry_defect, report.hyperplane_max)
                <= report.tolerance,
                "anti_symmetry_defect": report.anti_symmetry_defect,
                "hyperplane_max": report.hyperplane_max,
                "tolerance": report.tolerance,
            }

        def pointwise_bounds() -> dict[str, Any]:
            report = service.verify_pointwise_bounds(primary(), tol)
            return {"passed": report.passed, **to_jsonable(report)}

        def stability() -> dict[str, Any]:
            lattice, weights = geometry()
            res = primary()
            rng = self.streams.generator("stability")
            worst = math.inf
            failures = 0
            matchings: dict[str, int] = {}
            for _ in range(config.verify.stability_samples):
                report = service.verify_stability(
                    res, random_grid_function(lattice, rng), weights, tol, max_iter
                )
                worst = min(worst, report.residual)
                failures += not report.passed
                matchings[report.matching] = matchings.get(report.matching, 0) + 1
            return {
                "passed": failures == 0,
                "samples": config.verify.stability_samples,
                "min_residual": worst,
                "failures": failures,
                "matchings": matchings,
            }

        def euler_lagrange() -> dict[str, Any]:
            lattice, weights = geometry()
            res = primary()
            residual = euler_lagrange_residual(res, weights)
            self.repository.save_residual("euler_lagrange", residual)
            masses = residual.pin_masses
            gradient = lattice.params.p * lattice.cell_volume * residual.max_abs
            mass_gap = abs(masses.at_x0 + masses.at_y0)
            balanced = mass_gap <= PIN_MASS_RTOL * max(
                abs(masses.at_x0), abs(masses.at_y0)
            )
            return {
                "passed": gradient <= 10 * tol
                and masses.at_x0 * masses.at_y0 < 0
                and balanced
                and res.attains_at_pins,
                "max_abs": residual.max_abs,
                "gradient_max": gradient,
                "tolerance": 10 * tol,
                "pin_masses": masses,
                "mass_gap": mass_gap,
                "attains_at_pins": res.attains_at_pins,
            }

        def barrier() -> dict[str, Any]:
            section = config.barrier
            barrier_params = (
                geometry()[0].params if config.verify.extremal is not None else params
            )
            report = barrier_refinement(
                barrier_params,
                (section.coarse_h, section.coarse_L),
                (section.fine_h, section.fine_L),
                (section.r_min, section.r_max),
                config.geometry.exterior_rule,
                config.geometry.near_rule,
            )
            return {"passed": report.passed, **to_jsonable(report)}

        def slit_decay() -> dict[str, Any]:
            slit, bound = self._perron_experiment()
            return {
                "passed": slit.passed and bound.passed,
                "slit": slit,
                "barrier_bound": bound,
            }

        def limit_at_infinity() -> dict[str, Any]:
            lattice, weights = geometry()
            base = canonical()
            larger_lattice, larger_weights = self._setup(
                config, 2 * lattice.half_extent
            )
            larger = service.solve_extremal(
                larger_lattice,
                larger_weights,
                PinSpec.canonical(larger_lattice),
                tol,
                max_iter,
            )
            sensitivity = service.far_field_sensitivity(
                lattice, weights, base.pins, tol, max_iter
            )
            report = PerronService.run_decay_experiment(
                [base, larger], sensitivity=sensitivity
            )
            return {"passed": report.passed, **to_jsonable(report)}

        def half_space_sign() -> dict[str, Any]:
            report = PerronService.verify_half_space_sign(canonical(), tol)
            return {"passed": report.passed, **to_jsonable(report)}

        checks: dict[str, Callable[[], dict[str, Any]]] = {
            "morrey_bound": morrey_bound,
            "clarkson": clarkson,
            "uniqueness": uniqueness,
            "rotational_symmetry": rotational_symmetry,
            "anti_symmetry": anti_symmetry,
            "pointwise_bounds": pointwise_bounds,
            "stability": stability,
            "euler_lagrange": euler_lagrange,
            "barrier": barrier,
            "slit_decay": slit_decay,
            "limit_at_infinity": limit_at_infinity,
            "half_space_sign": half_space_sign,
        }
        report = {name: self._run_check(name, check) for name, check in checks.items()}
        self.repository.save_report("verify_report", report)
        failed = sorted(name for name, entry in report.items() if not entry["passed"])
        self.logger.info(
            "Verification finished",
            {"checks": len(report), "failed": failed},
        )
        if not failed:
            return EXIT_OK
        if any(report[name].get("not_converged") for name in failed):
            return EXIT_NOT_CONVERGED
        return EXIT_ERROR

    def _run_check(
        self,
        name: str,
        check: Callable[[], dict[str, Any]],
    ) -> dict[str, Any]:
        try:
            entry = to_jsonable(check())
        except (DomainError, AdapterError) as e:
            self.logger.exception("Verification check failed", e, {"check": name})
            entry = {"passed": False, "error": f"{type(e).__name__}: {e}"}
            if isinstance(e, NonConvergenceError):
                entry["not_converged"] = True
            return entry
        entry["passed"] = bool(entry["passed"])
        self.logger.debug(
            "Verification check finished",
            context={"check": name, "passed": entry["passed"]},
        )
        return entry

    def _perron_experiment(self) -> tuple[Any, Any]:
        section = self.config.perron
        params = FracParams(SLIT_DIMENSION, section.s, section.p)
        lattice = build_lattice(params, section.L, section.h)
        self._check_dense(lattice, section.method is DirichletMethod.NEWTON)
        weights = build_weights(
            lattice,
            self.config.geometry.exterior_rule,
            self.config.geometry.near_rule,
        )
        service = get_perron_service(self.config, self.logger)
        slit, solution, data = service.run_slit_experiment(
            params,
            (section.L, section.h),
            self.config.solver.tol,
            section.max_iter,
            weights,
            refinements=section.refinements,
        )
        bound = service.verify_barrier_bound(
            lattice,
            weights,
            data,
            section.x0,
            section.r0,
            section.r1,
            section.M,
            solution=solution,
        )
        self.repository.save_grid_function("slit_solution", solution)
        self.repository.save_complement_data("slit_data", lattice, data)
        self.repository.save_table("slit_rings", ("radius", "max_value"), slit.rings)
        return slit, bound

    def cmd_sweep(self) -> int:
        """Solves one extremal per value of the swept parameter.

        Each sub-run writes below its own subdirectory; a failing value is
        recorded with NaN entries and the sweep continues.

        Returns:
            int: 0 when every sub-run converged, otherwise the worst sub-run code.

        Raises:
            ConfigFileError: If no values are given.
        """
        section = self.config.sweep
        if not section.values:
            raise ConfigFileError("sweep.values must list at least one value")
        key = SWEEP_KEYS[section.axis]
        rows: list[tuple[float, ...]] = []
        failures: dict[str, str] = {}
        code = EXIT_OK
        for value in section.values:
            config = self.config.with_overrides({key: value})
            repository = self.repository_factory(
                self.root / f"{section.axis.value}_{value!r}", self.logger
            )
            try:
                lattice, weights = self._setup(config)
                service = get_extremal_service(config, self.logger)
                res = self._solve(
                    service, config, lattice, weights, self._pins(config, lattice)
                )
                residual = euler_lagrange_residual(res, weights)
                repository.save_extremal("extremal", res)
            except (DomainError, AdapterError) as e:
                self.logger.exception(
                    "Sweep value failed",
                    e,
                    {"axis": section.axis.value, "value": value},
                )
                failures[repr(value)] = f"{type(e).__name__}: {e}"
                code = max(
                    code,
                    EXIT_NOT_CONVERGED
                    if isinstance(e, NonConvergenceError)
                    else EXIT_ERROR,
                )
                rows.append((value, math.nan, math.nan, math.nan, math.nan))
                continue
            rows.append(
                (value, res.c_star_hat, res.gagliardo, res.holder, residual.max_abs)
            )

        self.repository.save_table("sweep", SWEEP_HEADER, rows)
        self.repository.save_report(
            "sweep_report",
            {"axis": section.axis, "values": section.values, "failures": failures},
        )
        return code

    def cmd_perron(self) -> int:
        """Runs the slit experiment and the barrier bound in the plane.

        Returns:
            int: 0 when both pass, 1 otherwise.
        """
        slit, bound = self._perron_experiment()
        self.repository.save_report(
            "perron_report",
            {"slit": slit, "barrier_bound": bound},
        )
        self.logger.info(
            "Perron experiment finished",
            {"slit_passed": slit.passed, "worst_barrier_ratio": bound.worst_ratio},
        )
        return EXIT_OK if slit.passed and bound.passed else EXIT_ERROR

    def cmd_barrier(self) -> int:
        """Compares barrier residuals on a coarse and a refined lattice.

        Returns:
            int: 0 when the max-abs residual shrinks enough, 1 otherwise.
        """
        params = FracParams(
            self.config.params.n, self.config.params.s, self.config.params.p
        )
        section = self.config.barrier
        report = barrier_refinement(
            params,
            (section.coarse_h, section.coarse_L),
            (section.fine_h, section.fine_L),
            (section.r_min, section.r_max),
            self.config.geometry.exterior_rule,
            self.config.geometry.near_rule,
        )
        self.repository.save_report("barrier_report", report)
        self.logger.info(
            "Barrier refinement finished",
            {"reduction": report.reduction, "passed": report.passed},
        )
        return EXIT_OK if report.passed else EXIT_ERROR
