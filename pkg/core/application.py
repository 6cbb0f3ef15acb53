"""
Main application controller for the Bateman-Horn toolkit.
"""

import atexit
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from config import ConfigManager
from config.error_handling import ErrorHandler, ParseError, ValidationError, with_error_handling
from config.logging_config import get_logger, get_performance_logger
from config.resource_guard import ResourceGuard
from models.core import (
    Chain, ChainKind, ConstantEstimate, CountReport, CrtPlan, Direction,
    EngineConfig, GoldenMismatch, HlfEstimate, OmegaProfile, RayReport, RaySpec, Table
)
from models.polynomial import AdmissibilityReport, IntPoly, PolyFamily
from services.asymptotics import predict as predict_count
from services.bhconstant import (
    ap_constant, bh_constant, ck_constant, greentao_constant, hlf_constant
)
from services.census import Census
from services.eulersearch import (
    build_plan, euler_streak, plan_constant, plan_primes, verify_plan
)
from services.interfaces import ConfigManagerInterface
from services.polynomial import check_family, load_family, parse_family
from services.primes import PrimeSieve, is_prime, mertens_deviation, prime_reciprocal_sums
from services.report_writer import write_pgm
from services.rootcount import build_profile
from services.tables import TableGenerator, diff_against_golden
from services.ulam import fit_ray, ray_from_value, ray_report, render_spiral

CONSTANT_FORMS = ("bh", "ap", "ck", "hlf", "greentao")


class BatemanHornApp:
    """
    Central coordinator for all computations.

    One PrimeSieve (and its worker pool) is shared by every operation of a
    run, so base primes are sieved once.
    """

    def __init__(
        self,
        config: Optional[EngineConfig] = None,
        config_manager: Optional[ConfigManagerInterface] = None
    ):
        """
        Initialize the application.

        Args:
            config: Engine settings; defaults when omitted
            config_manager: Configuration manager implementation
        """
        self.logger = get_logger(__name__)
        self.error_handler = ErrorHandler(self.logger)
        self.config_manager = config_manager or ConfigManager()
        self.performance = get_performance_logger()
        self._sieve: Optional[PrimeSieve] = None
        self._cleanup_registered = False
        self.configure(config or EngineConfig())

        self._register_cleanup_handlers()
        self.logger.debug("Bateman-Horn application initialized")

    def _register_cleanup_handlers(self) -> None:
        if not self._cleanup_registered:
            atexit.register(self.shutdown)
            self._cleanup_registered = True

    def configure(self, config: EngineConfig) -> None:
        """Replace the engine settings; the shared sieve is rebuilt lazily."""
        if self._sieve is not None:
            self._sieve.shutdown()
            self._sieve = None
        self.config = config
        self.guard = ResourceGuard(config, self.logger)

    def load_configuration(self, config_path: Optional[str] = None,
                           cli_args: Optional[Dict[str, Any]] = None) -> EngineConfig:
        """
        Load configuration from file and merge CLI arguments on top.

        Args:
            config_path: Path to a JSON or YAML configuration file
            cli_args: CLI arguments to merge with configuration

        Returns:
            The active EngineConfig
        """
        if config_path and Path(config_path).exists():
            config = self.config_manager.load_config(config_path)
        else:
            default_path = self.config_manager.get_config_path()
            if Path(default_path).exists():
                config = self.config_manager.load_config(default_path)
                self.logger.info(f"Default configuration loaded from: {default_path}")
            else:
                config = EngineConfig()
        if cli_args:
            config = self.config_manager.merge_cli_args(config, cli_args)
        self.configure(config)
        self.logger.debug(f"Memory: {self.guard.usage_info()}")
        return config

    @property
    def sieve(self) -> PrimeSieve:
        if self._sieve is None:
            self._sieve = PrimeSieve(self.config, self.guard)
        return self._sieve

    @property
    def census(self) -> Census:
        return Census(self.sieve, self.config)

    @with_error_handling(context="computation")
    def _timed(self, name: str, func, *args, **kwargs):
        self.performance.start_operation(name, name)
        success = False
        try:
            result = func(*args, **kwargs)
            success = True
            return result
        finally:
            self.performance.end_operation(name, name, success=success)

    def family(self, text: str, override: bool = False) -> PolyFamily:
        """Parse and gate a family; inadmissible families raise unless overridden."""
        return load_family(text, override, self.config.irreducibility_primes)

    def check(self, text: str, profile_cutoff: int = 0) -> Tuple[AdmissibilityReport, Optional[OmegaProfile]]:
        """Admissibility report of a family, never raising for failed hypotheses."""
        family = check_family(parse_family(text), True, self.config.irreducibility_primes)
        profile = None
        if profile_cutoff:
            profile = build_profile(family if family.k > 1 else family.members[0], profile_cutoff)
        return family.admissibility, profile

    # constants

    def constant(self, form: str = "bh", family_text: Optional[str] = None,
                 prime_bound: int = 10**6, checkpoints: Optional[Sequence[int]] = None,
                 override: bool = False, k: Optional[int] = None,
                 difference: Optional[int] = None) -> Union[ConstantEstimate, HlfEstimate]:
        """
        Evaluate a constant by the general product or one of the closed forms.

        Raises:
            InadmissibleFamilyError: Naming the failing hypothesis
        """
        if form not in CONSTANT_FORMS:
            raise ValidationError(f"unknown form '{form}'; choose from {', '.join(CONSTANT_FORMS)}")
        self.guard.check_scale(prime_bound=prime_bound)
        if form == "ck":
            if k is None:
                raise ValidationError("--form ck needs -k")
            return self._timed("ck_constant", ck_constant, k, prime_bound, self.sieve, self.config)
        if form == "greentao":
            if k is None:
                raise ValidationError("--form greentao needs -k")
            return self._timed("greentao_constant", greentao_constant, k, prime_bound,
                               difference, self.sieve, self.config)
        if not family_text:
            raise ValidationError(f"--form {form} needs a family (-f)")

        if form == "bh":
            family = self.family(family_text, override)
            return self._timed("bh_constant", bh_constant, family, prime_bound, checkpoints,
                               self.sieve, self.config)

        members = parse_family(family_text)
        if len(members) != 1:
            raise ValidationError(f"--form {form} takes a single polynomial")
        f = members[0]
        if form == "ap":
            if f.degree != 1:
                raise ValidationError(f"--form ap needs a linear polynomial, got {f}")
            b, a = f.coeffs
            value = ap_constant(a, b)
            return ConstantEstimate(
                family="{" + str(f) + "}", k=1, prime_bound=0, value=float(value),
                log_value=math.log(value), degrees=(1,), exact=str(value)
            )
        if f.degree != 2:
            raise ValidationError(f"--form hlf needs a quadratic, got {f}")
        c, b, a = f.coeffs
        return self._timed("hlf_constant", hlf_constant, a, b, c, prime_bound, self.sieve, self.config)

    # counts

    def count_family(self, family_text: str, x: int, predict: bool = False,
                     prime_bound: int = 10**6, override: bool = False) -> CountReport:
        family = self.family(family_text, override)
        estimate = None
        if predict:
            estimate = bh_constant(family, prime_bound, [], self.sieve, self.config)
        return self._timed("count_q", self.census.count_q, family, x, estimate)

    def arguments(self, family_text: str, x: int, override: bool = False) -> List[int]:
        """The n <= x at which every member is prime."""
        family = self.family(family_text, override)
        return self.census.arguments(family, 1, x)

    def count_pairs(self, k: int, x: Optional[int] = None,
                    first_primes: Optional[int] = None, predict: bool = False,
                    prime_bound: int = 10**6) -> CountReport:
        report = self._timed("count_pairs", self.census.count_pairs, k, x, first_primes)
        if predict and x is not None and x >= 2:
            family = check_family([IntPoly((0, 1)), IntPoly((k, 1))])
            estimate = ck_constant(k, prime_bound, self.sieve, self.config)
            report.prediction = predict_count(family, 2 * estimate.value, x, label=report.family)
        return report

    def chains(self, kind: str, search_bound: int, min_length: int = 2) -> List[Chain]:
        try:
            chain_kind = ChainKind(kind)
        except ValueError:
            raise ValidationError(f"chain kind must be 'first' or 'second', got '{kind}'")
        return self._timed("cunningham_chains", self.census.cunningham_chains,
                           chain_kind, search_bound, min_length)

    def count_ap(self, a: int, b: int, x: int) -> CountReport:
        return self._timed("count_ap", self.census.count_ap, a, b, x)

    def count_ap_series(self, a: int, x: int) -> List[CountReport]:
        return self._timed("count_ap_series", self.census.count_ap_series, a, x)

    def ap_values(self, a: int, b: int, limit: int) -> List[int]:
        return self.census.ap_values(a, b, limit)

    def count_landau(self, x: int) -> CountReport:
        return self._timed("count_landau", self.census.count_landau, x)

    def count_sophie(self, x: int) -> CountReport:
        return self._timed("count_sophie", self.census.count_sophie, x)

    def brun(self, bounds: Sequence[int]) -> List[Tuple[int, float]]:
        return self._timed("brun_series", self.census.brun_series, bounds)

    def illiac(self, bounds: Sequence[int], constant_bound: int = 10**6) -> List[CountReport]:
        return self._timed("illiac_series", self.census.illiac_series, bounds, constant_bound)

    def reciprocal_sums(self, bounds: Sequence[int]) -> List[Tuple[int, float]]:
        self.guard.check_scale(x=max(bounds) if bounds else None)
        return self._timed("prime_reciprocal_sums", prime_reciprocal_sums, bounds, self.sieve)

    def mertens(self, x: int) -> float:
        self.guard.check_scale(x=x)
        return mertens_deviation(x, self.sieve)

    # primes

    def prime_pi(self, x: int) -> int:
        self.guard.check_scale(x=x)
        return self._timed("prime_pi", self.sieve.prime_pi, x)

    def nth_prime(self, n: int) -> int:
        return self._timed("nth_prime", self.sieve.nth_prime, n)

    def is_prime(self, n: int) -> bool:
        return is_prime(n, self.config.miller_rabin_rounds, self.config.seed)

    # tables

    def tables(self, table_id: str, limit: Optional[int] = None,
               diff: bool = False) -> Tuple[Table, List[GoldenMismatch]]:
        """Regenerate a reference table, optionally diffing it against golden values."""
        generator = TableGenerator(self.sieve, self.config)
        table = self._timed(f"table_{table_id}", generator.generate, table_id, limit)
        self.performance.log_metric(f"table_{table_id}_rows", len(table.rows), "rows")
        mismatches = diff_against_golden(table, self.config.golden_dir) if diff else []
        return table, mismatches

    # ulam

    def ulam_ray(self, direction: str, value: Optional[int] = None,
                 anchor: Optional[Tuple[int, int]] = None, count: int = 1000,
                 constant_bound: int = 10**6) -> RayReport:
        """Fit the ray from a spiral value or lattice point and report on it."""
        try:
            step = Direction[direction.upper()]
        except KeyError:
            raise ParseError(f"unknown direction '{direction}'; use one of E NE N NW W SW S SE")
        if (value is None) == (anchor is None):
            raise ValidationError("give exactly one of a ray value or an anchor")
        if value is not None:
            spec = ray_from_value(value, step, self.config.ray_max_skip)
        else:
            spec = fit_ray(anchor, step, self.config.ray_max_skip)
        return ray_report(spec, count, constant_bound, self.sieve, self.config)

    def ulam_raster(self, side: int, output_path: Optional[str] = None,
                    overlays: Sequence[RaySpec] = ()):
        """Render the spiral; written as PGM when output_path is given."""
        raster = self._timed("render_spiral", render_spiral, side, overlays, self.sieve)
        if output_path:
            self.guard.validate_output_path(output_path)
            write_pgm(output_path, raster)
        return raster

    # euler

    def euler_plan(self, primes_through: Optional[int] = None,
                   first_odd_primes: Optional[int] = None,
                   rule: str = "least-primitive-root",
                   nonresidues: Optional[Dict[int, int]] = None,
                   representative: str = "least-positive") -> CrtPlan:
        """Build and verify the CRT plan for t^2+t+k."""
        primes = plan_primes(primes_through, first_odd_primes, self.sieve)
        plan = build_plan(primes, rule, nonresidues, representative)
        if not verify_plan(plan):
            raise ValidationError(f"plan k = {plan.k} does not avoid roots modulo its primes")
        return plan

    def euler_streak(self, k: int) -> int:
        return euler_streak(k, self.config)

    def euler_constant(self, plan: CrtPlan, prime_bound: int) -> HlfEstimate:
        self.guard.check_scale(prime_bound=prime_bound)
        return self._timed("plan_constant", plan_constant, plan, prime_bound, self.sieve, self.config)

    def shutdown(self) -> None:
        """Release the worker pool."""
        if self._sieve is not None:
            try:
                self._sieve.shutdown()
            except Exception as e:
                self.error_handler.handle_graceful_degradation(e, "worker pool shutdown")
            self._sieve = None
        self.error_handler.reset_error_counts()
        try:
            self.logger.debug("Application shutdown complete")
        except (ValueError, OSError):
            pass
