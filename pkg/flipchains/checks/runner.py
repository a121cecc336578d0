"""Verifier that runs the enabled checks and summarizes their outcome."""

import logging
import time
from typing import Any, Dict, List, Optional

from .base_check import BaseCheck
from .cardinality_check import CardinalityCheck
from .congestion_check import CongestionCheck
from .flip_algebra_check import FlipAlgebraCheck
from .flip_path_check import FlipPathCheck
from .hierarchy_check import HierarchyCheck
from .irreducibility_check import IrreducibilityCheck
from .law_identity_check import LawIdentityCheck
from .models import CheckContext, CheckResult, VerificationReport
from .replant_measure_check import ReplantMeasureCheck
from .schaeffer_check import SchaefferRoundTripCheck
from .spectral_check import SpectralInequalityCheck

logger = logging.getLogger(__name__)

CHECK_CLASSES = (
    CardinalityCheck,
    SchaefferRoundTripCheck,
    FlipAlgebraCheck,
    IrreducibilityCheck,
    HierarchyCheck,
    ReplantMeasureCheck,
    FlipPathCheck,
    CongestionCheck,
    SpectralInequalityCheck,
    LawIdentityCheck,
)


class Verifier:
    """Runs verification checks against a shared context."""

    def __init__(
        self,
        config: Optional[Dict[str, Any]] = None,
        context: Optional[CheckContext] = None,
        enabled_checks: Optional[List[str]] = None
    ):
        """Initialize the verifier.

        Args:
            config: The ``checks`` section of the configuration, keyed by check name
            context: Shared settings; defaults are used when omitted
            enabled_checks: Names or ids of the checks to run, None for all enabled ones
        """
        self.config = config or {}
        self.context = context or CheckContext()
        self.enabled_checks = enabled_checks
        self.checks = self._init_checks()

    def _init_checks(self) -> List[BaseCheck]:
        checks = [cls(self.config.get(cls.check_name, {})) for cls in CHECK_CLASSES]
        if self.enabled_checks:
            wanted = {str(c) for c in self.enabled_checks}
            unknown = wanted - {c.check_name for c in checks} - {str(c.check_id) for c in checks}
            if unknown:
                raise ValueError(f"unknown checks: {', '.join(sorted(unknown))}")
            return [c for c in checks if c.check_name in wanted or str(c.check_id) in wanted]
        for c in checks:
            if not c.enabled:
                logger.warning(f"check {c.check_name} is disabled")
        return [c for c in checks if c.enabled]

    def run_check(self, check: BaseCheck) -> CheckResult:
        start = time.time()
        logger.info(f"Running check {check.check_id}: {check.check_name}")
        try:
            failures = check.run(self.context)
            error = None
        except Exception as e:
            logger.error(f"Error running check {check.check_name}: {e}")
            failures, error = [], str(e)
        result = CheckResult(
            check_id=check.check_id,
            check_name=check.check_name,
            passed=not failures and error is None,
            failures=failures,
            elapsed=time.time() - start,
            info=dict(check.info),
            error=error
        )
        for f in failures:
            logger.error(f"  [FAIL] {check.check_name} n={f.n}: {f.description} {' '.join(f.codes)}")
        logger.info(f"  {check.check_name}: {'passed' if result.passed else 'FAILED'} "
                    f"in {result.elapsed:.1f}s")
        return result

    def run(self) -> VerificationReport:
        return VerificationReport([self.run_check(c) for c in self.checks])

    @staticmethod
    def generate_report(results: List[CheckResult], timings: bool = True) -> Dict[str, Any]:
        """Summarize check results.

        Args:
            results: Results of a verification run
            timings: Include wall-clock times (left out for reproducible output)

        Returns:
            Report dictionary
        """
        total = len(results)
        passed = [r for r in results if r.passed]
        errors = [r for r in results if r.error]
        total_time = sum(r.elapsed for r in results)

        failures_by_check: Dict[str, int] = {}
        for r in results:
            if r.failures:
                failures_by_check[r.check_name] = len(r.failures)

        summary = {
            'total': total,
            'passed': len(passed),
            'failed': total - len(passed),
            'errors': len(errors),
        }
        if timings:
            summary['total_time_seconds'] = round(total_time, 2)
        return {
            'summary': summary,
            'failures_by_check': failures_by_check,
            'results': [r.to_dict(timings) for r in results],
        }
