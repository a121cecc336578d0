"""Check 9: the gap inequalities in their finite-n form."""

import logging
from typing import List

from .base_check import BaseCheck
from .models import CheckContext, CheckFailure
from ..chains import kernel_flip, kernel_leaf_translation
from ..spectral import AGREEMENT, gap_report, verify_inequalities

logger = logging.getLogger(__name__)


class SpectralInequalityCheck(BaseCheck):
    """Every inequality of :func:`verify_inequalities`, plus two-solver agreement."""

    check_id = 9
    check_name = "spectral_inequalities"
    check_description = "Gap comparisons, Rayleigh bounds and solver agreement"

    def run(self, context: CheckContext) -> List[CheckFailure]:
        failures = []
        compared = self.config.get('comparison_sizes', [2, 3])
        for n in self.config.get('sizes', [2, 3, 4]):
            report = verify_inequalities(n, context.ceiling, context.threads,
                                         compare=n in compared)
            self.info[f"values_{n}"] = report.values
            for c in report.failed():
                failures.append(self.create_failure(
                    f"{c.name}: {c.lhs:.12g} > {c.rhs:.12g}", n=n, details=c.to_dict()))

            for kernel in (kernel_flip(n, False, context.ceiling, context.threads),
                           kernel_leaf_translation(n, 1, context.ceiling, context.threads)):
                result = gap_report(kernel, context.ceiling, power=True, seed=context.seed)
                if result.solvers_agree is False:
                    failures.append(self.create_failure(
                        f"{kernel.name} gap {result.gap:.12g} vs power iteration "
                        f"{result.power_gap:.12g} (tolerance {AGREEMENT})", n=n))
        return failures
