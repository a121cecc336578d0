"""Check 5: exact identities of the leaf-deletion hierarchy."""

import logging
from fractions import Fraction
from typing import List

from .base_check import BaseCheck
from .models import CheckContext, CheckFailure
from ..canonical_paths import (constants, hierarchy, partial_sum_closed_form,
                               partial_sums)
from ..enumeration import tree_space
from ..trees import count_trees

logger = logging.getLogger(__name__)


class HierarchyCheck(BaseCheck):
    """Rows of f_n sum to 1, columns to |T_n|/|T_{n-1}|, partial sums match their product form.

    The constants satisfy C_0 = 0 and C_i + C_{n-1-i} = 1 up to ``constants_n``.
    """

    check_id = 5
    check_name = "hierarchy"
    check_description = "Row, column and partial-sum identities of the deletion weights"

    DEFAULT_CONSTANTS_N = 50

    def run(self, context: CheckContext) -> List[CheckFailure]:
        failures = []
        for n in range(2, self.config.get('constants_n', self.DEFAULT_CONSTANTS_N) + 1):
            c = constants(n)
            if c[0] != 0 or any(c[i] + c[n - 1 - i] != 1 for i in range(n)):
                failures.append(self.create_failure("constants are not symmetric about 1/2", n=n))

        max_n = self.config.get('max_n', 6)
        for r in range(1, self.config.get('max_r', 3) + 1):
            for n in range(1, max_n + 1):
                if count_trees(n, r) > context.ceiling:
                    logger.warning(f"hierarchy check stops at n={n - 1} for r={r}: ceiling")
                    break
                weights = hierarchy(n, r)
                for t in tree_space(n, r, context.ceiling).states:
                    if weights.row_sum(t) != 1:
                        failures.append(self.create_failure(
                            f"row sums to {weights.row_sum(t)}", n=n, codes=[t.code], details={'r': r}))
                expected = Fraction(count_trees(n, r), count_trees(n - 1, r))
                for code, total in weights.column_sums(n).items():
                    if total != expected:
                        failures.append(self.create_failure(
                            f"column sums to {total}, expected {expected}", n=n, codes=[code],
                            details={'r': r}))
                sums = partial_sums(n, r)
                for i in range(n + 1):
                    closed = partial_sum_closed_form(n, r, i)
                    for t in tree_space(n - i, r, context.ceiling).states:
                        got = sums[i].get(t.code, Fraction(0))
                        if got != closed:
                            failures.append(self.create_failure(
                                f"partial sum {got} at depth {i}, expected {closed}", n=n,
                                codes=[t.code], details={'r': r}))
        return failures
