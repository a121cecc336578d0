"""Check 6: canonical replanting path measures and their congestion."""

import logging
from fractions import Fraction
from typing import List

from .base_check import BaseCheck
from .models import CheckContext, CheckFailure
from ..canonical_paths import (audit_congestion, congestion_bound,
                               contract_translations, expand_translations,
                               fiber_map, gamma_paths, hierarchy, path_defects)

logger = logging.getLogger(__name__)


class ReplantMeasureCheck(BaseCheck):
    """Every P_{x->y} is a probability measure on well-formed paths of length 2n.

    Also checks that translation expansion contracts back to the replanting path
    and that the routed mass through each position stays under 2(4r)^(n+1).
    """

    check_id = 6
    check_name = "replant_measure"
    check_description = "Path measures sum to one, paths are well formed, congestion is bounded"

    def run(self, context: CheckContext) -> List[CheckFailure]:
        failures = []
        n = self.config.get('n', 3)
        r = self.config.get('r', 1)
        weights = hierarchy(n, r)
        fibers = fiber_map(n, r)
        for x in fibers.trees:
            for y in fibers.trees:
                total = Fraction(0)
                for path, m in gamma_paths(x, y, weights, fibers):
                    total += m
                    defects = path_defects(path, x, y, fibers)
                    if defects:
                        failures.append(self.create_failure(
                            "; ".join(defects), n=n, codes=[t.code for t in path.trees]))
                    if contract_translations(expand_translations(path)) != list(path.trees):
                        failures.append(self.create_failure(
                            "translation expansion does not contract back", n=n,
                            codes=[t.code for t in path.trees]))
                if total != 1:
                    failures.append(self.create_failure(
                        f"path masses sum to {total}", n=n, codes=[x.code, y.code], details={'r': r}))

        for m in range(1, self.config.get('audit_n', 3) + 1):
            bound = congestion_bound(m, r)
            worst = Fraction(0)
            for i in range(2 * m + 1):
                mass, code = audit_congestion(m, r, i)
                worst = max(worst, mass)
                if mass > bound:
                    failures.append(self.create_failure(
                        f"mass {mass} through position {i} exceeds {bound}", n=m, codes=[code]))
            self.info[f"congestion_{m}"] = str(worst)
        return failures
