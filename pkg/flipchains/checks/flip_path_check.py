"""Check 7: constructed flip paths end where they should, within their length bounds."""

import logging
from typing import List

from .base_check import BaseCheck
from .models import CheckContext, CheckFailure
from ..chains import make_rng
from ..errors import InvalidMap
from ..flip_paths import audit_flip_paths, sample_trees, tree_paths
from ..trees import enumerate_trees

logger = logging.getLogger(__name__)


class FlipPathCheck(BaseCheck):
    """Exhaustive replay for small n and seeded random trees at larger n."""

    check_id = 7
    check_name = "flip_paths"
    check_description = "Flip path endpoints, validity of intermediate maps and length bounds"

    def run(self, context: CheckContext) -> List[CheckFailure]:
        failures = []
        for n in self.sizes('max_n', 3):
            failures.extend(self._audit(n, None))
            if self.config.get('validate_states', True):
                failures.extend(self._validate(n))

        count = self.config.get('samples', context.samples)
        for n in self.config.get('sample_sizes', []):
            rng = make_rng(context.seed + n)
            failures.extend(self._audit(n, sample_trees(n, count, rng)))
        return failures

    def _audit(self, n: int, trees) -> List[CheckFailure]:
        audit = audit_flip_paths(n, trees)
        self.info[f"longest_{n}"] = dict(audit.longest)
        out = [self.create_failure("path ends at the wrong map", n=n, codes=[label.tree],
                                   details=label.to_dict()) for label in audit.wrong_end]
        out.extend(self.create_failure("path exceeds its length bound", n=n, codes=[label.tree],
                                       details=label.to_dict()) for label in audit.too_long)
        return out

    def _validate(self, n: int) -> List[CheckFailure]:
        out = []
        for t in enumerate_trees(n, 3):
            for label, path in tree_paths(t):
                for q in path.states():
                    try:
                        q.validate()
                    except InvalidMap as e:
                        out.append(self.create_failure(f"intermediate map invalid: {e}", n=n,
                                                       codes=[label.tree], details=label.to_dict()))
                        break
        return out
