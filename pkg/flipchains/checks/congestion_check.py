"""Check 8: how often one flip transition is used by the constructed paths."""

import logging
from typing import List

from .base_check import BaseCheck
from .models import CheckContext, CheckFailure
from ..flip_paths import (COLOUR_CHANGE, FAMILIES, ROOT_REVERSAL,
                          ROOT_REVERSAL_CONGESTION, TRANSLATION,
                          audit_flip_paths)

logger = logging.getLogger(__name__)

LEAF_FAMILIES = (COLOUR_CHANGE, TRANSLATION)


class CongestionCheck(BaseCheck):
    """Root reversals use any (q, e, s) at most 9 times; leaf-move loads must settle.

    With ``require_constant`` (the default) the measured maxima of the leaf-move
    families must be equal across ``constant_sizes``.
    """

    check_id = 8
    check_name = "congestion"
    check_description = "Transition loads of the flip path families"

    def run(self, context: CheckContext) -> List[CheckFailure]:
        failures = []
        measured = {}
        for n in self.config.get('sizes', [2, 3, 4]):
            audit = audit_flip_paths(n)
            loads = {kind: audit.worst_load(kind) for kind in FAMILIES}
            measured[n] = loads
            self.info[f"worst_load_{n}"] = loads
            if loads[ROOT_REVERSAL] > ROOT_REVERSAL_CONGESTION:
                failures.append(self.create_failure(
                    f"a transition is used {loads[ROOT_REVERSAL]} times by root reversals", n=n))
            logger.info(f"congestion n={n}: {loads}")

        if self.config.get('require_constant', True):
            failures.extend(self._unsettled(measured))
        return failures

    def _unsettled(self, measured) -> List[CheckFailure]:
        sizes = [n for n in self.config.get('constant_sizes', [3, 4]) if n in measured]
        out = []
        for kind in LEAF_FAMILIES:
            seen = {str(n): measured[n][kind] for n in sizes}
            if len(set(seen.values())) > 1:
                out.append(self.create_failure(f"{kind} load changes with n: {seen}",
                                               n=max(sizes), details=seen))
        return out
