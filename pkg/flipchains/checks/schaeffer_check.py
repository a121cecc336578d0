"""Check 2: the tree bijection is a bijection, and labels are distances."""

import logging
from typing import List

from .base_check import BaseCheck
from .models import CheckContext, CheckFailure
from ..enumeration import signed_trees
from ..errors import InvalidMap
from ..maps import canonical_code, decode
from ..schaeffer import label_distance_defects, phi, phi_inverse

logger = logging.getLogger(__name__)


class SchaefferRoundTripCheck(BaseCheck):
    """phi^-1(phi(t, eps)) = (t, eps) and phi(phi^-1(q)) = q, plus l(v) = d(v, point) - d(point, root)."""

    check_id = 2
    check_name = "schaeffer_round_trip"
    check_description = "Bijection round trips and the label/distance identity"

    def run(self, context: CheckContext) -> List[CheckFailure]:
        failures = []
        for n in self.sizes('max_n', 4):
            for st in signed_trees(n):
                pq = phi(st)
                try:
                    pq.validate()
                except InvalidMap as e:
                    failures.append(self.create_failure(f"image is not a map: {e}", n=n, codes=[st.code]))
                    continue
                back = phi_inverse(pq)
                if back.code != st.code:
                    failures.append(self.create_failure(
                        "inverse does not recover the tree", n=n, codes=[st.code, back.code]))
                # decoding relabels every half-edge, so this exercises phi . phi^-1 on a fresh map
                code = canonical_code(pq)
                again = canonical_code(phi(phi_inverse(decode(code))))
                if again != code:
                    failures.append(self.create_failure(
                        "map does not survive phi . phi^-1", n=n, codes=[code, again]))
                defects = label_distance_defects(st)
                if defects:
                    failures.append(self.create_failure(
                        "labels differ from distances to the point", n=n, codes=[st.code],
                        details={'defects': defects}))
            logger.debug(f"round trips done at n={n}")
        return failures
