"""Check 1: state-space cardinalities."""

import logging
from typing import List

from .base_check import BaseCheck
from .models import CheckContext, CheckFailure
from ..enumeration import (count_pointed, count_quadrangulations,
                           pointed_space, quad_space)
from ..trees import count_dyck_paths, count_trees, enumerate_trees

logger = logging.getLogger(__name__)


class CardinalityCheck(BaseCheck):
    """Counts of trees, signed trees, pointed and rooted quadrangulations.

    Closed forms are compared with an independent Dyck-path count for every size
    up to ``max_tree_n``; trees are also enumerated while they fit the ceiling.
    Quadrangulations are enumerated through the bijection and deduplicated by code.
    """

    check_id = 1
    check_name = "cardinalities"
    check_description = "|T_n| = r^n Cat(n), |Q*_n| = 2|LT_n| = (n + 2)|Q_n|"

    DEFAULT_MAX_TREE_N = 10
    DEFAULT_MAX_QUAD_N = 4

    def run(self, context: CheckContext) -> List[CheckFailure]:
        failures = []
        for n in range(0, self.config.get('max_tree_n', self.DEFAULT_MAX_TREE_N) + 1):
            for r in (1, 2, 3):
                expected = r ** n * count_dyck_paths(n)
                if count_trees(n, r) != expected:
                    failures.append(self.create_failure(
                        f"closed form gives {count_trees(n, r)}, Dyck count {expected}",
                        n=n, details={'r': r}))
                if expected <= context.ceiling:
                    found = sum(1 for _ in enumerate_trees(n, r))
                    if found != expected:
                        failures.append(self.create_failure(
                            f"enumerated {found} trees, expected {expected}", n=n, details={'r': r}))

        for n in range(1, self.config.get('max_quad_n', self.DEFAULT_MAX_QUAD_N) + 1):
            pointed = context.cached(('pointed', n), lambda: pointed_space(n, context.ceiling))
            quads = context.cached(('quad', n), lambda: quad_space(n, context.ceiling))
            if len(pointed) != count_pointed(n) or len(set(pointed.codes)) != len(pointed):
                failures.append(self.create_failure(
                    f"{len(set(pointed.codes))} distinct pointed maps, expected {count_pointed(n)}", n=n))
            if len(quads) * (n + 2) != len(pointed) or len(quads) != count_quadrangulations(n):
                failures.append(self.create_failure(
                    f"{len(quads)} rooted maps, expected {count_quadrangulations(n)}", n=n))
            self.info[f"quad_{n}"] = len(quads)
        return failures
