"""Check 4: every chain is irreducible, with explicit witnesses."""

import logging
from typing import List

from .base_check import BaseCheck
from .models import CheckContext, CheckFailure
from ..chains import (build_kernel, make_chain, star_path_replanting,
                      star_path_translation)
from ..enumeration import pointed_space, quad_space
from ..maps import canonical_code, flips_to_q0, make_q0
from ..trees import enumerate_trees, find_translation, leaf_recolour, leaves, star

logger = logging.getLogger(__name__)


class IrreducibilityCheck(BaseCheck):
    """Flip paths to q0 from every map, star paths from every tree, one communicating class per chain."""

    check_id = 4
    check_name = "irreducibility"
    check_description = "Constructive irreducibility of the flip, translation and replanting chains"

    def run(self, context: CheckContext) -> List[CheckFailure]:
        failures = []
        for n in self.sizes('max_n', 3):
            for pointed, space in ((False, quad_space(n, context.ceiling)),
                                   (True, pointed_space(n, context.ceiling))):
                target = canonical_code(make_q0(n, pointed))
                for q, code in zip(space.states, space.codes):
                    end = canonical_code(flips_to_q0(q).end())
                    if end != target:
                        failures.append(self.create_failure(
                            "flips do not reach q0", n=n, codes=[code, end]))

            for r in (1, 3):
                goal = star(n, 1, r)
                for t in enumerate_trees(n, r):
                    path = star_path_translation(t)
                    if path[-1] != goal or not all(_one_translation_step(a, b) for a, b in zip(path, path[1:])):
                        failures.append(self.create_failure(
                            "translation path misses the star", n=n, codes=[t.code]))
                    if star_path_replanting(t)[-1] != goal:
                        failures.append(self.create_failure(
                            "replanting path misses the star", n=n, codes=[t.code]))

            for name in ("flip", "flip-pointed", "translate", "replant", "xtilde"):
                classes = build_kernel(make_chain(name, n, 3), context.ceiling,
                                       context.threads).communicating_classes()
                if classes != 1:
                    failures.append(self.create_failure(
                        f"{name} chain has {classes} communicating classes", n=n))
        return failures


def _one_translation_step(a, b) -> bool:
    if find_translation(a, b) is not None:
        return True
    return any(leaf_recolour(a, v, b.colour[v]) == b for v in leaves(a))
