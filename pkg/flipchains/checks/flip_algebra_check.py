"""Check 3: flips invert each other and the flip kernel is symmetric and bounded."""

import logging
from fractions import Fraction
from typing import List

from .base_check import BaseCheck
from .models import CheckContext, CheckFailure
from ..chains import kernel_flip
from ..maps import MINUS, PLUS, FlipMove, apply_move, canonical_code

logger = logging.getLogger(__name__)


class FlipAlgebraCheck(BaseCheck):
    """(q^{e,s})^{e,-s} = q, p(q, q') = p(q', q), off-diagonal entries in [1/6n, 2/3n]."""

    check_id = 3
    check_name = "flip_algebra"
    check_description = "Flip inversion, kernel symmetry and entry bounds"

    def run(self, context: CheckContext) -> List[CheckFailure]:
        failures = []
        for n in self.sizes('max_n', 3):
            for pointed in (False, True):
                kernel = kernel_flip(n, pointed, context.ceiling, context.threads)
                for q, code in zip(kernel.space.states, kernel.space.codes):
                    for e in range(2 * n):
                        for s in (PLUS, MINUS):
                            move = FlipMove(e, s)
                            back = apply_move(apply_move(q, move), move.reverse())
                            if canonical_code(back) != code:
                                failures.append(self.create_failure(
                                    f"flip {move} is not undone by {move.reverse()}", n=n, codes=[code]))
                if not kernel.is_stochastic():
                    failures.append(self.create_failure("rows do not sum to 1", n=n))
                for a, b in kernel.asymmetric_pairs():
                    failures.append(self.create_failure("p(a, b) != p(b, a)", n=n, codes=[a, b]))
                low, high = Fraction(1, 6 * n), Fraction(2, 3 * n)
                for i, j, p in kernel.off_diagonal():
                    if not low <= p <= high:
                        failures.append(self.create_failure(
                            f"entry {p} outside [{low}, {high}]", n=n,
                            codes=[kernel.space.codes[i], kernel.space.codes[j]]))
        return failures
