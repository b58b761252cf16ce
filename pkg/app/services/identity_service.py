from dataclasses import dataclass, field
from itertools import permutations
from random import Random
from typing import Callable, List, Optional, Sequence, Tuple
import logging

from app.core.config import settings
from app.models.braid import BraidOperator
from app.models.scalar import ONE
from app.models.tensor import Block, BraidingMatrix, TensorElement, block, letter, multidegrees
from app.services import linalg_service
from app.services.braid_service import (
    BraidService,
    alternate_lift,
    make_operator,
    matsumoto_lift,
    random_braiding,
)
from app.services.calculus_service import CalculusService, bar_element
from app.utils.exceptions import BadParameters, UnknownName

logger = logging.getLogger(__name__)


@dataclass
class SuiteResult:
    suite: str
    checks: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, label: str):
        self.checks += 1
        if not ok:
            self.failures.append(label)

    def merge(self, other: "SuiteResult"):
        self.checks += other.checks
        self.failures.extend(other.failures)


def _word(n: int, indices: List[int]) -> BraidOperator:
    return BraidOperator.from_word(n, indices)


class IdentityService:
    """Operator identities of K[B_n] and the braided calculus on one braiding."""

    def __init__(self, braiding: BraidingMatrix):
        self.braiding = braiding
        self.braid = BraidService(braiding)
        self.calculus = CalculusService(braiding)

    def blocks(self, n: int) -> List[Block]:
        return [block(self.braiding.size, md) for md in multidegrees(self.braiding.size, n)]

    def same_on_block(self, left: BraidOperator, right: BraidOperator, b: Block) -> bool:
        for word in b.basis:
            x = TensorElement.from_word(word)
            if self.braid.apply_operator(left, x) != self.braid.apply_operator(right, x):
                return False
        return True

    def _compare(self, result: SuiteResult, n: int, label: str, left: BraidOperator, right: BraidOperator):
        for b in self.blocks(n):
            result.record(self.same_on_block(left, right, b), f"{label} on block {b.multidegree}")

    def braid_relations(self, n: int) -> SuiteResult:
        result = SuiteResult("braid_relations")
        for i in range(1, n - 1):
            self._compare(result, n, f"s{i}s{i + 1}s{i}", _word(n, [i, i + 1, i]), _word(n, [i + 1, i, i + 1]))
        for i in range(1, n):
            for j in range(i + 2, n):
                self._compare(result, n, f"s{i}s{j}", _word(n, [i, j]), _word(n, [j, i]))
            inverse = BraidOperator.from_word(n, [(i, 1), (i, -1)])
            self._compare(result, n, f"s{i}^-1 s{i}", inverse, BraidOperator.identity(n))
        return result

    def reduced_words(self, n: int) -> SuiteResult:
        result = SuiteResult("reduced_words")
        for p in permutations(range(1, n + 1)):
            first = BraidOperator(n, {matsumoto_lift(p): ONE})
            second = BraidOperator(n, {alternate_lift(p): ONE})
            self._compare(result, n, f"lifts of {p}", first, second)
        return result

    def symmetrizer(self, n: int) -> SuiteResult:
        result = SuiteResult("symmetrizer")
        direct = make_operator("SnDirect", n)
        self._compare(result, n, "SnDirect = SnFactoredT", direct, make_operator("SnFactoredT", n))
        self._compare(result, n, "SnDirect = SnFactoredU", direct, make_operator("SnFactoredU", n))
        return result

    def dynkin(self, n: int) -> SuiteResult:
        result = SuiteResult("dynkin")
        self._compare(result, n, "TnPn = Tn'", make_operator("Tn", n) * make_operator("Pn", n), make_operator("TnPrime", n))
        self._compare(result, n, "UnQn = Un'", make_operator("Un", n) * make_operator("Qn", n), make_operator("UnPrime", n))
        return result

    def garside(self, n: int) -> SuiteResult:
        result = SuiteResult("garside")
        delta = make_operator("Garside", n)
        theta = make_operator("Theta", n)
        for i in range(1, n):
            self._compare(result, n, f"s{i} Delta = Delta s{n - i}", _word(n, [i]) * delta, delta * _word(n, [n - i]))
        self._compare(result, n, "Delta^2 = theta", delta * delta, theta)
        descending = _word(n, list(range(n - 1, 0, -1)))
        self._compare(result, n, "theta = (s_n-1...s_1)^n", theta, descending ** n)
        twisted = _word(n, [n - 1] + list(range(n - 1, 0, -1)))
        self._compare(result, n, "theta = (s_n-1^2...s_1)^(n-1)", theta, twisted ** (n - 1))
        geometric = BraidOperator.identity(n)
        for k in range(1, n - 1):
            geometric = geometric + twisted ** k
        identity = BraidOperator.identity(n)
        self._compare(result, n, "telescoping", geometric * (identity - twisted), identity - theta)
        self._compare(result, n, "Delta Tn = Un Delta", delta * make_operator("Tn", n), make_operator("Un", n) * delta)
        self._compare(result, n, "Delta Pn = Qn Delta", delta * make_operator("Pn", n), make_operator("Qn", n) * delta)
        for b in self.blocks(n):
            scalar = BraidOperator.identity(n).scale(self.braid.theta_scalar(b.multidegree))
            result.record(self.same_on_block(theta, scalar, b), f"theta scalar on block {b.multidegree}")
        return result

    def differential(self, n: int) -> SuiteResult:
        result = SuiteResult("differential")
        letters = range(1, self.braiding.size + 1)
        t_op, u_op = make_operator("Tn", n), make_operator("Un", n)
        for b in self.blocks(n):
            for word in b.basis:
                x = TensorElement.from_word(word)
                right = TensorElement()
                left = TensorElement()
                for i in letters:
                    right = right + self.calculus.dR(i, x) * letter(i)
                    left = left + letter(i) * self.calculus.dL(i, x)
                result.record(self.braid.apply_operator(t_op, x) == right, f"Tn x on {word}")
                result.record(self.braid.apply_operator(u_op, x) == left, f"Un x on {word}")
                for i in letters:
                    result.record(self.calculus.dR(i, x) == self.calculus.dR_via_coproduct(i, x), f"dR_{i} oracle on {word}")
                    result.record(self.calculus.dL(i, x) == self.calculus.dL_via_coproduct(i, x), f"dL_{i} oracle on {word}")
                    for j in letters:
                        result.record(
                            self.calculus.dL(i, self.calculus.dR(j, x)) == self.calculus.dR(j, self.calculus.dL(i, x)),
                            f"dL_{i} dR_{j} on {word}",
                        )
            kernel = linalg_service.kernel(linalg_service.operator_matrix(self.braid, t_op, b), b)
            result.record(
                all(not self.calculus.dR(i, x) for x in kernel.elements() for i in letters)
                and kernel == linalg_service.kernel(self.calculus.derivation_matrix(b), b),
                f"ker Tn = common kernel of dR on block {b.multidegree}",
            )
        return result

    def bar_laws(self, n: int) -> SuiteResult:
        result = SuiteResult("bar_laws")
        if not self.braiding.is_symmetric:
            logger.debug("Bar laws skipped for a nonsymmetric braiding")
            return result
        letters = range(1, self.braiding.size + 1)
        q = self.braiding.q
        for b in self.blocks(n):
            for word in b.basis:
                x = TensorElement.from_word(word, q(1, 1))
                for i in letters:
                    for j in letters:
                        lhs = self.calculus.dR(j, self.calculus.dbarR(i, x))
                        rhs = self.calculus.dbarR(i, self.calculus.dR(j, x)).scale(self.braiding.q_inv(i, j))
                        result.record(lhs == rhs, f"dR_{j} d_{i} on {word}")
            if self.braid.theta_scalar(b.multidegree) != ONE:
                continue
            delta, p_op = make_operator("Garside", n), make_operator("Pn", n)
            sign = ONE if n % 2 else -ONE
            for word in b.basis:
                v = TensorElement.from_word(word)
                lhs = self.braid.apply_operator(delta * p_op, v)
                rhs = bar_element(self.braid.apply_operator(p_op, bar_element(v))).scale(sign)
                result.record(lhs == rhs, f"Delta Pn bar law on {word}")
        return result

    SUITES = ("braid_relations", "reduced_words", "symmetrizer", "dynkin", "garside", "differential", "bar_laws")

    # operator name -> suites that exercise it
    OPERATOR_SUITES = {
        "Tn": ("dynkin", "garside", "differential"),
        "Un": ("dynkin", "garside", "differential"),
        "Pn": ("dynkin", "garside", "bar_laws"),
        "Qn": ("dynkin", "garside"),
        "TnPrime": ("dynkin",),
        "UnPrime": ("dynkin",),
        "Xmn": ("dynkin",),
        "XmnLeft": ("dynkin",),
        "Garside": ("garside", "bar_laws"),
        "Theta": ("garside",),
        "SnDirect": ("reduced_words", "symmetrizer"),
        "SnFactoredT": ("symmetrizer",),
        "SnFactoredU": ("symmetrizer",),
    }

    @classmethod
    def select(cls, suites: Sequence[str] = (), operators: Sequence[str] = ()) -> Tuple[str, ...]:
        """Suites named directly or through an operator they check; all when both are empty."""
        chosen = set()
        for name in suites:
            if name not in cls.SUITES:
                raise UnknownName(f"Unknown identity suite '{name}'")
            chosen.add(name)
        for name in operators:
            if name not in cls.OPERATOR_SUITES:
                raise UnknownName(f"Unknown operator '{name}' for identity suites")
            chosen.update(cls.OPERATOR_SUITES[name])
        if not chosen:
            return cls.SUITES
        return tuple(name for name in cls.SUITES if name in chosen)

    def run(self, n: int, suites: Optional[Sequence[str]] = None) -> List[SuiteResult]:
        if n < 2:
            raise BadParameters(f"Identity suites need n >= 2, got {n}")
        return [getattr(self, name)(n) for name in self.select(suites or ())]


def run_identity_suites(
    n: int,
    seed: int,
    count: Optional[int] = None,
    n_letters: int = 2,
    bound: Optional[int] = None,
    suites: Optional[Sequence[str]] = None,
) -> List[SuiteResult]:
    """Run the suites on ``count`` random braidings, alternating between
    braidings with some q_ij q_ji = 1 and symmetric ones."""
    count = settings.IDENTITY_BRAIDINGS if count is None else count
    bound = settings.RANDOM_EXPONENT_BOUND if bound is None else bound
    rng = Random(seed)
    selected = IdentityService.select(suites or ())
    totals = {name: SuiteResult(name) for name in selected}
    makers: List[Callable[[], BraidingMatrix]] = [
        lambda: random_braiding(n_letters, rng, bound, unit_pairs=True),
        lambda: random_braiding(n_letters, rng, bound, symmetric=True),
    ]
    for k in range(count):
        braiding = makers[k % 2]()
        for suite in IdentityService(braiding).run(n, selected):
            totals[suite.suite].merge(suite)
    for suite in totals.values():
        logger.info(f"Suite {suite.suite}: {suite.checks} checks, {len(suite.failures)} failures")
    return list(totals.values())
