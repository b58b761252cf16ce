from typing import Dict, Tuple
import logging

from app.models.linalg import ScalarMatrix
from app.models.scalar import ONE, Q, ZERO, Scalar
from app.models.tensor import (
    Block,
    BraidingMatrix,
    TensorElement,
    TensorSquareElement,
    Word,
    letter,
)
from app.utils.exceptions import BadParameters, NotSymmetric, VerificationFailure

logger = logging.getLogger(__name__)

_Q_DIFFERENCE_INV = (Q - Q.inverse()).inverse()


def bar_element(x: TensorElement) -> TensorElement:
    """Bar every coefficient; words are fixed."""
    return x.map_coefficients(lambda c: c.bar())


class CalculusService:
    def __init__(self, braiding: BraidingMatrix):
        self.braiding = braiding
        self._coproducts: Dict[Word, Dict[Tuple[Word, Word], Scalar]] = {}
        self._pairings: Dict[Tuple[Word, Word], Scalar] = {}

    def _check_letter(self, i: int):
        if not 1 <= i <= self.braiding.size:
            raise BadParameters(f"Generator index {i} outside 1..{self.braiding.size}")

    def _word_coproduct(self, word: Word) -> Dict[Tuple[Word, Word], Scalar]:
        cached = self._coproducts.get(word)
        if cached is not None:
            return cached
        if not word:
            result = {((), ()): ONE}
        else:
            a = word[-1]
            result: Dict[Tuple[Word, Word], Scalar] = {}
            for (u, v), c in self._word_coproduct(word[:-1]).items():
                # (u (x) v)(v_a (x) 1): v_a crosses every letter of v
                factor = c
                for x in v:
                    factor = factor * self.braiding.q(x, a)
                result[(u + (a,), v)] = result.get((u + (a,), v), ZERO) + factor
                result[(u, v + (a,))] = result.get((u, v + (a,)), ZERO) + c
            result = {key: c for key, c in result.items() if c}
        self._coproducts[word] = result
        return result

    def coproduct(self, x: TensorElement) -> TensorSquareElement:
        """Braided coproduct with Delta(v) = v (x) 1 + 1 (x) v."""
        terms: Dict[Tuple[Word, Word], Scalar] = {}
        for word, coeff in x.items():
            for key, c in self._word_coproduct(word).items():
                terms[key] = terms.get(key, ZERO) + c * coeff
        return TensorSquareElement(terms)

    def counit(self, x: TensorElement) -> Scalar:
        return x.coefficient(())

    def dR(self, i: int, x: TensorElement) -> TensorElement:
        """Right derivation; peels occurrences of v_i moved to the right end."""
        self._check_letter(i)
        q = self.braiding.q
        terms: Dict[Word, Scalar] = {}
        for word, coeff in x.items():
            factor = coeff
            for k in range(len(word) - 1, -1, -1):
                if word[k] == i:
                    rest = word[:k] + word[k + 1:]
                    terms[rest] = terms.get(rest, ZERO) + factor
                factor = factor * q(i, word[k])
        return TensorElement(terms)

    def dL(self, i: int, x: TensorElement) -> TensorElement:
        """Left derivation; mirror of ``dR`` peeling towards the left end."""
        self._check_letter(i)
        q = self.braiding.q
        terms: Dict[Word, Scalar] = {}
        for word, coeff in x.items():
            factor = coeff
            for k, a in enumerate(word):
                if a == i:
                    rest = word[:k] + word[k + 1:]
                    terms[rest] = terms.get(rest, ZERO) + factor
                factor = factor * q(a, i)
        return TensorElement(terms)

    def dR_via_coproduct(self, i: int, x: TensorElement) -> TensorElement:
        self._check_letter(i)
        terms: Dict[Word, Scalar] = {}
        for (u, v), c in self.coproduct(x).items():
            if v == (i,):
                terms[u] = terms.get(u, ZERO) + c
        return TensorElement(terms)

    def dL_via_coproduct(self, i: int, x: TensorElement) -> TensorElement:
        self._check_letter(i)
        terms: Dict[Word, Scalar] = {}
        for (u, v), c in self.coproduct(x).items():
            if u == (i,):
                terms[v] = terms.get(v, ZERO) + c
        return TensorElement(terms)

    def derivation_matrix(self, b: Block, side: str = "right") -> ScalarMatrix:
        """All dR_i (or dL_i) stacked: block -> sum of the blocks one degree lower."""
        derive = self.dR if side == "right" else self.dL
        rows: Dict[Tuple[int, Word], int] = {}
        columns = []
        for word in b.basis:
            column: Dict[int, Scalar] = {}
            x = TensorElement.from_word(word)
            for i in range(1, self.braiding.size + 1):
                for u, c in derive(i, x).items():
                    column[rows.setdefault((i, u), len(rows))] = c
            columns.append(column)
        return ScalarMatrix.from_columns(
            [[col.get(r, ZERO) for r in range(len(rows))] for col in columns], len(rows)
        )

    def _word_pairing(self, x: Word, y: Word) -> Scalar:
        if len(x) != len(y):
            return ZERO
        if not y:
            return ONE
        key = (x, y)
        cached = self._pairings.get(key)
        if cached is None:
            cached = ZERO
            for u, c in self.dR(y[-1], TensorElement.from_word(x)).items():
                cached = cached + c * self._word_pairing(u, y[:-1])
            self._pairings[key] = cached
        return cached

    def pairing(self, x: TensorElement, y: TensorElement) -> Scalar:
        """Hopf pairing, peeling the last letter of y through dR."""
        total = ZERO
        for u, a in x.items():
            for w, b in y.items():
                total = total + a * b * self._word_pairing(u, w)
        return total

    def pairing_via_coproduct(self, x: TensorElement, y: TensorElement) -> Scalar:
        """phi(a, b b') = sum phi(a_(1), b) phi(a_(2), b'), peeling the first letter of y."""
        total = ZERO
        for w, b in y.items():
            if not w:
                total = total + b * self.counit(x)
                continue
            head, tail = w[0], TensorElement.from_word(w[1:])
            for (u, v), c in self.coproduct(x).items():
                if u == (head,):
                    total = total + b * c * self.pairing_via_coproduct(
                        TensorElement.from_word(v), tail
                    )
        return total

    def pairing_via_left_axiom(self, x: TensorElement, y: TensorElement) -> Scalar:
        """phi(a a', b) = sum phi(a, b_(1)) phi(a', b_(2)); agrees with ``pairing``
        exactly when the braiding is symmetric."""
        total = ZERO
        for w, a in x.items():
            if not w:
                total = total + a * self.counit(y)
                continue
            head, tail = w[0], TensorElement.from_word(w[1:])
            for (u, v), c in self.coproduct(y).items():
                if u == (head,):
                    total = total + a * c * self.pairing_via_left_axiom(
                        tail, TensorElement.from_word(v)
                    )
        return total

    def dbarR(self, i: int, x: TensorElement) -> TensorElement:
        """d_i^R: per monomial, bar of dR scaled by the original coefficient."""
        result = TensorElement()
        for word, coeff in x.items():
            image = bar_element(self.dR(i, TensorElement.from_word(word)))
            result = result + image.scale(coeff)
        return result

    def dbarL(self, i: int, x: TensorElement) -> TensorElement:
        result = TensorElement()
        for word, coeff in x.items():
            image = bar_element(self.dL(i, TensorElement.from_word(word)))
            result = result + image.scale(coeff)
        return result

    def k_commutation_factor(self, i: int, word: Word) -> Scalar:
        """Scalar c with K_i F_word = c F_word K_i."""
        factor = ONE
        for a in word:
            factor = factor * self.braiding.q_inv(i, a)
        return factor

    def q_adjoint(self, i: int, w: TensorElement) -> Tuple[TensorElement, TensorElement]:
        """[E_i, w] as (coefficient of K_i, coefficient of K_i^-1)."""
        if not self.braiding.is_symmetric:
            raise NotSymmetric("q_adjoint needs a symmetric braiding matrix")
        self._check_letter(i)
        d_bar = self.dbarR(i, w)
        commuted = TensorElement({
            u: c * self.k_commutation_factor(i, u) for u, c in self.dL(i, w).items()
        })
        if commuted != d_bar:
            logger.error(f"K_i dL(w) and dbarR(w) K_i disagree for i={i}")
            raise VerificationFailure(f"Two forms of [E_{i}, w] disagree")
        return d_bar.scale(_Q_DIFFERENCE_INV), (-self.dR(i, w)).scale(_Q_DIFFERENCE_INV)


def ad_c(braiding: BraidingMatrix, i: int, y: TensorElement) -> TensorElement:
    """Braided adjoint v_i y - (g_i . y) v_i, word by word."""
    v = letter(i)
    result = TensorElement()
    for word, coeff in y.items():
        factor = ONE
        for a in word:
            factor = factor * braiding.q(i, a)
        w = TensorElement.from_word(word, coeff)
        result = result + v * w - (w * v).scale(factor)
    return result


def quantum_serre(braiding: BraidingMatrix, i: int, j: int, power: int) -> TensorElement:
    """(ad_c v_i)^power (v_j); a right constant when q_ii^(1-power) = q_ij q_ji."""
    if power < 0:
        raise BadParameters(f"Serre power must be non-negative, got {power}")
    x = letter(j)
    for _ in range(power):
        x = ad_c(braiding, i, x)
    return x
