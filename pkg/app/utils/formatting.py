"""
Canonical text forms.

Scalars print in powers of q = t^2, terms in ascending exponent order:
``q^-3 + q^-1 + q``, ``-3/2*q^(1/2)``, ``(q^2 + 1)/(q + 1)``.  The text
parses back with ``parse_scalar``.
"""
from fractions import Fraction
from typing import Dict, Iterable, Tuple
import re

from app.models.scalar import Laurent, Scalar
from app.utils.exceptions import InputError


def _power(exponent: int) -> str:
    if exponent == 0:
        return ""
    if exponent % 2:
        return f"q^({exponent}/2)"
    k = exponent // 2
    return "q" if k == 1 else f"q^{k}"


def _join(terms: Iterable[Tuple[Fraction, str]]) -> str:
    text = ""
    for coeff, power in terms:
        magnitude = abs(coeff)
        if not power:
            body = str(magnitude)
        elif magnitude == 1:
            body = power
        else:
            body = f"{magnitude}*{power}"
        if not text:
            text = f"-{body}" if coeff < 0 else body
        else:
            text += f" - {body}" if coeff < 0 else f" + {body}"
    return text or "0"


def format_laurent(value: Laurent) -> str:
    coefficients = value.coefficients
    return _join((coefficients[e], _power(e)) for e in sorted(coefficients))


def format_scalar(value: Scalar) -> str:
    numerator = format_laurent(value.num)
    if value.is_laurent:
        return numerator
    denominator = format_laurent(Laurent(value.den))
    return f"({numerator})/({denominator})"


# one signed term: coefficient, optional '*', optional power of q
_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(\*)?(q(?:\^(?:-?\d+|\(-?\d+/2\)))?)?")
_HALF_POWER = re.compile(r"q\^\((-?\d+)/2\)")
_QUOTIENT = re.compile(r"\((.+)\)/\((.+)\)")


def _t_exponent(power: str) -> int:
    if not power:
        return 0
    if power == "q":
        return 2
    half = _HALF_POWER.fullmatch(power)
    if half:
        return int(half.group(1))
    return 2 * int(power[2:])


def _parse_laurent(text: str, source: str) -> Laurent:
    if not source:
        raise InputError(f"Cannot parse scalar '{text}': empty term list")
    terms: Dict[int, Fraction] = {}
    pos = 0
    while pos < len(source):
        match = _TERM.match(source, pos)
        sign, coeff, star, power = match.groups()
        if (pos and not sign) or not (coeff or power) or bool(star) != bool(coeff and power):
            raise InputError(f"Cannot parse scalar '{text}' at '{source[pos:]}'")
        try:
            value = Fraction(coeff) if coeff else Fraction(1)
        except ZeroDivisionError:
            raise InputError(f"Cannot parse scalar '{text}': zero denominator")
        exponent = _t_exponent(power)
        terms[exponent] = terms.get(exponent, Fraction(0)) + (-value if sign == "-" else value)
        pos = match.end()
    return Laurent.from_terms(terms)


def parse_scalar(text: str) -> Scalar:
    """Parse the canonical text form: a sum of ``c*q^k`` / ``c*q^(e/2)``
    terms, or ``(numerator)/(denominator)`` of two such sums."""
    source = "".join(text.split())
    quotient = _QUOTIENT.fullmatch(source)
    if quotient is None:
        return Scalar.from_laurent(_parse_laurent(text, source))
    numerator = _parse_laurent(text, quotient.group(1))
    denominator = _parse_laurent(text, quotient.group(2))
    if not denominator:
        raise InputError(f"Cannot parse scalar '{text}': zero denominator")
    return Scalar.from_laurent(numerator) / Scalar.from_laurent(denominator)


def format_word(word: Tuple[int, ...], letter: str = "F") -> str:
    """``(3, 3, 3, 1)`` -> ``F3^3*F1``."""
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        run = j - i
        parts.append(f"{letter}{word[i]}" if run == 1 else f"{letter}{word[i]}^{run}")
        i = j
    return "*".join(parts)


def format_terms(terms: Iterable[Tuple[object, str]]) -> str:
    """Join ``(coefficient, monomial text)`` pairs into a sum.

    Coefficients are Scalars or Fractions; a coefficient whose text starts
    with a minus sign is printed negated behind ``-``.
    """
    text = ""
    for coeff, monomial in terms:
        magnitude = str(coeff)
        negative = magnitude.startswith("-")
        if negative:
            magnitude = str(-coeff)
        if " " in magnitude:
            magnitude = f"({magnitude})"
        if monomial == "1":
            body = magnitude
        elif magnitude == "1":
            body = monomial
        else:
            body = f"{magnitude}*{monomial}"
        if not text:
            text = f"-{body}" if negative else body
        else:
            text += f" - {body}" if negative else f" + {body}"
    return text or "0"
