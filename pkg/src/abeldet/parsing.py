"""Polynomial input: a small recursive-descent parser and the JSON coefficient form.

Grammar (whitespace is ignored)::

    poly   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (['*'] factor)*
    factor := atom (('^' | '**') INT)?
    atom   := NUMBER | 'i' | 'x' | 'y' | '(' poly ')'

A number directly followed by ``i`` is imaginary, so ``2+3i`` and ``-i``
are complex literals; juxtaposition multiplies (``3x^2y``).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import (InvalidParameter, NongenericInput, PolySyntaxError,
                     UnsupportedChart)
from .polyring import BivarPoly, discriminant_sigma, is_generic

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


class UnsupportedDegree(InvalidParameter):
    pass


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        # report a byte offset even for non-ASCII input
        raise PolySyntaxError(msg, len(self.text[:self.pos].encode("utf-8")))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> BivarPoly:
        if not self.peek():
            self.error("empty input")
        p = self.poly()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return p

    def poly(self) -> BivarPoly:
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        acc = self.term() * sign
        while self.peek() in ("+", "-") and self.peek():
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
            acc = acc + self.term() * sign
        return acc

    def term(self) -> BivarPoly:
        acc = self.factor()
        while True:
            c = self.peek()
            if c == "*" and not self.text.startswith("**", self.pos):
                self.pos += 1
                acc = acc * self.factor()
            elif c and (c.isdigit() or c in "xyi.("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> BivarPoly:
        base = self.atom()
        self.skip()
        if self.text.startswith("**", self.pos):
            self.pos += 2
        elif self.peek() == "^":
            self.pos += 1
        else:
            return base
        self.skip()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            self.error("expected a nonnegative integer exponent")
        self.pos = m.end()
        return base ** int(m.group())

    def atom(self) -> BivarPoly:
        c = self.peek()
        if c == "x":
            self.pos += 1
            return BivarPoly.x()
        if c == "y":
            self.pos += 1
            return BivarPoly.y()
        if c == "i":
            self.pos += 1
            return BivarPoly.constant(1j)
        if c == "(":
            self.pos += 1
            p = self.poly()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return p
        m = _NUMBER.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            v = float(m.group())
            if self.pos < len(self.text) and self.text[self.pos] == "i":
                self.pos += 1
                return BivarPoly.constant(1j * v)
            return BivarPoly.constant(v)
        self.error(f"unexpected {c!r}" if c else "unexpected end of input")


def parse_expression(text: str) -> BivarPoly:
    """Parse ``text`` into a polynomial (no degree restriction)."""
    return _Parser(text).parse()


def parse_complex(text: str) -> complex:
    """Parse a constant such as ``1.2``, ``-i`` or ``0.3+0.1i``."""
    p = parse_expression(text)
    if p.degree not in (None, 0):
        raise InvalidParameter(f"{text!r} is not a constant")
    return complex(p.coeffs.get((0, 0), 0))


def _from_json(obj) -> BivarPoly:
    if isinstance(obj, dict):
        obj = obj.get("terms", obj)
    if not isinstance(obj, list):
        raise InvalidParameter("JSON polynomial must be a list of terms")
    coeffs: dict[tuple[int, int], complex] = {}
    for term in obj:
        try:
            key = (int(term["i"]), int(term["j"]))
            c = complex(float(term.get("re", 0.0)), float(term.get("im", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameter(f"bad term {term!r}") from exc
        if key[0] < 0 or key[1] < 0:
            raise InvalidParameter(f"negative exponent in {term!r}")
        coeffs[key] = coeffs.get(key, 0) + c
    return BivarPoly(coeffs)


@dataclass
class PolySpec:
    source: str
    poly: BivarPoly
    n: int
    checks: dict = field(default_factory=dict)

    def require_chart(self):
        """Raise the first failed chart or genericity predicate."""
        if not self.checks["h_0_nonzero"]:
            raise UnsupportedChart("h_0 = 0: the coefficient of x^(n+1) vanishes")
        if not self.checks["h_n+1_nonzero"]:
            raise UnsupportedChart("h_(n+1) = 0: the coefficient of y^(n+1) vanishes")
        if not self.checks["sigma_nonzero"]:
            raise NongenericInput("Sigma(H) = 0: the top part has a repeated zero line")

    def to_terms(self) -> list[dict]:
        return [{"i": i, "j": j, "re": complex(c).real, "im": complex(c).imag}
                for (i, j), c in sorted(self.poly.coeffs.items())]


def parse_poly(text: str) -> PolySpec:
    """Parse a polynomial given as an expression or as JSON ``[{"i", "j", "re", "im"}, ...]``.

    Raises
    ------
    PolySyntaxError
        With the byte offset of the offending character.
    UnsupportedDegree
        If the total degree is below 2.
    """
    stripped = text.strip()
    if stripped.startswith(("[", "{")):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise PolySyntaxError(f"invalid JSON: {exc.msg}", exc.pos) from None
        p = _from_json(obj)
    else:
        p = parse_expression(text)
    if p.degree is None or p.degree < 2:
        raise UnsupportedDegree(f"degree {p.degree} < 2 is not supported")
    n = p.degree - 1
    top = p.top()
    checks = {"h_0_nonzero": top[0] != 0, "h_n+1_nonzero": top[n + 1] != 0}
    try:
        checks["sigma_nonzero"] = bool(checks["h_0_nonzero"] and is_generic(top))
        checks["sigma"] = discriminant_sigma(top) if checks["h_0_nonzero"] else None
    except (UnsupportedChart, InvalidParameter):
        checks["sigma_nonzero"], checks["sigma"] = False, None
    return PolySpec(text, p, n, checks)
