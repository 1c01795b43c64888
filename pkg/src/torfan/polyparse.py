"""Integer-coefficient polynomials in x, y, z: parsing, printing, support.

Only the exponent support drives the geometry elsewhere in the package, but
coefficients are kept exactly so initial forms can be printed back out.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

Exponent = tuple[int, int, int]

_VARIABLES = ("x", "y", "z")
_VAR_INDEX = {"x": 0, "y": 1, "z": 2}

_TRAILING_EQ_ZERO = re.compile(r"=\s*0\s*$")


class ParseError(ValueError):
    """Malformed input text; ``pos`` is the character offset of the problem."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} (position {pos} in {text!r})")


def _grevord(e: Exponent) -> tuple[int, int, int, int]:
    # graded-lexicographic, largest first: sort key for canonical printing
    return (-(e[0] + e[1] + e[2]), -e[0], -e[1], -e[2])


@dataclass(frozen=True)
class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponents to nonzero ints."""

    terms: tuple[tuple[Exponent, int], ...]

    @classmethod
    def from_dict(cls, mapping: Mapping[Exponent, int]) -> "Polynomial":
        cleaned = {}
        for exponent, coeff in mapping.items():
            e = tuple(int(a) for a in exponent)
            if len(e) != 3 or any(a < 0 for a in e):
                raise ValueError(f"bad exponent vector {exponent!r}")
            if coeff:
                cleaned[e] = cleaned.get(e, 0) + int(coeff)
        items = tuple(
            (e, c) for e, c in sorted(cleaned.items(), key=lambda t: _grevord(t[0])) if c
        )
        if not items:
            raise ValueError("polynomial has no terms")
        return cls(items)

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def support(self) -> frozenset[Exponent]:
        return frozenset(e for e, _ in self.terms)

    def coefficient(self, exponent: Exponent) -> int:
        for e, c in self.terms:
            if e == exponent:
                return c
        return 0

    def restricted_to(self, exponents: Iterable[Exponent]) -> "Polynomial":
        keep = set(exponents)
        return Polynomial.from_dict({e: c for e, c in self.terms if e in keep})

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __iter__(self) -> Iterator[tuple[Exponent, int]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        parts: list[str] = []
        for exponent, coeff in self.terms:
            factors = []
            for name, power in zip(_VARIABLES, exponent):
                if power == 1:
                    factors.append(name)
                elif power > 1:
                    factors.append(f"{name}^{power}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            sign = "-" if coeff < 0 else "+"
            if not parts:
                parts.append(body if sign == "+" else "-" + body)
            else:
                parts.append(sign + body)
        return "".join(parts)


def support(p: Polynomial) -> frozenset[Exponent]:
    """Exponent vectors carrying a nonzero coefficient."""
    return p.support()


# --- tokenizer -------------------------------------------------------------

_TOKEN_INT = "int"
_TOKEN_VAR = "var"
_TOKEN_POW = "pow"
_TOKEN_MUL = "mul"
_TOKEN_PLUS = "plus"
_TOKEN_MINUS = "minus"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append((_TOKEN_INT, text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            if ch not in _VAR_INDEX:
                raise ParseError(f"unknown variable {ch!r} (only x, y, z)", text, i)
            tokens.append((_TOKEN_VAR, ch, i))
            i += 1
            continue
        if ch == "^":
            tokens.append((_TOKEN_POW, ch, i))
            i += 1
            continue
        if ch == "*":
            if i + 1 < n and text[i + 1] == "*":
                tokens.append((_TOKEN_POW, "**", i))
                i += 2
            else:
                tokens.append((_TOKEN_MUL, ch, i))
                i += 1
            continue
        if ch == "+":
            tokens.append((_TOKEN_PLUS, ch, i))
            i += 1
            continue
        if ch in "-−":
            tokens.append((_TOKEN_MINUS, "-", i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", text, i)
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.text, len(self.text))
        self.pos += 1
        return tok

    def parse(self) -> dict[Exponent, int]:
        acc: dict[Exponent, int] = {}
        sign = 1
        tok = self.peek()
        if tok is not None and tok[0] in (_TOKEN_PLUS, _TOKEN_MINUS):
            self.take()
            sign = -1 if tok[0] == _TOKEN_MINUS else 1
        while True:
            exponent, coeff = self.term()
            acc[exponent] = acc.get(exponent, 0) + sign * coeff
            tok = self.peek()
            if tok is None:
                break
            if tok[0] not in (_TOKEN_PLUS, _TOKEN_MINUS):
                raise ParseError(f"expected '+' or '-', got {tok[1]!r}", self.text, tok[2])
            self.take()
            sign = -1 if tok[0] == _TOKEN_MINUS else 1
        return acc

    def term(self) -> tuple[Exponent, int]:
        coeff = 1
        exponent = [0, 0, 0]
        tok = self.peek()
        if tok is None:
            raise ParseError("expected a term", self.text, len(self.text))
        if tok[0] == _TOKEN_INT:
            self.take()
            coeff = int(tok[1])
            nxt = self.peek()
            if nxt is not None and nxt[0] == _TOKEN_MUL:
                self.take()
                self.factor(exponent)      # '*' must be followed by a factor
            elif nxt is not None and nxt[0] == _TOKEN_VAR:
                self.factor(exponent)      # juxtaposition: 2x
            else:
                return tuple(exponent), coeff  # bare integer term
        elif tok[0] == _TOKEN_VAR:
            self.factor(exponent)
        else:
            raise ParseError(f"expected a term, got {tok[1]!r}", self.text, tok[2])
        while True:
            nxt = self.peek()
            if nxt is None or nxt[0] in (_TOKEN_PLUS, _TOKEN_MINUS):
                break
            if nxt[0] == _TOKEN_MUL:
                self.take()
                self.factor(exponent)
            elif nxt[0] == _TOKEN_VAR:
                self.factor(exponent)
            else:
                raise ParseError(f"unexpected {nxt[1]!r} inside a term", self.text, nxt[2])
        return tuple(exponent), coeff

    def factor(self, exponent: list[int]) -> None:
        tok = self.take()
        if tok[0] != _TOKEN_VAR:
            raise ParseError(f"expected a variable, got {tok[1]!r}", self.text, tok[2])
        index = _VAR_INDEX[tok[1]]
        power = 1
        nxt = self.peek()
        if nxt is not None and nxt[0] == _TOKEN_POW:
            self.take()
            ptok = self.peek()
            if ptok is not None and ptok[0] == _TOKEN_MINUS:
                raise ParseError("exponent must be a positive integer", self.text, ptok[2])
            ptok = self.take()
            if ptok[0] != _TOKEN_INT:
                raise ParseError("exponent must be a positive integer", self.text, ptok[2])
            power = int(ptok[1])
            if power < 1:
                raise ParseError("exponent must be a positive integer", self.text, ptok[2])
        exponent[index] += power


def parse_polynomial(text: str) -> Polynomial:
    """Parse ``text`` into a canonical :class:`Polynomial`.

    Terms are joined by ``+``/``-``; a term is an optional integer coefficient
    and variable powers (``^`` or ``**``) joined by ``*`` or juxtaposition.
    A trailing ``= 0`` is allowed and ignored.  Like terms are combined; if
    everything cancels the input is rejected.
    """
    stripped = _TRAILING_EQ_ZERO.sub("", text)
    parser = _Parser(stripped)
    acc = parser.parse()
    if not any(acc.values()):
        raise ParseError("polynomial is empty after cancellation", text, len(text))
    return Polynomial.from_dict(acc)
