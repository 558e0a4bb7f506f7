"""
Parser for polynomial expressions such as "1 + x1 - 3/2*x1^2*x2^-1".

Grammar:
    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom (("^" | "**") signed integer)?
    atom   := NUMBER | NAME | "(" expr ")"

Division is only by nonzero constants. Names must be listed variables or
kinematic symbols; symbols become sympy atoms inside coefficients.
"""

import re
from fractions import Fraction

import sympy

from .exceptions import LaurentParseError
from .polynomials import LaurentPolynomial

TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()]))"
)


def tokenize(text):
    tokens = []
    position = 0
    text = text.rstrip()
    while position < len(text):
        match = TOKEN_RE.match(text, position)
        if match is None or match.end() == position:
            raise LaurentParseError(f"unexpected character {text[position]!r}", position=position)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables, symbols):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.variables = {name: j for j, name in enumerate(variables)}
        self.symbols = {name: sympy.Symbol(name) for name in symbols}
        self.nvars = len(variables)

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, value):
        kind, text, position = self.advance()
        if text != value:
            found = text or "end of input"
            raise LaurentParseError(f"expected {value!r}, found {found!r}", position=position)

    def parse(self):
        if self.peek()[0] == "end":
            raise LaurentParseError("empty expression", position=0)
        result = self.expr()
        kind, text, position = self.peek()
        if kind != "end":
            raise LaurentParseError(f"unexpected {text!r}", position=position)
        return result

    def expr(self):
        result = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.advance()[1]
            right = self.term()
            result = result + right if op == "+" else result - right
        return result

    def term(self):
        result = self.unary()
        while self.peek()[1] in ("*", "/"):
            op, position = self.advance()[1:]
            right = self.unary()
            if op == "*":
                result = result * right
                continue
            if not right.is_constant() or right.is_zero():
                raise LaurentParseError("division only by nonzero constants", position=position)
            result = result * (1 / right.coefficients[0])
        return result

    def unary(self):
        if self.peek()[1] == "-":
            self.advance()
            return -self.unary()
        if self.peek()[1] == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            position = self.advance()[2]
            exponent = self.signed_integer()
            if exponent < 0 and not base.is_monomial():
                raise LaurentParseError(
                    "negative powers are only allowed on monomials", position=position
                )
            return base ** exponent
        return base

    def signed_integer(self):
        sign = 1
        parenthesized = False
        if self.peek()[1] == "(":
            self.advance()
            parenthesized = True
        while self.peek()[1] in ("-", "+"):
            if self.advance()[1] == "-":
                sign = -sign
        kind, text, position = self.advance()
        if kind != "number" or not text.isdigit():
            raise LaurentParseError(f"exponent must be an integer, found {text!r}", position=position)
        if parenthesized:
            self.expect(")")
        return sign * int(text)

    def atom(self):
        kind, text, position = self.advance()
        if kind == "number":
            return LaurentPolynomial.constant(self.nvars, Fraction(text))
        if kind == "name":
            if text in self.variables:
                return LaurentPolynomial.variable(self.nvars, self.variables[text])
            if text in self.symbols:
                return LaurentPolynomial.constant(self.nvars, self.symbols[text])
            raise LaurentParseError(f"unknown variable {text!r}", position=position)
        if text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        found = text or "end of input"
        raise LaurentParseError(f"unexpected {found!r}", position=position)


def parse(text, variables, symbols=()):
    """
    Parse `text` into a canonical LaurentPolynomial over `variables`.

    Args:
        text: expression string
        variables: ordered variable names
        symbols: names treated as opaque coefficient atoms (kinematics)

    Raises:
        LaurentParseError: syntax error or unknown name, with its position
    """
    if not variables:
        raise LaurentParseError("at least one variable name is required")
    return _Parser(text, list(variables), list(symbols)).parse()


def split_summands(text):
    """Top-level summands of `text`, keeping their signs."""
    pieces = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > start:
            previous = text[start:i].rstrip()
            # a sign right after ^ or * belongs to the exponent or factor
            if previous and previous[-1] not in "^*/(":
                pieces.append(text[start:i])
                start = i
    pieces.append(text[start:])
    return [p for p in pieces if p.strip() not in ("", "+", "-")]


def parse_support(text, variables, symbols=()):
    """
    Support of the parsed polynomial in order of first appearance in `text`
    (canonical order is lost by `parse`; GKZ column order follows the text).
    """
    full = parse(text, variables, symbols)
    order = []
    for piece in split_summands(text):
        for exponent in parse(piece, variables, symbols).support:
            if exponent not in order:
                order.append(exponent)
    support = set(full.support)
    ordered = [e for e in order if e in support]
    return ordered + [e for e in full.support if e not in ordered]
