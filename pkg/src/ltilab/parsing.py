"""Transfer-function expression parsing.

Input is a plain-text rational expression in the Laplace variable ``s``
with named parameters, e.g. ``k_1/(1+T_1*s)`` or ``3/(1+s)*exp(-0.5*s)``.
Three stages:

tokenize
    text -> tokens (numbers with scientific notation, symbols, operators).
parse
    tokens -> expression tree with precedence ``^`` > unary minus > ``* /``
    > ``+ -``; ``^`` is right-associative, everything else left.
normalize
    tree + parameter bindings -> a single expanded rational function times
    one aggregated delay factor ``exp(-L*s)``.

All errors are :class:`ExpressionError` and carry a 0-based character
offset into the original text.  Multiplication must be explicit (``2*s``,
never ``2s``) and no pole/zero cancellation is performed: the result keeps
exactly the factors the user wrote.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .polynomial import Polynomial
from .transfer import TransferFunction

__all__ = [
    "ExpressionError",
    "Token",
    "tokenize",
    "parse",
    "normalize",
    "parse_expression",
    "free_symbols",
]


class ExpressionError(ValueError):
    """Syntax or normalization error with a character offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at position {offset}")
        self.message = message
        self.offset = offset


# ---------------------------------------------------------------------------
# Tokenizer

_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
# A symbol starts with any letter (unicode included), then letters, digits
# or underscores.
_SYMBOL_RE = re.compile(r"[^\W\d]\w*", re.UNICODE)
_OPERATORS = set("+-*/^")

# Greek spellings map onto their ASCII parameter names.
_ALIASES = {"ω": "omega", "ζ": "zeta"}


def canonical_symbol(name: str) -> str:
    for greek, ascii_name in _ALIASES.items():
        name = name.replace(greek, ascii_name)
    return name


@dataclass(frozen=True)
class Token:
    kind: str  # "number" | "symbol" | "op" | "lparen" | "rparen" | "comma"
    text: str
    offset: int
    value: float = 0.0


def tokenize(text: str) -> list[Token]:
    if not text or text.isspace():
        raise ExpressionError("empty expression", 0)
    tokens: list[Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        m = _NUMBER_RE.match(text, pos)
        if m:
            tokens.append(Token("number", m.group(), pos, float(m.group())))
            pos = m.end()
            continue
        m = _SYMBOL_RE.match(text, pos)
        if m:
            tokens.append(Token("symbol", m.group(), pos))
            pos = m.end()
            continue
        if ch in _OPERATORS:
            tokens.append(Token("op", ch, pos))
            pos += 1
            continue
        if ch == "(":
            tokens.append(Token("lparen", ch, pos))
            pos += 1
            continue
        if ch == ")":
            tokens.append(Token("rparen", ch, pos))
            pos += 1
            continue
        if ch == ",":
            tokens.append(Token("comma", ch, pos))
            pos += 1
            continue
        raise ExpressionError(f"illegal character {ch!r}", pos)
    if not tokens:
        raise ExpressionError("empty expression", 0)
    return tokens


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: float
    offset: int = 0


@dataclass(frozen=True)
class Sym:
    name: str
    offset: int = 0


@dataclass(frozen=True)
class Neg:
    child: "Node"
    offset: int = 0


@dataclass(frozen=True)
class Bin:
    op: str  # + - * / ^
    left: "Node"
    right: "Node"
    offset: int = 0


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]
    offset: int = 0


Node = Union[Num, Sym, Neg, Bin, Call]


class _TokenStream:
    def __init__(self, tokens: list[Token], end_offset: int):
        self.tokens = tokens
        self.pos = 0
        self.end_offset = end_offset

    def peek(self) -> Optional[Token]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ExpressionError("unexpected end of expression", self.end_offset)
        self.pos += 1
        return tok


def parse(tokens: list[Token]) -> Node:
    """Parse a token list into an expression tree."""
    end_offset = tokens[-1].offset + len(tokens[-1].text) if tokens else 0
    stream = _TokenStream(tokens, end_offset)
    node = _parse_sum(stream)
    trailing = stream.peek()
    if trailing is not None:
        raise ExpressionError(
            f"unexpected token {trailing.text!r}", trailing.offset
        )
    return node


def _parse_sum(stream: _TokenStream) -> Node:
    node = _parse_product(stream)
    while True:
        tok = stream.peek()
        if tok is None or tok.kind != "op" or tok.text not in "+-":
            return node
        stream.next()
        rhs = _parse_product(stream)
        node = Bin(tok.text, node, rhs, tok.offset)


def _parse_product(stream: _TokenStream) -> Node:
    node = _parse_unary(stream)
    while True:
        tok = stream.peek()
        if tok is None or tok.kind != "op" or tok.text not in "*/":
            return node
        stream.next()
        rhs = _parse_unary(stream)
        node = Bin(tok.text, node, rhs, tok.offset)


def _parse_unary(stream: _TokenStream) -> Node:
    tok = stream.peek()
    if tok is not None and tok.kind == "op" and tok.text == "-":
        stream.next()
        return Neg(_parse_unary(stream), tok.offset)
    if tok is not None and tok.kind == "op" and tok.text == "+":
        stream.next()
        return _parse_unary(stream)
    return _parse_power(stream)


def _parse_power(stream: _TokenStream) -> Node:
    base = _parse_atom(stream)
    tok = stream.peek()
    if tok is not None and tok.kind == "op" and tok.text == "^":
        stream.next()
        # right-associative; the exponent may carry its own unary minus
        exponent = _parse_unary_power(stream)
        return Bin("^", base, exponent, tok.offset)
    return base


def _parse_unary_power(stream: _TokenStream) -> Node:
    tok = stream.peek()
    if tok is not None and tok.kind == "op" and tok.text == "-":
        stream.next()
        return Neg(_parse_unary_power(stream), tok.offset)
    return _parse_power(stream)


def _parse_atom(stream: _TokenStream) -> Node:
    tok = stream.next()
    if tok.kind == "number":
        return Num(tok.value, tok.offset)
    if tok.kind == "symbol":
        nxt = stream.peek()
        if nxt is not None and nxt.kind == "lparen":
            stream.next()
            args = [_parse_sum(stream)]
            while True:
                sep = stream.peek()
                if sep is not None and sep.kind == "comma":
                    stream.next()
                    args.append(_parse_sum(stream))
                    continue
                break
            closing = stream.peek()
            if closing is None or closing.kind != "rparen":
                raise ExpressionError(
                    "unbalanced parenthesis in function call",
                    closing.offset if closing else stream.end_offset,
                )
            stream.next()
            return Call(tok.text, tuple(args), tok.offset)
        return Sym(tok.text, tok.offset)
    if tok.kind == "lparen":
        inner = _parse_sum(stream)
        closing = stream.peek()
        if closing is None or closing.kind != "rparen":
            raise ExpressionError(
                "unbalanced parenthesis",
                closing.offset if closing else stream.end_offset,
            )
        stream.next()
        return inner
    if tok.kind == "op":
        raise ExpressionError(f"unexpected operator {tok.text!r}", tok.offset)
    raise ExpressionError(f"unexpected token {tok.text!r}", tok.offset)


def free_symbols(node: Node) -> set[str]:
    """Canonical names of all symbols other than s (and the e of e^)."""
    out: set[str] = set()
    _collect_symbols(node, out)
    return out


def _collect_symbols(node: Node, out: set[str]) -> None:
    if isinstance(node, Sym):
        name = canonical_symbol(node.name)
        if name != "s":
            out.add(name)
    elif isinstance(node, Neg):
        _collect_symbols(node.child, out)
    elif isinstance(node, Bin):
        if node.op == "^" and isinstance(node.left, Sym) and node.left.name == "e":
            _collect_symbols(node.right, out)
            return
        _collect_symbols(node.left, out)
        _collect_symbols(node.right, out)
    elif isinstance(node, Call):
        for a in node.args:
            _collect_symbols(a, out)


# ---------------------------------------------------------------------------
# Normalization to rational-plus-delay form

@dataclass
class _Rational:
    """Intermediate value: num/den * exp(-delay*s)."""

    num: Polynomial
    den: Polynomial
    delay: float = 0.0

    @property
    def is_constant(self) -> bool:
        return self.num.degree == 0 and self.den.degree == 0 and self.delay == 0.0

    @property
    def has_s(self) -> bool:
        return self.num.degree > 0 or self.den.degree > 0 or self.delay != 0.0

    def constant_value(self) -> float:
        return self.num.coeffs[0] / self.den.coeffs[0]


def normalize(node: Node, env: Optional[dict[str, float]] = None) -> TransferFunction:
    """Reduce an expression tree to a TransferFunction.

    ``env`` binds every free symbol (other than s) to a value; Greek
    spellings in either the expression or the environment are accepted.
    """
    bindings = {canonical_symbol(k): float(v) for k, v in (env or {}).items()}
    r = _eval(node, bindings)
    if r.den.is_zero:
        raise ExpressionError("denominator is identically zero", _offset(node))
    if r.delay < 0.0:
        raise ExpressionError(
            "unsupported delay term: total delay is negative", _offset(node)
        )
    return TransferFunction(r.num, r.den, r.delay)


def parse_expression(
    text: str, env: Optional[dict[str, float]] = None
) -> TransferFunction:
    """tokenize + parse + normalize in one call."""
    return normalize(parse(tokenize(text)), env)


def _offset(node: Node) -> int:
    return getattr(node, "offset", 0)


_ONE = Polynomial((1.0,))


def _eval(node: Node, env: dict[str, float]) -> _Rational:
    if isinstance(node, Num):
        return _Rational(Polynomial((node.value,)), _ONE)
    if isinstance(node, Sym):
        name = canonical_symbol(node.name)
        if name == "s":
            return _Rational(Polynomial((0.0, 1.0)), _ONE)
        if name not in env:
            raise ExpressionError(f"unbound symbol '{node.name}'", node.offset)
        return _Rational(Polynomial((env[name],)), _ONE)
    if isinstance(node, Neg):
        r = _eval(node.child, env)
        return _Rational(-r.num, r.den, r.delay)
    if isinstance(node, Call):
        if node.name != "exp":
            raise ExpressionError(
                f"unsupported function '{node.name}'", node.offset
            )
        if len(node.args) != 1:
            raise ExpressionError("exp takes exactly one argument", node.offset)
        return _delay_factor(node.args[0], env, node.offset)
    if isinstance(node, Bin):
        if node.op == "^" and isinstance(node.left, Sym) and node.left.name == "e":
            # e^(x) is an accepted spelling of exp(x)
            return _delay_factor(node.right, env, node.offset)
        if node.op in "+-":
            a = _eval(node.left, env)
            b = _eval(node.right, env)
            if a.delay != b.delay:
                raise ExpressionError(
                    "unsupported delay term: cannot add terms with different delays",
                    node.offset,
                )
            num_a = a.num * b.den
            num_b = b.num * a.den
            num = num_a + num_b if node.op == "+" else num_a - num_b
            return _Rational(num, a.den * b.den, a.delay)
        if node.op == "*":
            a = _eval(node.left, env)
            b = _eval(node.right, env)
            return _Rational(a.num * b.num, a.den * b.den, a.delay + b.delay)
        if node.op == "/":
            a = _eval(node.left, env)
            b = _eval(node.right, env)
            delay = a.delay - b.delay
            if delay < 0.0:
                raise ExpressionError(
                    "unsupported delay term: division produces a negative delay",
                    node.offset,
                )
            if b.num.is_zero:
                raise ExpressionError(
                    "denominator is identically zero", node.offset
                )
            return _Rational(a.num * b.den, a.den * b.num, delay)
        if node.op == "^":
            return _eval_power(node, env)
    raise ExpressionError("unsupported expression", _offset(node))


def _eval_power(node: Bin, env: dict[str, float]) -> _Rational:
    exponent = _eval(node.right, env)
    if exponent.has_s:
        raise ExpressionError(
            "non-rational expression: exponent contains s", node.offset
        )
    e_value = exponent.constant_value()
    base = _eval(node.left, env)
    if base.has_s:
        k = round(e_value)
        if abs(e_value - k) > 1e-9:
            raise ExpressionError(
                "non-rational expression: non-integer power of an expression "
                "containing s",
                node.offset,
            )
        if k < 0:
            raise ExpressionError(
                "non-rational expression: negative power of an expression "
                "containing s",
                node.offset,
            )
        return _Rational(base.num.pow_int(k), base.den.pow_int(k), base.delay * k)
    b_value = base.constant_value()
    k = round(e_value)
    if e_value == k and abs(k) <= 64:
        # repeated multiplication, same order as the polynomial power path,
        # so constant powers in template expressions match instantiate()
        acc = 1.0
        for _ in range(abs(k)):
            acc *= b_value
        if k < 0:
            if acc == 0.0:
                raise ExpressionError("invalid numeric power", node.offset)
            acc = 1.0 / acc
        return _Rational(Polynomial((acc,)), _ONE)
    try:
        value = math.pow(b_value, e_value)
    except (ValueError, OverflowError):
        raise ExpressionError("invalid numeric power", node.offset) from None
    return _Rational(Polynomial((value,)), _ONE)


def _delay_factor(arg: Node, env: dict[str, float], offset: int) -> _Rational:
    """exp argument must reduce to -L*s with constant L >= 0."""
    r = _eval(arg, env)
    if r.delay != 0.0 or r.den.degree != 0 or r.num.degree > 1:
        raise ExpressionError(
            "unsupported delay term: exp argument must be linear in s", offset
        )
    d0 = r.den.coeffs[0]
    constant = r.num.coeffs[0] / d0
    if constant != 0.0:
        raise ExpressionError(
            "unsupported delay term: exp argument must be a pure multiple of s",
            offset,
        )
    slope = r.num.coeffs[1] / d0 if r.num.degree == 1 else 0.0
    delay = -slope
    if delay < 0.0:
        raise ExpressionError(
            "unsupported delay term: delay must be nonnegative", offset
        )
    return _Rational(_ONE, _ONE, delay)
