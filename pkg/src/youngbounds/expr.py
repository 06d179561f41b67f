"""Expression trees for h(x): parsing, evaluation, and truncated-Taylor jets.

The grammar is a small calculator language over one variable::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ['^' unary]          # right associative, constant exponent only
    atom   := NUMBER | 'x' | 'e' | 'pi' | ('exp'|'ln'|'sqrt') '(' expr ')' | '(' expr ')'

Numbers accept decimal and scientific notation. Exponents must be constant
expressions (no ``x``); they are folded to a float at parse time, which keeps
the power rule of the jet arithmetic closed-form.

Derivatives come from jet (truncated Taylor series) arithmetic: every node
propagates the coefficients of ``h(x0 + t)`` up to the requested order, and the
k-th derivative is the k-th coefficient rescaled by the exact integer k!.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import DomainError, ExprSyntaxError, OrderCapError, UnsupportedFeatureError

__all__ = [
    "Const", "Var", "Neg", "BinOp", "Pow", "Call", "Node",
    "ExprAst", "TaylorJet",
    "parse_expr", "evaluate", "serialize", "jet",
    "DEFAULT_ORDER_CAP",
]

DEFAULT_ORDER_CAP = 16

_FUNCTIONS = ("exp", "ln", "sqrt")
_NAMED_CONSTANTS = {"e": math.e, "pi": math.pi}


# ---------------------------------------------------------------------------
# AST nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    """The single independent variable x."""


@dataclass(frozen=True)
class Neg:
    child: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of '+', '-', '*', '/'
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: float  # folded constant


@dataclass(frozen=True)
class Call:
    func: str  # one of 'exp', 'ln', 'sqrt'
    arg: "Node"


Node = Union[Const, Var, Neg, BinOp, Pow, Call]


@dataclass(frozen=True, eq=False)
class ExprAst:
    """A parsed expression. Structural equality ignores the source text."""

    root: Node
    source: str

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExprAst) and self.root == other.root

    def __hash__(self) -> int:
        return hash(self.root)


@dataclass(frozen=True)
class TaylorJet:
    """Derivatives h^(0)..h^(order) of an expression at ``center``."""

    center: float
    order: int
    derivs: tuple[float, ...]

    def deriv(self, k: int) -> float:
        return self.derivs[k]


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # 'num' | 'ident' | 'op' | 'end'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            start = i
            while i < n and (text[i].isdigit() or text[i] == "."):
                i += 1
            if i < n and text[i] in "eE":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j].isdigit():
                    i = j
                    while i < n and text[i].isdigit():
                        i += 1
            lit = text[start:i]
            try:
                float(lit)
            except ValueError:
                raise ExprSyntaxError(f"invalid number {lit!r}", start) from None
            tokens.append(_Token("num", lit, start))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(_Token("ident", text[start:i], start))
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._i = 0

    def _peek(self) -> _Token:
        return self._tokens[self._i]

    def _next(self) -> _Token:
        tok = self._tokens[self._i]
        self._i += 1
        return tok

    def _expect_op(self, op: str) -> None:
        tok = self._next()
        if tok.kind != "op" or tok.text != op:
            raise ExprSyntaxError(f"expected {op!r}, found {tok.text or 'end of input'!r}", tok.pos)

    def parse(self) -> Node:
        node = self._expression()
        tok = self._peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return node

    def _expression(self) -> Node:
        node = self._term()
        while self._peek().kind == "op" and self._peek().text in "+-":
            op = self._next().text
            node = BinOp(op, node, self._term())
        return node

    def _term(self) -> Node:
        node = self._unary()
        while self._peek().kind == "op" and self._peek().text in "*/":
            op = self._next().text
            node = BinOp(op, node, self._unary())
        return node

    def _unary(self) -> Node:
        tok = self._peek()
        if tok.kind == "op" and tok.text == "-":
            self._next()
            return Neg(self._unary())
        return self._power()

    def _power(self) -> Node:
        base = self._atom()
        tok = self._peek()
        if tok.kind == "op" and tok.text == "^":
            pos = self._next().pos
            exponent = self._unary()  # right associative through the unary chain
            if _contains_var(exponent):
                raise UnsupportedFeatureError(
                    f"exponent must be a constant expression (offset {pos})"
                )
            return Pow(base, _fold_constant(exponent))
        return base

    def _atom(self) -> Node:
        tok = self._next()
        if tok.kind == "num":
            return Const(float(tok.text))
        if tok.kind == "ident":
            name = tok.text
            if name == "x":
                return Var()
            if name in _NAMED_CONSTANTS:
                return Const(_NAMED_CONSTANTS[name])
            if name in _FUNCTIONS:
                self._expect_op("(")
                arg = self._expression()
                self._expect_op(")")
                return Call(name, arg)
            raise ExprSyntaxError(f"unknown identifier {name!r}", tok.pos)
        if tok.kind == "op" and tok.text == "(":
            node = self._expression()
            self._expect_op(")")
            return node
        raise ExprSyntaxError(
            f"expected a value, found {tok.text or 'end of input'!r}", tok.pos
        )


def _contains_var(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Neg):
        return _contains_var(node.child)
    if isinstance(node, BinOp):
        return _contains_var(node.left) or _contains_var(node.right)
    if isinstance(node, Pow):
        return _contains_var(node.base)
    if isinstance(node, Call):
        return _contains_var(node.arg)
    return False


def _fold_constant(node: Node) -> float:
    try:
        value = _eval_node(node, 0.0)  # no Var inside by construction
    except DomainError as exc:
        raise UnsupportedFeatureError(f"exponent is not a finite constant: {exc}") from None
    if not math.isfinite(value):
        raise UnsupportedFeatureError(f"exponent folds to non-finite value {value!r}")
    return value


def parse_expr(text: str) -> ExprAst:
    """Parse ``text`` into an :class:`ExprAst`.

    Raises :class:`ExprSyntaxError` (with the offending offset) on malformed
    input and :class:`UnsupportedFeatureError` for exponents containing x.
    """
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    return ExprAst(_Parser(_tokenize(text)).parse(), text)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _pow_real(base: float, c: float) -> float:
    if base > 0.0:
        try:
            return math.pow(base, c)
        except OverflowError:
            raise DomainError(f"overflow in {base!r}^{c!r}") from None
    if base == 0.0:
        if c > 0.0:
            return 0.0
        if c == 0.0:
            return 1.0
        raise DomainError("zero raised to a negative power")
    if float(c).is_integer():
        try:
            return math.pow(base, c)
        except OverflowError:
            raise DomainError(f"overflow in {base!r}^{c!r}") from None
    raise DomainError(f"negative base {base!r} raised to non-integer power {c!r}")


def _eval_node(node: Node, x: float) -> float:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval_node(node.child, x)
    if isinstance(node, BinOp):
        a = _eval_node(node.left, x)
        b = _eval_node(node.right, x)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0.0:
            raise DomainError("division by zero")
        return a / b
    if isinstance(node, Pow):
        return _pow_real(_eval_node(node.base, x), node.exponent)
    if isinstance(node, Call):
        v = _eval_node(node.arg, x)
        if node.func == "exp":
            try:
                return math.exp(v)
            except OverflowError:
                raise DomainError(f"overflow in exp({v!r})") from None
        if node.func == "ln":
            if v <= 0.0:
                raise DomainError(f"ln of nonpositive value {v!r}")
            return math.log(v)
        if v < 0.0:
            raise DomainError(f"sqrt of negative value {v!r}")
        return math.sqrt(v)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(ast: ExprAst | Node, x: float) -> float:
    """IEEE-double evaluation of the tree at ``x``."""
    node = ast.root if isinstance(ast, ExprAst) else ast
    value = _eval_node(node, x)
    if not math.isfinite(value):
        raise DomainError(f"non-finite result {value!r} at x={x!r}")
    return value


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _fmt_number(v: float) -> str:
    if float(v).is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _emit(node: Node, context: int) -> str:
    if isinstance(node, Const):
        if node.value < 0:
            return _wrap(f"-{_fmt_number(-node.value)}", _PREC_UNARY, context)
        return _fmt_number(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return _wrap(f"-{_emit(node.child, _PREC_UNARY)}", _PREC_UNARY, context)
    if isinstance(node, BinOp):
        prec = _PREC_ADD if node.op in "+-" else _PREC_MUL
        # Right operand printed one level tighter so the left-associative
        # reparse reproduces this exact tree shape.
        text = f"{_emit(node.left, prec)}{node.op}{_emit(node.right, prec + 1)}"
        return _wrap(text, prec, context)
    if isinstance(node, Pow):
        e = node.exponent
        etext = _fmt_number(e) if e >= 0 else f"(-{_fmt_number(-e)})"
        text = f"{_emit(node.base, _PREC_POW + 1)}^{etext}"
        return _wrap(text, _PREC_POW, context)
    if isinstance(node, Call):
        return f"{node.func}({_emit(node.arg, 0)})"
    raise TypeError(f"not an expression node: {node!r}")


def _wrap(text: str, prec: int, context: int) -> str:
    return f"({text})" if prec < context else text


def serialize(ast: ExprAst | Node) -> str:
    """Render the tree as grammar text; reparsing yields a structurally equal tree."""
    node = ast.root if isinstance(ast, ExprAst) else ast
    return _emit(node, 0)


# ---------------------------------------------------------------------------
# Jet (truncated Taylor) arithmetic
# ---------------------------------------------------------------------------

def _jet_mul(u: list[float], v: list[float]) -> list[float]:
    n = len(u)
    return [math.fsum(u[j] * v[k - j] for j in range(k + 1)) for k in range(n)]


def _jet_div(u: list[float], v: list[float]) -> list[float]:
    if v[0] == 0.0:
        raise DomainError("division by zero")
    n = len(u)
    q = [0.0] * n
    for k in range(n):
        acc = u[k] - math.fsum(v[j] * q[k - j] for j in range(1, k + 1))
        q[k] = acc / v[0]
    return q


def _jet_exp(u: list[float]) -> list[float]:
    n = len(u)
    try:
        w0 = math.exp(u[0])
    except OverflowError:
        raise DomainError(f"overflow in exp({u[0]!r})") from None
    w = [w0] + [0.0] * (n - 1)
    for k in range(1, n):
        w[k] = math.fsum(j * u[j] * w[k - j] for j in range(1, k + 1)) / k
    return w


def _jet_ln(u: list[float]) -> list[float]:
    if u[0] <= 0.0:
        raise DomainError(f"ln of nonpositive value {u[0]!r}")
    n = len(u)
    w = [math.log(u[0])] + [0.0] * (n - 1)
    for k in range(1, n):
        acc = u[k] - math.fsum(j * w[j] * u[k - j] for j in range(1, k)) / k
        w[k] = acc / u[0]
    return w


def _jet_int_pow(u: list[float], c: int) -> list[float]:
    n = len(u)
    result = [1.0] + [0.0] * (n - 1)
    base = u
    e = c
    while e > 0:  # exponentiation by squaring
        if e & 1:
            result = _jet_mul(result, base)
        e >>= 1
        if e:
            base = _jet_mul(base, base)
    return result


def _jet_pow(u: list[float], c: float) -> list[float]:
    n = len(u)
    if float(c).is_integer():
        ci = int(c)
        if ci >= 0:
            return _jet_int_pow(u, ci)
        one = [1.0] + [0.0] * (n - 1)
        return _jet_div(one, _jet_int_pow(u, -ci))
    if u[0] < 0.0:
        raise DomainError(f"negative base {u[0]!r} raised to non-integer power {c!r}")
    if u[0] == 0.0:
        if n == 1 and c > 0.0:
            return [0.0]
        raise DomainError(f"derivatives of {u[0]!r}^{c!r} are singular at a zero base")
    w = [math.pow(u[0], c)] + [0.0] * (n - 1)
    for k in range(1, n):
        acc = math.fsum(((c + 1.0) * j - k) * u[j] * w[k - j] for j in range(1, k + 1))
        w[k] = acc / (k * u[0])
    return w


def _jet_node(node: Node, x0: float, order: int) -> list[float]:
    n = order + 1
    if isinstance(node, Const):
        return [node.value] + [0.0] * (n - 1)
    if isinstance(node, Var):
        coeffs = [x0] + [0.0] * (n - 1)
        if n > 1:
            coeffs[1] = 1.0
        return coeffs
    if isinstance(node, Neg):
        return [-c for c in _jet_node(node.child, x0, order)]
    if isinstance(node, BinOp):
        u = _jet_node(node.left, x0, order)
        v = _jet_node(node.right, x0, order)
        if node.op == "+":
            return [a + b for a, b in zip(u, v)]
        if node.op == "-":
            return [a - b for a, b in zip(u, v)]
        if node.op == "*":
            return _jet_mul(u, v)
        return _jet_div(u, v)
    if isinstance(node, Pow):
        return _jet_pow(_jet_node(node.base, x0, order), node.exponent)
    if isinstance(node, Call):
        u = _jet_node(node.arg, x0, order)
        if node.func == "exp":
            return _jet_exp(u)
        if node.func == "ln":
            return _jet_ln(u)
        return _jet_pow(u, 0.5)
    raise TypeError(f"not an expression node: {node!r}")


def jet(ast: ExprAst | Node, x0: float, order: int, cap: int = DEFAULT_ORDER_CAP) -> TaylorJet:
    """Derivatives h^(0)..h^(order) at ``x0`` via truncated-Taylor propagation.

    ``derivs[k]`` is the k-th Taylor coefficient rescaled by the exact integer
    k!, so the only rounding beyond the propagation itself is one final
    correctly-rounded float-by-int multiply per order.
    """
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    if order > cap:
        raise OrderCapError(f"order {order} exceeds cap {cap}")
    node = ast.root if isinstance(ast, ExprAst) else ast
    coeffs = _jet_node(node, x0, order)
    derivs = tuple(c * math.factorial(k) for k, c in enumerate(coeffs))
    for k, v in enumerate(derivs):
        if not math.isfinite(v):
            raise DomainError(f"non-finite derivative of order {k} at x={x0!r}")
    return TaylorJet(center=x0, order=order, derivs=derivs)
