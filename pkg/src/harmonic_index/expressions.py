"""Expression trees for analytic functions of one complex variable.

The text grammar accepted by :func:`parse_function`::

    expression := term (('+' | '-') term)*
    term       := factor (('*' | '/') factor)*
    factor     := ('+' | '-') factor | power
    power      := atom ('^' INT)*
    atom       := NUMBER | NUMBER 'i' | 'i' | 'z' | 'exp' '(' expression ')'
                | '(' expression ')'

Numbers are decimal with optional exponent (``2``, ``0.5``, ``1e-3``); an
``i`` suffix makes them imaginary.  Exponents after ``^`` must be bare
nonnegative integers.  There is no implicit multiplication: write ``2*z``.

Every parsed function carries, when the tree is free of ``exp``, a canonical
reduced rational form num/den (den monic).  A constant denominator makes the
function a polynomial.  The rational *type* is the pair
(deg numerator, deg denominator) and the degree is their max.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateFunctionError,
    NotRationalError,
    ParseError,
    PoleEvaluationError,
)
from .polynomials import Polynomial

# Numerator/denominator roots closer than this cancel during reduction.
REDUCE_TOL = 1e-8
# A denominator value below this relative threshold counts as a pole hit.
POLE_EVAL_RTOL = 1e-15


# ---------------------------------------------------------------------------
# tree nodes
# ---------------------------------------------------------------------------


class Node:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Node):
    value: complex


@dataclass(frozen=True)
class Var(Node):
    pass


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Div(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class IntPow(Node):
    base: Node
    exponent: int


@dataclass(frozen=True)
class Exp(Node):
    arg: Node


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------

_OPERATORS = set("+-*/^()")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens: list[tuple[str, object, int]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPERATORS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            literal = text[i:j]
            try:
                value = float(literal)
            except ValueError:
                raise ParseError(f"malformed number {literal!r}", i, text) from None
            if j < n and text[j] == "i":
                tokens.append(("number", complex(0.0, value), i))
                j += 1
            else:
                tokens.append(("number", complex(value, 0.0), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word == "z":
                tokens.append(("var", word, i))
            elif word == "i":
                tokens.append(("number", 1j, i))
            elif word == "exp":
                tokens.append(("exp", word, i))
            else:
                raise ParseError(f"unknown symbol {word!r}", i, text)
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i, text)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, object, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, object, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> tuple[str, object, int]:
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2], self.text)
        return tok

    def parse(self) -> Node:
        node = self.expression()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[0]!r}", tok[2], self.text)
        return node

    def expression(self) -> Node:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> Node:
        kind, _, _ = self.peek()
        if kind == "+":
            self.advance()
            return self.factor()
        if kind == "-":
            self.advance()
            return Sub(Const(0j), self.factor())
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        while self.peek()[0] == "^":
            self.advance()
            kind, value, pos = self.advance()
            if kind != "number":
                raise ParseError("exponent must be a nonnegative integer", pos, self.text)
            value = complex(value)
            if value.imag != 0 or value.real < 0 or value.real != int(value.real):
                raise ParseError("exponent must be a nonnegative integer", pos, self.text)
            node = IntPow(node, int(value.real))
        return node

    def atom(self) -> Node:
        kind, value, pos = self.advance()
        if kind == "number":
            return Const(complex(value))
        if kind == "var":
            return Var()
        if kind == "exp":
            self.expect("(")
            inner = self.expression()
            self.expect(")")
            return Exp(inner)
        if kind == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {kind!r}", pos, self.text)


# ---------------------------------------------------------------------------
# structural simplification and canonical rational form
# ---------------------------------------------------------------------------


def _simplify(node: Node) -> Node:
    """Cheap peephole rules (identity elements only); keeps trees printable."""
    if isinstance(node, (Const, Var)):
        return node
    if isinstance(node, Exp):
        return Exp(_simplify(node.arg))
    if isinstance(node, IntPow):
        base = _simplify(node.base)
        if node.exponent == 0:
            return Const(1 + 0j)
        if node.exponent == 1:
            return base
        return IntPow(base, node.exponent)
    left = _simplify(node.left)
    right = _simplify(node.right)
    if isinstance(node, Add):
        if isinstance(left, Const) and left.value == 0:
            return right
        if isinstance(right, Const) and right.value == 0:
            return left
        return Add(left, right)
    if isinstance(node, Sub):
        if isinstance(right, Const) and right.value == 0:
            return left
        return Sub(left, right)
    if isinstance(node, Mul):
        for a, b in ((left, right), (right, left)):
            if isinstance(a, Const):
                if a.value == 0:
                    return Const(0j)
                if a.value == 1:
                    return b
        return Mul(left, right)
    if isinstance(node, Div):
        if isinstance(left, Const) and left.value == 0 and not (
            isinstance(right, Const) and right.value == 0
        ):
            return Const(0j)
        if isinstance(right, Const) and right.value == 1:
            return left
        return Div(left, right)
    raise TypeError(f"unknown node {node!r}")


def _reduce_rational(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Cancel matching numerator/denominator roots, then make den monic."""
    if den.is_zero:
        raise DegenerateFunctionError("denominator is identically zero")
    if num.is_zero:
        return Polynomial.constant(0.0), Polynomial.constant(1.0)
    if den.degree == 0:
        return num.scaled(1.0 / den.coeffs[0]), Polynomial.constant(1.0)
    num_roots = list(num.roots())
    den_roots = list(den.roots())
    cancelled = False
    kept_den: list[complex] = []
    for dr in den_roots:
        match = None
        for idx, nr in enumerate(num_roots):
            if abs(nr - dr) <= REDUCE_TOL:
                match = idx
                break
        if match is None:
            kept_den.append(dr)
        else:
            num_roots.pop(match)
            cancelled = True
    if not cancelled:
        lead = den.leading
        return num.scaled(1.0 / lead), den.scaled(1.0 / lead)
    ratio = num.leading / den.leading
    new_num = Polynomial.from_roots(num_roots, leading=ratio)
    new_den = Polynomial.from_roots(kept_den, leading=1.0)
    return new_num, new_den


def _rational_form(node: Node) -> tuple[Polynomial, Polynomial] | None:
    """num/den polynomials for exp-free trees, reduced; None otherwise."""
    if isinstance(node, Const):
        return Polynomial.constant(node.value), Polynomial.constant(1.0)
    if isinstance(node, Var):
        return Polynomial.identity(), Polynomial.constant(1.0)
    if isinstance(node, Exp):
        return None
    if isinstance(node, IntPow):
        base = _rational_form(node.base)
        if base is None:
            return None
        n, d = base
        return _reduce_rational(n.power(node.exponent), d.power(node.exponent))
    left = _rational_form(node.left)
    right = _rational_form(node.right)
    if left is None or right is None:
        return None
    n1, d1 = left
    n2, d2 = right
    if isinstance(node, Add):
        return _reduce_rational(n1 * d2 + n2 * d1, d1 * d2)
    if isinstance(node, Sub):
        return _reduce_rational(n1 * d2 - n2 * d1, d1 * d2)
    if isinstance(node, Mul):
        return _reduce_rational(n1 * n2, d1 * d2)
    if isinstance(node, Div):
        if n2.is_zero:
            raise DegenerateFunctionError("division by the zero function")
        return _reduce_rational(n1 * d2, d1 * n2)
    raise TypeError(f"unknown node {node!r}")


# ---------------------------------------------------------------------------
# derivative
# ---------------------------------------------------------------------------


def _derivative(node: Node) -> Node:
    if isinstance(node, Const):
        return Const(0j)
    if isinstance(node, Var):
        return Const(1 + 0j)
    if isinstance(node, Add):
        return Add(_derivative(node.left), _derivative(node.right))
    if isinstance(node, Sub):
        return Sub(_derivative(node.left), _derivative(node.right))
    if isinstance(node, Mul):
        return Add(
            Mul(_derivative(node.left), node.right),
            Mul(node.left, _derivative(node.right)),
        )
    if isinstance(node, Div):
        return Div(
            Sub(
                Mul(_derivative(node.left), node.right),
                Mul(node.left, _derivative(node.right)),
            ),
            IntPow(node.right, 2),
        )
    if isinstance(node, IntPow):
        if node.exponent == 0:
            return Const(0j)
        return Mul(
            Mul(Const(complex(node.exponent)), IntPow(node.base, node.exponent - 1)),
            _derivative(node.base),
        )
    if isinstance(node, Exp):
        return Mul(Exp(node.arg), _derivative(node.arg))
    raise TypeError(f"unknown node {node!r}")


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------


def format_complex(value: complex) -> str:
    """Render a complex constant in the ``a+bi`` grammar (no spaces)."""
    re, im = value.real, value.imag

    def num(x: float) -> str:
        if x == int(x) and abs(x) < 1e15:
            return str(int(x))
        return repr(x)

    if im == 0:
        return num(re)
    if re == 0:
        if im == 1:
            return "i"
        if im == -1:
            return "-i"
        return f"{num(im)}i"
    sign = "+" if im >= 0 else "-"
    imag = "i" if abs(im) == 1 else f"{num(abs(im))}i"
    return f"{num(re)}{sign}{imag}"


def _needs_wrap(value: complex) -> bool:
    return (value.real != 0 and value.imag != 0) or value.real < 0 or value.imag < 0


_PREC = {"add": 1, "mul": 2, "pow": 3, "atom": 4}


def _fmt(node: Node) -> tuple[str, int]:
    if isinstance(node, Const):
        text = format_complex(node.value)
        if _needs_wrap(node.value):
            return f"({text})", _PREC["atom"]
        return text, _PREC["atom"]
    if isinstance(node, Var):
        return "z", _PREC["atom"]
    if isinstance(node, Exp):
        inner, _ = _fmt(node.arg)
        return f"exp({inner})", _PREC["atom"]
    if isinstance(node, IntPow):
        base, prec = _fmt(node.base)
        if prec < _PREC["pow"]:
            base = f"({base})"
        return f"{base}^{node.exponent}", _PREC["pow"]
    if isinstance(node, (Add, Sub)):
        op = "+" if isinstance(node, Add) else "-"
        if isinstance(node, Sub) and isinstance(node.left, Const) and node.left.value == 0:
            inner, prec = _fmt(node.right)
            if prec < _PREC["mul"]:
                inner = f"({inner})"
            return f"-{inner}", _PREC["add"]
        left, lp = _fmt(node.left)
        right, rp = _fmt(node.right)
        if lp < _PREC["add"]:
            left = f"({left})"
        if rp <= _PREC["add"]:
            right = f"({right})"
        return f"{left}{op}{right}", _PREC["add"]
    if isinstance(node, (Mul, Div)):
        op = "*" if isinstance(node, Mul) else "/"
        left, lp = _fmt(node.left)
        right, rp = _fmt(node.right)
        if lp < _PREC["mul"]:
            left = f"({left})"
        if rp <= _PREC["mul"]:
            right = f"({right})"
        return f"{left}{op}{right}", _PREC["mul"]
    raise TypeError(f"unknown node {node!r}")


def format_expression(node: Node) -> str:
    return _fmt(node)[0]


# ---------------------------------------------------------------------------
# the public function object
# ---------------------------------------------------------------------------


class AnalyticFunction:
    """An analytic function given by an expression tree in ``z``.

    Immutable.  Construction eagerly derives the reduced rational canonical
    form when the tree contains no ``exp`` node.
    """

    def __init__(self, root: Node, text: str | None = None):
        self.root = _simplify(root)
        self._rational = _rational_form(self.root)
        self.text = text if text is not None else format_expression(self.root)
        self._derivative: AnalyticFunction | None = None

    # -- canonical form ----------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self._rational is not None

    @property
    def is_polynomial(self) -> bool:
        return self._rational is not None and self._rational[1].degree == 0

    @property
    def numerator(self) -> Polynomial:
        if self._rational is None:
            raise NotRationalError(f"{self.text!r} is not rational")
        return self._rational[0]

    @property
    def denominator(self) -> Polynomial:
        if self._rational is None:
            raise NotRationalError(f"{self.text!r} is not rational")
        return self._rational[1]

    @property
    def polynomial(self) -> Polynomial | None:
        """Polynomial coefficients when the function is a polynomial."""
        if not self.is_polynomial:
            return None
        num, den = self._rational
        return num.scaled(1.0 / den.coeffs[0])

    @property
    def rational_type(self) -> tuple[int, int]:
        """(numerator degree, denominator degree) of the reduced form."""
        return self.numerator.degree, self.denominator.degree

    @property
    def degree(self) -> int:
        j, n = self.rational_type
        return max(j, n)

    # -- evaluation ----------------------------------------------------------

    def __call__(self, z):
        if isinstance(z, np.ndarray):
            return self.eval_array(z)
        return self.eval(z)

    def eval(self, z: complex) -> complex:
        """Value at a single point; raises PoleEvaluationError at poles."""
        z = complex(z)
        if self._rational is not None:
            num, den = self._rational
            dv = den(z)
            nv = num(z)
            if abs(dv) <= POLE_EVAL_RTOL * (1.0 + abs(nv)):
                raise PoleEvaluationError(z)
            return nv / dv
        return self._eval_tree(self.root, z)

    def eval_array(self, z: np.ndarray) -> np.ndarray:
        """Vectorized evaluation; poles yield inf/nan instead of raising."""
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            if self._rational is not None:
                num, den = self._rational
                return num(z) / den(z)
            return self._eval_tree_array(self.root, z)

    def _eval_tree(self, node: Node, z: complex) -> complex:
        if isinstance(node, Const):
            return node.value
        if isinstance(node, Var):
            return z
        if isinstance(node, Add):
            return self._eval_tree(node.left, z) + self._eval_tree(node.right, z)
        if isinstance(node, Sub):
            return self._eval_tree(node.left, z) - self._eval_tree(node.right, z)
        if isinstance(node, Mul):
            return self._eval_tree(node.left, z) * self._eval_tree(node.right, z)
        if isinstance(node, Div):
            nv = self._eval_tree(node.left, z)
            dv = self._eval_tree(node.right, z)
            if abs(dv) <= POLE_EVAL_RTOL * (1.0 + abs(nv)):
                raise PoleEvaluationError(z)
            return nv / dv
        if isinstance(node, IntPow):
            return self._eval_tree(node.base, z) ** node.exponent
        if isinstance(node, Exp):
            return np.exp(self._eval_tree(node.arg, z))
        raise TypeError(f"unknown node {node!r}")

    def _eval_tree_array(self, node: Node, z: np.ndarray) -> np.ndarray:
        if isinstance(node, Const):
            return np.full_like(z, node.value, dtype=complex)
        if isinstance(node, Var):
            return z
        if isinstance(node, Add):
            return self._eval_tree_array(node.left, z) + self._eval_tree_array(node.right, z)
        if isinstance(node, Sub):
            return self._eval_tree_array(node.left, z) - self._eval_tree_array(node.right, z)
        if isinstance(node, Mul):
            return self._eval_tree_array(node.left, z) * self._eval_tree_array(node.right, z)
        if isinstance(node, Div):
            return self._eval_tree_array(node.left, z) / self._eval_tree_array(node.right, z)
        if isinstance(node, IntPow):
            return self._eval_tree_array(node.base, z) ** node.exponent
        if isinstance(node, Exp):
            return np.exp(self._eval_tree_array(node.arg, z))
        raise TypeError(f"unknown node {node!r}")

    # -- calculus ------------------------------------------------------------

    def derivative(self) -> "AnalyticFunction":
        if self._derivative is None:
            self._derivative = AnalyticFunction(_derivative(self.root))
        return self._derivative

    def poles(self) -> list[tuple[complex, int]]:
        """Poles (location, order) of the reduced rational form."""
        if self._rational is None:
            raise NotRationalError(
                f"{self.text!r} has no rational canonical form; poles undefined"
            )
        den = self._rational[1]
        if den.degree == 0:
            return []
        return den.roots_with_multiplicity()

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        meta: dict = {"text": self.text}
        if self.is_polynomial:
            meta["kind"] = "polynomial"
            meta["type"] = list(self.rational_type)
            meta["degree"] = self.degree
        elif self.is_rational:
            meta["kind"] = "rational"
            meta["type"] = list(self.rational_type)
            meta["degree"] = self.degree
        else:
            meta["kind"] = "general"
            meta["type"] = None
            meta["degree"] = None
        return meta

    def __repr__(self) -> str:
        return f"AnalyticFunction({self.text!r})"


def parse_function(text: str) -> AnalyticFunction:
    """Parse function text into an :class:`AnalyticFunction`."""
    root = _Parser(text).parse()
    return AnalyticFunction(root, text=text)


def parse_complex(text: str) -> complex:
    """Parse an ``a+bi`` literal (no variable allowed)."""
    func = parse_function(text)
    if _contains_var(func.root):
        raise ParseError("expected a complex constant, found 'z'", 0, text)
    value = func.eval(0.0)
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise ParseError("constant does not evaluate to a finite value", 0, text)
    return value


def _contains_var(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, (Const,)):
        return False
    if isinstance(node, Exp):
        return _contains_var(node.arg)
    if isinstance(node, IntPow):
        return _contains_var(node.base)
    return _contains_var(node.left) or _contains_var(node.right)
