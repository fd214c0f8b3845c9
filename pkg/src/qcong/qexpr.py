"""Parser and evaluator for a small expression language over eta factors,
Eisenstein series, integer constants and q-monomials.

Grammar (whitespace-insensitive):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | atom ('^' int)?
    atom   := 'eta' '(' 'q' ('^' posint)? ')'
            | 'E' posint '(' 'q' ('^' posint)? ')'
            | int | 'q' ('^' posint)? | '(' expr ')'

Eisenstein weights must be even and positive.  Fractional eta exponents are
tracked in 24ths; the net exponent of a full expression must be an integer,
applied as a q-shift.
"""

from dataclasses import dataclass

from .series import (
    EXACT,
    ExponentMismatch,
    NonUnitConstantTerm,
    Ring,
    Series,
    eisenstein,
    pentagonal_coefficients,
)
from .ntheory import NotInvertible


class ExprSyntaxError(ValueError):
    """Parse failure with byte offset and the set of expected tokens."""

    def __init__(self, message: str, offset: int, expected: set):
        super().__init__(f"{message} at offset {offset} (expected {sorted(expected)})")
        self.offset = offset
        self.expected = set(expected)


class NonUnitDenominator(ValueError):
    pass


class NonIntegralExponent(ValueError):
    pass


class PoleAtOrigin(ValueError):
    """The value has a genuine pole at q = 0 and is not a power series."""


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Div:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Eta:
    scale: int


@dataclass(frozen=True)
class Eis:
    weight: int
    scale: int


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class QMonomial:
    exponent: int


# ---------------------------------------------------------------- tokenizer

def _tokenize(text: str) -> list:
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
            tokens.append(("INT", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum()):
                j += 1
            tokens.append(("NAME", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i,
                              {"operator", "integer", "name"})
    tokens.append(("EOF", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, expected: set):
        tok = self.peek()
        if tok[0] != kind:
            raise ExprSyntaxError(f"unexpected {tok[1] or 'end of input'!r}",
                                  tok[2], expected)
        return self.advance()

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "EOF":
            raise ExprSyntaxError(f"trailing input {tok[1]!r}", tok[2],
                                  {"'+'", "'-'", "'*'", "'/'", "end of input"})
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self):
        if self.peek()[0] == "-":
            self.advance()
            inner = self.factor()
            if isinstance(inner, IntConst):
                return IntConst(-inner.value)
            return Mul(IntConst(-1), inner)
        node = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            node = Pow(node, self.signed_int())
        return node

    def signed_int(self) -> int:
        sign = 1
        if self.peek()[0] == "-":
            self.advance()
            sign = -1
        tok = self.expect("INT", {"integer"})
        return sign * int(tok[1])

    def posint(self, what: str) -> int:
        tok = self.expect("INT", {what})
        value = int(tok[1])
        if value < 1:
            raise ExprSyntaxError(f"{what} must be >= 1", tok[2], {what})
        return value

    def q_scale(self) -> int:
        """Parse 'q' with an optional '^' posint inside a function argument."""
        tok = self.expect("NAME", {"'q'"})
        if tok[1] != "q":
            raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2], {"'q'"})
        if self.peek()[0] == "^":
            self.advance()
            return self.posint("positive integer scale")
        return 1

    def atom(self):
        tok = self.peek()
        kind, value, off = tok
        if kind == "INT":
            self.advance()
            return IntConst(int(value))
        if kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")", {"')'"})
            return node
        if kind == "NAME":
            self.advance()
            if value == "q":
                if self.peek()[0] == "^":
                    self.advance()
                    return QMonomial(self.posint("positive integer exponent"))
                return QMonomial(1)
            if value == "eta":
                self.expect("(", {"'('"})
                scale = self.q_scale()
                self.expect(")", {"')'"})
                return Eta(scale)
            if value.startswith("E") and value[1:].isdigit():
                weight = int(value[1:])
                if weight < 2 or weight % 2:
                    raise ExprSyntaxError("Eisenstein weight must be even and positive",
                                          off, {"even positive weight"})
                self.expect("(", {"'('"})
                scale = self.q_scale()
                self.expect(")", {"')'"})
                return Eis(weight, scale)
            raise ExprSyntaxError(f"unknown name {value!r}", off,
                                  {"'eta'", "'E<weight>'", "'q'"})
        raise ExprSyntaxError(f"unexpected {value or 'end of input'!r}", off,
                              {"integer", "'('", "'eta'", "'E<weight>'", "'q'"})


def parse(text: str):
    """Parse an expression into its AST."""
    return _Parser(text).parse()


# ------------------------------------------------------------------ printer

def print_expr(node) -> str:
    def render(n, parent_prec):
        if isinstance(n, IntConst):
            s = str(n.value)
            return f"({s})" if n.value < 0 and parent_prec >= 3 else s
        if isinstance(n, QMonomial):
            if n.exponent == 1:
                return "q"
            s = f"q^{n.exponent}"
            # a factor admits a single caret, so q^k as a power base
            # must be parenthesized
            return f"({s})" if parent_prec >= 3 else s
        if isinstance(n, Eta):
            arg = "q" if n.scale == 1 else f"q^{n.scale}"
            return f"eta({arg})"
        if isinstance(n, Eis):
            arg = "q" if n.scale == 1 else f"q^{n.scale}"
            return f"E{n.weight}({arg})"
        if isinstance(n, Pow):
            s = f"{render(n.base, 4)}^{n.exponent}"
            return f"({s})" if parent_prec >= 4 else s
        ops = {Add: ("+", 1), Sub: ("-", 1), Mul: ("*", 2), Div: ("/", 2)}
        sym, prec = ops[type(n)]
        left = render(n.left, prec)
        # the right side of '-' and '/' binds tighter
        right = render(n.right, prec + (0 if type(n) in (Add, Mul) else 1))
        out = f"{left}{sym}{right}"
        return f"({out})" if prec < parent_prec else out

    return render(node, 0)


# ---------------------------------------------------------------- evaluator

def _sparse_pairs(coeffs: list) -> list:
    return [(j, s) for j, s in enumerate(coeffs) if s]


def _sparse_mul(dense: list, pairs: list, modulus: int) -> list:
    L = len(dense)
    out = [0] * L
    for j, s in pairs:
        if j >= L:
            break
        seg = dense[: L - j]
        if s == 1:
            out[j:] = [o + d for o, d in zip(out[j:], seg)]
        elif s == -1:
            out[j:] = [o - d for o, d in zip(out[j:], seg)]
        else:
            out[j:] = [o + s * d for o, d in zip(out[j:], seg)]
    return [v % modulus for v in out] if modulus else out


def _sparse_div(dense: list, pairs: list, modulus: int) -> list:
    # pairs must start with (0, 1); recurrence c[n] = a[n] - sum s_j c[n-j]
    L = len(dense)
    tail = [(j, s) for j, s in pairs if j > 0]
    c = [0] * L
    for n in range(L):
        s = dense[n]
        for j, sj in tail:
            if j > n:
                break
            s -= sj * c[n - j]
        c[n] = s % modulus if modulus else s
    return c


class _Val:
    """Evaluated subexpression: a frac-free series plus an offset in 24ths."""

    __slots__ = ("series", "off24")

    def __init__(self, series: Series, off24: int):
        self.series = series
        self.off24 = off24


def _slack24(node) -> int:
    """Upper bound on |offset| in 24ths that the subtree can produce.

    q-monomials count in full: dividing by q^e shifts the lattice by e."""
    if isinstance(node, Eta):
        return node.scale
    if isinstance(node, QMonomial):
        return 24 * node.exponent
    if isinstance(node, (IntConst, Eis)):
        return 0
    if isinstance(node, Pow):
        return _slack24(node.base) * abs(node.exponent)
    if isinstance(node, (Add, Sub)):
        return max(_slack24(node.left), _slack24(node.right))
    return _slack24(node.left) + _slack24(node.right)


def _align(a: _Val, b: _Val) -> tuple:
    diff = a.off24 - b.off24
    if diff % 24:
        raise ExponentMismatch(
            f"cannot add values with offsets {a.off24}/24 and {b.off24}/24"
        )
    u = diff // 24
    if u > 0:
        return _Val(a.series.shifted(u), b.off24), b
    if u < 0:
        return a, _Val(b.series.shifted(-u), a.off24)
    return a, b


def _invert_with_valuation(val: _Val, ring: Ring) -> _Val:
    coeffs = val.series.coeffs
    v = next((i for i, c in enumerate(coeffs) if c), None)
    if v is None:
        raise NonUnitDenominator("denominator vanishes to working precision")
    shifted = Series(ring, coeffs[v:])
    if not ring.is_unit(shifted.coeffs[0]):
        if ring.modulus:
            raise NotInvertible(
                f"leading coefficient {shifted.coeffs[0]} not invertible mod {ring.modulus}"
            )
        raise NonUnitDenominator(
            f"leading coefficient {shifted.coeffs[0]} is not a unit"
        )
    return _Val(shifted.invert(), -(val.off24 + 24 * v))


def _eval(node, prec: int, ring: Ring) -> _Val:
    m = ring.modulus
    if isinstance(node, IntConst):
        return _Val(Series.constant(ring, node.value, prec), 0)
    if isinstance(node, QMonomial):
        return _Val(Series.monomial(ring, node.exponent, prec), 0)
    if isinstance(node, Eta):
        return _Val(Series(ring, pentagonal_coefficients(node.scale, prec)),
                    node.scale)
    if isinstance(node, Eis):
        inner = eisenstein(node.weight, (prec + node.scale - 1) // node.scale, ring)
        coeffs = [0] * prec
        for i, c in enumerate(inner.coeffs):
            if i * node.scale >= prec:
                break
            coeffs[i * node.scale] = c
        return _Val(Series(ring, coeffs), 0)
    if isinstance(node, (Add, Sub)):
        a, b = _align(_eval(node.left, prec, ring), _eval(node.right, prec, ring))
        s = a.series.add(b.series) if isinstance(node, Add) else a.series.sub(b.series)
        return _Val(s, a.off24)
    if isinstance(node, Mul):
        a = _eval(node.left, prec, ring)
        b = _eval(node.right, prec, ring)
        return _Val(a.series.mul(b.series), a.off24 + b.off24)
    if isinstance(node, Div):
        a = _eval(node.left, prec, ring)
        inv = _invert_with_valuation(_eval(node.right, prec, ring), ring)
        return _Val(a.series.mul(inv.series), a.off24 + inv.off24)
    if isinstance(node, Pow):
        e = node.exponent
        if e == 0:
            return _Val(Series.one(ring, prec), 0)
        if isinstance(node.base, Eta):
            pairs = _sparse_pairs(pentagonal_coefficients(node.base.scale, prec))
            coeffs = [1] + [0] * (prec - 1)
            op = _sparse_mul if e > 0 else _sparse_div
            for _ in range(abs(e)):
                coeffs = op(coeffs, pairs, m)
            return _Val(Series(ring, coeffs), node.base.scale * e)
        base = _eval(node.base, prec, ring)
        if e > 0:
            return _Val(base.series.pow(e), base.off24 * e)
        inv = _invert_with_valuation(base, ring)
        return _Val(inv.series.pow(-e), inv.off24 * -e)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(ast, prec: int, ring: Ring = EXACT) -> Series:
    """Evaluate an AST to a truncated series with exactly `prec` coefficients.

    The net fractional exponent must come out integral; it is applied as a
    q-shift.  A genuine pole at q = 0 raises PoleAtOrigin.
    """
    if prec < 1:
        raise ValueError("prec must be positive")
    pad = _slack24(ast) // 24 + 1
    for _ in range(4):
        try:
            val = _eval(ast, prec + pad, ring)
        except NonUnitConstantTerm as exc:
            raise NonUnitDenominator(str(exc)) from exc
        if val.off24 % 24:
            raise NonIntegralExponent(
                f"net exponent {val.off24}/24 is not an integer"
            )
        shift = val.off24 // 24
        series = val.series
        if shift < 0:
            if series.prec < -shift + 1:
                pad += -shift + 1
                continue
            if any(series.coeffs[:-shift]):
                raise PoleAtOrigin(f"value has a pole of order {-shift} at q = 0")
            series = series.shifted(shift)
        elif shift > 0:
            series = series.shifted(shift)
        if series.prec >= prec:
            return series.truncate(prec)
        pad += prec - series.prec
    raise RuntimeError("internal precision bookkeeping failed to converge")


__all__ = [
    "Add", "Div", "Eis", "Eta", "ExprSyntaxError", "IntConst", "Mul",
    "NonIntegralExponent", "NonUnitDenominator", "PoleAtOrigin", "Pow",
    "QMonomial", "Sub", "evaluate", "parse", "print_expr",
]
