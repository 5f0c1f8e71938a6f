"""
Parser for function-field expressions.

Grammar:
    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('-')? base ('^' exponent)?
    base   := integer | 'x' | 'u' | 't' | '(' expr ')'
    exponent := ('-')? integer | '(' ('-')? integer ')'

Integers reduce mod p; 't' is the residue class of the extension modulus
(only when d > 1). 'x' and 'u' both name the single indeterminate and may
not be mixed. Unary minus and negative exponents extend the base grammar.
"""
import re
from typing import List, Optional, Tuple

from utils.validation import ExpressionSyntaxError, ValidationError

from .finite_field import FieldError, FieldSpec
from .rational_function import RationalFunction

TOKEN = re.compile(r"\s*(?:(\d+)|([xut])|(\S))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    position = 0
    while position < len(text):
        match = TOKEN.match(text, position)
        if match is None:
            break
        start = match.start(match.lastindex)
        number, name, symbol = match.groups()
        if number is not None:
            tokens.append(('int', number, start))
        elif name is not None:
            tokens.append(('name', name, start))
        elif symbol in "+-*/^(),[]":
            tokens.append(('op', symbol, start))
        else:
            raise ExpressionSyntaxError(f"unexpected character {symbol!r}", start, text)
        position = match.end()
    tokens.append(('end', '', len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, spec: FieldSpec):
        self.text = text
        self.spec = spec
        self.tokens = _tokenize(text)
        self.index = 0
        self.variable: Optional[str] = None

    @property
    def current(self) -> Tuple[str, str, int]:
        return self.tokens[self.index]

    def error(self, message: str):
        raise ExpressionSyntaxError(message, self.current[2], self.text)

    def accept(self, op: str) -> bool:
        kind, value, _ = self.current
        if kind == 'op' and value == op:
            self.index += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            found = self.current[1] or "end of input"
            self.error(f"expected {op!r}, found {found!r}")

    def integer(self) -> int:
        kind, value, _ = self.current
        if kind != 'int':
            self.error("expected an integer")
        self.index += 1
        return int(value)

    def expr(self) -> RationalFunction:
        value = self.term()
        while True:
            if self.accept('+'):
                value = value + self.term()
            elif self.accept('-'):
                value = value - self.term()
            else:
                return value

    def term(self) -> RationalFunction:
        value = self.factor()
        while True:
            if self.accept('*'):
                value = value * self.factor()
            elif self.accept('/'):
                position = self.current[2]
                divisor = self.factor()
                if divisor.is_zero():
                    raise ValidationError(f"division by the zero polynomial at position {position} in {self.text!r}")
                value = value / divisor
            else:
                return value

    def factor(self) -> RationalFunction:
        if self.accept('-'):
            return -self.factor()
        value = self.base()
        if self.accept('^'):
            exponent = self.exponent()
            if exponent < 0 and value.is_zero():
                self.error("negative power of zero")
            value = value ** exponent
        return value

    def exponent(self) -> int:
        if self.accept('('):
            sign = -1 if self.accept('-') else 1
            value = sign * self.integer()
            self.expect(')')
            return value
        sign = -1 if self.accept('-') else 1
        return sign * self.integer()

    def base(self) -> RationalFunction:
        kind, value, position = self.current
        if kind == 'int':
            self.index += 1
            return RationalFunction.constant(self.spec, int(value))
        if kind == 'name':
            self.index += 1
            if value == 't':
                if self.spec.d == 1:
                    raise ExpressionSyntaxError("'t' is only defined when d > 1", position, self.text)
                return RationalFunction.constant(self.spec, self.spec.gen())
            if self.variable is not None and self.variable != value:
                raise ExpressionSyntaxError(
                    f"cannot mix the variables {self.variable!r} and {value!r}", position, self.text
                )
            self.variable = value
            return RationalFunction.x(self.spec)
        if self.accept('('):
            inner = self.expr()
            self.expect(')')
            return inner
        found = value or "end of input"
        self.error(f"unexpected {found!r}")

    def finish(self):
        if self.current[0] != 'end':
            self.error(f"unexpected {self.current[1]!r}")


def parse_rational(text: str, spec: FieldSpec) -> RationalFunction:
    """
    Parse an expression into a canonical rational function.

    Args:
        text: Expression in x (or u), e.g. "x^2/(x-1)"
        spec: Working field

    Returns:
        RationalFunction with monic denominator and coprime parts

    Raises:
        ExpressionSyntaxError: on a grammar violation (carries the position)
        ValidationError: on division by the zero polynomial

    Example:
        >>> str(parse_rational("x^2/(x-1)", FieldSpec(3)))
        'x^2/(x+2)'
    """
    parser = _Parser(text, spec)
    if parser.current[0] == 'end':
        raise ExpressionSyntaxError("empty expression", 0, text)
    try:
        value = parser.expr()
    except FieldError as exc:
        raise ValidationError(f"{exc} in {text!r}") from exc
    parser.finish()
    return value


def parse_witt_literal(text: str, spec: FieldSpec) -> List[RationalFunction]:
    """
    Parse a Witt vector literal '[' expr (',' expr)* ']' into its components.

    Example:
        >>> parse_witt_literal("[0, 1/u]", FieldSpec(2))
    """
    parser = _Parser(text, spec)
    parser.expect('[')
    components = [parser.expr()]
    while parser.accept(','):
        components.append(parser.expr())
    parser.expect(']')
    parser.finish()
    return components
