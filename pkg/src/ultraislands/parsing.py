"""Text grammars for scalars, rational functions, disks and Berkovich points.

Expressions accept numbers, `pi`, `z`, `+ - * / ^` and parentheses, so
`1/3 + 2*pi^2`, `z^2 + 3*z + 27` and `(z^4 - 81)/(z^3)` all parse.
Disks are written `D(a, p^-q)`, `Dbar(a, p^-q)`, `comp D(..)`, `comp Dbar(..)`;
points are `inf` or a scalar; type II points are `nu(a, p^-q)`.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .field import FieldConfig, FieldError, RamifiedScalar, format_scalar, oo, vp


class ParseError(FieldError, ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|(pi|z|p)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[str]:
    text = text.replace("−", "-").replace("π", "pi")
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:]!r}")
        tok = m.group(1) or m.group(2) or m.group(3)
        out.append("^" if tok == "**" else tok)
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, field: FieldConfig, allow_z: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field
        self.allow_z = allow_z

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'token'}, got {tok!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        val = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.peek()!r}")
        return val

    def expr(self):
        val = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                val = val * rhs
            else:
                if _is_zero(rhs):
                    raise ParseError("division by zero")
                val = val / rhs
        return val

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            if self.peek() == "(":
                self.take()
                if self.peek() == "-":
                    self.take()
                    sign = -sign
                n = self._int()
                self.take(")")
            else:
                n = self._int()
            n *= sign
            if n < 0:
                if _is_zero(base):
                    raise ParseError("zero to a negative power")
                return (1 / base) ** (-n)
            return base ** n
        return base

    def _int(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise ParseError(f"exponent must be an integer, got {tok!r}")
        return int(tok)

    def atom(self):
        tok = self.take()
        F = self.field
        if tok.isdigit():
            return RamifiedScalar(F, (int(tok),))
        if tok == "pi":
            return F.pi
        if tok == "p":
            return RamifiedScalar(F, (F.p,))
        if tok == "z":
            if not self.allow_z:
                raise ParseError("variable z not allowed in a scalar")
            from .algebra import RatFunc
            return RatFunc.z(F)
        if tok == "(":
            val = self.expr()
            self.take(")")
            return val
        raise ParseError(f"unexpected token {tok!r}")


def _is_zero(x) -> bool:
    if isinstance(x, RamifiedScalar):
        return x.is_zero()
    return x.is_zero()


def parse_scalar(text: str, field: FieldConfig) -> RamifiedScalar:
    return _Parser(str(text), field, allow_z=False).parse()


def parse_ratfunc(text: str, field: FieldConfig):
    from .algebra import RatFunc
    val = _Parser(str(text), field, allow_z=True).parse()
    return RatFunc.coerce(field, val)


def parse_rational(text) -> Fraction:
    try:
        return Fraction(str(text).strip().replace("−", "-"))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}") from exc


def parse_log_radius(text: str, field: FieldConfig) -> Fraction:
    """`p^-q`, `p^q`, `P^-q` with P the prime, or a power of p written out."""
    t = text.strip().replace(" ", "").replace("−", "-")
    m = re.fullmatch(r"(p|\d+)\^\(?(-?)\(?(-?[0-9/]+)\)?\)?", t)
    if m:
        base = m.group(1)
        if base != "p" and int(base) != field.p:
            raise ParseError(f"radius base {base} differs from p={field.p}")
        e = parse_rational(m.group(3))
        return e if m.group(2) == "-" else -e
    r = parse_scalar(t, field)
    if not r.is_rational() or r.coeffs[0] <= 0:
        raise ParseError(f"radius {text!r} must be a positive power of p")
    e = vp(r.coeffs[0], field.p)
    if Fraction(field.p) ** int(e) != r.coeffs[0]:
        raise ParseError(f"radius {text!r} is not a power of p")
    return -e


def _split_args(inner: str) -> list[str]:
    depth, parts, cur = 0, [], ""
    for ch in inner:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [s.strip() for s in parts]


_DISK = re.compile(r"\s*(comp\s+)?(Dbar|D)\s*\((.*)\)\s*$", re.S)


def parse_disk(text: str, field: FieldConfig):
    from .berkovich import ProjDisk
    m = _DISK.match(text)
    if not m:
        raise ParseError(f"bad disk {text!r}")
    args = _split_args(m.group(3))
    if len(args) != 2:
        raise ParseError(f"disk needs center and radius: {text!r}")
    center = parse_scalar(args[0], field)
    q = parse_log_radius(args[1], field)
    complement = bool(m.group(1))
    closed_base = m.group(2) == "Dbar"
    # the complement of a closed disk is open, and vice versa
    is_open = (not closed_base) != complement
    return ProjDisk(center, q, open=is_open, complement=complement)


def parse_point(text: str, field: FieldConfig):
    t = text.strip()
    if t in ("inf", "oo", "∞"):
        return oo
    return parse_scalar(t, field)


def parse_berkpoint(text: str, field: FieldConfig):
    from .berkovich import TypeI, TypeII
    t = text.strip()
    m = re.fullmatch(r"nu\s*\((.*)\)", t, re.S)
    if m:
        args = _split_args(m.group(1))
        if len(args) != 2:
            raise ParseError(f"bad point {text!r}")
        return TypeII(parse_scalar(args[0], field), parse_log_radius(args[1], field))
    return TypeI(parse_point(t, field))


# -- formatting ----------------------------------------------------------------

def format_poly(f) -> str:
    if f.is_zero():
        return "0"
    terms = []
    for i, c in enumerate(f.coeffs):
        if c.is_zero():
            continue
        s = format_scalar(c)
        if i == 0:
            terms.append(s)
            continue
        mono = "z" if i == 1 else f"z^{i}"
        if s == "1":
            terms.append(mono)
        elif s == "-1":
            terms.append("-" + mono)
        elif c.is_rational():
            terms.append(f"{s}*{mono}")
        else:
            terms.append(f"({s})*{mono}")
    terms.reverse()
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") and not t.startswith("-(") else " + " + t
    return out


def format_ratfunc(f) -> str:
    return f"({format_poly(f.num)})/({format_poly(f.den)})"


def format_point(x) -> str:
    return "inf" if x is oo else format_scalar(x)


def format_disk(d) -> str:
    base = "D" if (d.open != d.complement) else "Dbar"
    s = f"{base}({format_scalar(d.center)}, p^-({d.log_radius}))"
    return "comp " + s if d.complement else s


def format_berkpoint(nu) -> str:
    from .berkovich import TypeII
    if isinstance(nu, TypeII):
        return f"nu({format_scalar(nu.center)}, p^-({nu.log_radius}))"
    return format_point(nu.point)
