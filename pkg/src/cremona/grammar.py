"""Text grammar for polynomials, map tuples, families and points.

Polynomials use variables ``x0..x9`` (and ``a0..a9`` for family
parameters), integer or ``num/den`` coefficients, ``^`` for powers, an
optional ``*``, ``+``/``-`` and parentheses::

    x0^2 + 3/2*x1*x2
    x0*(x2 + x0)

A tuple is ``[p0 : p1 : ... : pn]``; a family is
``[p0 : ... : pn] over {c1, c2} params (a0..ak)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .fields import Field
from .polyring import HomogeneousPoly, NonHomogeneousError, _add, _clean, _mul, _one, _sub

MAX_VARS = 10


class ParseError(ValueError):
    """Malformed input text; the message names the offending token."""


_TOKEN = re.compile(r"\s*(?:(\d+)|([xa])(\d+)|(\^)|(\*)|(/)|(\+)|(-)|(\()|(\))|(\S))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.end() == pos:
            break
        num, vkind, vidx, caret, star, slash, plus, minus, lp, rp, bad = m.groups()
        start = m.start(0) + len(m.group(0)) - len(m.group(0).lstrip())
        if bad is not None:
            raise ParseError(f"unexpected character {bad!r} at position {start} in {text!r}")
        if num is not None:
            out.append(("num", int(num), start))
        elif vkind is not None:
            out.append((vkind, int(vidx), start, f"{vkind}{vidx}"))
        else:
            tok = caret or star or slash or plus or minus or lp or rp
            out.append((tok, tok, start))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, field: Field, nx: int, na: int):
        self.text = text
        self.field = field
        self.nx = nx
        self.na = na
        self.nvars = nx + na
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def fail(self, msg: str, tok=None):
        if tok is None:
            tok = self.peek()
        if tok is None:
            raise ParseError(f"{msg} at end of input {self.text!r}")
        shown = tok[3] if len(tok) > 3 else tok[1]
        raise ParseError(f"{msg}: token {str(shown)!r} at position {tok[2]} in {self.text!r}")

    def const(self, c):
        try:
            c = self.field(c)
        except ZeroDivisionError as exc:
            raise ParseError(f"coefficient {c} is undefined over {self.field}: {exc}") from None
        return {(0,) * self.nvars: c} if c else {}

    def parse(self):
        if not self.toks:
            raise ParseError(f"empty polynomial {self.text!r}")
        r = self.expr()
        if self.peek() is not None:
            self.fail("unexpected token")
        return r

    def expr(self):
        p = self.field.p
        t = self.peek()
        if t is not None and t[0] in "+-":
            self.take()
            r = self.term()
            if t[0] == "-":
                r = _sub({}, r, p)
        else:
            r = self.term()
        while (t := self.peek()) is not None and t[0] in "+-":
            self.take()
            rhs = self.term()
            r = _add(r, rhs, p) if t[0] == "+" else _sub(r, rhs, p)
        return r

    def term(self):
        r = self.power()
        while (t := self.peek()) is not None and t[0] in ("*", "/", "num", "x", "a", "("):
            if t[0] == "/":
                self.take()
                den = self.take()
                if den is None or den[0] != "num" or den[1] == 0:
                    self.fail("can only divide by a nonzero integer", den)
                r = _mul(r, self.const(Fraction(1, den[1])), self.field.p)
                continue
            if t[0] == "*":
                self.take()
            r = _mul(r, self.power(), self.field.p)
        return r

    def power(self):
        base = self.atom()
        t = self.peek()
        if t is not None and t[0] == "^":
            self.take()
            e = self.take()
            if e is None or e[0] != "num":
                self.fail("exponent must be a non-negative integer", e)
            r = _one(self.nvars, self.field.p)
            for _ in range(e[1]):
                r = _mul(r, base, self.field.p)
            return r
        return base

    def atom(self):
        t = self.take()
        if t is None:
            self.fail("expected a term")
        kind = t[0]
        if kind in "+-":
            r = self.power()
            return _sub({}, r, self.field.p) if kind == "-" else r
        if kind == "num":
            nxt = self.peek()
            if nxt is not None and nxt[0] == "/":
                self.take()
                den = self.take()
                if den is None or den[0] != "num":
                    self.fail("denominator must be an integer", den)
                if den[1] == 0:
                    self.fail("zero denominator", den)
                return self.const(Fraction(t[1], den[1]))
            return self.const(t[1])
        if kind in ("x", "a"):
            idx = t[1]
            bound = self.nx if kind == "x" else self.na
            if idx >= bound:
                self.fail(f"variable out of range (allowed {kind}0..{kind}{bound - 1})", t)
            e = [0] * self.nvars
            e[idx if kind == "x" else self.nx + idx] = 1
            return {tuple(e): self.field.one}
        if kind == "(":
            r = self.expr()
            close = self.take()
            if close is None or close[0] != ")":
                self.fail("expected ')'", close)
            return r
        self.fail("unexpected token", t)


def parse_terms(text: str, field: Field, nx: int, na: int = 0) -> dict:
    return _clean(_Parser(text, field, nx, na).parse(), field.p)


def parse_poly(text: str, field: Field, nvars: int, degree: int | None = None,
               nparams: int = 0) -> HomogeneousPoly:
    """Parse a homogeneous polynomial in x0..x{nvars-1} (plus a0.. if ``nparams``)."""
    if not 1 <= nvars <= MAX_VARS or not 0 <= nparams <= MAX_VARS:
        raise ParseError(f"unsupported number of variables {nvars}")
    terms = parse_terms(text, field, nvars, nparams)
    try:
        return HomogeneousPoly(field, nvars + nparams, terms, degree, _trusted=True)
    except (NonHomogeneousError, ValueError) as exc:
        raise ParseError(f"{text!r}: {exc}") from None


def _split_top(body: str, sep: str, what: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced ')' in {what}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _bracket_body(text: str, what: str) -> tuple[str, str]:
    s = text.strip()
    if not s.startswith("["):
        raise ParseError(f"{what} must start with '[': got {s[:20]!r}")
    close = s.find("]")
    if close < 0:
        raise ParseError(f"{what} is missing the closing ']'")
    return s[1:close], s[close + 1:]


def parse_components(text: str, field: Field, n: int, nparams: int = 0):
    body, rest = _bracket_body(text, "tuple")
    parts = _split_top(body, ":", "tuple")
    if len(parts) != n + 1:
        raise ParseError(f"tuple has {len(parts)} components, expected n+1 = {n + 1}")
    polys = []
    for s in parts:
        if not s.strip():
            raise ParseError("empty tuple component")
        polys.append(parse_poly(s, field, n + 1, nparams=nparams))
    degs = {q.degree for q in polys if q.terms}
    if len(degs) > 1:
        raise ParseError(f"tuple components have different degrees {sorted(degs)}")
    return polys, rest


def parse_tuple(text: str, field: Field, n: int):
    """Parse ``[p0 : ... : pn]`` into a MapTuple."""
    from .wspace import MapTuple
    polys, rest = parse_components(text, field, n)
    if rest.strip():
        raise ParseError(f"trailing text after tuple: {rest.strip()!r}")
    if not any(q.terms for q in polys):
        raise ParseError("tuple has all components zero")
    return MapTuple(polys)


_FAMILY_TAIL = re.compile(r"^\s*(?:over\s*\{(?P<cons>[^}]*)\})?\s*params\s*\(\s*a0\s*\.\.\s*a(?P<k>\d)\s*\)\s*$")


def parse_family(text: str, field: Field, n: int):
    """Parse ``[p0 : ... : pn] over {c1, ...} params (a0..ak)``."""
    from .families import ParametricFamily
    body, rest = _bracket_body(text, "family")
    m = _FAMILY_TAIL.match(rest)
    if m is None:
        raise ParseError(f"expected 'over {{...}} params (a0..ak)' after the tuple, got {rest.strip()!r}")
    na = int(m.group("k")) + 1
    polys, _ = parse_components("[" + body + "]", field, n, nparams=na)
    cons = []
    if m.group("cons") and m.group("cons").strip():
        for c in _split_top(m.group("cons"), ",", "constraints"):
            q = parse_poly(c, field, n + 1, nparams=na)
            if any(e[i] for e in q.terms for i in range(n + 1)):
                raise ParseError(f"constraint {c.strip()!r} involves x variables")
            cons.append(q.restrict({}, list(range(n + 1, n + 1 + na))))
    return ParametricFamily(n=n, nparams=na, components=tuple(polys), constraints=tuple(cons))


def parse_point(text: str, field: Field, size: int | None = None) -> tuple:
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    parts = re.split(r"[:,]", s)
    try:
        pt = tuple(field(Fraction(x.strip())) for x in parts)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad point {text!r}") from None
    if size is not None and len(pt) != size:
        raise ParseError(f"point {text!r} has {len(pt)} coordinates, expected {size}")
    return pt


# ---------------------------------------------------------------------------
# printing


def _var_names(nvars: int, nx: int | None = None) -> list[str]:
    if nx is None:
        nx = nvars
    return [f"x{i}" for i in range(nx)] + [f"a{j}" for j in range(nvars - nx)]


def format_terms(terms: dict, field: Field, names: Sequence[str]) -> str:
    if not terms:
        return "0"
    out = []
    for e, c in sorted(terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True):
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        neg = field.p == 0 and c < 0
        a = -c if neg else c
        cs = field.format(a)
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = f"{cs}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def format_poly(p: HomogeneousPoly, nx: int | None = None) -> str:
    return format_terms(p.terms, p.field, _var_names(p.nvars, nx))


def format_tuple(components: Sequence[HomogeneousPoly], nx: int | None = None) -> str:
    return "[" + " : ".join(format_poly(c, nx) for c in components) + "]"


def format_point(pt: Sequence, field: Field) -> str:
    return "(" + ":".join(field.format(x) for x in pt) + ")"
