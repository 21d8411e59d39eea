"""Text and JSON front end for polynomials, series and ODEs.

Expressions use the grammar in docs/grammar.ebnf: ``^`` binds tighter than
unary minus, which binds tighter than ``*`` and ``/``, then ``+`` and ``-``.
Literals are integers, ``p/q`` through division, and the unit ``i``; decimal
literals are refused so that nothing inexact slips in.
"""
from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import NonPolynomial, ParseError, SchemaError
from .qi import ONE, ZERO, GaussianRational, QiPolynomial, RationalFunction
from .series import GSeries

__all__ = [
    "ExprAst",
    "parse_expr",
    "parse_poly",
    "parse_rational",
    "parse_ode",
    "parse_series",
    "parse_path",
    "parse_gaussian",
    "gaussian_to_json",
    "gaussian_from_json",
    "poly_to_json",
    "poly_from_json",
    "series_to_json",
    "series_from_json",
    "ode_to_json",
    "ode_from_json",
    "path_to_json",
    "series_to_csv",
    "values_from_csv",
]

VARIABLES = ("X", "x", "z")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<decimal>\d+\.\d*|\.\d+)
  | (?P<int>\d+)
  | (?P<deriv>y'*)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int


def _tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", (pos, pos + 1), text)
        kind = m.lastgroup
        if kind == "decimal":
            raise ParseError("decimal literals are not exact; write p/q", m.span(), text)
        if kind != "ws":
            if kind == "name" and m.group() == "y":
                kind = "deriv"
            out.append(Token(kind, m.group(), m.start(), m.end()))
        pos = m.end()
    out.append(Token("eof", "", len(text), len(text)))
    return out


@dataclass(frozen=True)
class ExprAst:
    """Parsed expression node; ``span`` is the half-open source range."""

    kind: str  # number | i | var | deriv | neg | add | sub | mul | div | pow
    span: tuple[int, int]
    children: tuple["ExprAst", ...] = ()
    value: Any = None


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def take(self, kind=None, text=None) -> Token:
        t = self.tok
        if (kind and t.kind != kind) or (text and t.text != text):
            want = text or kind
            raise ParseError(f"expected {want!r}, found {t.text or 'end of input'!r}", (t.start, t.end), self.text)
        self.i += 1
        return t

    def at(self, text) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expr(self) -> ExprAst:
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.take().text
            rhs = self.term()
            node = ExprAst("add" if op == "+" else "sub", (node.span[0], rhs.span[1]), (node, rhs))
        return node

    def term(self) -> ExprAst:
        node = self.unary()
        while self.at("*") or self.at("/"):
            op = self.take().text
            rhs = self.unary()
            node = ExprAst("mul" if op == "*" else "div", (node.span[0], rhs.span[1]), (node, rhs))
        return node

    def unary(self) -> ExprAst:
        if self.at("-") or self.at("+"):
            t = self.take()
            inner = self.unary()
            if t.text == "+":
                return inner
            return ExprAst("neg", (t.start, inner.span[1]), (inner,))
        return self.power()

    def power(self) -> ExprAst:
        base = self.atom()
        if self.at("^"):
            self.take()
            if self.at("-"):
                t = self.tok
                raise NonPolynomial("negative exponent", (t.start, t.end), self.text)
            if self.at("(") or self.tok.kind in ("name", "deriv"):
                t = self.tok
                raise NonPolynomial("exponent must be a nonnegative integer literal", (t.start, t.end), self.text)
            e = self.take("int")
            if self.at("^"):
                t = self.tok
                raise ParseError("chained powers need parentheses", (t.start, t.end), self.text)
            return ExprAst("pow", (base.span[0], e.end), (base,), int(e.text))
        return base

    def atom(self) -> ExprAst:
        t = self.tok
        if t.kind == "int":
            self.take()
            return ExprAst("number", (t.start, t.end), value=int(t.text))
        if t.kind == "name":
            self.take()
            if t.text == "i":
                return ExprAst("i", (t.start, t.end))
            if t.text in VARIABLES:
                return ExprAst("var", (t.start, t.end), value=t.text)
            raise ParseError(f"unknown name {t.text!r}", (t.start, t.end), self.text)
        if t.kind == "deriv":
            self.take()
            return ExprAst("deriv", (t.start, t.end), value=len(t.text) - 1)
        if self.at("("):
            self.take()
            node = self.expr()
            close = self.take("op", ")")
            return ExprAst(node.kind, (t.start, close.end), node.children, node.value)
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", (t.start, t.end), self.text)


def parse_expr(text: str) -> ExprAst:
    p = _Parser(text)
    node = p.expr()
    if p.tok.kind != "eof":
        t = p.tok
        raise ParseError(f"trailing input {t.text!r}", (t.start, t.end), text)
    return node


# -- evaluation --------------------------------------------------------------
# Values are RationalFunction, or for ODE text a dict {derivative order: RationalFunction}.


def _const(c) -> RationalFunction:
    return RationalFunction(QiPolynomial([c]), reduce=False)


def _eval(node: ExprAst, text: str, linear: bool = False):
    k = node.kind
    if k == "number":
        return _const(GaussianRational(node.value))
    if k == "i":
        return _const(GaussianRational(0, 1))
    if k == "var":
        return RationalFunction(QiPolynomial([ZERO, ONE]), reduce=False)
    if k == "deriv":
        if not linear:
            raise ParseError("y is only allowed in ODE text", node.span, text)
        return {node.value: _const(ONE)}
    vals = [_eval(ch, text, linear) for ch in node.children]
    if k == "neg":
        v = vals[0]
        return {j: -c for j, c in v.items()} if isinstance(v, dict) else -v
    if k in ("add", "sub"):
        a, b = vals
        if isinstance(a, dict) or isinstance(b, dict):
            if not (isinstance(a, dict) and isinstance(b, dict)):
                raise ParseError("every ODE term must contain y or one of its derivatives", node.span, text)
            out = dict(a)
            for j, c in b.items():
                out[j] = out.get(j, _const(ZERO)) + (c if k == "add" else -c)
            return out
        return a + b if k == "add" else a - b
    if k == "mul":
        a, b = vals
        if isinstance(a, dict) and isinstance(b, dict):
            raise ParseError("the equation must be linear in y", node.span, text)
        if isinstance(a, dict):
            return {j: c * b for j, c in a.items()}
        if isinstance(b, dict):
            return {j: a * c for j, c in b.items()}
        return a * b
    if k == "div":
        a, b = vals
        if isinstance(b, dict):
            raise ParseError("cannot divide by y", node.span, text)
        if b.is_zero():
            raise ParseError("division by zero", node.children[1].span, text)
        if isinstance(a, dict):
            return {j: c / b for j, c in a.items()}
        return a / b
    if k == "pow":
        (a,) = vals
        if isinstance(a, dict):
            raise ParseError("the equation must be linear in y", node.span, text)
        return a**node.value
    raise ParseError(f"unknown node {k}", node.span, text)


def _poly_check(node: ExprAst, text: str):
    # NonPolynomial when a variable reaches a denominator
    if node.kind == "div" and _has_var(node.children[1]):
        raise NonPolynomial("variable in a denominator", node.children[1].span, text)
    for ch in node.children:
        _poly_check(ch, text)


def _has_var(node: ExprAst) -> bool:
    return node.kind == "var" or any(_has_var(c) for c in node.children)


def parse_rational(text: str) -> RationalFunction:
    node = parse_expr(text)
    return RationalFunction(*_split(_eval(node, text)))


def _split(rf: RationalFunction):
    return rf.num, rf.den


def parse_poly(text: str) -> QiPolynomial:
    """Exact polynomial in X (x and z are accepted as aliases)."""
    node = parse_expr(text)
    _poly_check(node, text)
    rf = _eval(node, text)
    if rf.den.degree() > 0:
        raise NonPolynomial("not a polynomial", node.span, text)
    return rf.num.scale(rf.den.coeffs[0].inverse())


def parse_gaussian(text: str) -> GaussianRational:
    p = parse_poly(text)
    if p.degree() > 0:
        raise ParseError("expected a constant", (0, len(text)), text)
    return p.coeffs[0] if p.coeffs else ZERO


def parse_ode(src):
    """ODE from text like "(1+X^2)*y'' + 2*X*y' = 0", or from ODE JSON."""
    from .ode import FuchsianODE

    if isinstance(src, dict):
        return ode_from_json(src)
    text = src.strip()
    if text.startswith("{"):
        return ode_from_json(json.loads(text))
    if text.count("=") != 1:
        raise ParseError("expected exactly one '='", (0, len(text)), text)
    lhs_text, rhs_text = text.split("=")
    rhs_node = parse_expr(rhs_text)
    rhs = _eval(rhs_node, rhs_text)
    if isinstance(rhs, dict) or not rhs.is_zero():
        off = len(lhs_text) + 1
        raise ParseError("right-hand side must be 0", (off + rhs_node.span[0], off + rhs_node.span[1]), text)
    node = parse_expr(lhs_text)
    form = _eval(node, lhs_text, linear=True)
    if not isinstance(form, dict):
        raise ParseError("no y term", node.span, text)
    form = {j: c for j, c in form.items() if not c.is_zero()}
    if not form:
        raise ParseError("all y terms cancel", node.span, text)
    mu = max(form)
    if mu < 1:
        raise ParseError("the equation needs a derivative of y", node.span, text)
    lead = form[mu]
    coeffs = tuple(form[j] / lead if j in form else _const(ZERO) for j in range(mu))
    return FuchsianODE(mu, tuple(RationalFunction(c.num, c.den) for c in coeffs))


# -- JSON ------------------------------------------------------------------

POLY_SCHEMA = "gvalues.poly/1"
SERIES_SCHEMA = "gvalues.series/1"
ODE_SCHEMA = "gvalues.ode/1"
PATH_SCHEMA = "gvalues.path/1"


def _rat_to_json(q) -> list[str]:
    return [str(int(q.numerator)), str(int(q.denominator))]


def _rat_from_json(v, path: str) -> Fraction:
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(s, str) for s in v)):
        raise SchemaError('expected ["num", "den"] with decimal-string integers', path)
    try:
        num, den = int(v[0]), int(v[1])
    except ValueError:
        raise SchemaError("integers must be decimal strings", path) from None
    if den <= 0:
        raise SchemaError("denominator must be positive", path)
    return Fraction(num, den)


def gaussian_to_json(g: GaussianRational) -> dict:
    return {"re": _rat_to_json(g.re), "im": _rat_to_json(g.im)}


def gaussian_from_json(v, path: str = "") -> GaussianRational:
    if not isinstance(v, dict) or set(v) - {"re", "im"} or "re" not in v:
        raise SchemaError('expected {"re": [...], "im": [...]}', path)
    re_ = _rat_from_json(v["re"], f"{path}.re")
    im_ = _rat_from_json(v.get("im", ["0", "1"]), f"{path}.im")
    return GaussianRational(re_, im_)


def _check_schema(obj, want: str, path: str):
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path)
    if "schema" in obj and obj["schema"] != want:
        raise SchemaError(f"schema {obj['schema']!r} is not {want!r}", f"{path}.schema")


def poly_to_json(p: QiPolynomial) -> dict:
    return {"schema": POLY_SCHEMA, "coeffs": [gaussian_to_json(c) for c in p.coeffs]}


def poly_from_json(obj, path: str = "") -> QiPolynomial:
    _check_schema(obj, POLY_SCHEMA, path)
    cs = obj.get("coeffs")
    if not isinstance(cs, list):
        raise SchemaError("coeffs must be a list", f"{path}.coeffs")
    return QiPolynomial([gaussian_from_json(c, f"{path}.coeffs[{k}]") for k, c in enumerate(cs)])


def _radius_to_json(r):
    if r is None:
        return None
    if math.isinf(r):
        return "inf"
    return float(r)


def _radius_from_json(v, path):
    if v is None:
        return None
    if v == "inf":
        return math.inf
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    raise SchemaError('radius_hint must be a number, "inf" or null', path)


def series_to_json(f: GSeries) -> dict:
    out = {
        "schema": SERIES_SCHEMA,
        "order": f.order,
        "radius_hint": _radius_to_json(f.radius_hint),
        "coeffs": [gaussian_to_json(c) for c in f.coeffs],
    }
    if f.center_label is not None:
        out["center"] = f.center_label
    return out


def series_from_json(obj, path: str = "") -> GSeries:
    _check_schema(obj, SERIES_SCHEMA, path)
    cs = obj.get("coeffs")
    if not isinstance(cs, list) or not cs:
        raise SchemaError("coeffs must be a nonempty list", f"{path}.coeffs")
    coeffs = tuple(gaussian_from_json(c, f"{path}.coeffs[{k}]") for k, c in enumerate(cs))
    order = obj.get("order", len(coeffs) - 1)
    if not isinstance(order, int) or order != len(coeffs) - 1:
        raise SchemaError(f"order {order!r} does not match {len(coeffs)} coefficients", f"{path}.order")
    return GSeries(coeffs, _radius_from_json(obj.get("radius_hint"), f"{path}.radius_hint"), obj.get("center"))


def parse_series(src) -> GSeries:
    if isinstance(src, str):
        try:
            src = json.loads(src)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg}", f"@{exc.pos}") from None
    return series_from_json(src)


def ode_to_json(ode) -> dict:
    return {
        "schema": ODE_SCHEMA,
        "order": ode.order,
        "coeffs": [{"num": poly_to_json(c.num), "den": poly_to_json(c.den)} for c in ode.coeffs],
    }


def ode_from_json(obj, path: str = ""):
    from .ode import FuchsianODE

    _check_schema(obj, ODE_SCHEMA, path)
    mu = obj.get("order")
    cs = obj.get("coeffs")
    if not isinstance(mu, int) or mu < 1:
        raise SchemaError("order must be a positive integer", f"{path}.order")
    if not isinstance(cs, list) or len(cs) != mu:
        raise SchemaError(f"need {mu} coefficients", f"{path}.coeffs")
    out = []
    for k, c in enumerate(cs):
        p = f"{path}.coeffs[{k}]"
        if not isinstance(c, dict) or "num" not in c:
            raise SchemaError('expected {"num": poly, "den": poly}', p)
        num = poly_from_json(c["num"], f"{p}.num")
        den = poly_from_json(c.get("den", {"coeffs": [gaussian_to_json(ONE)]}), f"{p}.den")
        if den.is_zero():
            raise SchemaError("zero denominator", f"{p}.den")
        out.append(RationalFunction(num, den))
    return FuchsianODE(mu, tuple(out))


def path_to_json(path) -> dict:
    return {"schema": PATH_SCHEMA, "waypoints": [gaussian_to_json(w) for w in path.waypoints], "branch_note": path.branch_note}


def parse_path(obj):
    from .ode import Path

    if isinstance(obj, str):
        obj = json.loads(obj)
    _check_schema(obj, PATH_SCHEMA, "")
    ws = obj.get("waypoints")
    if not isinstance(ws, list) or not ws:
        raise SchemaError("waypoints must be a nonempty list", ".waypoints")
    return Path(tuple(gaussian_from_json(w, f".waypoints[{k}]") for k, w in enumerate(ws)), obj.get("branch_note", ""))


# -- CSV ---------------------------------------------------------------------


def series_to_csv(f: GSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "re_num", "re_den", "im_num", "im_den"])
    for k, c in enumerate(f.coeffs):
        w.writerow([k, int(c.re.numerator), int(c.re.denominator), int(c.im.numerator), int(c.im.denominator)])
    return buf.getvalue()


def values_from_csv(text: str, column: int | str | None = None, *, exact: bool = False) -> list:
    """Values from CSV: the five-column exact export, or one numeric column.

    Exact cells may be integers or p/q; with ``exact`` decimals are refused,
    otherwise they are read as floats.
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(s.strip() for s in r)]
    if not rows:
        return []
    header = [s.strip() for s in rows[0]]
    has_header = any(not _looks_numeric(s) for s in header)
    body = rows[1:] if has_header else rows
    if has_header and header[:5] == ["index", "re_num", "re_den", "im_num", "im_den"]:
        return [GaussianRational(Fraction(int(r[1]), int(r[2])), Fraction(int(r[3]), int(r[4]))) for r in body]
    if column is None:
        col = 0 if len(header) == 1 else len(header) - 1
    elif isinstance(column, str):
        if not has_header or column not in header:
            raise SchemaError(f"no column named {column!r}", "csv")
        col = header.index(column)
    else:
        col = column
    out = []
    for k, r in enumerate(body):
        cell = r[col].strip()
        try:
            out.append(GaussianRational(Fraction(cell)) if "." not in cell and "e" not in cell.lower() else _inexact(cell, exact))
        except ValueError:
            raise SchemaError(f"bad value {cell!r}", f"csv row {k + 1}") from None
    return out


def _inexact(cell: str, exact: bool):
    if exact:
        raise ValueError("decimal in exact context")
    return float(cell)


def _looks_numeric(s: str) -> bool:
    try:
        Fraction(s.strip())
        return True
    except ValueError:
        return False
