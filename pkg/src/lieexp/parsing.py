"""Concrete syntax: algebra signature strings and element text.

Element grammar (whitespace insignificant)::

    element  := ["+"|"-"] term (("+"|"-") term)*  |  "0"
    term     := [rational ["*"]] [factor ("*" factor)*] ["D" index]
    factor   := "e^{" [integer "*"] var ["^" positive-integer] "}"
              | var ["^" integer]
    var      := ("x"|"y") index
    rational := integer ["/" positive-integer]

Canonical printing always writes the exponential coefficient explicitly,
e.g. ``e^{1*x1}*x1^3 D1``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core import AlgebraSignature, Element, Family, merge
from .errors import ParseError, SignatureViolation

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>[xy]\d+)|(?P<d>D\d+)|(?P<exp>e\^\{)|(?P<sym>[-+*/^{}]))"
)


def _tokenize(src: str):
    pos = 0
    out = []
    n = len(src)
    while pos < n:
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m:
            ws = len(src[pos:]) - len(src[pos:].lstrip())
            raise ParseError(f"unexpected character {src[pos + ws]!r}", *_linecol(src, pos + ws))
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", n))
    return out


def _linecol(src: str, pos: int):
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, src, sig):
        self.src = src
        self.sig = sig
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self, k=0):
        return self.toks[self.i + k]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, *_linecol(self.src, tok[2]))

    def expect(self, kind, value=None):
        t = self.next()
        if t[0] != kind or (value is not None and t[1] != value):
            self.i -= 1
            self.fail(f"expected {value or kind}, found {t[1] or 'end of input'!r}")
        return t

    def is_sym(self, value, k=0):
        t = self.peek(k)
        return t[0] == "sym" and t[1] == value

    def integer(self, signed=True):
        sign = 1
        if signed and (self.is_sym("-") or self.is_sym("+")):
            sign = -1 if self.next()[1] == "-" else 1
        t = self.expect("num")
        return sign * int(t[1])

    def var(self):
        t = self.expect("var")
        name = t[1]
        idx = int(name[1:])
        sig = self.sig
        if idx < 1 or idx > sig.n or (name[0] == "y" and sig.is_witt):
            raise SignatureViolation(f"unknown variable {name} in {sig}")
        return idx - 1 if name[0] == "x" else sig.n + idx - 1

    def parse(self):
        sig = self.sig
        acc: dict = {}
        first = True
        while True:
            t = self.peek()
            if t[0] == "end":
                if first:
                    self.fail("empty expression")
                break
            sign = 1
            if self.is_sym("+") or self.is_sym("-"):
                sign = -1 if self.next()[1] == "-" else 1
            elif not first:
                self.fail(f"expected '+' or '-', found {t[1]!r}")
            key, c = self.term()
            merge(acc, {key: c}, sign)
            first = False
        return Element(sig, acc)

    def term(self):
        sig = self.sig
        coeff = Fraction(1)
        exp = [0] * sig.M
        poly = [0] * sig.nvars
        deriv = None
        seen = False
        if self.peek()[0] == "num":
            coeff = Fraction(self.integer(signed=False))
            if self.is_sym("/"):
                self.next()
                den = self.integer(signed=False)
                if den == 0:
                    self.fail("zero denominator")
                coeff /= den
            seen = True
            if self.is_sym("*"):
                self.next()
                if self.peek()[0] not in ("var", "exp", "d"):
                    self.fail("expected a factor after '*'")
        while self.peek()[0] in ("var", "exp"):
            self.factor(exp, poly)
            seen = True
            if self.is_sym("*"):
                self.next()
                if self.peek()[0] not in ("var", "exp", "d"):
                    self.fail("expected a factor after '*'")
            elif self.peek()[0] in ("var", "exp"):
                self.fail("factors must be separated by '*'")
        if self.peek()[0] == "d":
            tok = self.next()
            t = int(tok[1][1:])
            if not sig.is_witt:
                raise SignatureViolation(f"{sig} has no derivation slots")
            if not 1 <= t <= sig.n:
                raise SignatureViolation(f"derivation index {t} out of range for {sig}")
            deriv = t - 1
            seen = True
        if not seen:
            self.fail(f"expected a term, found {self.peek()[1] or 'end of input'!r}")
        return (tuple(exp), tuple(poly), deriv), coeff

    def factor(self, exp, poly):
        sig = self.sig
        if self.peek()[0] == "exp":
            self.next()
            a = 1
            if self.peek()[0] == "num" or self.is_sym("-") or self.is_sym("+"):
                if self.peek()[0] != "num" and self.peek(1)[0] == "var":
                    a = -1 if self.next()[1] == "-" else 1
                else:
                    a = self.integer()
                    self.expect("sym", "*")
            v = self.var()
            p = 1
            if self.is_sym("^"):
                self.next()
                p = self.integer(signed=False)
            self.expect("sym", "}")
            for s, (vv, pp) in enumerate(sig.slots):
                if vv == v and pp == p:
                    exp[s] += a
                    break
            else:
                raise SignatureViolation(
                    f"e^{{a*{sig.var_name(v)}^{p}}} is not an allowed exponential in {sig}")
        else:
            v = self.var()
            j = 1
            if self.is_sym("^"):
                self.next()
                j = self.integer()
            poly[v] += j


def parse_element(src: str, sig: AlgebraSignature) -> Element:
    """Parse element text; raises ParseError or SignatureViolation."""
    el = _Parser(src, sig).parse()
    if sig.family is Family.S_DIVFREE:
        from .brackets import is_divergence_free

        if not is_divergence_free(el):
            raise SignatureViolation(f"{src!r} is not divergence-free, so not in {sig}")
    return el


def _fmt_rational(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _term_body(sig, key) -> str:
    exp, poly, _ = key
    factors = []
    for v in range(sig.nvars):
        name = sig.var_name(v)
        for s, p in sig.var_slots[v]:
            a = exp[s]
            if a:
                factors.append(f"e^{{{a}*{name}}}" if p == 1 else f"e^{{{a}*{name}^{p}}}")
        j = poly[v]
        if j:
            factors.append(name if j == 1 else f"{name}^{j}")
    return "*".join(factors)


def print_terms(sig: AlgebraSignature, data: dict) -> str:
    from .core import order_key

    if not data:
        return "0"
    parts = []
    for i, key in enumerate(sorted(data, key=order_key, reverse=True)):
        c = data[key]
        mag = abs(c)
        body = _term_body(sig, key)
        d = key[2]
        if body:
            s = body if mag == 1 else f"{_fmt_rational(mag)}*{body}"
            if d is not None:
                s += f" D{d + 1}"
        elif d is not None:
            s = f"D{d + 1}" if mag == 1 else f"{_fmt_rational(mag)} D{d + 1}"
        else:
            s = _fmt_rational(mag)
        if i == 0:
            parts.append(f"-{s}" if c < 0 else s)
        else:
            parts.append(f" - {s}" if c < 0 else f" + {s}")
    return "".join(parts)


def print_element(e: Element) -> str:
    return print_terms(e.sig, e.data)


# -- signatures ---------------------------------------------------------------

_SIG = re.compile(r"^\s*(?P<name>W\+|W|Hbar|H|S)\s*\((?P<body>.*)\)\s*$")
_POWERS = re.compile(r"([xy])(\d+)\s*:\s*\[([^\]]*)\]")


def _int_list(text):
    text = text.strip()
    return [int(t) for t in text.split(",")] if text else []


def parse_signature(text: str) -> AlgebraSignature:
    """Parse ``W(n)``, ``W(n; x1:[1,2], ...)``, ``W(n,{1,2})``, ``W+(1)``,
    ``H(n)``, ``H(n,n)``, ``H(n,0)``, ``H(n,n; x1:[..], y1:[..])``, ``S(k)``
    and the ``Hbar`` quotient variants."""
    m = _SIG.match(text)
    if not m:
        raise ValueError(f"unrecognised algebra signature {text!r}")
    name, body = m.group("name"), m.group("body")
    head, _, tail = body.partition(";")
    shorthand = None
    sm = re.match(r"^\s*(\d+)\s*,\s*\{([^}]*)\}\s*$", head)
    if sm:
        head, shorthand = sm.group(1), _int_list(sm.group(2))
    try:
        nums = [int(t) for t in head.split(",")]
    except ValueError:
        raise ValueError(f"bad arity in {text!r}") from None
    per_var = {}
    for vm in _POWERS.finditer(tail):
        per_var[(vm.group(1), int(vm.group(2)))] = tuple(_int_list(vm.group(3)))
    if tail.strip() and not per_var:
        raise ValueError(f"bad exponential power list in {text!r}")
    try:
        if name == "W+":
            if nums != [1]:
                raise ValueError("W+ is only defined for one variable")
            return AlgebraSignature.wplus1()
        if name == "S":
            return AlgebraSignature.special(nums[0])
        if name == "W":
            n = nums[0]
            if len(nums) != 1:
                raise ValueError(f"bad arity in {text!r}")
            if shorthand is not None:
                return AlgebraSignature.witt_exp([tuple(shorthand)] * n)
            if per_var:
                return AlgebraSignature.witt_exp([per_var.get(("x", i + 1), ()) for i in range(n)])
            return AlgebraSignature.witt(n)
        if name in ("H", "Hbar"):
            quot = name == "Hbar"
            if len(nums) == 1:
                return AlgebraSignature.poisson(nums[0], quot)
            a, b = nums
            if a == 0:
                return AlgebraSignature.poisson(b, quot)
            if b == 0:
                return AlgebraSignature.poisson_exp_only(a, quot)
            if a != b:
                raise ValueError(f"H(m,n) needs m == n, m == 0 or n == 0: {text!r}")
            if shorthand is not None:
                return AlgebraSignature.poisson_exp_powers([tuple(shorthand)] * (2 * a), quot)
            if per_var:
                xs = [per_var.get(("x", i + 1), ()) for i in range(a)]
                ys = [per_var.get(("y", i + 1), xs[i]) for i in range(a)]
                return AlgebraSignature.poisson_exp_powers(xs + ys, quot)
            return AlgebraSignature.poisson_exp(a, quot)
    except SignatureViolation as exc:
        raise ValueError(str(exc)) from None
    raise ValueError(f"unrecognised algebra signature {text!r}")


def _powers_tail(sig):
    parts = []
    for v, lst in enumerate(sig.exp_powers):
        parts.append(f"{sig.var_name(v)}:[{','.join(map(str, lst))}]")
    return "; " + ", ".join(parts)


def format_signature(sig: AlgebraSignature) -> str:
    f = sig.family
    bar = "Hbar" if sig.quotient else "H"
    if f is Family.W:
        return f"W({sig.n})"
    if f is Family.W_EXP:
        return f"W({sig.n}{_powers_tail(sig)})"
    if f is Family.W_PLUS1:
        return "W+(1)"
    if f is Family.S_DIVFREE:
        return f"S({sig.n})"
    if f is Family.H_POLY:
        return f"{bar}({sig.n})"
    if f is Family.H_EXP_FULL:
        return f"{bar}({sig.n},{sig.n})"
    if f is Family.H_EXP_ONLY:
        return f"{bar}({sig.n},0)"
    return f"{bar}({sig.n},{sig.n}{_powers_tail(sig)})"
