"""Surface syntax: a tokenizer, a term parser, and the circuit file format.

Objects are written ``I``, ``B``, ``obj^n``, ``obj^*``, ``obj x obj``
and ``(obj)``.  Terms are ``id<obj>``, ``swap<obj,obj>``, ``copy<obj>``,
``del<obj>``, ``coin(p)``, ``if<obj>``, sequential ``t ; t``, parallel
``t x t`` and ``iter[state; (in,...); (out,...)](body)``, with ``x``
binding tighter than ``;`` and both associating to the left.  Rationals
are ``num/den`` or a bare integer.  ``--`` starts a line comment.

``copy``, ``del`` and ``if`` at star-containing objects are sugar: the
parser elaborates them into the iteration circuits that lift the
generators pointwise (the generators themselves exist at star-free
words only).  Bare identifiers name the small builtin gate library or,
inside circuit files, earlier ``let`` bindings.

A circuit file is a sequence of ``let name = term`` bindings and
exactly one ``main = term``; every binding is typechecked where it is
introduced so errors carry the statement's position.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .objects import B, UNIT, Object, is_star_free, power, star, tensor
from .terms import (
    Gen, Id, PBCError, PBCTypeError, Seq, Par, Swap, TauStar, Term,
    coin, copy_gen, discard_gen, phi_gen, typecheck,
)
from .combinators import (
    and_gate, copy_at, discard_at, eq_bit, not_gate, phi_at, xor_gate,
)

__all__ = ["PBCSyntaxError", "parse_term", "parse_object", "parse_circuit"]


class PBCSyntaxError(PBCError):
    """Source text rejected, with position information."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_KEYWORDS = frozenset({
    "let", "main", "id", "swap", "copy", "del", "coin", "if", "iter",
    "x", "I", "B",
})

_BUILTINS = {
    "not": not_gate,
    "and": and_gate,
    "xor": xor_gate,
    "eq_bit": eq_bit,
}

_SYMBOLS = ";()<>[],=^*/"


@dataclass(frozen=True, slots=True)
class _Tok:
    kind: str  # ident | int | sym | eof
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list:
    toks = []
    line = 1
    col = 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "-" and i + 1 < n and source[i + 1] == "-":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            toks.append(_Tok("ident", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            toks.append(_Tok("int", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _SYMBOLS:
            toks.append(_Tok("sym", ch, line, col))
            i += 1
            col += 1
            continue
        raise PBCSyntaxError(f"stray character {ch!r}", line, col)
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, toks: list, bindings: dict | None = None):
        self.toks = toks
        self.pos = 0
        self.bindings = bindings if bindings is not None else {}

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, message: str) -> None:
        t = self.peek()
        raise PBCSyntaxError(message, t.line, t.col)

    def at_sym(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "sym" and t.text == text

    def at_word(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "ident" and t.text == text

    def expect_sym(self, text: str) -> _Tok:
        if not self.at_sym(text):
            self.fail(f"expected {text!r}")
        return self.next()

    # -- objects -----------------------------------------------------------

    def object_(self) -> Object:
        out = self.object_factor()
        while self.at_word("x"):
            self.next()
            out = tensor(out, self.object_factor())
        return out

    def object_factor(self) -> Object:
        t = self.peek()
        if t.kind == "ident" and t.text == "I":
            self.next()
            obj: Object = UNIT
        elif t.kind == "ident" and t.text == "B":
            self.next()
            obj = B
        elif self.at_sym("("):
            self.next()
            obj = self.object_()
            self.expect_sym(")")
        else:
            self.fail("expected an object")
        while self.at_sym("^"):
            self.next()
            t = self.peek()
            if t.kind == "int":
                self.next()
                obj = power(obj, int(t.text))
            elif self.at_sym("*"):
                self.next()
                obj = star(obj)
            else:
                self.fail("expected a power or '*' after '^'")
        return obj

    # -- terms ---------------------------------------------------------------

    def rational(self) -> Fraction:
        t = self.peek()
        if t.kind != "int":
            self.fail("expected a rational")
        self.next()
        num = int(t.text)
        if self.at_sym("/"):
            self.next()
            d = self.peek()
            if d.kind != "int":
                self.fail("expected a denominator")
            self.next()
            den = int(d.text)
            if den == 0:
                raise PBCSyntaxError("zero denominator", d.line, d.col)
            return Fraction(num, den)
        return Fraction(num)

    def term(self) -> Term:
        out = self.term_factor()
        while self.at_sym(";"):
            self.next()
            out = Seq(out, self.term_factor())
        return out

    def term_factor(self) -> Term:
        out = self.term_primary()
        while self.at_word("x"):
            self.next()
            out = Par(out, self.term_primary())
        return out

    def angle_object(self) -> Object:
        self.expect_sym("<")
        obj = self.object_()
        self.expect_sym(">")
        return obj

    def term_primary(self) -> Term:
        t = self.peek()
        if t.kind == "sym" and t.text == "(":
            self.next()
            out = self.term()
            self.expect_sym(")")
            return out
        if t.kind != "ident":
            self.fail("expected a term")
        name = t.text
        if name == "id":
            self.next()
            return Id(self.angle_object())
        if name == "swap":
            self.next()
            self.expect_sym("<")
            left = self.object_()
            self.expect_sym(",")
            right = self.object_()
            self.expect_sym(">")
            return Swap(left, right)
        if name == "copy":
            self.next()
            obj = self.angle_object()
            return copy_gen(obj) if is_star_free(obj) else copy_at(obj)
        if name == "del":
            self.next()
            obj = self.angle_object()
            return discard_gen(obj) if is_star_free(obj) else discard_at(obj)
        if name == "if":
            self.next()
            obj = self.angle_object()
            return phi_gen(obj) if is_star_free(obj) else phi_at(obj)
        if name == "coin":
            self.next()
            self.expect_sym("(")
            p = self.rational()
            self.expect_sym(")")
            return coin(p)
        if name == "iter":
            self.next()
            self.expect_sym("[")
            state = self.object_()
            self.expect_sym(";")
            inputs = self.object_list()
            self.expect_sym(";")
            outputs = self.object_list()
            self.expect_sym("]")
            self.expect_sym("(")
            body = self.term()
            self.expect_sym(")")
            return TauStar(state, inputs, outputs, body)
        if name in _KEYWORDS:
            self.fail(f"{name!r} cannot start a term here")
        self.next()
        if name in self.bindings:
            return self.bindings[name]
        if name in _BUILTINS:
            return _BUILTINS[name]()
        raise PBCSyntaxError(f"unknown identifier {name!r}", t.line, t.col)

    def object_list(self) -> tuple:
        self.expect_sym("(")
        if self.at_sym(")"):
            self.next()
            return ()
        objs = [self.object_()]
        while self.at_sym(","):
            self.next()
            objs.append(self.object_())
        self.expect_sym(")")
        return tuple(objs)

    def end(self) -> None:
        if self.peek().kind != "eof":
            self.fail("unexpected trailing input")


def parse_term(source: str) -> Term:
    """Parse one term; bare identifiers resolve to the builtin gates."""
    p = _Parser(_tokenize(source))
    out = p.term()
    p.end()
    return out


def parse_object(source: str) -> Object:
    """Parse one object word."""
    p = _Parser(_tokenize(source))
    out = p.object_()
    p.end()
    return out


def parse_circuit(source: str) -> Term:
    """Parse a circuit file and return its ``main`` term.

    Bindings see builtins and earlier bindings only.  Every statement
    is typechecked on the spot, so a type error names the line of the
    offending definition.
    """
    p = _Parser(_tokenize(source))
    main: Term | None = None
    while p.peek().kind != "eof":
        t = p.peek()
        if p.at_word("let"):
            p.next()
            name_tok = p.peek()
            if name_tok.kind != "ident" or name_tok.text in _KEYWORDS:
                p.fail("expected a binding name after 'let'")
            name = name_tok.text
            if name in _BUILTINS:
                raise PBCSyntaxError(f"{name!r} rebinds a builtin gate",
                                     name_tok.line, name_tok.col)
            if name in p.bindings:
                raise PBCSyntaxError(f"{name!r} is already bound",
                                     name_tok.line, name_tok.col)
            p.next()
            p.expect_sym("=")
            term = p.term()
            _check_stmt(term, f"let {name}", t)
            p.bindings[name] = term
        elif p.at_word("main"):
            if main is not None:
                raise PBCSyntaxError("a second 'main' entry", t.line, t.col)
            p.next()
            p.expect_sym("=")
            main = p.term()
            _check_stmt(main, "main", t)
        else:
            p.fail("expected 'let' or 'main'")
    if main is None:
        t = p.peek()
        raise PBCSyntaxError("no 'main' entry", t.line, t.col)
    return main


def _check_stmt(term: Term, what: str, at: _Tok) -> None:
    try:
        typecheck(term)
    except PBCTypeError as err:
        raise PBCSyntaxError(f"in {what}: {err}", at.line, at.col) from err
