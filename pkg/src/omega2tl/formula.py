"""Formulas over the two-level time flow: AST, parser, printer, desugaring, closure.

Core connectives are negation, conjunction, the column step ``[1]``, the
row jump ``[w]``, the row-local until ``u`` and the global until ``U``.
Everything else (``|``, ``->``, ``<->``, ``f``, ``g``, ``F``, ``G``,
iterated steps, ``true``/``false``) is sugar and is eliminated by
:func:`desugar` before any closure or solver work.
"""

from __future__ import annotations

from dataclasses import dataclass


class Formula:
    """Base class for all formula nodes."""

    __slots__ = ()


# --- core constructors ---------------------------------------------------


@dataclass(frozen=True)
class Var(Formula):
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("variable index must be nonnegative")


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next1(Formula):
    """Column step: true at <i,j> iff the operand is true at <i,j+1>."""

    operand: Formula


@dataclass(frozen=True)
class NextW(Formula):
    """Row jump: true at <i,j> iff the operand is true at <i+1,0>."""

    operand: Formula


@dataclass(frozen=True)
class LocalUntil(Formula):
    """Until confined to the current row (``u``)."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    """Until over the full lexicographic order (``U``)."""

    left: Formula
    right: Formula


CORE_TYPES = (Var, Not, And, Next1, NextW, LocalUntil, Until)


# --- sugar constructors (eliminated by desugar) --------------------------


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class LocalEventually(Formula):
    """``f``: the operand eventually holds within the current row."""

    operand: Formula


@dataclass(frozen=True)
class LocalAlways(Formula):
    """``g``: the operand holds at every later column of the current row."""

    operand: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    """``F``: the operand eventually holds at some later instant."""

    operand: Formula


@dataclass(frozen=True)
class Always(Formula):
    """``G``: the operand holds at every later instant."""

    operand: Formula


@dataclass(frozen=True)
class IterNext(Formula):
    """``[a]^n``: n-fold application of ``[1]`` or ``[w]``."""

    axis: str  # "1" or "w"
    count: int
    operand: Formula

    def __post_init__(self):
        if self.axis not in ("1", "w"):
            raise ValueError("axis must be '1' or 'w'")
        if self.count < 0:
            raise ValueError("count must be nonnegative")


@dataclass(frozen=True)
class TrueLit(Formula):
    pass


@dataclass(frozen=True)
class FalseLit(Formula):
    pass


# --- structural queries --------------------------------------------------


def children(phi: Formula) -> tuple[Formula, ...]:
    match phi:
        case Var() | TrueLit() | FalseLit():
            return ()
        case Not(a) | Next1(a) | NextW(a) | LocalEventually(a) | LocalAlways(a) \
                | Eventually(a) | Always(a):
            return (a,)
        case IterNext(_, _, a):
            return (a,)
        case And(a, b) | LocalUntil(a, b) | Until(a, b) | Or(a, b) \
                | Implies(a, b) | Iff(a, b):
            return (a, b)
    raise TypeError(f"not a formula: {phi!r}")


def length(phi: Formula) -> int:
    """Symbol count: one per constructor and per variable occurrence."""
    return 1 + sum(length(c) for c in children(phi))


def variables(phi: Formula) -> frozenset[int]:
    """Indices of all propositional variables occurring in the formula."""
    if isinstance(phi, Var):
        return frozenset((phi.index,))
    out: set[int] = set()
    for c in children(phi):
        out |= variables(c)
    return frozenset(out)


def is_core(phi: Formula) -> bool:
    return isinstance(phi, CORE_TYPES) and all(is_core(c) for c in children(phi))


# --- desugaring ----------------------------------------------------------


def desugar(phi: Formula) -> Formula:
    """Expand all defined connectives, leaving only the seven core ones.

    ``true`` becomes q -> q for the lowest-index variable q of the whole
    formula (p0 when the formula has no variables); ``false`` is its
    negation.
    """
    vs = variables(phi)
    q = Var(min(vs)) if vs else Var(0)
    return _desugar(phi, q)


def _taut(a: Formula) -> Formula:
    # a -> a, fully expanded: !(!!a & !a)
    return Not(And(Not(Not(a)), Not(a)))


def _desugar(phi: Formula, q: Var) -> Formula:
    match phi:
        case Var():
            return phi
        case Not(a):
            return Not(_desugar(a, q))
        case And(a, b):
            return And(_desugar(a, q), _desugar(b, q))
        case Next1(a):
            return Next1(_desugar(a, q))
        case NextW(a):
            return NextW(_desugar(a, q))
        case LocalUntil(a, b):
            return LocalUntil(_desugar(a, q), _desugar(b, q))
        case Until(a, b):
            return Until(_desugar(a, q), _desugar(b, q))
        case Or(a, b):
            return Not(And(Not(_desugar(a, q)), Not(_desugar(b, q))))
        case Implies(a, b):
            return _desugar(Or(Not(a), b), q)
        case Iff(a, b):
            return _desugar(And(Implies(a, b), Implies(b, a)), q)
        case LocalEventually(a):
            da = _desugar(a, q)
            return LocalUntil(_taut(da), da)
        case LocalAlways(a):
            return Not(_desugar(LocalEventually(Not(a)), q))
        case Eventually(a):
            da = _desugar(a, q)
            return Until(_taut(da), da)
        case Always(a):
            return Not(_desugar(Eventually(Not(a)), q))
        case IterNext(axis, n, a):
            out = _desugar(a, q)
            step = Next1 if axis == "1" else NextW
            for _ in range(n):
                out = step(out)
            return out
        case TrueLit():
            return _taut(q)
        case FalseLit():
            return Not(_taut(q))
    raise TypeError(f"not a formula: {phi!r}")


def local_always(phi: Formula) -> Formula:
    """Desugared g(phi) for an already-core operand."""
    if not is_core(phi):
        raise ValueError("operand must be desugared")
    na = Not(phi)
    return Not(LocalUntil(_taut(na), na))


# --- closure -------------------------------------------------------------


@dataclass(frozen=True)
class Closure:
    """All subformulas of a core formula, children before parents."""

    formulas: tuple[Formula, ...]
    index: dict[Formula, int]

    def __len__(self) -> int:
        return len(self.formulas)

    def __contains__(self, phi: Formula) -> bool:
        return phi in self.index


def closure(phi: Formula, extra: tuple[Formula, ...] = ()) -> Closure:
    """Subformula closure of ``phi`` (plus any ``extra`` roots), topo-ordered.

    The formula must be desugared; the closure size never exceeds the
    symbol count of the root.
    """
    for root in (phi, *extra):
        if not is_core(root):
            raise ValueError(f"closure requires a desugared formula: {root!r}")
    order: dict[Formula, int] = {}

    def visit(f: Formula) -> None:
        if f in order:
            return
        for c in children(f):
            visit(c)
        order[f] = len(order)

    visit(phi)
    for root in extra:
        visit(root)
    formulas = tuple(order)
    return Closure(formulas, {f: i for i, f in enumerate(formulas)})


# --- parsing -------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_UNARY_WORDS = {"f": LocalEventually, "g": LocalAlways,
                "F": Eventually, "G": Always}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Yields (kind, value, position) triples; kind is a token class."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "()!&|":
            tokens.append((ch, ch, i))
            i += 1
        elif text.startswith("<->", i):
            tokens.append(("<->", "<->", i))
            i += 3
        elif text.startswith("->", i):
            tokens.append(("->", "->", i))
            i += 2
        elif ch == "[":
            for lit in ("[1]", "[w]", "[omega]"):
                if text.startswith(lit, i):
                    tokens.append(("next1" if lit == "[1]" else "nextw", lit, i))
                    i += len(lit)
                    break
            else:
                raise ParseError("expected [1], [w] or [omega]", i)
        elif ch.isalnum():
            j = i
            while j < n and text[j].isalnum():
                j += 1
            word = text[i:j]
            if word[0] == "p" and word[1:].isdigit():
                tokens.append(("var", word, i))
            elif word in ("u", "U"):
                tokens.append(("until", word, i))
            elif word in _UNARY_WORDS:
                tokens.append(("unaryword", word, i))
            elif word in ("true", "false"):
                tokens.append((word, word, i))
            else:
                raise ParseError(f"unknown token {word!r}", i)
            i = j
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.textlen = len(text)

    def peek(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def next(self) -> tuple[str, str, int]:
        if self.pos >= len(self.tokens):
            raise ParseError("unexpected end of input", self.textlen)
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    # precedence, loosest first: <-> , -> , | , & , u/U , unary
    def formula(self) -> Formula:
        left = self.imp()
        while self.peek() == "<->":
            self.next()
            left = Iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.next()
            return Implies(left, self.imp())  # right-associative
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek() == "|":
            self.next()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.until()
        while self.peek() == "&":
            self.next()
            left = And(left, self.until())
        return left

    def until(self) -> Formula:
        left = self.unary()
        while self.peek() == "until":
            _, word, _ = self.next()
            right = self.unary()
            left = LocalUntil(left, right) if word == "u" else Until(left, right)
        return left

    def unary(self) -> Formula:
        kind = self.peek()
        if kind == "!":
            self.next()
            return Not(self.unary())
        if kind == "next1":
            self.next()
            return Next1(self.unary())
        if kind == "nextw":
            self.next()
            return NextW(self.unary())
        if kind == "unaryword":
            _, word, _ = self.next()
            return _UNARY_WORDS[word](self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, value, pos = self.next()
        if kind == "var":
            return Var(int(value[1:]))
        if kind == "true":
            return TrueLit()
        if kind == "false":
            return FalseLit()
        if kind == "(":
            inner = self.formula()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {value!r}", pos)


def parse(text: str) -> Formula:
    parser = _Parser(text)
    phi = parser.formula()
    if parser.pos != len(parser.tokens):
        _, value, pos = parser.tokens[parser.pos]
        raise ParseError(f"trailing input {value!r}", pos)
    return phi


# --- printing ------------------------------------------------------------


def render(phi: Formula) -> str:
    """ASCII form that parses back to the same tree."""
    match phi:
        case Var(i):
            return f"p{i}"
        case TrueLit():
            return "true"
        case FalseLit():
            return "false"
        case Not(a):
            return "!" + _render_unary_arg(a)
        case Next1(a):
            return "[1]" + _render_unary_arg(a)
        case NextW(a):
            return "[w]" + _render_unary_arg(a)
        case LocalEventually(a):
            return "f " + _render_unary_arg(a)
        case LocalAlways(a):
            return "g " + _render_unary_arg(a)
        case Eventually(a):
            return "F " + _render_unary_arg(a)
        case Always(a):
            return "G " + _render_unary_arg(a)
        case IterNext(axis, n, a):
            tok = "[1]" if axis == "1" else "[w]"
            return tok * n + _render_unary_arg(a) if n > 0 else render(a)
        case And(a, b):
            return f"({render(a)} & {render(b)})"
        case Or(a, b):
            return f"({render(a)} | {render(b)})"
        case Implies(a, b):
            return f"({render(a)} -> {render(b)})"
        case Iff(a, b):
            return f"({render(a)} <-> {render(b)})"
        case LocalUntil(a, b):
            return f"({render(a)} u {render(b)})"
        case Until(a, b):
            return f"({render(a)} U {render(b)})"
    raise TypeError(f"not a formula: {phi!r}")


def _render_unary_arg(a: Formula) -> str:
    if isinstance(a, (Var, TrueLit, FalseLit, Not, Next1, NextW,
                      LocalEventually, LocalAlways, Eventually, Always,
                      IterNext)):
        return render(a)
    return f"({render(a)})"
