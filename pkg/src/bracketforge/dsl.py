"""The ``.fmt`` format language: tokenizer, recursive-descent parser, compiler, emitter.

Grammar::

    file     := "format" STRING "{" stmt* "}"
    stmt     := bracketS | policyS | matchS | consolS
    bracketS := "bracket" IDENT ":" "signature" "[" INT ("," INT)* "]"
    consolS  := "consolation" IDENT "depth" INT
    policyS  := "policy" ("reseed" | "random") "signature" "[" INT ("," INT)* "]"
              | "policy" "swiss" "teams" INT "rounds" INT ["tiebreak" ("seed" | "shared")]
    matchS   := "match" IDENT ":" src "vs" src "win" sink "lose" sink
    src      := "seed" INT | "winner" IDENT | "loser" IDENT
    sink     := "match" IDENT "." ("A"|"B") | "place" INT | "tie" INT ".." INT

``#`` starts a comment running to the end of the line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .builder import attach_consolation, build_proper_bracket, make_dynamic, make_swiss
from .core import (BY_SEED, RANDOM_DRAW, RESEED, SWISS, DynamicPolicy, FinalPlace,
                   LoserOf, Match, Multibracket, SeedEntry, TieBlock, ToSlot, WinnerOf)
from .errors import (DuplicateIdentifier, FormatSyntaxError, MixedKind, UnknownReference,
                     ValidationFailed)
from .flowchart import validate

KEYWORDS = {
    "format", "bracket", "signature", "consolation", "depth", "policy", "reseed",
    "random", "swiss", "teams", "rounds", "tiebreak", "seed", "shared", "match",
    "vs", "win", "lose", "winner", "loser", "place", "tie",
}
RESERVED = {"cut"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<dotdot>\.\.)
  | (?P<punct>[{}:\[\],.])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "kw", "ident", "int", "string", "punct", "eof"
    text: str
    line: int
    col: int
    end_line: int = 0
    end_col: int = 0

    def describe(self):
        if self.kind == "eof":
            return "end of input"
        return repr(self.text)


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    line, col = 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormatSyntaxError(line, col, ["a token"], repr(text[pos]))
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        elif kind in ("ws", "comment"):
            col += len(value)
        else:
            if kind == "ident" and value in KEYWORDS:
                kind = "kw"
            elif kind in ("dotdot", "punct"):
                kind = "punct"
            tokens.append(Token(kind, value, line, col, line, col + len(value)))
            col += len(value)
        pos = m.end()
    last = tokens[-1] if tokens else None
    end = (last.end_line, last.end_col) if last else (1, 1)
    tokens.append(Token("eof", "", end[0], end[1]))
    return tokens


# -- AST ------------------------------------------------------------------------

@dataclass(frozen=True)
class BracketStmt:
    name: str
    signature: tuple
    line: int = field(default=1, compare=False)
    col: int = field(default=1, compare=False)


@dataclass(frozen=True)
class ConsolationStmt:
    target: str
    depth: int
    line: int = field(default=1, compare=False)
    col: int = field(default=1, compare=False)


@dataclass(frozen=True)
class PolicyStmt:
    kind: str
    signature: Optional[tuple] = None
    teams: Optional[int] = None
    rounds: Optional[int] = None
    tiebreak: str = BY_SEED
    line: int = field(default=1, compare=False)
    col: int = field(default=1, compare=False)


@dataclass(frozen=True)
class MatchStmt:
    id: str
    slot_a: object
    slot_b: object
    on_win: object
    on_lose: object
    line: int = field(default=1, compare=False)
    col: int = field(default=1, compare=False)


@dataclass(frozen=True)
class FormatAst:
    name: str
    statements: tuple


# -- parser ---------------------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def fail(self, expected):
        tok = self.tok
        if tok.kind == "ident" and tok.text in RESERVED:
            raise FormatSyntaxError(tok.line, tok.col, expected,
                                    f"reserved word {tok.text!r} (not supported yet)")
        raise FormatSyntaxError(tok.line, tok.col, expected, tok.describe())

    def at(self, *texts):
        return self.tok.kind in ("kw", "punct") and self.tok.text in texts

    def expect(self, text):
        if not self.at(text):
            self.fail([repr(text)])
        tok = self.tok
        self.i += 1
        return tok

    def take(self, kind, label):
        if self.tok.kind != kind:
            self.fail([label])
        tok = self.tok
        self.i += 1
        return tok

    def ident(self):
        return self.take("ident", "identifier").text

    def int(self):
        return int(self.take("int", "integer").text)

    def int_list(self):
        self.expect("[")
        values = [self.int()]
        while self.at(","):
            self.i += 1
            values.append(self.int())
        self.expect("]")
        return tuple(values)

    def file(self):
        self.expect("format")
        raw = self.take("string", "string").text[1:-1]
        name = re.sub(r"\\(.)", r"\1", raw)
        self.expect("{")
        stmts = []
        while not self.at("}"):
            stmts.append(self.stmt())
        self.expect("}")
        self.take("eof", "end of input")
        return FormatAst(name, tuple(stmts))

    def stmt(self):
        tok = self.tok
        where = dict(line=tok.line, col=tok.col)
        if self.at("bracket"):
            self.i += 1
            name = self.ident()
            self.expect(":")
            self.expect("signature")
            return BracketStmt(name, self.int_list(), **where)
        if self.at("consolation"):
            self.i += 1
            target = self.ident()
            self.expect("depth")
            return ConsolationStmt(target, self.int(), **where)
        if self.at("policy"):
            self.i += 1
            if self.at("reseed", "random"):
                kind = self.tok.text
                self.i += 1
                self.expect("signature")
                return PolicyStmt(kind, signature=self.int_list(), **where)
            if self.at("swiss"):
                self.i += 1
                self.expect("teams")
                teams = self.int()
                self.expect("rounds")
                rounds = self.int()
                tiebreak = BY_SEED
                if self.at("tiebreak"):
                    self.i += 1
                    if not self.at("seed", "shared"):
                        self.fail(["'seed'", "'shared'"])
                    tiebreak = self.tok.text
                    self.i += 1
                return PolicyStmt(SWISS, teams=teams, rounds=rounds, tiebreak=tiebreak, **where)
            self.fail(["'reseed'", "'random'", "'swiss'"])
        if self.at("match"):
            self.i += 1
            mid = self.ident()
            self.expect(":")
            a = self.source()
            self.expect("vs")
            b = self.source()
            self.expect("win")
            win = self.sink()
            self.expect("lose")
            lose = self.sink()
            return MatchStmt(mid, a, b, win, lose, **where)
        self.fail(["'bracket'", "'consolation'", "'policy'", "'match'", "'}'"])

    def source(self):
        if self.at("seed"):
            self.i += 1
            return SeedEntry(self.int())
        if self.at("winner"):
            self.i += 1
            return WinnerOf(self.ident())
        if self.at("loser"):
            self.i += 1
            return LoserOf(self.ident())
        self.fail(["'seed'", "'winner'", "'loser'"])

    def sink(self):
        if self.at("match"):
            self.i += 1
            mid = self.ident()
            self.expect(".")
            if self.tok.kind != "ident" or self.tok.text not in ("A", "B"):
                self.fail(["'A'", "'B'"])
            slot = self.tok.text
            self.i += 1
            return ToSlot(mid, slot)
        if self.at("place"):
            self.i += 1
            return FinalPlace(self.int())
        if self.at("tie"):
            self.i += 1
            lo = self.int()
            self.expect("..")
            return TieBlock(lo, self.int())
        self.fail(["'match'", "'place'", "'tie'"])


def parse(text: str) -> FormatAst:
    """Parse one format file.

    Raises :class:`FormatSyntaxError` with line, column and the expected
    tokens, or :class:`DuplicateIdentifier` when a name is declared twice.
    """
    ast = _Parser(text).file()
    seen = {}
    for stmt in ast.statements:
        name = getattr(stmt, "id", None) or getattr(stmt, "name", None)
        if name is None:
            continue
        if name in seen:
            raise DuplicateIdentifier(
                f"{stmt.line}:{stmt.col}: {name!r} already declared at {seen[name]}")
        seen[name] = f"{stmt.line}:{stmt.col}"
    return ast


# -- compiler -------------------------------------------------------------------

def compile_format(ast: FormatAst):
    """Turn a parsed file into a :class:`Multibracket` or :class:`DynamicPolicy`."""
    brackets = [s for s in ast.statements if isinstance(s, BracketStmt)]
    consols = [s for s in ast.statements if isinstance(s, ConsolationStmt)]
    policies = [s for s in ast.statements if isinstance(s, PolicyStmt)]
    explicit = [s for s in ast.statements if isinstance(s, MatchStmt)]

    if policies:
        if brackets or consols or explicit or len(policies) > 1:
            raise MixedKind("a policy cannot be combined with other statements")
        p = policies[0]
        if p.kind == SWISS:
            return make_swiss(p.teams, p.rounds, p.tiebreak, name=ast.name)
        return make_dynamic(RESEED if p.kind == RESEED else RANDOM_DRAW, p.signature,
                            name=ast.name)

    if brackets:
        if explicit:
            raise MixedKind("bracket sugar cannot be combined with explicit matches")
        if len(brackets) > 1:
            raise MixedKind("only one bracket per file")
        mb = build_proper_bracket(brackets[0].signature, name=ast.name)
        for c in consols:
            if c.target != brackets[0].name:
                raise UnknownReference(f"{c.line}:{c.col}: no bracket named {c.target!r}")
            mb = attach_consolation(mb, c.depth)
        return mb

    if consols:
        c = consols[0]
        raise UnknownReference(f"{c.line}:{c.col}: no bracket named {c.target!r}")
    if not explicit:
        raise MixedKind("format declares nothing to play")

    declared = {s.id for s in explicit}
    for s in explicit:
        for ref in (s.slot_a, s.slot_b, s.on_win, s.on_lose):
            target = getattr(ref, "match_id", None)
            if target is not None and target not in declared:
                raise UnknownReference(f"{s.line}:{s.col}: match {s.id} refers to "
                                       f"undeclared match {target!r}")
    mb = Multibracket.of([Match(s.id, s.slot_a, s.slot_b, s.on_win, s.on_lose)
                          for s in explicit], ast.name)
    report = validate(mb)
    if not report.ok:
        raise ValidationFailed(report)
    return mb


def load(text: str):
    return compile_format(parse(text))


# -- emitter --------------------------------------------------------------------

def _src(s):
    if isinstance(s, SeedEntry):
        return f"seed {s.seed}"
    return f"{'winner' if isinstance(s, WinnerOf) else 'loser'} {s.match_id}"


def _sink(s):
    if isinstance(s, ToSlot):
        return f"match {s.match_id}.{s.slot}"
    if isinstance(s, FinalPlace):
        return f"place {s.place}"
    return f"tie {s.lo}..{s.hi}"


def _ints(values):
    return "[" + ", ".join(map(str, values)) + "]"


def _stmt_text(s):
    if isinstance(s, BracketStmt):
        return f"bracket {s.name}: signature {_ints(s.signature)}"
    if isinstance(s, ConsolationStmt):
        return f"consolation {s.target} depth {s.depth}"
    if isinstance(s, PolicyStmt):
        if s.kind == SWISS:
            text = f"policy swiss teams {s.teams} rounds {s.rounds}"
            return text if s.tiebreak == BY_SEED else f"{text} tiebreak {s.tiebreak}"
        return f"policy {s.kind} signature {_ints(s.signature)}"
    return (f"match {s.id}: {_src(s.slot_a)} vs {_src(s.slot_b)} "
            f"win {_sink(s.on_win)} lose {_sink(s.on_lose)}")


_ORDER = {BracketStmt: 0, ConsolationStmt: 1, PolicyStmt: 2, MatchStmt: 3}


def _sort_key(s):
    ident = getattr(s, "id", None) or getattr(s, "name", None) or getattr(s, "target", "")
    return (_ORDER[type(s)], ident, _stmt_text(s))


def _quote(name):
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit(value, name: str = None) -> str:
    """Canonical text for an AST, a multibracket, or a dynamic policy.

    Statements are sorted (sugar, consolation, policy, then matches by id),
    one per line with four-space indentation.
    """
    if isinstance(value, FormatAst):
        stmts = value.statements
        name = name or value.name
    elif isinstance(value, Multibracket):
        stmts = [MatchStmt(m.id, m.slot_a, m.slot_b, m.on_win, m.on_lose)
                 for m in value.matches.values()]
        name = name or value.name
    elif isinstance(value, DynamicPolicy):
        if value.kind == SWISS:
            stmt = PolicyStmt(SWISS, teams=value.teams, rounds=value.rounds,
                              tiebreak=value.tiebreak)
        else:
            stmt = PolicyStmt(value.kind, signature=value.signature.entrants)
        stmts = [stmt]
        name = name or value.name
    else:
        raise TypeError(f"cannot emit {type(value).__name__}")
    body = "".join(f"    {_stmt_text(s)}\n" for s in sorted(stmts, key=_sort_key))
    return f"format {_quote(name)} {{\n{body}}}\n"
