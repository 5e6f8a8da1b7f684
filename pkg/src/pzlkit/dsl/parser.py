"""Parser for the rule language.

Line-oriented statements (``puzzle``, ``require``, ``structure``,
``domain``, ``hidden``, ``constraint``), ``#`` comments, and free-form
expressions inside constraints.  Newlines inside unclosed parentheses or
braces continue the statement.  The full grammar and operator precedence
table are documented in docs/dsl.md.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import PzlError
from ..grid import BASE_FAMILIES, BASE_GROUPS
from ..relations import RelationKind
from ..values import MARK, NULL, UNDECIDED
from .ast import (
    And,
    normalize_valueset,
    Arith,
    BoardOf,
    Builtin,
    Compare,
    ConnectTo,
    CountExpr,
    Exists,
    Expr,
    FilterExpr,
    ForAll,
    Iff,
    Implies,
    Literal,
    MembersOf,
    Not,
    Or,
    ProdExpr,
    RangeItem,
    RegionContaining,
    Rule,
    SizeOf,
    SolutionOf,
    StructDef,
    SumExpr,
    ValueItem,
    Var,
)


class RuleParseError(PzlError):
    """Parse or validation failure, with a diagnostic code and position."""

    def __init__(self, code: str, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{code} at line {line}:{col}: {message}")
        self.code = code
        self.line = line
        self.col = col


_SYMBOLS = ("..", "==", "!=", "<=", "<", "=", "{", "}", "(", ")", ",", ":", "+", "-", "*", "^")

_KEYWORDS = {
    "puzzle", "require", "structure", "domain", "hidden", "constraint",
    "combine", "on", "forall", "exists", "in", "not", "and", "or",
    "implies", "iff", "null", "undecided", "x",
}

# reserved call names; an identifier followed by "(" must be one of these
_FUNCTIONS = {
    "B", "size", "solution", "members", "count", "connect", "region",
    "filter", "sum", "prod", "cross", "cycle", "all_different",
    "is_rectangle", "is_square", "no_overlap", "fill", "factorial",
}

_PARAMS = ("m", "n", "k")


@dataclass
class _Token:
    type: str  # IDENT INT STRING OP NEWLINE EOF
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    toks: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    depth = 0
    while i < n:
        ch = text[i]
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "\n":
            if depth == 0 and toks and toks[-1].type != "NEWLINE":
                toks.append(_Token("NEWLINE", "", line, col))
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise RuleParseError("syntax", "unterminated string", line, col)
            toks.append(_Token("STRING", text[i + 1 : j], line, col))
            col += j - i + 1
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Token("IDENT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                if sym in "({":
                    depth += 1
                elif sym in ")}":
                    depth = max(0, depth - 1)
                toks.append(_Token("OP", sym, line, col))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise RuleParseError("syntax", f"unexpected character {ch!r}", line, col)
    toks.append(_Token("NEWLINE", "", line, col))
    toks.append(_Token("EOF", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    # -- token plumbing ------------------------------------------------

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect_op(self, sym: str) -> _Token:
        t = self.next()
        if t.type != "OP" or t.text != sym:
            raise RuleParseError("syntax", f"expected {sym!r}, got {t.text or t.type!r}", t.line, t.col)
        return t

    def expect_ident(self, what: str = "identifier") -> _Token:
        t = self.next()
        if t.type != "IDENT":
            raise RuleParseError("syntax", f"expected {what}, got {t.text or t.type!r}", t.line, t.col)
        return t

    def at_op(self, sym: str) -> bool:
        t = self.peek()
        return t.type == "OP" and t.text == sym

    def at_word(self, word: str) -> bool:
        t = self.peek()
        return t.type == "IDENT" and t.text == word

    def eat_word(self, word: str) -> bool:
        if self.at_word(word):
            self.next()
            return True
        return False

    def skip_newlines(self) -> None:
        while self.peek().type == "NEWLINE":
            self.next()

    def end_statement(self) -> None:
        t = self.peek()
        if t.type == "EOF":
            return
        if t.type != "NEWLINE":
            raise RuleParseError("syntax", f"trailing input {t.text!r}", t.line, t.col)
        self.next()

    # -- statements -----------------------------------------------------

    def parse_rule(self) -> Rule:
        self.skip_newlines()
        t = self.next()
        if not (t.type == "IDENT" and t.text == "puzzle"):
            raise RuleParseError("syntax", "rule file must start with `puzzle`", t.line, t.col)
        name_tok = self.next()
        if name_tok.type != "STRING":
            raise RuleParseError("syntax", "puzzle name must be a quoted string", name_tok.line, name_tok.col)
        self.end_statement()

        requires: list[Expr] = []
        structures: list[StructDef] = []
        domains: dict = {}
        hidden: dict = {}
        constraints: list[Expr] = []
        self.stmt_lines: list[int] = []

        declared = list(BASE_FAMILIES)
        while True:
            self.skip_newlines()
            t = self.peek()
            if t.type == "EOF":
                break
            if t.type != "IDENT":
                raise RuleParseError("syntax", f"expected a statement, got {t.text!r}", t.line, t.col)
            if t.text == "require":
                self.next()
                requires.append(self.parse_expr())
                self.end_statement()
            elif t.text == "structure":
                self.next()
                name = self.expect_ident("structure name")
                if name.text in declared or name.text in _KEYWORDS or name.text in _FUNCTIONS or name.text in _PARAMS:
                    raise RuleParseError("duplicate-definition", f"name {name.text!r} is taken", name.line, name.col)
                self.expect_op("=")
                kw = self.next()
                if not (kw.type == "IDENT" and kw.text == "combine"):
                    raise RuleParseError("syntax", "structure definitions use `combine`", kw.line, kw.col)
                rels = self.parse_relset()
                on = self.next()
                if not (on.type == "IDENT" and on.text == "on"):
                    raise RuleParseError("syntax", "expected `on`", on.line, on.col)
                base = self.expect_ident("base family")
                if base.text not in declared:
                    raise RuleParseError("unknown-identifier", f"unknown family {base.text!r}", base.line, base.col)
                structures.append(StructDef(name.text, rels, base.text))
                declared.append(name.text)
                self.end_statement()
            elif t.text in ("domain", "hidden"):
                which = self.next().text
                fam = self.expect_ident("family name")
                target = domains if which == "domain" else hidden
                if fam.text not in BASE_GROUPS and fam.text not in (s.name for s in structures):
                    raise RuleParseError(
                        "unknown-identifier",
                        f"{which} declared for unknown or value-free family {fam.text!r}",
                        fam.line,
                        fam.col,
                    )
                if fam.text in target:
                    raise RuleParseError("duplicate-definition", f"{which} for {fam.text!r} given twice", fam.line, fam.col)
                self.expect_op("=")
                target[fam.text] = self.parse_valueset()
                self.end_statement()
            elif t.text == "constraint":
                self.next()
                self.stmt_lines.append(t.line)
                constraints.append(self.parse_expr())
                self.end_statement()
            else:
                raise RuleParseError("syntax", f"unknown statement {t.text!r}", t.line, t.col)

        rule = Rule(
            name=name_tok.text,
            requires=tuple(requires),
            structures=tuple(structures),
            domains=domains,
            hidden=hidden,
            constraints=tuple(constraints),
        )
        _validate_rule(rule, self.stmt_lines)
        return rule

    # -- small grammars ---------------------------------------------------

    def parse_relset(self) -> frozenset:
        self.expect_op("{")
        rels = set()
        while True:
            t = self.expect_ident("relation")
            try:
                rels.add(RelationKind(t.text))
            except ValueError:
                raise RuleParseError("unknown-identifier", f"unknown relation {t.text!r}", t.line, t.col) from None
            if self.at_op(","):
                self.next()
                continue
            break
        self.expect_op("}")
        return frozenset(rels)

    def parse_valueset(self) -> tuple:
        open_tok = self.expect_op("{")
        items: list = []
        if self.at_op("}"):
            raise RuleParseError("empty-domain", "value sets must be nonempty", open_tok.line, open_tok.col)
        while True:
            items.append(self.parse_valueitem())
            if self.at_op(","):
                self.next()
                continue
            break
        self.expect_op("}")
        return normalize_valueset(items)

    def parse_valueitem(self):
        t = self.peek()
        if t.type == "IDENT" and t.text in ("null", "undecided", "x"):
            self.next()
            return ValueItem({"null": NULL, "undecided": UNDECIDED, "x": MARK}[t.text])
        lo = self.parse_add()
        if self.at_op(".."):
            self.next()
            hi = self.parse_add()
            return RangeItem(lo, hi)
        if isinstance(lo, Literal):
            return ValueItem(lo.value)
        return RangeItem(lo, lo)

    # -- expressions -----------------------------------------------------
    # precedence, low to high: quantifiers, iff, implies, or, and, not,
    # comparison, + -, *, ^, atoms

    def parse_expr(self) -> Expr:
        if self.at_word("forall") or self.at_word("exists"):
            kw = self.next().text
            var = self.expect_ident("variable")
            self._check_binder_name(var)
            inkw = self.next()
            if not (inkw.type == "IDENT" and inkw.text == "in"):
                raise RuleParseError("syntax", "expected `in`", inkw.line, inkw.col)
            coll = self.parse_atom()
            self.expect_op(":")
            body = self.parse_expr()
            node = ForAll if kw == "forall" else Exists
            return node(var.text, coll, body)
        return self.parse_iff()

    def _check_binder_name(self, tok: _Token) -> None:
        if tok.text in _KEYWORDS or tok.text in _FUNCTIONS or tok.text in _PARAMS:
            raise RuleParseError("syntax", f"{tok.text!r} cannot be a variable name", tok.line, tok.col)

    def parse_iff(self) -> Expr:
        left = self.parse_implies()
        while self.at_word("iff"):
            self.next()
            left = Iff(left, self.parse_implies())
        return left

    def parse_implies(self) -> Expr:
        left = self.parse_or()
        if self.at_word("implies"):
            self.next()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Expr:
        left = self.parse_and()
        while self.at_word("or"):
            self.next()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> Expr:
        left = self.parse_not()
        while self.at_word("and"):
            self.next()
            left = And(left, self.parse_not())
        return left

    def parse_not(self) -> Expr:
        if self.at_word("not"):
            self.next()
            return Not(self.parse_not())
        return self.parse_cmp()

    def parse_cmp(self) -> Expr:
        left = self.parse_add()
        t = self.peek()
        if t.type == "OP" and t.text in ("==", "!=", "<", "<="):
            self.next()
            return Compare(t.text, left, self.parse_add())
        return left

    def parse_add(self) -> Expr:
        left = self.parse_mul()
        while True:
            t = self.peek()
            if t.type == "OP" and t.text in ("+", "-"):
                self.next()
                left = Arith(t.text, left, self.parse_mul())
            else:
                return left

    def parse_mul(self) -> Expr:
        left = self.parse_pow()
        while self.at_op("*"):
            self.next()
            left = Arith("*", left, self.parse_pow())
        return left

    def parse_pow(self) -> Expr:
        left = self.parse_atom()
        if self.at_op("^"):
            self.next()
            return Arith("^", left, self.parse_pow())
        return left

    def parse_atom(self) -> Expr:
        t = self.next()
        if t.type == "INT":
            return Literal(int(t.text))
        if t.type == "OP" and t.text == "-":
            num = self.next()
            if num.type != "INT":
                raise RuleParseError("syntax", "`-` may only prefix an integer literal", num.line, num.col)
            return Literal(-int(num.text))
        if t.type == "OP" and t.text == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if t.type != "IDENT":
            raise RuleParseError("syntax", f"unexpected {t.text or t.type!r}", t.line, t.col)
        word = t.text
        if word == "null":
            return Literal(NULL)
        if word == "undecided":
            return Literal(UNDECIDED)
        if word == "x":
            return Literal(MARK)
        if self.at_op("("):
            if word not in _FUNCTIONS:
                raise RuleParseError("unknown-identifier", f"unknown function {word!r}", t.line, t.col)
            return self.parse_call(word, t)
        if word in _KEYWORDS:
            raise RuleParseError("syntax", f"unexpected keyword {word!r}", t.line, t.col)
        return Var(word)

    def parse_call(self, name: str, tok: _Token) -> Expr:
        self.expect_op("(")
        if name == "B":
            fam = self.expect_ident("family name")
            self.expect_op(")")
            return BoardOf(fam.text)
        if name in ("no_overlap", "fill"):
            fams = [self.expect_ident("family name").text]
            while self.at_op(","):
                self.next()
                fams.append(self.expect_ident("family name").text)
            self.expect_op(")")
            return Builtin(name, tuple(fams))
        if name == "region":
            fam = self.expect_ident("family name")
            self.expect_op(",")
            e = self.parse_expr()
            self.expect_op(")")
            return RegionContaining(fam.text, e)
        if name == "connect":
            e = self.parse_expr()
            self.expect_op(",")
            rels = self.parse_relset()
            self.expect_op(")")
            return ConnectTo(e, rels)
        if name == "filter":
            coll = self.parse_expr()
            self.expect_op(",")
            var = self.expect_ident("variable")
            self._check_binder_name(var)
            self.expect_op(":")
            pred = self.parse_expr()
            self.expect_op(")")
            return FilterExpr(coll, var.text, pred)
        if name in ("sum", "prod"):
            var = self.expect_ident("variable")
            self._check_binder_name(var)
            inkw = self.next()
            if not (inkw.type == "IDENT" and inkw.text == "in"):
                raise RuleParseError("syntax", "expected `in`", inkw.line, inkw.col)
            coll = self.parse_expr()
            self.expect_op(":")
            body = self.parse_expr()
            self.expect_op(")")
            return (SumExpr if name == "sum" else ProdExpr)(var.text, coll, body)
        # single-argument forms
        e = self.parse_expr()
        self.expect_op(")")
        if name == "size":
            return SizeOf(e)
        if name == "solution":
            return SolutionOf(e)
        if name == "members":
            return MembersOf(e)
        if name == "count":
            return CountExpr(e)
        return Builtin(name, (e,))


# --- scope and type validation ----------------------------------------------

_NUMERIC = ("int", "value")


def _validate_rule(rule: Rule, stmt_lines: list[int]) -> None:
    families = set(rule.family_names())

    def check(expr: Expr, env: dict, line: int) -> str:
        def fail(code: str, msg: str):
            raise RuleParseError(code, msg, line, 0)

        def want(e: Expr, kinds, what: str) -> str:
            got = check(e, env, line)
            if got not in kinds:
                fail("type-mismatch", f"{what} expects {'/'.join(kinds)}, got {got}")
            return got

        if isinstance(expr, Literal):
            return "int" if isinstance(expr.value, int) else "value"
        if isinstance(expr, Var):
            if expr.name not in env:
                fail("unbound-variable", f"unbound variable {expr.name!r}")
            return env[expr.name]
        if isinstance(expr, Arith):
            want(expr.left, _NUMERIC, f"`{expr.op}` operand")
            want(expr.right, _NUMERIC, f"`{expr.op}` operand")
            return "int"
        if isinstance(expr, Compare):
            if expr.op in ("<", "<="):
                want(expr.left, _NUMERIC, "ordering")
                want(expr.right, _NUMERIC, "ordering")
            else:
                for side in (expr.left, expr.right):
                    got = check(side, env, line)
                    if got in ("bool", "coll"):
                        fail("type-mismatch", f"cannot compare a {got} for equality")
            return "bool"
        if isinstance(expr, Not):
            want(expr.expr, ("bool",), "`not`")
            return "bool"
        if isinstance(expr, (And, Or, Implies, Iff)):
            opname = type(expr).__name__.lower()
            want(expr.left, ("bool",), opname)
            want(expr.right, ("bool",), opname)
            return "bool"
        if isinstance(expr, (ForAll, Exists)):
            want(expr.coll, ("coll",), "quantifier collection")
            inner = dict(env)
            inner[expr.var] = "struct"
            got = check(expr.body, inner, line)
            if got != "bool":
                fail("type-mismatch", "quantifier body must be boolean")
            return "bool"
        if isinstance(expr, (SumExpr, ProdExpr)):
            want(expr.coll, ("coll",), "aggregation collection")
            inner = dict(env)
            inner[expr.var] = "struct"
            got = check(expr.body, inner, line)
            if got not in _NUMERIC:
                fail("type-mismatch", "aggregation body must be numeric")
            return "int"
        if isinstance(expr, CountExpr):
            want(expr.coll, ("coll",), "count")
            return "int"
        if isinstance(expr, SizeOf):
            want(expr.expr, ("struct",), "size")
            return "int"
        if isinstance(expr, SolutionOf):
            want(expr.expr, ("struct",), "solution")
            return "value"
        if isinstance(expr, BoardOf):
            if expr.family not in families:
                fail("unknown-identifier", f"unknown family {expr.family!r}")
            return "coll"
        if isinstance(expr, MembersOf):
            want(expr.expr, ("struct",), "members")
            return "coll"
        if isinstance(expr, ConnectTo):
            want(expr.expr, ("struct",), "connect")
            return "coll"
        if isinstance(expr, RegionContaining):
            if expr.family not in families:
                fail("unknown-identifier", f"unknown family {expr.family!r}")
            want(expr.expr, ("struct",), "region")
            return "struct"
        if isinstance(expr, FilterExpr):
            want(expr.coll, ("coll",), "filter collection")
            inner = dict(env)
            inner[expr.var] = "struct"
            got = check(expr.predicate, inner, line)
            if got != "bool":
                fail("type-mismatch", "filter predicate must be boolean")
            return "coll"
        if isinstance(expr, Builtin):
            if expr.name in ("no_overlap", "fill"):
                for fam in expr.args:
                    if fam not in families:
                        fail("unknown-identifier", f"unknown family {fam!r}")
                return "bool"
            if expr.name in ("cross", "cycle"):
                want(expr.args[0], ("struct",), expr.name)
                return "int"
            if expr.name == "all_different":
                want(expr.args[0], ("struct", "coll"), "all_different")
                return "bool"
            if expr.name in ("is_rectangle", "is_square"):
                want(expr.args[0], ("struct",), expr.name)
                return "bool"
            if expr.name == "factorial":
                want(expr.args[0], _NUMERIC, "factorial")
                return "int"
        raise AssertionError(f"unhandled node {type(expr).__name__}")

    params = {"m": "int", "n": "int", "k": "int"}
    for r in rule.requires:
        got = check(r, params, 0)
        if got != "bool":
            raise RuleParseError("type-mismatch", "require expects a boolean expression")
    for idx, cexpr in enumerate(rule.constraints):
        line = stmt_lines[idx] if idx < len(stmt_lines) else 0
        got = check(cexpr, params, line)
        if got != "bool":
            raise RuleParseError("type-mismatch", "constraint expects a boolean expression", line, 0)
    # value sets may only use size parameters in their bounds
    for vs in list(rule.domains.values()) + list(rule.hidden.values()):
        for item in vs:
            if isinstance(item, RangeItem):
                check(item.lo, params, 0)
                check(item.hi, params, 0)


def parse_rule(text: str) -> Rule:
    """Parse rule text into a validated Rule.

    Raises RuleParseError with a diagnostic code (syntax,
    unknown-identifier, unbound-variable, type-mismatch, empty-domain,
    duplicate-definition) and a line/column position.
    """
    return _Parser(text).parse_rule()
