import glob

import pytest

from pzlkit.dsl import (
    Diagnostic,
    RuleParseError,
    parse_rule,
    serialize_rule,
    static_check,
)
from pzlkit.dsl.ast import (
    And,
    Arith,
    BoardOf,
    Builtin,
    Compare,
    CountExpr,
    Exists,
    FilterExpr,
    ForAll,
    Iff,
    Implies,
    Literal,
    MembersOf,
    Not,
    Or,
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
from pzlkit.grid import GridDims
from pzlkit.relations import RelationKind
from pzlkit.solver.rng import SplitMix64
from pzlkit.values import MARK, NULL, UNDECIDED

H, V, D, M = RelationKind.H, RelationKind.V, RelationKind.D, RelationKind.M

CORPUS_FILES = sorted(glob.glob("corpus/*.rule"))


def test_corpus_files_exist():
    assert len(CORPUS_FILES) == 11  # ten puzzles plus the kurotto variant


@pytest.mark.parametrize("path", CORPUS_FILES)
def test_corpus_round_trip(path):
    rule = parse_rule(open(path).read())
    text = serialize_rule(rule)
    again = parse_rule(text)
    assert again == rule
    assert serialize_rule(again) == text


def test_slitherlink_shape():
    rule = parse_rule(open("corpus/slitherlink.rule").read())
    assert rule.combined_names() == ("Gp",)
    spec = rule.family_spec("Gp")
    assert spec.relations == frozenset({H, V, D})
    assert spec.base.name == "Ep"
    assert len(rule.constraints) == 5
    assert len(rule.domains) == 5


def test_serialize_deterministic():
    rule = parse_rule(open("corpus/sudoku.rule").read())
    assert serialize_rule(rule) == serialize_rule(rule)


def test_empty_domain_rejected():
    with pytest.raises(RuleParseError) as exc:
        parse_rule('puzzle "t"\ndomain C = {}\n')
    assert exc.value.code == "empty-domain"


def test_unbound_variable_rejected():
    with pytest.raises(RuleParseError) as exc:
        parse_rule('puzzle "t"\nconstraint forall c in B(C): solution(q) == 1\n')
    assert exc.value.code == "unbound-variable"


def test_unknown_family_rejected():
    with pytest.raises(RuleParseError) as exc:
        parse_rule('puzzle "t"\nconstraint count(B(Qq)) == 0\n')
    assert exc.value.code == "unknown-identifier"


def test_type_mismatch_rejected():
    with pytest.raises(RuleParseError) as exc:
        parse_rule('puzzle "t"\nconstraint size(B(C)) == 1\n')
    assert exc.value.code == "type-mismatch"


def test_syntax_error_carries_position():
    with pytest.raises(RuleParseError) as exc:
        parse_rule('puzzle "t"\nconstraint 1 +\n')
    assert exc.value.code == "syntax"
    assert exc.value.line == 2


def test_trailing_input_rejected():
    with pytest.raises(RuleParseError) as exc:
        parse_rule('puzzle "t"\nconstraint 1 == 1 1\n')
    assert exc.value.code == "syntax"


def test_comments_and_multiline():
    rule = parse_rule(
        'puzzle "t"  # header\n'
        "# a comment line\n"
        "constraint (1 == 1\n"
        "    and 2 == 2)\n"
    )
    assert len(rule.constraints) == 1


def test_operator_precedence():
    rule = parse_rule('puzzle "t"\nconstraint not 1 == 2 and 3 == 3 or 4 == 5\n')
    expr = rule.constraints[0]
    # ((not (1==2)) and (3==3)) or (4==5)
    assert isinstance(expr, Or)
    assert isinstance(expr.left, And)
    assert isinstance(expr.left.left, Not)


def test_implies_right_associative():
    rule = parse_rule('puzzle "t"\nconstraint 1 == 1 implies 2 == 2 implies 3 == 3\n')
    expr = rule.constraints[0]
    assert isinstance(expr, Implies)
    assert isinstance(expr.right, Implies)


def test_size_env_with_parameter():
    rule = parse_rule('puzzle "t"\nrequire n == m\nrequire n == k * k\n')
    env = rule.size_env(GridDims(4, 4))
    assert env["k"] == 2
    from pzlkit.dsl.ast import RequirementError

    with pytest.raises(RequirementError):
        rule.size_env(GridDims(3, 3))


def test_domain_resolution_with_expressions():
    rule = parse_rule('puzzle "t"\ndomain C = {1..n*m}\n')
    assert rule.domain_values("C", {"m": 2, "n": 3}) == (1, 2, 3, 4, 5, 6)


def test_hidden_defaults_to_domain():
    rule = parse_rule('puzzle "t"\ndomain C = {1, 2}\n')
    assert rule.hidden_set("C") == rule.domain_set("C")


def test_static_check_hitori_unmaskable_warning():
    rule = parse_rule(open("corpus/hitori.rule").read())
    diags = static_check(rule)
    assert [d.code for d in diags] == ["unmaskable-family"]
    assert diags[0].severity == "warning"


def test_static_check_sudoku_clean():
    rule = parse_rule(open("corpus/sudoku.rule").read())
    assert static_check(rule) == []


def test_static_check_shape_on_base_family():
    rule = parse_rule(
        'puzzle "t"\nconstraint forall c in B(C): is_square(c)\n'
    )
    diags = static_check(rule)
    assert any(d.code == "shape-arg" and d.severity == "error" for d in diags)


def test_static_check_shape_on_twice_combined():
    rule = parse_rule(
        'puzzle "t"\n'
        "structure A = combine {H,V} on C\n"
        "structure AA = combine {M} on A\n"
        "constraint forall a in B(AA): is_rectangle(a)\n"
    )
    assert any(d.code == "shape-arg" for d in static_check(rule))


def test_static_check_size_unsatisfiable():
    rule = parse_rule('puzzle "t"\nrequire n == n + 1\n')
    assert any(d.code == "size-unsatisfiable" for d in static_check(rule))


# --- randomized round-trip -----------------------------------------------------


def random_rule(rng: SplitMix64) -> Rule:
    structures = []
    names = []
    for i in range(rng.randrange(3)):
        name = f"F{i}"
        base = rng.choice(["C", "Ep", "P"] + names)
        rels = frozenset(
            rng.choice([(H,), (V,), (H, V), (H, V, D), (M,)])
        )
        structures.append(StructDef(name, rels, base))
        names.append(name)

    def rand_valueset():
        items = []
        for _ in range(rng.randrange(3) + 1):
            kind = rng.randrange(4)
            if kind == 0:
                items.append(ValueItem(rng.randrange(9)))
            elif kind == 1:
                items.append(ValueItem(rng.choice([NULL, MARK, UNDECIDED])))
            elif kind == 2:
                items.append(RangeItem(Literal(rng.randrange(3)), Literal(rng.randrange(6) + 3)))
            else:
                items.append(
                    RangeItem(Literal(1), Arith("*", Var("n"), Var("m")))
                )
        from pzlkit.dsl.ast import normalize_valueset

        return normalize_valueset(items)

    domains = {}
    hidden = {}
    for fam in ("P", "C", "Ep", "Ec") + tuple(names):
        if rng.chance(2, 3):
            domains[fam] = rand_valueset()
        if rng.chance(1, 3):
            hidden[fam] = rand_valueset()

    families = ("P", "C", "Ep", "Ec") + tuple(names)

    def rand_int_expr(depth, env):
        pick = rng.randrange(6) if depth > 0 else rng.randrange(2)
        if pick == 2 and env:
            return SolutionOf(Var(rng.choice(env)))
        if pick == 3 and env:
            return SizeOf(Var(rng.choice(env)))
        if pick == 4:
            return CountExpr(BoardOf(rng.choice(families)))
        if pick == 5:
            return Arith(
                rng.choice(["+", "-", "*"]),
                rand_int_expr(depth - 1, env),
                rand_int_expr(depth - 1, env),
            )
        if pick == 1:
            return Var(rng.choice(["m", "n"]))
        return Literal(rng.randrange(10))

    def rand_bool_expr(depth, env):
        pick = rng.randrange(8 if depth > 0 else 2)
        if pick == 0:
            return Compare(
                rng.choice(["==", "!=", "<", "<="]),
                rand_int_expr(depth - 1, env),
                rand_int_expr(depth - 1, env),
            )
        if pick == 1 and env:
            return Compare(
                rng.choice(["==", "!="]),
                SolutionOf(Var(rng.choice(env))),
                Literal(rng.choice([NULL, MARK, 3])),
            )
        if pick == 1:
            return Compare("==", Literal(1), Literal(1))
        if pick == 2:
            return Not(rand_bool_expr(depth - 1, env))
        if pick == 3:
            op = rng.choice([And, Or, Implies, Iff])
            return op(rand_bool_expr(depth - 1, env), rand_bool_expr(depth - 1, env))
        if pick == 4:
            var = f"v{len(env)}"
            quant = rng.choice([ForAll, Exists])
            return quant(var, BoardOf(rng.choice(families)), rand_bool_expr(depth - 1, env + [var]))
        if pick == 5 and env:
            return Builtin("all_different", (Var(rng.choice(env)),))
        if pick == 6:
            fams = (rng.choice(families),)
            return Builtin(rng.choice(["no_overlap", "fill"]), fams)
        if pick == 7 and env:
            var = f"v{len(env)}"
            return Compare(
                "==",
                SumExpr(
                    var,
                    FilterExpr(
                        BoardOf(rng.choice(families)),
                        f"w{len(env)}",
                        Compare("!=", SolutionOf(Var(f"w{len(env)}")), Literal(NULL)),
                    ),
                    SizeOf(Var(var)),
                ),
                rand_int_expr(depth - 1, env),
            )
        return Compare("==", Literal(0), Literal(0))  # fallback

    constraints = tuple(rand_bool_expr(2, []) for _ in range(rng.randrange(4)))
    requires = (Compare("==", Var("n"), Var("m")),) if rng.chance(1, 4) else ()
    return Rule(
        name=f"random-{rng.randrange(1 << 30)}",
        requires=requires,
        structures=tuple(structures),
        domains=domains,
        hidden=hidden,
        constraints=constraints,
    )


def test_random_rules_round_trip():
    rng = SplitMix64(20250809)
    for i in range(300):
        rule = random_rule(rng)
        text = serialize_rule(rule)
        again = parse_rule(text)
        assert again == rule, f"round trip failed for random rule {i}:\n{text}"
        assert serialize_rule(again) == text
