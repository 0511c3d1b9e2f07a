"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from jmlharness.jml import ast
from jmlharness.testkit.mutation import MutationConfig
from jmlharness.testkit.suite import MethodSignature, TestSuite
from jmlharness.values import INT32_MAX, INT32_MIN, Value

NAMES = ["x", "y", "n", "a", "b", "s"]

literals = st.one_of(
    st.booleans().map(lambda b: ast.Literal("bool", b)),
    st.integers(0, 2**31 - 1).map(lambda n: ast.Literal("int", n)),
    st.integers(0, 2**63 - 1).map(lambda n: ast.Literal("long", n)),
    st.floats(0, 1e12, allow_nan=False, allow_infinity=False).map(lambda x: ast.Literal("double", x)),
    st.characters(min_codepoint=0, max_codepoint=0x2FF).map(lambda c: ast.Literal("char", c)),
    st.text(st.characters(min_codepoint=0, max_codepoint=0x2FF), max_size=5).map(lambda s: ast.Literal("string", s)),
    st.just(ast.Literal("null", None)),
)
leaves = st.one_of(literals, st.sampled_from(NAMES).map(ast.Ident), st.just(ast.Result()))


def _extend(sub):
    return st.one_of(
        st.builds(ast.Binary, st.sampled_from(ast.BINARY_OPS), sub, sub),
        st.builds(ast.Unary, st.sampled_from(ast.UNARY_OPS), sub),
        st.builds(ast.Cast, st.sampled_from(ast.CAST_TYPES), sub),
        st.builds(ast.Cond, sub, sub, sub),
        st.builds(ast.Index, sub, sub),
        st.builds(ast.Length, sub),
        st.builds(ast.Old, sub),
        st.builds(ast.Quantified, st.sampled_from(["forall", "exists"]), st.sampled_from(["i", "j", "k"]),
                  st.sampled_from(ast.QUANT_VAR_TYPES), st.none() | sub, sub),
    )


def _depth(e) -> int:
    return 1 + max((_depth(c) for c in ast.children(e)), default=0)


# depth <= 6 counting the leaf level
expressions = st.recursive(leaves, _extend, max_leaves=24).filter(lambda e: _depth(e) <= 6)


def int_suite(n_params: int = 1, min_pairs: int = 1, max_pairs: int = 6, lo: int = -50, hi: int = 50):
    """Suites over ``int`` parameters with an ``int`` result (any outputs)."""
    names = ["x", "y", "z"][:n_params]
    sig = MethodSignature("f", tuple((nm, "int32") for nm in names), "int32")
    ints = st.integers(lo, hi).map(Value.int32)
    pair = st.tuples(st.tuples(*[ints] * n_params), ints)
    invalid = st.lists(st.tuples(*[ints] * n_params), max_size=3)
    return st.builds(lambda ps, inv: TestSuite(sig, ps, inv), st.lists(pair, min_size=min_pairs, max_size=max_pairs), invalid)


values_of = {
    "bool": st.booleans().map(Value.bool),
    "char": st.integers(0, 0xFFFF).map(Value.char),
    "int32": st.integers(INT32_MIN, INT32_MAX).map(Value.int32),
    "int64": st.integers(-(2**63), 2**63 - 1).map(Value.int64),
    "float64": st.floats(allow_nan=True).map(Value.float64),
    "string": st.text(max_size=6).map(Value.string),
}
values_of["int32[]"] = st.lists(values_of["int32"], max_size=5).map(lambda xs: Value.array("int32", xs))
values_of["char[]"] = st.lists(values_of["char"], max_size=5).map(lambda xs: Value.array("char", xs))
any_value = st.one_of(*values_of.values())

mutation_configs = st.builds(
    MutationConfig,
    k=st.integers(1, 6),
    char_case_flip=st.booleans(),
    seed=st.integers(0, 1000),
)


# small linear predicates over x and \result; never raise EvalError
_terms = st.one_of(
    st.just("x"), st.just("\\result"), st.integers(-20, 20).map(str),
    st.tuples(st.sampled_from(["x", "\\result"]), st.sampled_from(["+", "-"]), st.integers(0, 5)).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
)
atoms = st.tuples(_terms, st.sampled_from(["<", "<=", "==", "!=", ">", ">="]), _terms).map(" ".join)
clauses = st.recursive(
    atoms,
    lambda sub: st.tuples(sub, st.sampled_from(["&&", "||", "==>"]), sub).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
    max_leaves=3,
)
