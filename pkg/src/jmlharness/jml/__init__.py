from .ast import Expr
from .evaluator import DEFAULT_BUDGET, HOLDS, VIOLATED, ArithMode, Env, Reason, Verdict, evaluate
from .lexer import JmlSyntaxError, ParseError, UnsupportedConstruct
from .parser import parse_expression
from .printer import dump_tree, print_expression

__all__ = [
    "ArithMode", "DEFAULT_BUDGET", "Env", "Expr", "HOLDS", "JmlSyntaxError", "ParseError", "Reason",
    "UnsupportedConstruct", "VIOLATED", "Verdict", "dump_tree", "evaluate", "parse_expression",
    "print_expression",
]
