from . import ast as _ast
from . import errors as _errors
from .ast import *  # noqa: F401, F403
from .errors import *  # noqa: F401, F403
from .interpreter import DEFAULT_FUEL, ProgramOutput, interpret, semantically_equivalent
from .printer import CANONICAL_LAYOUT, Layout, pretty_print, print_expression, print_statement, print_type
from .program import SourceProgram, copy_ast, from_ast, parse
from .scope import BUILTIN_FUNCTIONS, BUILTIN_METHODS, ScopeInfo, resolve_scopes
from .tokens import KEYWORDS, Token, TokenKind, tokenize
from .types import MiniType, TypeChecker

__all__ = _ast.__all__ + _errors.__all__ + (
    "DEFAULT_FUEL",
    "ProgramOutput",
    "interpret",
    "semantically_equivalent",
    "CANONICAL_LAYOUT",
    "Layout",
    "pretty_print",
    "print_expression",
    "print_statement",
    "print_type",
    "SourceProgram",
    "copy_ast",
    "from_ast",
    "parse",
    "BUILTIN_FUNCTIONS",
    "BUILTIN_METHODS",
    "ScopeInfo",
    "resolve_scopes",
    "KEYWORDS",
    "Token",
    "TokenKind",
    "tokenize",
    "MiniType",
    "TypeChecker",
)
