"""
MIT License

Copyright (c) 2024-present stylomorph contributors

Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all
copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""

# Recursive-descent parser for MiniC.
#
# Comments are carried as trivia: every comment token is attached to the first
# statement (or top-level item) that starts at or after it. Comments in front of
# a closing brace become the block's trailing comments. Block comments are
# carried in line form, one `//` line per line of text.

from typing import Callable, List, Optional, Set, Type

from .ast import (
    Assign,
    BinOp,
    Call,
    CompoundStmt,
    DeclStmt,
    ExprStmt,
    ForStmt,
    FuncDecl,
    GlobalDecl,
    IfStmt,
    Include,
    Index,
    Literal,
    Node,
    Param,
    PrecisionStmt,
    Program,
    ReturnStmt,
    StreamIn,
    StreamOut,
    SyncIoStmt,
    TypeRef,
    Typedef,
    UnaryOp,
    VarDecl,
    VarRef,
    WhileStmt,
    renumber,
)
from .errors import MiniCSyntaxError
from .tokens import TYPE_KEYWORDS, Token, TokenKind, tokenize

__all__ = (
    "ASSIGN_OPS",
    "BINARY_LEVELS",
    "Parser",
    "parse_ast",
)

ASSIGN_OPS = ("=", "+=", "-=", "*=", "/=", "%=")
BINARY_LEVELS = (
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
)
ADDITIVE_LEVEL = 4
_VALUE_TYPES = tuple(name for name in TYPE_KEYWORDS if name != "void")
_LITERAL_KINDS = {
    TokenKind.literal_int: "int",
    TokenKind.literal_float: "float",
    TokenKind.literal_string: "string",
    TokenKind.literal_char: "char",
}


def _line_comments(text: str) -> List[str]:
    if not text.startswith("/*"):
        return [text.rstrip()]
    body = [line.strip().lstrip("*").strip() for line in text[2:-2].split("\n")]
    while len(body) > 1 and not body[-1]:
        body.pop()
    while len(body) > 1 and not body[0]:
        body.pop(0)
    return [f"// {line}" if line else "//" for line in body]


class Parser:
    def __init__(self, source: str):
        self._tokens: List[Token] = []
        self._leading: List[List[str]] = []
        pending: List[str] = []
        for token in tokenize(source):
            if token.kind is TokenKind.comment:
                pending.extend(_line_comments(token.text))
            elif token.kind is not TokenKind.whitespace:
                self._tokens.append(token)
                self._leading.append(pending)
                pending = []
        self._tail_comments = pending
        lines = source.split("\n")
        self._eof_pos = (len(lines), len(lines[-1]) + 1)
        self._pos = 0
        self._frames: List[List[str]] = []
        self._typedefs: Set[str] = set()

    # --- token helpers

    def _peek(self, offset: int = 0) -> Optional[Token]:
        idx = self._pos + offset
        if idx < len(self._tokens):
            return self._tokens[idx]
        return None

    def _text(self, offset: int = 0) -> Optional[str]:
        token = self._peek(offset)
        return None if token is None else token.text

    def _error(self, expected: str) -> MiniCSyntaxError:
        token = self._peek()
        if token is None:
            return MiniCSyntaxError(self._eof_pos[0], self._eof_pos[1], expected, "end of input")
        return MiniCSyntaxError(token.line, token.column, expected, token.text)

    def _advance(self) -> Token:
        token = self._peek()
        if token is None:
            raise self._error("more input")
        comments = self._leading[self._pos]
        if comments:
            if self._frames:
                self._frames[-1].extend(comments)
            self._leading[self._pos] = []
        self._pos += 1
        return token

    def _accept(self, text: str) -> bool:
        token = self._peek()
        if token is not None and token.text == text and token.kind is not TokenKind.literal_string:
            self._advance()
            return True
        return False

    def _expect(self, text: str) -> Token:
        token = self._peek()
        if token is None or token.text != text or token.kind is TokenKind.literal_string:
            raise self._error(f"'{text}'")
        return self._advance()

    def _expect_identifier(self) -> str:
        token = self._peek()
        if token is None or token.kind is not TokenKind.identifier:
            raise self._error("identifier")
        return self._advance().text

    def _header_name(self) -> str:
        # `string` is a type keyword and a header name at the same time
        token = self._peek()
        if token is None or token.kind not in (TokenKind.identifier, TokenKind.keyword):
            raise self._error("header name")
        return self._advance().text

    def _expect_close_angle(self) -> None:
        token = self._peek()
        if token is not None and token.text == ">>":
            # ``vec<vec<int>>``: consume half of the shift token
            self._tokens[self._pos] = Token(TokenKind.punctuator, ">", token.line, token.column + 1)
            return
        self._expect(">")

    def _take_leading(self) -> List[str]:
        if self._pos >= len(self._tokens):
            return []
        comments = self._leading[self._pos]
        self._leading[self._pos] = []
        return comments

    def _framed(self, producer: Callable[[], Node]) -> Node:
        self._frames.append([])
        try:
            node = producer()
        finally:
            comments = self._frames.pop()
        if hasattr(node, "comments"):
            node.comments = comments + node.comments
        elif self._frames:
            self._frames[-1].extend(comments)
        return node

    # --- types

    def _at_type(self) -> bool:
        token = self._peek()
        if token is None:
            return False
        if token.kind is TokenKind.keyword and token.text in _VALUE_TYPES:
            return True
        if token.kind is TokenKind.identifier and token.text in self._typedefs:
            follower = self._peek(1)
            return follower is not None and follower.kind is TokenKind.identifier
        return False

    def _type(self, allow_void: bool = False) -> TypeRef:
        token = self._peek()
        if token is None:
            raise self._error("type")
        if token.text == "vec":
            self._advance()
            self._expect("<")
            elem = self._type()
            self._expect_close_angle()
            return TypeRef("vec", elem)
        if token.kind is TokenKind.keyword and (token.text in _VALUE_TYPES or (allow_void and token.text == "void")):
            return TypeRef(self._advance().text)
        if token.kind is TokenKind.identifier and token.text in self._typedefs:
            return TypeRef(self._advance().text)
        raise self._error("type")

    # --- top level

    def parse_program(self) -> Program:
        items: List[Node] = []
        while self._peek() is not None:
            items.append(self._framed(self._top_level))
        return Program(items, list(self._tail_comments))

    def _top_level(self) -> Node:
        if self._accept("#"):
            self._expect("include")
            self._expect("<")
            header = self._header_name()
            self._expect(">")
            return Include(header)
        if self._accept("typedef"):
            base = self._type()
            alias = self._expect_identifier()
            self._expect(";")
            self._typedefs.add(alias)
            return Typedef(base, alias)
        ret = self._type(allow_void=True)
        name = self._expect_identifier()
        if self._accept("("):
            params: List[Param] = []
            if not self._accept(")"):
                params.append(self._param())
                while self._accept(","):
                    params.append(self._param())
                self._expect(")")
            body = self._compound()
            return FuncDecl(ret, name, params, body)
        if ret.name == "void":
            raise self._error("'('")
        decl = self._var_decl(GlobalDecl, ret, name)
        self._expect(";")
        return decl

    def _param(self) -> Param:
        ptype = self._type()
        by_ref = self._accept("&")
        name = self._expect_identifier()
        is_array = False
        if not by_ref and self._accept("["):
            self._expect("]")
            is_array = True
        return Param(ptype, name, by_ref, is_array)

    def _var_decl(self, node_type: Type[VarDecl], vtype: TypeRef, name: str) -> VarDecl:
        array_size = ctor_size = init = None
        if self._accept("["):
            array_size = self._expression()
            self._expect("]")
        elif vtype.is_vec and self._accept("("):
            ctor_size = self._expression()
            self._expect(")")
        if self._accept("="):
            init = self._expression()
        return node_type(vtype, name, array_size=array_size, init=init, ctor_size=ctor_size)

    # --- statements

    def _compound(self) -> CompoundStmt:
        self._expect("{")
        stmts: List[Node] = []
        while self._text() != "}":
            if self._peek() is None:
                raise self._error("'}'")
            stmts.append(self._statement())
        trailing = self._take_leading()
        self._expect("}")
        return CompoundStmt(stmts, trailing)

    def _statement(self) -> Node:
        return self._framed(self._statement_body)

    def _body(self) -> Node:
        body = self._statement()
        if isinstance(body, CompoundStmt) and body.comments:
            if body.stmts:
                body.stmts[0].comments = body.comments + body.stmts[0].comments
            else:
                body.trailing_comments = body.comments + body.trailing_comments
            body.comments = []
        return body

    def _statement_body(self) -> Node:
        text = self._text()
        if text == "{":
            return self._compound()
        if text == "if":
            self._advance()
            self._expect("(")
            cond = self._expression()
            self._expect(")")
            then = self._body()
            els = None
            if self._accept("else"):
                els = self._body()
            return IfStmt(cond, then, els)
        if text == "while":
            self._advance()
            self._expect("(")
            cond = self._expression()
            self._expect(")")
            return WhileStmt(cond, self._body())
        if text == "for":
            return self._for()
        if text == "return":
            self._advance()
            value = None if self._text() == ";" else self._expression()
            self._expect(";")
            return ReturnStmt(value)
        if text == "input":
            self._advance()
            targets = []
            while self._accept(">>"):
                targets.append(self._postfix())
            if not targets:
                raise self._error("'>>'")
            self._expect(";")
            return StreamIn(targets)
        if text == "output":
            self._advance()
            items = []
            while self._accept("<<"):
                items.append(self._binary(ADDITIVE_LEVEL))
            if not items:
                raise self._error("'<<'")
            self._expect(";")
            return StreamOut(items)
        if text == "fixed":
            self._advance()
            self._expect(";")
            return PrecisionStmt("fixed")
        if text == "setprec":
            self._advance()
            self._expect("(")
            token = self._peek()
            if token is None or token.kind is not TokenKind.literal_int:
                raise self._error("integer literal")
            digits = int(self._advance().text)
            self._expect(")")
            self._expect(";")
            return PrecisionStmt("setprec", digits)
        if text == "syncio":
            self._advance()
            self._expect("(")
            if self._accept("true"):
                enabled = True
            else:
                self._expect("false")
                enabled = False
            self._expect(")")
            self._expect(";")
            return SyncIoStmt(enabled)
        if self._at_type():
            decl = self._local_decl()
            self._expect(";")
            return decl
        expr = self._expression()
        self._expect(";")
        return ExprStmt(expr)

    def _local_decl(self) -> DeclStmt:
        vtype = self._type()
        name = self._expect_identifier()
        return self._var_decl(DeclStmt, vtype, name)

    def _for(self) -> ForStmt:
        self._expect("for")
        self._expect("(")
        init: Optional[Node] = None
        if self._text() != ";":
            if self._at_type():
                init = self._local_decl()
            else:
                init = ExprStmt(self._expression())
        self._expect(";")
        cond = None if self._text() == ";" else self._expression()
        self._expect(";")
        step = None if self._text() == ")" else self._expression()
        self._expect(")")
        return ForStmt(init, cond, step, self._body())

    # --- expressions

    def _expression(self) -> Node:
        left = self._binary(0)
        token = self._peek()
        if token is not None and token.kind is TokenKind.punctuator and token.text in ASSIGN_OPS:
            if not isinstance(left, (VarRef, Index)):
                raise self._error("assignable expression")
            op = self._advance().text
            return Assign(op, left, self._expression())
        return left

    def _binary(self, level: int) -> Node:
        if level == len(BINARY_LEVELS):
            return self._unary()
        left = self._binary(level + 1)
        while True:
            token = self._peek()
            if token is None or token.kind is not TokenKind.punctuator or token.text not in BINARY_LEVELS[level]:
                return left
            op = self._advance().text
            left = BinOp(op, left, self._binary(level + 1))

    def _unary(self) -> Node:
        token = self._peek()
        if token is not None and token.kind is TokenKind.punctuator and token.text in ("-", "!", "++", "--"):
            op = self._advance().text
            return UnaryOp(op, self._unary())
        return self._postfix()

    def _postfix(self) -> Node:
        node = self._primary()
        while True:
            if self._accept("["):
                index = self._expression()
                self._expect("]")
                node = Index(node, index)
            elif self._accept("."):
                name = self._expect_identifier()
                self._expect("(")
                node = Call(name, [node] + self._arguments(), method=True)
            elif self._text() in ("++", "--"):
                node = UnaryOp("p" + self._advance().text, node)
            else:
                return node

    def _arguments(self) -> List[Node]:
        args: List[Node] = []
        if not self._accept(")"):
            args.append(self._expression())
            while self._accept(","):
                args.append(self._expression())
            self._expect(")")
        return args

    def _primary(self) -> Node:
        token = self._peek()
        if token is None:
            raise self._error("expression")
        if token.kind in _LITERAL_KINDS:
            self._advance()
            return Literal(_LITERAL_KINDS[token.kind], token.text)
        if token.text in ("true", "false") and token.kind is TokenKind.keyword:
            self._advance()
            return Literal("bool", token.text)
        if token.text == "endl" and token.kind is TokenKind.keyword:
            self._advance()
            return Literal("endl", "endl")
        if token.kind is TokenKind.identifier:
            self._advance()
            if self._accept("("):
                return Call(token.text, self._arguments())
            return VarRef(token.text)
        if self._accept("("):
            expr = self._expression()
            self._expect(")")
            return expr
        raise self._error("expression")


def parse_ast(source: str) -> Program:
    """Parse ``source`` into a numbered :class:`Program` tree.

    Raises
    ------
    LexError
        On an illegal character.
    MiniCSyntaxError
        On a grammar violation.
    """
    return renumber(Parser(source).parse_program())
