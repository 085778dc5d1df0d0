"""
MiniLang: a C-family method language (Java and C# flavoured) large enough to
hold every method the evaluation works with. Produces token sequences and
ordered syntax trees; syntactically broken translations downgrade to lex-only.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Sequence

logger = logging.getLogger(__name__)


class TokenKind(str, Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    LITERAL_INT = "literal-int"
    LITERAL_STRING = "literal-string"
    OPERATOR = "operator"
    SEPARATOR = "separator"
    WHITESPACE = "whitespace"


class TokenMode(str, Enum):
    LEXICAL = "lexical"
    WHITESPACE = "whitespace"
    CHARACTER = "character"


SEPARATORS = frozenset("(){}[];,.:")

# Java and C# keyword sets are unioned; the corpus mixes both languages.
KEYWORDS = frozenset({
    "abstract", "base", "bool", "boolean", "break", "byte", "case", "catch", "char",
    "class", "const", "continue", "default", "do", "double", "else", "extends", "false",
    "final", "finally", "float", "for", "foreach", "if", "implements", "in", "int",
    "interface", "internal", "is", "long", "native", "new", "null", "override",
    "private", "protected", "public", "readonly", "return", "sealed", "short", "static",
    "string", "super", "switch", "synchronized", "this", "throw", "throws", "true",
    "try", "uint", "ulong", "unsafe", "var", "virtual", "void", "volatile", "while",
})

MODIFIERS = frozenset({
    "public", "private", "protected", "internal", "static", "final", "abstract",
    "virtual", "override", "sealed", "readonly", "synchronized", "native", "unsafe",
})

PRIMITIVE_TYPES = frozenset({
    "void", "int", "long", "short", "byte", "char", "bool", "boolean", "float",
    "double", "string", "uint", "ulong", "var",
})

# Longest match first.
MULTI_CHAR_OPERATORS = (
    "<<=", ">>=", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=",
    "/=", "%=", "&=", "|=", "^=", "->", "=>", "<<", ">>",
)

ASSIGN_OPERATORS = frozenset({"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="})


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    line: int = 1
    column: int = 1

    def __post_init__(self):
        if not self.lexeme:
            raise ValueError("token lexeme must be non-empty")


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[Token, ...]
    mode: TokenMode = TokenMode.LEXICAL

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __getitem__(self, item):
        return self.tokens[item]

    @property
    def lexemes(self) -> tuple[str, ...]:
        return tuple(t.lexeme for t in self.tokens)

    def text(self) -> str:
        return " ".join(self.lexemes)

    @classmethod
    def from_lexemes(cls, lexemes: Sequence[str], mode: TokenMode = TokenMode.LEXICAL) -> "TokenSequence":
        """Builds a sequence from bare lexemes, classifying each one as the lexer would."""
        return cls(tuple(Token(_classify(lx), lx, 1, i + 1) for i, lx in enumerate(lexemes)), mode)


def _classify(lexeme: str) -> TokenKind:
    if lexeme.isspace():
        return TokenKind.WHITESPACE
    if lexeme[0].isalpha() or lexeme[0] == "_":
        if all(c.isalnum() or c == "_" for c in lexeme):
            return TokenKind.KEYWORD if lexeme in KEYWORDS else TokenKind.IDENTIFIER
        return TokenKind.OPERATOR
    if lexeme.isdigit():
        return TokenKind.LITERAL_INT
    if lexeme[0] in "\"'" and len(lexeme) > 1:
        return TokenKind.LITERAL_STRING
    if len(lexeme) == 1 and lexeme in SEPARATORS:
        return TokenKind.SEPARATOR
    return TokenKind.OPERATOR


def tokenize(source: str, mode: TokenMode = TokenMode.LEXICAL) -> TokenSequence:
    """
    Splits source text into tokens.

    Args:
        source: method text.
        mode: lexical (comments stripped, operators/separators split out),
              whitespace (maximal non-whitespace runs, so `IsSimilar(` is one token;
              comments are dropped and a string literal stays one token)
              or character (one token per character).

    Returns:
        TokenSequence in the requested mode. Never fails.
    """
    mode = TokenMode(mode)
    if mode is TokenMode.WHITESPACE:
        return TokenSequence(tuple(_scan_whitespace(source)), mode)
    if mode is TokenMode.CHARACTER:
        return TokenSequence(tuple(_scan_characters(source)), mode)
    return TokenSequence(tuple(_Lexer(source).scan()), mode)


def _scan_whitespace(source: str) -> Iterator[Token]:
    # runs of lexically adjacent tokens; comments split a run as whitespace does
    lexer = _Lexer(source)
    first, start, end = None, 0, 0
    for tok in lexer.scan():
        if first is not None and lexer.start == end:
            end = lexer.pos
            continue
        if first is not None:
            yield _glued(source[start:end], first)
        first, start, end = tok, lexer.start, lexer.pos
    if first is not None:
        yield _glued(source[start:end], first)


def _glued(text: str, first: Token) -> Token:
    return Token(_classify(text), text, first.line, first.column)


def _scan_characters(source: str) -> Iterator[Token]:
    line, col = 1, 1
    for ch in source:
        yield Token(_classify(ch), ch, line, col)
        if ch == "\n":
            line, col = line + 1, 1
        else:
            col += 1


class _Lexer:
    """Character-class scanner for lexical mode."""

    def __init__(self, source: str):
        self.src = source
        self.pos = 0
        self.line = 1
        self.col = 1
        self.start = 0

    def _advance(self, n: int = 1) -> str:
        text = self.src[self.pos:self.pos + n]
        for ch in text:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n
        return text

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.src[i] if i < len(self.src) else ""

    def scan(self) -> Iterator[Token]:
        while self.pos < len(self.src):
            ch = self._peek()
            if ch.isspace():
                self._advance()
                continue
            if ch == "/" and self._peek(1) == "/":
                while self.pos < len(self.src) and self._peek() != "\n":
                    self._advance()
                continue
            if ch == "/" and self._peek(1) == "*":
                end = self.src.find("*/", self.pos + 2)
                self._advance((end + 2 if end >= 0 else len(self.src)) - self.pos)
                continue

            line, col, self.start = self.line, self.col, self.pos
            if ch.isalpha() or ch == "_":
                end = self.pos
                while end < len(self.src) and (self.src[end].isalnum() or self.src[end] == "_"):
                    end += 1
                word = self._advance(end - self.pos)
                kind = TokenKind.KEYWORD if word in KEYWORDS else TokenKind.IDENTIFIER
                yield Token(kind, word, line, col)
            elif ch.isdigit():
                end = self.pos
                while end < len(self.src) and self.src[end].isdigit():
                    end += 1
                yield Token(TokenKind.LITERAL_INT, self._advance(end - self.pos), line, col)
            elif ch in "\"'":
                yield Token(TokenKind.LITERAL_STRING, self._string(ch), line, col)
            elif ch in SEPARATORS:
                yield Token(TokenKind.SEPARATOR, self._advance(), line, col)
            else:
                for op in MULTI_CHAR_OPERATORS:
                    if self.src.startswith(op, self.pos):
                        yield Token(TokenKind.OPERATOR, self._advance(len(op)), line, col)
                        break
                else:
                    # Unknown characters fall through as 1-char operators.
                    yield Token(TokenKind.OPERATOR, self._advance(), line, col)

    def _string(self, quote: str) -> str:
        end = self.pos + 1
        while end < len(self.src):
            c = self.src[end]
            if c == "\\":
                end += 2
                continue
            if c == quote:
                end += 1
                break
            if c == "\n":
                # unterminated: the literal runs to end of line
                break
            end += 1
        return self._advance(min(end, len(self.src)) - self.pos)


# --- Syntax trees -----------------------------------------------------------

@dataclass(frozen=True)
class SyntaxNode:
    label: str
    value: Optional[str] = None
    children: tuple[int, ...] = ()


@dataclass(frozen=True)
class SyntaxTree:
    nodes: tuple[SyntaxNode, ...]
    root: int

    @property
    def size(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> SyntaxNode:
        return self.nodes[node_id]

    def preorder(self, node_id: Optional[int] = None) -> Iterator[int]:
        stack = [self.root if node_id is None else node_id]
        while stack:
            nid = stack.pop()
            yield nid
            stack.extend(reversed(self.nodes[nid].children))

    def subtree_size(self, node_id: int) -> int:
        return sum(1 for _ in self.preorder(node_id))

    def to_nested(self, node_id: Optional[int] = None) -> tuple:
        """(label, value, [children...]) view, handy for isomorphism checks."""
        nid = self.root if node_id is None else node_id
        n = self.nodes[nid]
        return (n.label, n.value, tuple(self.to_nested(c) for c in n.children))


class TreeBuilder:
    """Accumulates nodes bottom-up; ids are assigned in creation order."""

    def __init__(self):
        self._nodes: list[SyntaxNode] = []

    def add(self, label: str, value: Optional[str] = None, children: Sequence[int] = ()) -> int:
        if label in ("Name", "Literal") and not value:
            raise ValueError(f"{label} leaf needs a value")
        self._nodes.append(SyntaxNode(label, value, tuple(children)))
        return len(self._nodes) - 1

    def build(self, root: int) -> SyntaxTree:
        return SyntaxTree(tuple(self._nodes), root)


def tree_from_nested(nested: tuple) -> SyntaxTree:
    """Inverse of `SyntaxTree.to_nested`; used for hand-written fixtures."""
    builder = TreeBuilder()

    def walk(item) -> int:
        label, value, kids = item
        return builder.add(label, value, [walk(k) for k in kids])

    return builder.build(walk(nested))


# --- Parser -----------------------------------------------------------------

class ParseStatus(str, Enum):
    PARSED = "parsed"
    LEX_ONLY = "lex-only"


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


@dataclass(frozen=True)
class ParseOutcome:
    status: ParseStatus
    tokens: TokenSequence
    tree: Optional[SyntaxTree] = None
    diagnostics: tuple[Diagnostic, ...] = field(default_factory=tuple)

    @property
    def parsed(self) -> bool:
        return self.status is ParseStatus.PARSED


class ParseError(Exception):
    def __init__(self, token: Optional[Token], message: str):
        super().__init__(message)
        self.token = token
        self.message = message


_COMPARISON = ("<", "<=", ">", ">=", "==", "!=")
_BINARY_LEVELS = (("||",), ("&&",), ("==", "!="), ("<", "<=", ">", ">="), ("+", "-"), ("*", "/", "%"))


class Parser:
    """
    Recursive-descent parser for MiniLang. No error recovery inside a method:
    the first syntax error aborts and the outcome is lex-only.
    """

    def __init__(self, tokens: TokenSequence):
        self.toks = [t for t in tokens.tokens if t.kind is not TokenKind.WHITESPACE]
        self.pos = 0
        self.b = TreeBuilder()

    # token helpers
    def _peek(self, offset: int = 0) -> Optional[Token]:
        i = self.pos + offset
        return self.toks[i] if i < len(self.toks) else None

    def _at(self, *lexemes: str, offset: int = 0) -> bool:
        tok = self._peek(offset)
        return tok is not None and tok.lexeme in lexemes

    def _next(self) -> Token:
        tok = self._peek()
        if tok is None:
            raise ParseError(self.toks[-1] if self.toks else None, "unexpected end of input")
        self.pos += 1
        return tok

    def _expect(self, lexeme: str) -> Token:
        tok = self._peek()
        if tok is None or tok.lexeme != lexeme:
            found = tok.lexeme if tok else "end of input"
            raise ParseError(tok or (self.toks[-1] if self.toks else None), f"expected '{lexeme}' but found '{found}'")
        self.pos += 1
        return tok

    def _is_name(self, offset: int = 0) -> bool:
        tok = self._peek(offset)
        return tok is not None and tok.kind is TokenKind.IDENTIFIER

    def _name(self) -> str:
        tok = self._peek()
        if tok is None or tok.kind is not TokenKind.IDENTIFIER:
            found = tok.lexeme if tok else "end of input"
            raise ParseError(tok, f"expected identifier but found '{found}'")
        self.pos += 1
        return tok.lexeme

    # top level
    def parse_unit(self) -> SyntaxTree:
        if not self.toks:
            raise ParseError(None, "empty input")
        methods = [self._method()]
        while self._peek() is not None:
            methods.append(self._method())
        if len(methods) == 1:
            return self.b.build(methods[0])
        return self.b.build(self.b.add("Unit", None, methods))

    def _type_length(self, offset: int = 0) -> int:
        """Number of tokens a type occupies at `offset`, 0 if no type starts there."""
        tok = self._peek(offset)
        if tok is None:
            return 0
        if tok.lexeme in PRIMITIVE_TYPES:
            n = 1
        elif tok.kind is TokenKind.IDENTIFIER:
            n = 1
            while self._at(".", offset=offset + n) and self._is_name(offset + n + 1):
                n += 2
        else:
            return 0
        while self._at("[", offset=offset + n) and self._at("]", offset=offset + n + 1):
            n += 2
        return n

    def _type(self) -> str:
        n = self._type_length()
        if n == 0:
            tok = self._peek()
            raise ParseError(tok, f"expected a type but found '{tok.lexeme if tok else 'end of input'}'")
        return "".join(self._next().lexeme for _ in range(n))

    def _method(self) -> int:
        while self._peek() is not None and self._peek().lexeme in MODIFIERS:
            self.pos += 1
        return_type = None
        if not (self._is_name() and self._at("(", offset=1)):
            return_type = self._type()
        name = self.b.add("Name", self._name())
        self._expect("(")
        params = []
        if not self._at(")"):
            params.append(self._param())
            while self._at(","):
                self._next()
                params.append(self._param())
        self._expect(")")
        children = [name, self.b.add("Params", None, params)]
        if self._at(":"):
            self._next()
            tok = self._next()
            if tok.lexeme not in ("base", "this", "super"):
                raise ParseError(tok, f"expected base/this initializer but found '{tok.lexeme}'")
            children.append(self.b.add("BaseCall", tok.lexeme, self._arguments()))
        children.append(self._block())
        return self.b.add("Method", return_type, children)

    def _param(self) -> int:
        ptype = self._type()
        return self.b.add("Param", ptype, [self.b.add("Name", self._name())])

    def _arguments(self) -> list[int]:
        self._expect("(")
        args = []
        if not self._at(")"):
            args.append(self._expression())
            while self._at(","):
                self._next()
                args.append(self._expression())
        self._expect(")")
        return args

    # statements
    def _block(self) -> int:
        self._expect("{")
        stmts: list[int] = []
        while not self._at("}"):
            if self._peek() is None:
                raise ParseError(self.toks[-1], "unterminated block")
            stmts.extend(self._statement())
        self._expect("}")
        return self.b.add("Block", None, stmts)

    def _single(self) -> int:
        """A statement in a position that needs exactly one node (branch or loop body)."""
        nodes = self._statement()
        if len(nodes) == 1:
            return nodes[0]
        return self.b.add("Block", None, nodes)

    def _statement(self) -> list[int]:
        tok = self._peek()
        if tok is None:
            raise ParseError(self.toks[-1] if self.toks else None, "expected a statement")
        lx = tok.lexeme
        if lx == "{":
            return [self._block()]
        if lx == ";":
            self._next()
            return []
        if lx == "if":
            self._next()
            self._expect("(")
            cond = self._expression()
            self._expect(")")
            kids = [cond, self._single()]
            if self._at("else"):
                self._next()
                kids.append(self._single())
            return [self.b.add("If", None, kids)]
        if lx == "while":
            self._next()
            self._expect("(")
            cond = self._expression()
            self._expect(")")
            return [self.b.add("While", None, [cond, self._single()])]
        if lx == "for":
            return [self._for()]
        if lx == "foreach":
            self._next()
            self._expect("(")
            vtype = self._type()
            var = self.b.add("Name", self._name())
            self._expect("in")
            coll = self._expression()
            self._expect(")")
            return [self.b.add("Foreach", vtype, [var, coll, self._single()])]
        if lx == "return":
            self._next()
            kids = [] if self._at(";") else [self._expression()]
            self._expect(";")
            return [self.b.add("Return", None, kids)]
        if lx == "throw":
            self._next()
            kids = [self._expression()]
            self._expect(";")
            return [self.b.add("Throw", None, kids)]
        if lx in ("break", "continue"):
            self._next()
            self._expect(";")
            return [self.b.add(lx.capitalize())]
        if self._looks_like_declaration():
            nodes = self._declaration()
            self._expect(";")
            return nodes
        node = self._simple_statement()
        self._expect(";")
        return [node]

    def _looks_like_declaration(self) -> bool:
        n = self._type_length()
        return n > 0 and self._is_name(n)

    def _declaration(self) -> list[int]:
        vtype = self._type()
        nodes = [self._declarator(vtype)]
        while self._at(","):
            self._next()
            nodes.append(self._declarator(vtype))
        return nodes

    def _declarator(self, vtype: str) -> int:
        kids = [self.b.add("Name", self._name())]
        if self._at("="):
            self._next()
            kids.append(self._expression())
        return self.b.add("VarDecl", vtype, kids)

    def _simple_statement(self) -> int:
        """Assignment, increment or expression statement (no trailing ';')."""
        if self._at("++", "--"):
            op = self._next().lexeme
            return self.b.add("Assign", op, [self._unary()])
        target = self._expression()
        if self._at("++", "--"):
            return self.b.add("Assign", self._next().lexeme, [target])
        tok = self._peek()
        if tok is not None and tok.lexeme in ASSIGN_OPERATORS:
            self._next()
            return self.b.add("Assign", tok.lexeme, [target, self._expression()])
        return target

    def _for(self) -> int:
        self._next()
        self._expect("(")
        # Java enhanced for: for (T x : expr)
        n = self._type_length()
        if n and self._is_name(n) and self._at(":", offset=n + 1):
            vtype = self._type()
            var = self.b.add("Name", self._name())
            self._expect(":")
            coll = self._expression()
            self._expect(")")
            return self.b.add("Foreach", vtype, [var, coll, self._single()])

        init: list[int] = []
        if not self._at(";"):
            if self._looks_like_declaration():
                init = self._declaration()
            else:
                init.append(self._simple_statement())
                while self._at(","):
                    self._next()
                    init.append(self._simple_statement())
        self._expect(";")
        cond = [] if self._at(";") else [self._expression()]
        self._expect(";")
        step: list[int] = []
        if not self._at(")"):
            step.append(self._simple_statement())
            while self._at(","):
                self._next()
                step.append(self._simple_statement())
        self._expect(")")
        body = self._single()
        return self.b.add("For", None, [
            self.b.add("ForInit", None, init),
            self.b.add("ForCond", None, cond),
            self.b.add("ForStep", None, step),
            body,
        ])

    # expressions
    def _expression(self) -> int:
        return self._binary(0)

    def _binary(self, level: int) -> int:
        if level == len(_BINARY_LEVELS):
            return self._unary()
        left = self._binary(level + 1)
        while self._at(*_BINARY_LEVELS[level]):
            op = self._next().lexeme
            right = self._binary(level + 1)
            left = self.b.add("BinaryOp", op, [left, right])
        return left

    def _unary(self) -> int:
        if self._at("!", "-"):
            op = self._next().lexeme
            return self.b.add("UnaryOp", op, [self._unary()])
        return self._postfix(self._primary())

    def _postfix(self, node: int) -> int:
        while True:
            if self._at("."):
                self._next()
                node = self.b.add("FieldAccess", self._name(), [node])
            elif self._at("["):
                self._next()
                index = self._expression()
                self._expect("]")
                node = self.b.add("Index", None, [node, index])
            elif self._at("("):
                node = self.b.add("Call", None, [node, *self._arguments()])
            else:
                return node

    def _primary(self) -> int:
        tok = self._peek()
        if tok is None:
            raise ParseError(self.toks[-1] if self.toks else None, "expected an expression")
        if tok.kind in (TokenKind.LITERAL_INT, TokenKind.LITERAL_STRING) or tok.lexeme in ("true", "false", "null"):
            self._next()
            return self.b.add("Literal", tok.lexeme)
        if tok.lexeme in ("this", "base", "super") or tok.kind is TokenKind.IDENTIFIER:
            self._next()
            return self.b.add("Name", tok.lexeme)
        if tok.lexeme == "(":
            self._next()
            inner = self._expression()
            self._expect(")")
            return inner
        if tok.lexeme == "new":
            self._next()
            type_name = self._type()
            if self._at("["):
                self._next()
                size = self._expression()
                self._expect("]")
                return self.b.add("New", f"{type_name}[]", [size])
            return self.b.add("New", type_name, self._arguments())
        raise ParseError(tok, f"unexpected token '{tok.lexeme}'")


def parse(tokens: TokenSequence) -> ParseOutcome:
    """
    Parses a lexical-mode token sequence into a syntax tree.

    A syntax error is not raised: the outcome comes back lex-only with the
    diagnostic, which tells the RUBY cascade that the AST level does not apply.
    """
    parser = Parser(tokens)
    try:
        tree = parser.parse_unit()
    except ParseError as e:
        line, col = (e.token.line, e.token.column) if e.token else (1, 1)
        logger.debug(f"Parse failed at {line}:{col}: {e.message}")
        return ParseOutcome(ParseStatus.LEX_ONLY, tokens, None, (Diagnostic(line, col, e.message),))
    except RecursionError:
        return ParseOutcome(ParseStatus.LEX_ONLY, tokens, None, (Diagnostic(1, 1, "nesting too deep"),))
    return ParseOutcome(ParseStatus.PARSED, tokens, tree, ())


def parse_source(source: str) -> ParseOutcome:
    return parse(tokenize(source, TokenMode.LEXICAL))


# --- Pretty printing --------------------------------------------------------

def pretty_print(tree: SyntaxTree) -> str:
    """Renders a tree back to MiniLang source that re-parses to the same shape."""
    return _Printer(tree).unit()


class _Printer:
    def __init__(self, tree: SyntaxTree):
        self.t = tree

    def unit(self) -> str:
        root = self.t.node(self.t.root)
        if root.label == "Unit":
            return "\n".join(self.method(c) for c in root.children)
        return self.method(self.t.root)

    def method(self, nid: int) -> str:
        n = self.t.node(nid)
        kids = [self.t.node(c) for c in n.children]
        name = kids[0].value
        params = ", ".join(f"{self.t.node(p).value} {self.t.node(self.t.node(p).children[0]).value}"
                           for p in kids[1].children)
        head = f"{n.value} {name}({params})" if n.value else f"{name}({params})"
        if kids[2].label == "BaseCall":
            args = ", ".join(self.expr(a) for a in kids[2].children)
            head += f" : {kids[2].value}({args})"
        return f"{head} {self.stmt(n.children[-1])}"

    def stmt(self, nid: int) -> str:
        n = self.t.node(nid)
        c = n.children
        if n.label == "Block":
            return "{ " + " ".join(self.stmt(s) for s in c) + " }"
        if n.label == "If":
            text = f"if ({self.expr(c[0])}) {self.stmt(c[1])}"
            if len(c) == 3:
                text += f" else {self.stmt(c[2])}"
            return text
        if n.label == "While":
            return f"while ({self.expr(c[0])}) {self.stmt(c[1])}"
        if n.label == "For":
            init, cond, step, body = (self.t.node(x) for x in c)
            cond_text = self.expr(cond.children[0]) if cond.children else ""
            step_text = ", ".join(self.simple(s) for s in step.children)
            return f"for ({self.for_init(init)}; {cond_text}; {step_text}) {self.stmt(c[3])}"
        if n.label == "Foreach":
            return f"foreach ({n.value} {self.t.node(c[0]).value} in {self.expr(c[1])}) {self.stmt(c[2])}"
        if n.label == "Return":
            return f"return {self.expr(c[0])};" if c else "return;"
        if n.label == "Throw":
            return f"throw {self.expr(c[0])};"
        if n.label in ("Break", "Continue"):
            return f"{n.label.lower()};"
        if n.label == "VarDecl":
            return f"{n.value} {self.declarator(nid)};"
        return f"{self.simple(nid)};"

    def declarator(self, nid: int) -> str:
        n = self.t.node(nid)
        name = self.t.node(n.children[0]).value
        return f"{name} = {self.expr(n.children[1])}" if len(n.children) == 2 else name

    def for_init(self, init: SyntaxNode) -> str:
        if not init.children:
            return ""
        first = self.t.node(init.children[0])
        if first.label == "VarDecl":
            return f"{first.value} " + ", ".join(self.declarator(d) for d in init.children)
        return ", ".join(self.simple(s) for s in init.children)

    def simple(self, nid: int) -> str:
        n = self.t.node(nid)
        if n.label == "Assign":
            if n.value in ("++", "--"):
                return f"{self.expr(n.children[0])}{n.value}"
            return f"{self.expr(n.children[0])} {n.value} {self.expr(n.children[1])}"
        return self.expr(nid)

    def expr(self, nid: int) -> str:
        n = self.t.node(nid)
        c = n.children
        if n.label in ("Name", "Literal"):
            return n.value
        if n.label == "BinaryOp":
            return f"({self.expr(c[0])} {n.value} {self.expr(c[1])})"
        if n.label == "UnaryOp":
            return f"{n.value}({self.expr(c[0])})"
        if n.label == "FieldAccess":
            return f"{self.postfix_target(c[0])}.{n.value}"
        if n.label == "Index":
            return f"{self.postfix_target(c[0])}[{self.expr(c[1])}]"
        if n.label == "Call":
            return f"{self.postfix_target(c[0])}(" + ", ".join(self.expr(a) for a in c[1:]) + ")"
        if n.label == "New":
            if n.value.endswith("[]"):
                return f"new {n.value[:-2]}[{self.expr(c[0])}]"
            return f"new {n.value}(" + ", ".join(self.expr(a) for a in c) + ")"
        raise ValueError(f"cannot print {n.label} as an expression")

    def postfix_target(self, nid: int) -> str:
        n = self.t.node(nid)
        if n.label in ("BinaryOp", "UnaryOp"):
            return f"({self.expr(nid)})"
        return self.expr(nid)
