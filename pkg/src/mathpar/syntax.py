"""Tokenizer, parser, and renderers for the Mathpar language.

The surface syntax is a LaTeX dialect: functional words carry a leading
backslash, fractions may be written \\frac{a}{b}, matrices as pmatrix
environments or nested bracket lists, and matrix operators have superscript
spellings (A^{T}, A^{-1}, A^{\\ast}, A^{\\star}, A^{+}, A^{\\times}).
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import LexError, ParseError


# -- tokens -------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str        # ident | bword | number | string | op | backback
    text: str
    line: int
    col: int

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.col})"


_TWO_CHAR_OPS = ("==", "!=", "<=", ">=", "<>")
_ONE_CHAR_OPS = "+-*/^=<>&|!,;(){}[]_"
_UNICODE_OPS = {"∩": "\\cap", "∪": "\\cup", "Δ": "\\Delta",
                "≠": "!=", "≤": "<=", "≥": ">=", "∞": "\\infty", "π": "\\pi"}


def tokenize(source):
    tokens = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def bump(text):
        nonlocal line, col
        for ch in text:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            bump(ch)
            i += 1
            continue
        start_line, start_col = line, col
        if ch == "#":
            j = source.find("\n", i)
            j = n if j < 0 else j
            bump(source[i:j])
            i = j
            continue
        if ch == "\\":
            if i + 1 < n and source[i + 1] == "\\":
                tokens.append(Token("backback", "\\\\", start_line, start_col))
                bump("\\\\")
                i += 2
                continue
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            if j == i + 1 or not source[i + 1].isalpha():
                raise LexError(f"stray backslash at {start_line}:{start_col}")
            word = source[i:j]
            tokens.append(Token("bword", word, start_line, start_col))
            bump(word)
            i = j
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (source[j].isdigit() or (source[j] == "." and not seen_dot)):
                if source[j] == ".":
                    seen_dot = True
                j += 1
            if j < n and source[j] in "eE" and j + 1 < n and \
                    (source[j + 1].isdigit() or
                     (source[j + 1] in "+-" and j + 2 < n and source[j + 2].isdigit())):
                j += 2
                while j < n and source[j].isdigit():
                    j += 1
            text = source[i:j]
            tokens.append(Token("number", text, start_line, start_col))
            bump(text)
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            tokens.append(Token("ident", text, start_line, start_col))
            bump(text)
            i = j
            continue
        if ch == '"':
            j = i + 1
            buf = []
            while j < n and source[j] != '"':
                if source[j] == "\\" and j + 1 < n and source[j + 1] == '"':
                    buf.append('"')
                    j += 2
                else:
                    buf.append(source[j])
                    j += 1
            if j >= n:
                raise LexError(f"unterminated string at {start_line}:{start_col}")
            text = source[i:j + 1]
            tokens.append(Token("string", "".join(buf), start_line, start_col))
            bump(text)
            i = j + 1
            continue
        if ch in _UNICODE_OPS:
            mapped = _UNICODE_OPS[ch]
            kind = "bword" if mapped.startswith("\\") else "op"
            tokens.append(Token(kind, mapped, start_line, start_col))
            bump(ch)
            i += 1
            continue
        pair = source[i:i + 2]
        if pair in _TWO_CHAR_OPS:
            tokens.append(Token("op", "!=" if pair == "<>" else pair,
                                start_line, start_col))
            bump(pair)
            i += 2
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(Token("op", ch, start_line, start_col))
            bump(ch)
            i += 1
            continue
        raise LexError(f"illegal character {ch!r} at {start_line}:{start_col}")
    return tokens


# -- AST ----------------------------------------------------------------------

@dataclass
class Node:
    kind: str
    children: tuple = ()
    value: object = None      # literal text / symbol name / operator
    pos: tuple = (0, 0)

    def __eq__(self, other):
        return isinstance(other, Node) and self.kind == other.kind and \
            self.value == other.value and self.children == other.children

    def __repr__(self):
        bits = [self.kind]
        if self.value is not None:
            bits.append(repr(self.value))
        if self.children:
            bits.append(repr(list(self.children)))
        return "Node(" + ", ".join(bits) + ")"


@dataclass
class Program:
    statements: list = field(default_factory=list)

    def __eq__(self, other):
        return isinstance(other, Program) and self.statements == other.statements


_KEYWORDS = {"procedure", "function", "if", "else", "while", "for", "return"}
_CONSTANTS = {"pi": "pi", "e": "e", "i": "i",
              "infty": "infinity", "infinity": "infinity",
              "emptyset": "emptyset"}
_SET_WORDS = {"\\cap": "cap", "\\cup": "cup", "\\setminus": "setminus",
              "\\cdot": "setminus", "\\Delta": "delta"}
_CMP_WORDS = {"\\le": "<=", "\\leq": "<=", "\\ge": ">=", "\\geq": ">=",
              "\\ne": "!=", "\\neq": "!="}
_SUPERSCRIPT_OPS = {"T": "transpose", "ast": "conjugate", "star": "adjoint",
                    "times": "closure"}


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    # -- plumbing
    def peek(self, offset=0):
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else None

    def at_end(self):
        return self.i >= len(self.tokens)

    def advance(self):
        tok = self.peek()
        self.i += 1
        return tok

    def check(self, kind, text=None):
        tok = self.peek()
        return tok is not None and tok.kind == kind and \
            (text is None or tok.text == text)

    def check_op(self, text):
        return self.check("op", text)

    def match_op(self, *texts):
        for t in texts:
            if self.check_op(t):
                return self.advance()
        return None

    def expect_op(self, text):
        tok = self.peek()
        if not self.check_op(text):
            raise ParseError(self._expected(f"'{text}'"))
        return self.advance()

    def _expected(self, what):
        tok = self.peek()
        if tok is None:
            return f"expected {what} but reached end of input"
        return f"expected {what} at {tok.line}:{tok.col}, found {tok.text!r}"

    def keyword(self):
        """Control word, accepted with or without the backslash."""
        tok = self.peek()
        if tok is None:
            return None
        if tok.kind == "bword" and tok.text[1:] in _KEYWORDS:
            return tok.text[1:]
        if tok.kind == "ident" and tok.text in _KEYWORDS:
            return tok.text
        return None

    # -- statements
    def program(self):
        stmts = []
        while not self.at_end():
            if self.match_op(";"):
                continue
            stmts.append(self.statement())
        return Program(stmts)

    def statement(self):
        kw = self.keyword()
        if kw in ("procedure", "function"):
            return self.procedure_def()
        if kw == "if":
            return self.if_statement()
        if kw == "while":
            return self.while_statement()
        if kw == "for":
            return self.for_statement()
        if kw == "return":
            tok = self.advance()
            value = None
            if not (self.at_end() or self.check_op(";") or self.check_op("}")):
                value = self.expression()
            self.match_op(";")
            return Node("return", (value,) if value is not None else (),
                        pos=(tok.line, tok.col))
        expr = self.expression()
        if not (self.at_end() or self.check_op("}")):
            self.expect_op(";")
        return expr

    def block(self):
        self.expect_op("{")
        stmts = []
        while not self.check_op("}"):
            if self.at_end():
                raise ParseError(self._expected("'}'"))
            if self.match_op(";"):
                continue
            stmts.append(self.statement())
        self.expect_op("}")
        return Node("seq", tuple(stmts))

    def procedure_def(self):
        tok = self.advance()
        kind = "function" if tok.text.lstrip("\\") == "function" else "procedure"
        name_tok = self.peek()
        if name_tok is None or name_tok.kind != "ident":
            raise ParseError(self._expected("procedure name"))
        self.advance()
        self.expect_op("(")
        params = []
        while not self.check_op(")"):
            p = self.peek()
            if p is None or p.kind != "ident":
                raise ParseError(self._expected("parameter name"))
            params.append(p.text)
            self.advance()
            if not self.check_op(")"):
                self.expect_op(",")
        self.expect_op(")")
        body = self.block()
        return Node("procdef", (body,), value=(kind, name_tok.text, tuple(params)),
                    pos=(tok.line, tok.col))

    def if_statement(self):
        tok = self.advance()
        self.expect_op("(")
        cond = self.expression()
        self.expect_op(")")
        then = self.block()
        otherwise = None
        if self.keyword() == "else":
            self.advance()
            if self.keyword() == "if":
                otherwise = self.if_statement()
            else:
                otherwise = self.block()
        kids = (cond, then) + ((otherwise,) if otherwise is not None else ())
        return Node("if", kids, pos=(tok.line, tok.col))

    def while_statement(self):
        tok = self.advance()
        self.expect_op("(")
        cond = self.expression()
        self.expect_op(")")
        body = self.block()
        return Node("while", (cond, body), pos=(tok.line, tok.col))

    def for_statement(self):
        tok = self.advance()
        self.expect_op("(")
        init = None if self.check_op(";") else self.expression()
        self.expect_op(";")
        cond = None if self.check_op(";") else self.expression()
        self.expect_op(";")
        step = None if self.check_op(")") else self.expression()
        self.expect_op(")")
        body = self.block()
        empty = Node("seq", ())
        return Node("for", (init or empty, cond or empty, step or empty, body),
                    pos=(tok.line, tok.col))

    # -- expressions
    def expression(self):
        return self.assignment()

    def assignment(self):
        left = self.boolean_or()
        if self.check_op("="):
            tok = self.advance()
            right = self.assignment()
            return Node("assign", (left, right), pos=(tok.line, tok.col))
        return left

    def boolean_or(self):
        left = self.boolean_and()
        while self.check_op("|"):
            tok = self.advance()
            right = self.boolean_and()
            left = Node("binary", (left, right), value="|", pos=(tok.line, tok.col))
        return left

    def boolean_and(self):
        left = self.comparison()
        while self.check_op("&"):
            tok = self.advance()
            right = self.comparison()
            left = Node("binary", (left, right), value="&", pos=(tok.line, tok.col))
        return left

    def comparison(self):
        left = self.set_expr()
        tok = self.peek()
        op = None
        if tok is not None and tok.kind == "op" and tok.text in ("==", "!=", "<", "<=", ">", ">="):
            op = tok.text
        elif tok is not None and tok.kind == "bword" and tok.text in _CMP_WORDS:
            op = _CMP_WORDS[tok.text]
        if op is not None:
            self.advance()
            right = self.set_expr()
            return Node("binary", (left, right), value=op, pos=(tok.line, tok.col))
        return left

    def set_expr(self):
        left = self.additive()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "bword" and tok.text in _SET_WORDS:
                self.advance()
                right = self.additive()
                left = Node("binary", (left, right), value=_SET_WORDS[tok.text],
                            pos=(tok.line, tok.col))
            else:
                return left

    def additive(self):
        left = self.multiplicative()
        while True:
            tok = self.match_op("+", "-")
            if tok is None:
                return left
            right = self.multiplicative()
            left = Node("binary", (left, right), value=tok.text,
                        pos=(tok.line, tok.col))

    def multiplicative(self):
        left = self.unary()
        while True:
            tok = self.match_op("*", "/")
            if tok is None:
                return left
            right = self.unary()
            left = Node("binary", (left, right), value=tok.text,
                        pos=(tok.line, tok.col))

    def unary(self):
        tok = self.peek()
        if tok is not None and tok.kind == "op" and tok.text in ("-", "+", "!"):
            self.advance()
            operand = self.unary()
            if tok.text == "+":
                return operand
            return Node("unary", (operand,), value=tok.text, pos=(tok.line, tok.col))
        return self.power()

    def power(self):
        base = self.postfix()
        if self.check_op("^"):
            tok = self.advance()
            special = self._superscript_operator(base, tok)
            if special is not None:
                # superscript operators chain like other postfixes
                return self._postfix_tail(special)
            exponent = self._exponent()
            return Node("binary", (base, exponent), value="^", pos=(tok.line, tok.col))
        return base

    def _exponent(self):
        if self.match_op("{"):
            e = self.expression()
            self.expect_op("}")
            return e
        tok = self.peek()
        if tok is not None and tok.kind == "op" and tok.text == "-":
            self.advance()
            return Node("unary", (self.power_operand(),), value="-",
                        pos=(tok.line, tok.col))
        return self.power_operand()

    def power_operand(self):
        """Right-associative tower: a^b^c parses as a^(b^c)."""
        base = self.postfix()
        if self.check_op("^"):
            tok = self.advance()
            special = self._superscript_operator(base, tok)
            if special is not None:
                return self._postfix_tail(special)
            return Node("binary", (base, self._exponent()), value="^",
                        pos=(tok.line, tok.col))
        return base

    def _superscript_operator(self, base, caret):
        """A^{T}, A^{-1}, A^{\\ast}, A^{\\star}, A^{+}, A^{\\times}."""
        if not self.check_op("{"):
            return None
        save = self.i
        self.advance()
        name = None
        tok = self.peek()
        if tok is not None:
            if tok.kind == "ident" and tok.text in _SUPERSCRIPT_OPS:
                name = _SUPERSCRIPT_OPS[tok.text]
                self.advance()
            elif tok.kind == "bword" and tok.text[1:] in _SUPERSCRIPT_OPS:
                name = _SUPERSCRIPT_OPS[tok.text[1:]]
                self.advance()
            elif tok.kind == "op" and tok.text == "+":
                name = "genInverse"
                self.advance()
            elif tok.kind == "op" and tok.text == "-":
                nxt = self.peek(1)
                if nxt is not None and nxt.kind == "number" and nxt.text == "1":
                    name = "inverse"
                    self.advance()
                    self.advance()
        if name is not None and self.check_op("}"):
            self.advance()
            return Node("call", (base,), value=name, pos=(caret.line, caret.col))
        self.i = save
        return None

    def postfix(self):
        node = self.primary()
        return self._postfix_tail(node)

    def _postfix_tail(self, node):
        while True:
            if self.check_op("(") and node.kind in ("symbol", "ncsymbol"):
                self.advance()
                args = self._arguments(")")
                node = Node("call", tuple(args), value=node.value, pos=node.pos)
            elif self.check_op("["):
                self.advance()
                args = self._arguments("]")
                node = Node("index", (node,) + tuple(args), pos=node.pos)
            else:
                return node

    def _arguments(self, closer):
        args = []
        while not self.check_op(closer):
            if self.at_end():
                raise ParseError(self._expected(f"'{closer}'"))
            args.append(self.expression())
            if not self.check_op(closer):
                self.expect_op(",")
        self.expect_op(closer)
        return args

    def primary(self):
        tok = self.peek()
        if tok is None:
            raise ParseError(self._expected("an expression"))
        if tok.kind == "number":
            self.advance()
            return Node("number", value=tok.text, pos=(tok.line, tok.col))
        if tok.kind == "string":
            self.advance()
            return Node("string", value=tok.text, pos=(tok.line, tok.col))
        if tok.kind == "ident":
            self.advance()
            return Node("symbol", value=tok.text, pos=(tok.line, tok.col))
        if tok.kind == "bword":
            return self._backslash_primary()
        if self.match_op("("):
            e = self.expression()
            self.expect_op(")")
            return e
        if self.match_op("{"):
            e = self.expression()
            self.expect_op("}")
            return e
        if self.check_op("["):
            return self._bracket_list()
        raise ParseError(self._expected("an expression"))

    def _bracket_list(self):
        tok = self.expect_op("[")
        items = self._arguments("]")
        if items and all(n.kind == "vector" for n in items):
            return Node("matrix", tuple(items), pos=(tok.line, tok.col))
        return Node("vector", tuple(items), pos=(tok.line, tok.col))

    def _backslash_primary(self):
        tok = self.advance()
        word = tok.text[1:]
        pos = (tok.line, tok.col)
        if word == "frac":
            a = self._brace_group()
            b = self._brace_group()
            return Node("binary", (a, b), value="/", pos=pos)
        if word == "bar":
            inner = self._brace_group()
            return Node("call", (inner,), value="complement", pos=pos)
        if word == "sqrt":
            inner = self._brace_or_paren_group()
            return Node("call", (inner,), value="sqrt", pos=pos)
        if word == "begin":
            return self._environment(pos)
        if word in _CONSTANTS:
            return Node("constant", value=_CONSTANTS[word], pos=pos)
        if word[0].isupper():
            return Node("ncsymbol", value=word, pos=pos)
        return Node("symbol", value=word, pos=pos)

    def _brace_group(self):
        self.expect_op("{")
        e = self.expression()
        self.expect_op("}")
        return e

    def _brace_or_paren_group(self):
        if self.check_op("("):
            self.advance()
            e = self.expression()
            self.expect_op(")")
            return e
        return self._brace_group()

    def _environment(self, pos):
        self.expect_op("{")
        name_tok = self.peek()
        if name_tok is None or name_tok.kind != "ident" or \
                name_tok.text not in ("pmatrix", "bmatrix", "matrix"):
            raise ParseError(self._expected("a matrix environment name"))
        env = name_tok.text
        self.advance()
        self.expect_op("}")
        rows = [[]]
        while True:
            if self.check("bword", "\\end"):
                self.advance()
                self.expect_op("{")
                end_tok = self.peek()
                if end_tok is None or end_tok.text != env:
                    raise ParseError(self._expected(f"matching \\end{{{env}}}"))
                self.advance()
                self.expect_op("}")
                break
            if self.check("backback"):
                self.advance()
                rows.append([])
                continue
            if self.check_op("&"):
                self.advance()
                continue
            # cells sit below the boolean level, so "&" separates them
            rows[-1].append(self.comparison())
        rows = [r for r in rows if r]
        return Node("matrix",
                    tuple(Node("vector", tuple(r)) for r in rows), pos=pos)


def parse(source_or_tokens):
    tokens = source_or_tokens
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    return _Parser(tokens).program()


def parse_expression(source):
    tokens = tokenize(source)
    parser = _Parser(tokens)
    node = parser.expression()
    if not parser.at_end():
        raise ParseError(parser._expected("end of expression"))
    return node


# -- rendering ----------------------------------------------------------------

_PRECEDENCE = {"=": 1, "|": 2, "&": 3,
               "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
               "cap": 5, "cup": 5, "setminus": 5, "delta": 5,
               "+": 6, "-": 6, "*": 7, "/": 7, "u-": 8, "u!": 8, "^": 9}

_SET_RENDER = {"cap": ("\\cap", "\\cap"), "cup": ("\\cup", "\\cup"),
               "setminus": ("\\setminus", "\\setminus"),
               "delta": ("Δ", "\\Delta")}

_CONST_RENDER = {"pi": ("\\pi", "\\pi"), "e": ("\\e", "e"),
                 "i": ("\\i", "i"), "infinity": ("\\infty", "\\infty"),
                 "emptyset": ("\\emptyset", "\\emptyset")}

_SUPER_RENDER = {"transpose": "T", "conjugate": "\\ast", "adjoint": "\\star",
                 "inverse": "-1", "genInverse": "+", "closure": "\\times"}


def render(node, target="plain"):
    if isinstance(node, Program):
        return " ".join(render(s, target) + ";" for s in node.statements)
    return _render(node, target, 0)


def _render(node, target, parent_prec):
    latex = target == "latex"
    k = node.kind
    if k == "number":
        return node.value
    if k == "string":
        return '"' + node.value.replace('"', '\\"') + '"'
    if k == "symbol":
        return node.value
    if k == "ncsymbol":
        return "\\" + node.value
    if k == "constant":
        return _CONST_RENDER[node.value][1 if latex else 0]
    if k == "assign":
        lhs = _render(node.children[0], target, 1)
        rhs = _render(node.children[1], target, 0)
        return f"{lhs} = {rhs}"
    if k == "unary":
        op = node.value
        prec = _PRECEDENCE["u" + op]
        inner = _render(node.children[0], target, prec)
        text = op + inner
        return f"({text})" if parent_prec > prec else text
    if k == "binary":
        return _render_binary(node, target, parent_prec)
    if k == "call":
        return _render_call(node, target)
    if k == "index":
        base = _render(node.children[0], target, 10)
        args = ", ".join(_render(c, target, 0) for c in node.children[1:])
        return f"{base}[{args}]"
    if k == "vector":
        return "[" + ", ".join(_render(c, target, 0) for c in node.children) + "]"
    if k == "matrix":
        if latex:
            rows = [" & ".join(_render(c, target, 0) for c in row.children)
                    for row in node.children]
            return "\\begin{pmatrix} " + " \\\\ ".join(rows) + " \\end{pmatrix}"
        return "[" + ", ".join(_render(row, target, 0) for row in node.children) + "]"
    if k == "if":
        cond = _render(node.children[0], target, 0)
        then = _render_block(node.children[1], target)
        text = f"\\if({cond}){then}"
        if len(node.children) > 2:
            alt = node.children[2]
            if alt.kind == "if":
                text += "\\else" + "{" + _render(alt, target, 0) + "}"
            else:
                text += "\\else" + _render_block(alt, target)
        return text
    if k == "while":
        return f"\\while({_render(node.children[0], target, 0)})" + \
            _render_block(node.children[1], target)
    if k == "for":
        init, cond, step, body = node.children
        parts = "; ".join(_render(x, target, 0) if x.kind != "seq" or x.children else ""
                          for x in (init, cond, step))
        return f"\\for({parts})" + _render_block(body, target)
    if k == "procdef":
        kind, name, params = node.value
        return f"\\{kind} {name}(" + ", ".join(params) + ")" + \
            _render_block(node.children[0], target)
    if k == "return":
        if node.children:
            return "\\return " + _render(node.children[0], target, 0)
        return "\\return"
    if k == "seq":
        return " ".join(_render(s, target, 0) + ";" for s in node.children)
    raise ValueError(f"cannot render node kind {k!r}")


def _render_block(node, target):
    inner = _render(node, target, 0) if node.kind == "seq" else \
        _render(node, target, 0) + ";"
    return "{" + inner + "}"


def _render_binary(node, target, parent_prec):
    latex = target == "latex"
    op = node.value
    prec = _PRECEDENCE[op]
    a, b = node.children
    if op == "/" and latex:
        return "\\frac{" + _render(a, target, 0) + "}{" + _render(b, target, 0) + "}"
    if op == "^":
        base = _render(a, target, prec + 1)
        if latex:
            return f"{base}^{{{_render(b, target, 0)}}}"
        exp = _render(b, target, prec)
        return f"{base}^{exp}"
    if op in _SET_RENDER:
        sym = _SET_RENDER[op][1 if latex else 0]
        text = f"{_render(a, target, prec)} {sym} {_render(b, target, prec + 1)}"
        return f"({text})" if parent_prec > prec else text
    sym = op
    if latex and op == "*":
        sym = "\\cdot"
    left = _render(a, target, prec)
    right = _render(b, target, prec + 1)
    if op in ("+", "-", "==", "!=", "<", "<=", ">", ">=", "&", "|"):
        text = f"{left} {sym} {right}"
    else:
        text = f"{left}{sym}{right}"
    return f"({text})" if parent_prec > prec else text


def _render_call(node, target):
    name = node.value
    if name in _SUPER_RENDER and len(node.children) == 1:
        base = _render(node.children[0], target, 10)
        return f"{base}^{{{_SUPER_RENDER[name]}}}"
    args = ", ".join(_render(c, target, 0) for c in node.children)
    return f"\\{name}({args})"


# -- value rendering ----------------------------------------------------------

def render_value(value, target="plain"):
    """Render a runtime value (not an AST node) to Mathpar text or LaTeX."""
    from . import domains, lde, matrix as matrix_mod, polynomial, tropical

    latex = target == "latex"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        if latex:
            sign = "-" if value < 0 else ""
            return f"{sign}\\frac{{{abs(value.numerator)}}}{{{value.denominator}}}"
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return _render_float(value, latex)
    if _is_mpf(value):
        import mpmath
        digits = max(int(mpmath.mp.dps), 2)
        try:
            digits = max(int(value.context.dps), 2)
        except AttributeError:
            pass
        return mpmath.nstr(value, digits).rstrip("0").rstrip(".") or "0"
    if isinstance(value, domains.Mod):
        return str(value.value)
    if isinstance(value, domains.Complex):
        return _render_complex(value, target)
    if isinstance(value, domains.NamedConstant):
        return _CONST_RENDER[value.name][1 if latex else 0]
    if isinstance(value, tropical.TropicalScalar):
        return _render_tropical(value, latex)
    if isinstance(value, domains.IntervalSet):
        return str(value)
    if isinstance(value, polynomial.Poly):
        return _render_poly(value, target)
    if isinstance(value, polynomial.RationalFunction):
        num = _wrap_if_sum(_render_poly(value.num, target))
        den = _wrap_if_sum(_render_poly(value.den, target))
        if latex:
            return f"\\frac{{{_render_poly(value.num, target)}}}{{{_render_poly(value.den, target)}}}"
        return f"{num}/{den}"
    if isinstance(value, polynomial.NCValue):
        return _render_nc(value, target)
    if isinstance(value, polynomial.QuadraticSurd):
        return _render_surd(value, target)
    if isinstance(value, (polynomial.RadicalRoot, polynomial.UnresolvedFactor)):
        return str(value)
    if isinstance(value, matrix_mod.MatrixValue):
        if latex:
            rows = [" & ".join(render_value(x, target) for x in row)
                    for row in value.entries]
            return "\\begin{pmatrix} " + " \\\\ ".join(rows) + " \\end{pmatrix}"
        return "[" + ", ".join(
            "[" + ", ".join(render_value(x, target) for x in row) + "]"
            for row in value.entries) + "]"
    if isinstance(value, lde.TimeExpression):
        return _render_time_expression(value, target)
    if isinstance(value, lde.LDESystem):
        eqs = []
        for lhs, rhs in value.equations:
            parts = []
            for (f, order), c in sorted(lhs.items()):
                base = f if order == 0 else f"\\d({f}, {value.var}" + \
                    (f", {order})" if order != 1 else ")")
                parts.append(_with_coeff(c, base, target))
            eqs.append(_join_terms(parts) + " = " + render_value(rhs, target))
        return "\\systLDE(" + ", ".join(eqs) + ")"
    if isinstance(value, lde.InitialConditions):
        bits = [f"\\d({f}, t, {order}, 0) = " + render_value(v, target)
                for (f, order), v in sorted(value.values.items())]
        return "\\initCond(" + ", ".join(bits) + ")"
    if isinstance(value, lde.LDESolution):
        bits = [f"{f}({value.var}) = " + render_value(e, target)
                for f, e in sorted(value.components.items())]
        return "; ".join(bits)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(render_value(v, target) for v in value) + "]"
    if isinstance(value, str):
        return value
    if value is None:
        return ""
    return str(value)


def _is_mpf(value):
    try:
        import mpmath
        return isinstance(value, mpmath.mpf)
    except ImportError:
        return False


def _render_float(value, latex):
    import math
    if math.isinf(value):
        base = "\\infty" if value > 0 else "-\\infty"
        return base
    if math.isnan(value):
        return "NaN"
    if value == int(value) and abs(value) < 1e15:
        return f"{value:.1f}"
    return repr(value)


def _render_complex(value, target):
    re, im = value.re, value.im
    i_sym = "i" if target == "latex" else "\\i"
    if im == 0:
        return render_value(re, target)
    im_part = render_value(abs(im) if not isinstance(im, float) else abs(im), target)
    im_text = i_sym if im_part == "1" else f"{im_part}*{i_sym}"
    sign = "-" if _is_negative(im) else "+"
    if re == 0:
        return ("-" if sign == "-" else "") + im_text
    return f"{render_value(re, target)}{sign}{im_text}"


def _is_negative(x):
    try:
        return x < 0
    except TypeError:
        return False


def _render_tropical(value, latex):
    import math
    v = value.value
    if isinstance(v, float) and math.isinf(v):
        return ("\\infty" if v > 0 else "-\\infty")
    return render_value(v, "latex" if latex else "plain")


def _wrap_if_sum(text):
    return f"({text})" if ("+" in text[1:] or "-" in text[1:] or " " in text) else text


def _render_monomial(variables, exps, target):
    latex = target == "latex"
    bits = []
    for v, e in zip(variables, exps):
        if e == 0:
            continue
        name = _render_var_name(v, latex)
        if e == 1:
            bits.append(name)
        elif latex:
            bits.append(f"{name}^{{{e}}}")
        else:
            bits.append(f"{name}^{e}")
    joiner = " " if latex else "*"
    return joiner.join(bits)


_GREEK = {"alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
          "iota", "kappa", "lambda", "mu", "nu", "xi", "rho", "sigma", "tau",
          "phi", "chi", "psi", "omega"}


def _render_var_name(name, latex):
    if name in _GREEK:
        return "\\" + name
    return name


def _render_poly(p, target):
    from .polynomial import Poly
    if not p.terms:
        return "0"
    parts = []
    for exps, coeff in p.sorted_terms():
        mono = _render_monomial(p.vars, exps, target)
        parts.append(_with_coeff(coeff, mono, target))
    return _join_terms(parts)


def _with_coeff(coeff, mono, target):
    ctext = render_value(coeff, target)
    if not mono:
        return ctext
    if ctext == "1":
        return mono
    if ctext == "-1":
        return "-" + mono
    if any(ch in ctext[1:] for ch in "+-") or "/" in ctext:
        ctext = f"({ctext})"
    sep = " " if target == "latex" else "*"
    return f"{ctext}{sep}{mono}"


def _join_terms(parts):
    out = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            out += "-" + part[1:]
        else:
            out += "+" + part
    return out


def _render_nc(value, target):
    if not value.terms:
        return "0"
    parts = []
    for word, coeff in sorted(value.terms.items()):
        mono = "*".join("\\" + s for s in word)
        parts.append(_with_coeff(coeff, mono, target))
    return _join_terms(parts)


def _render_surd(value, target):
    from .polynomial import QuadraticSurd
    latex = target == "latex"
    root = f"\\sqrt{{{render_value(value.r, target)}}}" if latex \
        else f"\\sqrt({render_value(value.r, target)})"
    parts = []
    if value.a != 0:
        parts.append(render_value(value.a, target))
    if value.b != 0:
        parts.append(_with_coeff(value.b, root, target))
    if not parts:
        return "0"
    return _join_terms(parts)


def _render_time_expression(expr, target):
    from .lde import TimeExpression
    latex = target == "latex"
    if not expr.terms:
        return "0"
    parts = []
    for t in expr.terms:
        factors = []
        if t.k == 1:
            factors.append("t")
        elif t.k > 1:
            factors.append(f"t^{{{t.k}}}" if latex else f"t^{t.k}")
        if t.a != 0:
            arg = _scalar_times(t.a, "t", target)
            factors.append(f"e^{{{arg}}}" if latex else f"\\exp({arg})")
        if t.trig in ("cos", "sin"):
            arg = _scalar_times(t.b, "t", target)
            factors.append(f"\\{t.trig}({arg})")
        mono = ("*" if not latex else " ").join(factors)
        parts.append(_with_coeff(t.c, mono, target))
    return _join_terms(parts)


def _scalar_times(coeff, var, target):
    text = render_value(coeff, target)
    if text == "1":
        return var
    if text == "-1":
        return "-" + var
    if any(ch in text[1:] for ch in "+-") or "/" in text:
        text = f"({text})"
    return f"{text}*{var}" if target != "latex" else f"{text} {var}"
