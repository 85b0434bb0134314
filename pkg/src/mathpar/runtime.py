"""Session evaluator: bindings, control flow, procedures, files, and plots.

A Session owns the active Space, one shared variable namespace, a transcript,
and a seedable PRNG.  evaluate() runs a parsed Program statement by statement;
a failing statement halts the run but keeps earlier bindings.
"""

import math
import random
import time

import mpmath
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import domains, lde, matrix as matrix_mod, polynomial, syntax, tropical
from .errors import (
    ArityMismatch,
    BadParams,
    BadRange,
    DomainError,
    EvalError,
    FileNotFound,
    MathparError,
    MissingReturn,
    NonBooleanCondition,
    NonconstantCoefficient,
    NonlinearTerm,
    NonNumericSample,
    RuntimeLimit,
    UnknownFunction,
    UnsupportedCluster,
    UnsupportedRHS,
)
from .polynomial import NCValue, Poly, RationalFunction
from .matrix import MatrixValue
from .syntax import Node, Program, render, render_value


@dataclass
class ProcedureValue:
    name: str
    params: tuple
    body: Node          # a seq node
    kind: str = "procedure"

    def __str__(self):
        return f"\\{self.kind} {self.name}({', '.join(self.params)})"


class PlotData:
    """Sampled plot payload; serializes to a versioned JSON document."""

    def __init__(self, kind, ranges, payload, labels=None):
        self.kind = kind
        self.ranges = ranges
        self.payload = payload
        self.labels = labels or {}

    def to_document(self):
        doc = {"version": 1, "kind": self.kind, "ranges": self.ranges,
               "labels": self.labels}
        doc.update(self.payload)
        return doc

    @property
    def series(self):
        return self.payload.get("series", [])

    def __str__(self):
        return f"<plot {self.kind}>"

    def __repr__(self):
        return f"PlotData({self.kind})"


@dataclass
class StatementResult:
    index: int
    plain: str
    latex: str
    plot_ref: str = None


@dataclass
class EvalOutcome:
    results: list = field(default_factory=list)
    transcript: str = ""
    plot_refs: list = field(default_factory=list)
    error: dict = None


class Session:
    def __init__(self, seed=0, files_dir=None):
        self.space = domains.default_space()
        self.bindings = {}
        self.transcript = []
        self.rng = random.Random(seed)
        self.files_dir = Path(files_dir) if files_dir else None
        self._files = {}
        self.plots = {}
        self._plot_counter = 0
        self.iteration_cap = 10_000_000
        self.time_budget = 30.0

    # -- file storage
    def write_file(self, name, content):
        if "/" in name or name.startswith("."):
            raise BadParams(f"bad file name {name!r}")
        if self.files_dir:
            self.files_dir.mkdir(parents=True, exist_ok=True)
            (self.files_dir / name).write_text(content, encoding="utf-8")
        else:
            self._files[name] = content

    def read_file(self, name):
        for candidate in (name, name + ".txt"):
            if self.files_dir:
                path = self.files_dir / candidate
                if path.is_file():
                    return path.read_text(encoding="utf-8")
            elif candidate in self._files:
                return self._files[candidate]
        raise FileNotFound(f"no file named {name!r} in this session")

    def list_files(self):
        if self.files_dir:
            if not self.files_dir.is_dir():
                return []
            return sorted(p.name for p in self.files_dir.iterdir() if p.is_file())
        return sorted(self._files)

    def new_plot_ref(self, data):
        self._plot_counter += 1
        ref = f"plot-{self._plot_counter}"
        self.plots[ref] = data.to_document()
        return ref


class _ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


_CONSTANT_NAMES = ("MOD", "MOD32", "ACCURACY", "MachineEpsilonR",
                   "MachineEpsilonR64")
_CLUSTER_CONSTANTS = ("TOTALNODES", "PROCPERNODE", "CLUSTERTIME",
                      "MAXCLUSTERMEMORY")
_CLUSTER_OPS = ("adjointDetPar", "BellmanEquationPar", "BellmanInequalityPar")
_FUNCTION_NAMES = ("sin", "cos", "tg", "exp", "ln", "sqrt", "abs",
                   "arcsin", "arccos", "arctg")


def evaluate(session, program):
    """Run a Program (or source text) against the session."""
    if isinstance(program, str):
        program = syntax.parse(program)
    ev = _Evaluator(session)
    outcome = EvalOutcome()
    before = len(session.transcript)
    for index, stmt in enumerate(program.statements):
        try:
            value, ref = ev.execute(stmt)
        except MathparError as exc:
            outcome.error = {"statement": index, "message": str(exc),
                             "type": type(exc).__name__}
            break
        if value is not None:
            outcome.results.append(StatementResult(
                index=index,
                plain=render_value(value, "plain"),
                latex=render_value(value, "latex"),
                plot_ref=ref))
        if ref:
            outcome.plot_refs.append(ref)
    outcome.transcript = "\n".join(session.transcript[before:])
    return outcome


class _Evaluator:
    def __init__(self, session):
        self.session = session
        self.scopes = [session.bindings]
        self.start = time.monotonic()
        self.iterations = 0

    # -- scope handling
    def lookup(self, name):
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None

    def bound(self, name):
        return any(name in scope for scope in self.scopes)

    def bind(self, name, value):
        for scope in reversed(self.scopes):
            if name in scope:
                scope[name] = value
                return
        self.scopes[-1][name] = value

    def tick(self):
        self.iterations += 1
        if self.iterations > self.session.iteration_cap:
            raise RuntimeLimit("iteration cap exceeded")
        if self.iterations % 256 == 0 and \
                time.monotonic() - self.start > self.session.time_budget:
            raise RuntimeLimit("evaluation time budget exceeded")

    # -- statements
    def execute(self, node):
        """Execute a statement; returns (result value or None, plot ref)."""
        kind = node.kind
        if kind == "procdef":
            proc_kind, name, params = node.value
            self.bind(name, ProcedureValue(name, params, node.children[0],
                                           proc_kind))
            return None, None
        if kind == "if":
            if self.truth(node.children[0]):
                self.run_block(node.children[1])
            elif len(node.children) > 2:
                alt = node.children[2]
                if alt.kind == "if":
                    self.execute(alt)
                else:
                    self.run_block(alt)
            return None, None
        if kind == "while":
            cond, body = node.children
            while self.truth(cond):
                self.tick()
                self.run_block(body)
            return None, None
        if kind == "for":
            init, cond, step, body = node.children
            if init.kind != "seq" or init.children:
                self.eval(init)
            while (cond.kind == "seq" and not cond.children) or self.truth(cond):
                self.tick()
                self.run_block(body)
                if step.kind != "seq" or step.children:
                    self.eval(step)
            return None, None
        if kind == "return":
            value = self.eval(node.children[0]) if node.children else None
            raise _ReturnSignal(value)
        if kind == "seq":
            self.run_block(node)
            return None, None
        if kind == "string":
            self.session.transcript.append(node.value)
            return None, None
        if kind == "assign":
            return self.assignment(node), None
        value = self.eval(node)
        ref = None
        if isinstance(value, PlotData):
            ref = self.session.new_plot_ref(value)
        return value, ref

    def run_block(self, seq):
        for stmt in seq.children:
            self.tick()
            self.execute(stmt)

    def assignment(self, node):
        lhs, rhs = node.children
        if lhs.kind == "symbol" and lhs.value == "SPACE":
            self.set_space(rhs)
            return None
        if lhs.kind == "symbol" and lhs.value in _CONSTANT_NAMES:
            value = _int_exponent(self.eval(rhs))
            if value is None:
                raise BadParams(f"{lhs.value} must be an integer")
            constants = dict(self.session.space.constants)
            constants[lhs.value] = value
            self.session.space = domains.Space(
                self.session.space.number_set, self.session.space.variables,
                constants)
            return value
        if lhs.kind != "symbol":
            raise EvalError("only names can be assigned")
        value = self.eval(rhs)
        if value is None:
            raise MissingReturn("right-hand side produced no value")
        self.bind(lhs.value, value)
        return value

    def set_space(self, rhs):
        if rhs.kind == "index":
            base = rhs.children[0]
            if base.kind != "symbol":
                raise EvalError("SPACE takes a number-set name")
            variables = []
            for arg in rhs.children[1:]:
                if arg.kind != "symbol":
                    raise EvalError("SPACE variables must be plain names")
                variables.append(arg.value)
            tag = base.value
        elif rhs.kind == "symbol":
            tag, variables = rhs.value, []
        else:
            raise EvalError("SPACE takes the form Tag[v1, ..., vk]")
        self.session.space = domains.set_space(
            tag, variables, self.session.space.constants)

    # -- conditions
    def truth(self, node):
        if node.kind == "assign":
            a = self.eval(node.children[0])
            b = self.eval(node.children[1])
            return self.compare_values("==", a, b)
        value = self.eval(node)
        if isinstance(value, bool):
            return value
        if isinstance(value, int) and value in (0, 1):
            return bool(value)
        if isinstance(value, tropical.TropicalScalar) and value.value in (0, 1):
            return bool(value.value)
        raise NonBooleanCondition(f"condition is not boolean: {value!r}")

    # -- expressions
    def eval(self, node):
        kind = node.kind
        if kind == "number":
            return self.session.space.parse_decimal(node.value)
        if kind == "string":
            return node.value
        if kind == "constant":
            return self.constant(node.value)
        if kind == "symbol":
            return self.symbol(node.value)
        if kind == "ncsymbol":
            return NCValue.symbol(node.value)
        if kind == "assign":
            return self.assignment(node)
        if kind == "unary":
            value = self.eval(node.children[0])
            if node.value == "-":
                return self.negate(value)
            if node.value == "!":
                return not self.truth(node.children[0])
            raise EvalError(f"unknown unary operator {node.value!r}")
        if kind == "binary":
            return self.binary(node)
        if kind == "call":
            return self.call(node)
        if kind == "vector":
            return [self.eval(c) for c in node.children]
        if kind == "matrix":
            rows = [[self.eval(c) for c in row.children] for row in node.children]
            return MatrixValue(rows)
        if kind == "index":
            raise EvalError("indexing is only used in SPACE declarations")
        if kind == "seq":
            self.run_block(node)
            return None
        raise EvalError(f"cannot evaluate node kind {kind!r}")

    def constant(self, name):
        if name == "pi":
            return domains.PI
        if name == "e":
            return domains.E
        if name == "i":
            return domains.IMAGINARY_UNIT
        if name == "infinity":
            space = self.session.space
            if space.is_tropical:
                return space.algebra.coerce(math.inf)
            return domains.INFINITY
        if name == "emptyset":
            return domains.IntervalSet.empty()
        raise EvalError(f"unknown constant {name!r}")

    def symbol(self, name):
        value = self.lookup(name)
        if value is not None:
            return value
        if self.bound(name):
            return None
        return Poly.variable(name)

    def negate(self, value):
        if value is None:
            raise MissingReturn("operand produced no value")
        if isinstance(value, (Poly, RationalFunction, NCValue, MatrixValue)):
            return -value
        if isinstance(value, lde.TimeExpression):
            return value.scale(-1)
        return domains.negate(value, self.session.space)

    def binary(self, node):
        op = node.value
        if op in ("cap", "cup", "setminus", "delta"):
            a, b = (self.eval(c) for c in node.children)
            a, b = self.as_interval(a), self.as_interval(b)
            mapped = "triangle" if op == "delta" else op
            return domains.set_ops(mapped, a, b)
        if op in ("&", "|"):
            left = self.truth(node.children[0])
            if op == "&":
                return left and self.truth(node.children[1])
            return left or self.truth(node.children[1])
        if op in ("==", "!=", "<", "<=", ">", ">="):
            a = self.eval(node.children[0])
            b = self.eval(node.children[1])
            return self.compare_values(op, a, b)
        a = self.eval(node.children[0])
        b = self.eval(node.children[1])
        return self.arith_values(op, a, b)

    def as_interval(self, value):
        if isinstance(value, domains.IntervalSet):
            return value
        if isinstance(value, MatrixValue):
            raise EvalError("set operators need interval operands")
        lo = domains.to_float(value) if not isinstance(value, list) else None
        if isinstance(value, list) and len(value) == 2:
            a, b = (domains.to_float(v) for v in value)
            return domains.IntervalSet.interval(a, b)
        if lo is not None:
            return domains.IntervalSet.interval(lo, lo)
        raise EvalError("set operators need interval operands")

    def compare_values(self, op, a, b):
        if a is None or b is None:
            raise MissingReturn("operand produced no value")
        structural = (Poly, RationalFunction, NCValue, MatrixValue,
                      domains.IntervalSet, lde.TimeExpression)
        if isinstance(a, structural) or isinstance(b, structural):
            if isinstance(a, Poly) and a.is_constant():
                a = a.constant_value() if a.terms else 0
            if isinstance(b, Poly) and b.is_constant():
                b = b.constant_value() if b.terms else 0
            if isinstance(a, structural) or isinstance(b, structural):
                if op == "==":
                    return a == b
                if op == "!=":
                    return a != b
                raise DomainError("only = and != apply to symbolic values")
        return domains.compare(op, a, b, self.session.space)

    def arith_values(self, op, a, b):
        if a is None or b is None:
            raise MissingReturn("operand produced no value")
        space = self.session.space
        if isinstance(a, MatrixValue) or isinstance(b, MatrixValue):
            return self.matrix_arith(op, a, b)
        if isinstance(a, NCValue) or isinstance(b, NCValue):
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "^" and isinstance(b, int):
                return a ** b
            raise DomainError(f"operator {op!r} undefined for noncommutative values")
        if isinstance(a, domains.IntervalSet) or isinstance(b, domains.IntervalSet):
            raise DomainError("interval sets use \\cap, \\cup, \\setminus, Δ")
        if isinstance(a, lde.TimeExpression) or isinstance(b, lde.TimeExpression):
            return self.time_arith(op, a, b)
        symbolic = (Poly, RationalFunction)
        if isinstance(a, symbolic) or isinstance(b, symbolic):
            if space.is_tropical:
                return self.tropical_poly_arith(op, a, b)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "/":
                return _as_ratfun(a) / _as_ratfun(b)
            if op == "^":
                exp = _int_exponent(b)
                if exp is None:
                    raise DomainError("polynomial exponent must be an integer")
                if exp < 0:
                    base = a if isinstance(a, RationalFunction) else \
                        RationalFunction.from_poly(a)
                    return (base.ring_one() / base) ** (-exp)
                return a ** exp
            raise DomainError(f"unknown operator {op!r}")
        return domains.arith(op, a, b, space)

    def tropical_poly_arith(self, op, a, b):
        raise DomainError("polynomial arithmetic in tropical spaces is not supported")

    def time_arith(self, op, a, b):
        if not isinstance(a, lde.TimeExpression):
            a = lde.TimeExpression.constant(a)
        if not isinstance(b, lde.TimeExpression):
            b = lde.TimeExpression.constant(b)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        raise DomainError("time expressions support only + and -")

    def matrix_arith(self, op, a, b):
        if isinstance(a, MatrixValue) and isinstance(b, MatrixValue):
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            raise DomainError(f"operator {op!r} undefined for two matrices")
        if isinstance(a, MatrixValue):
            if op == "*":
                return a.scale(b)
            if op == "/":
                return a.map(lambda x: self.arith_values("/", x, b))
            if op == "^":
                exp = _int_exponent(b)
                if exp is not None:
                    if exp == -1:
                        return matrix_mod.inverse(a)
                    if exp < 0:
                        return matrix_mod.inverse(a) ** (-exp)
                    return a ** exp
                raise DomainError("matrix exponent must be an integer")
            raise DomainError(f"operator {op!r} undefined for matrix and scalar")
        if op == "*":
            return b.scale(a)
        raise DomainError(f"operator {op!r} undefined for scalar and matrix")

    # -- calls
    def call(self, node):
        name = node.value
        bound = self.lookup(name)
        if isinstance(bound, ProcedureValue):
            args = [self.eval(c) for c in node.children]
            return self.call_procedure(bound, args)
        if name in _CLUSTER_OPS:
            raise UnsupportedCluster(f"unsupported: cluster backend ({name})")
        handler = _AST_BUILTINS.get(name)
        if handler is not None:
            return handler(self, node)
        handler = _VALUE_BUILTINS.get(name)
        if handler is not None:
            args = [self.eval(c) for c in node.children]
            return handler(self, args)
        if name in _FUNCTION_NAMES:
            args = [self.eval(c) for c in node.children]
            return self.elementary(name, args)
        raise UnknownFunction(f"unknown operator \\{name}")

    def call_procedure(self, proc, args):
        if len(args) != len(proc.params):
            raise ArityMismatch(
                f"{proc.name} takes {len(proc.params)} arguments, got {len(args)}")
        frame = dict(zip(proc.params, args))
        self.scopes.append(frame)
        try:
            self.run_block(proc.body)
        except _ReturnSignal as sig:
            return sig.value
        finally:
            self.scopes.pop()
        if proc.kind == "function":
            raise MissingReturn(f"function {proc.name} completed without \\return")
        return None

    def elementary(self, name, args):
        if len(args) == 1 and isinstance(args[0], (Poly, RationalFunction)):
            arg = args[0]
            if isinstance(arg, Poly) and arg.is_constant():
                args = [arg.constant_value() if arg.terms else 0]
            else:
                raise DomainError(
                    f"\\{name} of a symbolic argument has no closed value here")
        return domains.eval_function(name, args, self.session.space)


# -- builtins: AST-mode -------------------------------------------------------

def _bi_print(ev, node):
    parts = []
    for child in node.children:
        label = render(child, "plain")
        value = ev.eval(child)
        parts.append(f"{label}={render_value(value, 'plain')}")
    ev.session.transcript.append("; ".join(parts))
    return None


def _bi_d(ev, node):
    args = node.children
    if not args or len(args) > 4:
        raise DomainError("\\d takes between 1 and 4 arguments")
    if len(args) >= 2 and args[0].kind == "symbol" and args[1].kind == "symbol":
        fname, var = args[0].value, args[1].value
        target = ev.lookup(fname)
        if target is None and len(args) > 2:
            order = _small_int(ev.eval(args[2]))
            point = _as_fraction(ev.eval(args[3])) if len(args) == 4 else None
            return lde.DerivativeTerm(fname, var, order, point)
    value = ev.eval(args[0])
    if len(args) < 2 or args[1].kind != "symbol":
        raise DomainError("\\d needs a differentiation variable")
    var = args[1].value
    order = _small_int(ev.eval(args[2])) if len(args) > 2 else 1
    if isinstance(value, (Poly, RationalFunction)):
        out = value
        for _ in range(order):
            out = out.diff(var)
        return out
    if isinstance(value, lde.TimeExpression):
        out = value
        for _ in range(order):
            out = out.diff()
        return out
    # derivative of an unbound scalar symbol
    if isinstance(value, Poly):
        return value.diff(var)
    return lde.DerivativeTerm(args[0].value, var, order) \
        if args[0].kind == "symbol" else Poly.const(0, ())


def _as_ratfun(value):
    if isinstance(value, RationalFunction):
        return value
    if not isinstance(value, Poly):
        value = Poly.const(value, ())
    return RationalFunction.from_poly(value)


def _int_exponent(value):
    """Integer view of an exponent value, or None when it has none."""
    if isinstance(value, Poly) and value.is_constant():
        value = value.constant_value() if value.terms else 0
    if isinstance(value, Fraction) and value.denominator == 1:
        value = value.numerator
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if isinstance(value, mpmath.mpf) and value == int(value):
        value = int(value)
    return value if isinstance(value, int) and not isinstance(value, bool) \
        else None


def _small_int(value):
    if isinstance(value, Fraction) and value.denominator == 1:
        value = value.numerator
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if not isinstance(value, int):
        raise DomainError("expected a small integer")
    return value


def _as_fraction(value):
    if isinstance(value, Poly) and value.is_constant():
        value = value.constant_value() if value.terms else 0
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10 ** 12)
    raise DomainError(f"expected a rational value, got {value!r}")


def _bi_systlde(ev, node):
    equations = []
    tvar = "t"
    for arg in node.children:
        if arg.kind != "assign":
            raise DomainError("systLDE takes equations of the form lhs = rhs")
        for term in _iterate_d_terms(arg):
            tvar = term
            break
    for arg in node.children:
        lhs, forcing = _split_lde_equation(ev, arg, tvar)
        equations.append((lhs, forcing))
    return lde.make_system(equations, tvar)


def _iterate_d_terms(node):
    if node.kind == "call" and node.value == "d" and len(node.children) >= 2 \
            and node.children[1].kind == "symbol":
        yield node.children[1].value
    for child in node.children:
        yield from _iterate_d_terms(child)


def _split_lde_equation(ev, eq, tvar):
    lhs_node, rhs_node = eq.children
    lhs = {}
    forcing = lde.TimeExpression.zero()
    for sign, term in _sum_terms(lhs_node, 1):
        lhs, forcing = _classify_lde_term(ev, term, sign, tvar, lhs, forcing, left=True)
    for sign, term in _sum_terms(rhs_node, 1):
        lhs, forcing = _classify_lde_term(ev, term, sign, tvar, lhs, forcing, left=False)
    return lhs, forcing


def _sum_terms(node, sign):
    if node.kind == "binary" and node.value in ("+", "-"):
        yield from _sum_terms(node.children[0], sign)
        yield from _sum_terms(node.children[1],
                              sign if node.value == "+" else -sign)
        return
    if node.kind == "unary" and node.value == "-":
        yield from _sum_terms(node.children[0], -sign)
        return
    yield sign, node


def _classify_lde_term(ev, term, sign, tvar, lhs, forcing, left):
    factors = _product_factors(term)
    unknown = None
    coeff_nodes = []
    for f in factors:
        info = _unknown_factor(ev, f, tvar)
        if info is not None:
            if unknown is not None:
                raise NonlinearTerm("product of unknowns in a linear system")
            unknown = info
        else:
            coeff_nodes.append(f)
    if unknown is not None:
        coeff = Fraction(sign)
        for cn in coeff_nodes:
            value = ev.eval(cn)
            try:
                coeff *= _as_fraction(value)
            except DomainError:
                raise NonconstantCoefficient(
                    f"coefficient {render(cn, 'plain')} is not a rational constant")
        if not left:
            coeff = -coeff
        lhs[unknown] = lhs.get(unknown, Fraction(0)) + coeff
        return lhs, forcing
    expr = _forcing_expression(ev, term, tvar)
    if left:
        expr = expr.scale(-1)
    if sign < 0:
        expr = expr.scale(-1)
    forcing = forcing + expr
    return lhs, forcing


def _product_factors(node):
    if node.kind == "binary" and node.value == "*":
        return _product_factors(node.children[0]) + _product_factors(node.children[1])
    return [node]


def _unknown_factor(ev, node, tvar):
    if node.kind == "call" and node.value == "d" and len(node.children) >= 2:
        f = node.children[0]
        v = node.children[1]
        if f.kind == "symbol" and v.kind == "symbol" and v.value == tvar:
            order = 1
            if len(node.children) > 2:
                order = _small_int(ev.eval(node.children[2]))
            return (f.value, order)
    if node.kind == "symbol" and node.value != tvar and \
            not isinstance(ev.lookup(node.value), (int, float, Fraction)):
        return (node.value, 0)
    return None


def _forcing_expression(ev, node, tvar):
    """AST -> TimeExpression over the supported class, or UnsupportedRHS."""
    k = node.kind
    if k == "number":
        return lde.TimeExpression.constant(Fraction(node.value))
    if k == "unary" and node.value == "-":
        return _forcing_expression(ev, node.children[0], tvar).scale(-1)
    if k == "symbol":
        if node.value == tvar:
            return lde.TimeExpression([lde.ForcingTerm(Fraction(1), 1)])
        value = ev.lookup(node.value)
        if value is not None:
            return lde.TimeExpression.constant(_as_fraction(value))
        raise UnsupportedRHS(f"symbol {node.value!r} in a forcing expression")
    if k == "binary":
        op = node.value
        a_node, b_node = node.children
        if op in ("+", "-"):
            a = _forcing_expression(ev, a_node, tvar)
            b = _forcing_expression(ev, b_node, tvar)
            return a + b if op == "+" else a - b
        if op == "*":
            return _forcing_product(ev, a_node, b_node, tvar)
        if op == "/":
            a = _forcing_expression(ev, a_node, tvar)
            divisor = _as_fraction(ev.eval(b_node))
            if divisor == 0:
                raise UnsupportedRHS("division by zero in a forcing expression")
            return a.scale(Fraction(1) / divisor)
        if op == "^":
            if a_node.kind == "symbol" and a_node.value == tvar:
                k_exp = _small_int(ev.eval(b_node))
                if k_exp < 0:
                    raise UnsupportedRHS("negative powers of t are unsupported")
                return lde.TimeExpression([lde.ForcingTerm(Fraction(1), k_exp)])
            raise UnsupportedRHS("only powers of the time variable are supported")
    if k == "call" and node.value in ("exp", "cos", "sin"):
        a = _linear_time_coeff(ev, node.children[0], tvar)
        if node.value == "exp":
            return lde.TimeExpression([lde.ForcingTerm(Fraction(1), 0, a)])
        return lde.TimeExpression([lde.ForcingTerm(Fraction(1), 0, Fraction(0),
                                                   node.value, a)])
    try:
        return lde.TimeExpression.constant(_as_fraction(ev.eval(node)))
    except (DomainError, MathparError):
        raise UnsupportedRHS(
            f"{render(node, 'plain')} is outside the supported forcing class")


def _forcing_product(ev, a_node, b_node, tvar):
    a = _forcing_expression(ev, a_node, tvar)
    b = _forcing_expression(ev, b_node, tvar)
    out = []
    for ta in a.terms:
        for tb in b.terms:
            if ta.trig != "none" and tb.trig != "none":
                raise UnsupportedRHS("products of oscillators are unsupported")
            trig = ta.trig if ta.trig != "none" else tb.trig
            bfreq = ta.b if ta.trig != "none" else tb.b
            out.append(lde.ForcingTerm(ta.c * tb.c, ta.k + tb.k, ta.a + tb.a,
                                       trig, bfreq))
    return lde.TimeExpression(out)


def _linear_time_coeff(ev, node, tvar):
    """Coefficient a with node = a * tvar; UnsupportedRHS otherwise."""
    if node.kind == "symbol" and node.value == tvar:
        return Fraction(1)
    if node.kind == "unary" and node.value == "-":
        return -_linear_time_coeff(ev, node.children[0], tvar)
    if node.kind == "binary" and node.value == "*":
        a_node, b_node = node.children
        if b_node.kind == "symbol" and b_node.value == tvar:
            return _as_fraction(ev.eval(a_node))
        if a_node.kind == "symbol" and a_node.value == tvar:
            return _as_fraction(ev.eval(b_node))
    if node.kind == "binary" and node.value == "/":
        return _linear_time_coeff(ev, node.children[0], tvar) / \
            _as_fraction(ev.eval(node.children[1]))
    raise UnsupportedRHS("oscillator arguments must be linear in the time variable")


def _bi_initcond(ev, node):
    conditions = []
    for arg in node.children:
        if arg.kind != "assign":
            raise DomainError("initCond takes conditions of the form d(f,t,k,t0) = value")
        lhs, rhs = arg.children
        if lhs.kind != "call" or lhs.value != "d" or len(lhs.children) != 4:
            raise DomainError("initial conditions use the form d(f, t, k, t0)")
        f, v, k, t0 = lhs.children
        term = lde.DerivativeTerm(f.value, v.value,
                                  _small_int(ev.eval(k)),
                                  _as_fraction(ev.eval(t0)))
        conditions.append((term, _as_fraction(ev.eval(rhs))))
    return lde.make_conditions(conditions)


def _bi_fromfile(ev, node):
    if len(node.children) != 1:
        raise DomainError("fromFile takes one file name")
    name = _file_name(node.children[0])
    content = ev.session.read_file(name)
    program = syntax.parse(content)
    result = None
    for stmt in program.statements:
        value, _ = ev.execute(stmt)
        if value is not None:
            result = value
    return result


def _bi_tofile(ev, node):
    if len(node.children) != 2:
        raise DomainError("toFile takes a value and a file name")
    value = ev.eval(node.children[0])
    name = _file_name(node.children[1])
    if "." not in name:
        name += ".txt"
    ev.session.write_file(name, render_value(value, "plain") + ";\n")
    return None


def _file_name(node):
    if node.kind == "symbol":
        return node.value
    if node.kind == "string":
        return node.value
    raise DomainError("file names are plain identifiers or strings")


# -- plotting -----------------------------------------------------------------

def _eval_range(ev, node, length):
    value = ev.eval(node)
    if not isinstance(value, list) or len(value) != length:
        raise BadRange(f"expected a range list of {length} numbers")
    out = []
    for v in value:
        f = domains.to_float(v)
        if not math.isfinite(f):
            raise BadRange("range endpoints must be finite")
        out.append(f)
    for i in range(0, length - 1, 2):
        if out[i] >= out[i + 1]:
            raise BadRange("range endpoints must satisfy a < b")
    return out


def _free_symbols(node, acc):
    if node.kind == "symbol":
        acc.append(node.value)
    for child in node.children:
        _free_symbols(child, acc)
    return acc


def _pick_variables(ev, nodes, preferred):
    seen = []
    for node in nodes:
        for name in _free_symbols(node, []):
            if name in seen:
                continue
            value = ev.lookup(name)
            if value is None or isinstance(value, Poly):
                seen.append(name)
    out = []
    for p in preferred:
        if p in seen:
            out.append(p)
    for name in seen:
        if name not in out:
            out.append(name)
    while len(out) < len(preferred):
        out.append(preferred[len(out)])
    return out[:len(preferred)]


def _sample_scalar(ev, node, bindings):
    frame = dict(bindings)
    ev.scopes.append(frame)
    try:
        value = ev.eval(node)
        f = domains.to_float(value)
        if not math.isfinite(f):
            return None
        return f
    except MathparError:
        return None
    except (ZeroDivisionError, OverflowError, ValueError):
        return None
    finally:
        ev.scopes.pop()


def _series(ev, node, var, a, b, count, label=None):
    points = []
    holes = []
    bad = 0
    for i in range(count):
        x = a + (b - a) * i / (count - 1)
        y = _sample_scalar(ev, node, {var: x})
        points.append([x, y])
        holes.append(y is None)
        if y is None:
            bad += 1
    if bad > 0.9 * count:
        raise NonNumericSample(
            f"{render(node, 'plain')} is unevaluable on most of the range")
    return {"points": points, "holes": holes,
            "label": label or render(node, "plain"), "connected": True}


def _bi_plot(ev, node):
    if len(node.children) < 2:
        raise DomainError("plot takes a function and a range")
    f_node = node.children[0]
    a, b = _eval_range(ev, node.children[1], 2)
    count = _small_int(ev.eval(node.children[2])) if len(node.children) > 2 else 512
    if count < 2:
        raise BadParams("sample count must be at least 2")
    var = _pick_variables(ev, [f_node], ["x"])[0]
    return PlotData("plot2d", [a, b],
                    {"series": [_series(ev, f_node, var, a, b, count)]},
                    {"variable": var})


def _bi_paramplot(ev, node):
    if len(node.children) < 2 or node.children[0].kind not in ("vector", "matrix"):
        raise DomainError("paramPlot takes [components] and a range")
    comps = node.children[0].children
    if node.children[0].kind == "matrix":
        comps = tuple(c for row in comps for c in row.children)
    if len(comps) == 2:
        a, b = _eval_range(ev, node.children[1], 2)
        count = _small_int(ev.eval(node.children[2])) \
            if len(node.children) > 2 else 512
        var = _pick_variables(ev, list(comps), ["x"])[0]
        xs = _series(ev, comps[0], var, a, b, count)
        ys = _series(ev, comps[1], var, a, b, count)
        points = [[px[1], py[1]] for px, py in zip(xs["points"], ys["points"])]
        holes = [hx or hy for hx, hy in zip(xs["holes"], ys["holes"])]
        return PlotData("param2d", [a, b],
                        {"series": [{"points": points, "holes": holes,
                                     "label": render(node.children[0], "plain"),
                                     "connected": True}]},
                        {"variable": var})
    if len(comps) == 3:
        ranges = _eval_range(ev, node.children[1], 4)
        return _param_surface(ev, comps, ranges)
    raise DomainError("paramPlot takes two or three components")


def _grid(ev, node, vars_, ranges, nu, nv):
    u0, u1, v0, v1 = ranges
    rows = []
    for i in range(nu):
        u = u0 + (u1 - u0) * i / (nu - 1)
        row = []
        for j in range(nv):
            v = v0 + (v1 - v0) * j / (nv - 1)
            row.append(_sample_scalar(ev, node, {vars_[0]: u, vars_[1]: v}))
        rows.append(row)
    return rows


def _param_surface(ev, comps, ranges, size=64):
    uv = _pick_variables(ev, list(comps), ["u", "v"])
    grids = [_grid(ev, c, uv, ranges, size, size) for c in comps]
    return PlotData("paramSurface3d", ranges,
                    {"x": grids[0], "y": grids[1], "z": grids[2],
                     "size": [size, size]},
                    {"variables": uv})


def _bi_tableplot(ev, node):
    return _table_like(ev, node, connected=True, kind="table2d")


def _bi_pointsplot(ev, node):
    return _table_like(ev, node, connected=False, kind="points2d")


def _table_like(ev, node, connected, kind):
    if not node.children:
        raise DomainError("a value table is required")
    value = ev.eval(node.children[0])
    if isinstance(value, MatrixValue):
        rows = value.entries
    elif isinstance(value, list) and all(isinstance(r, list) for r in value):
        rows = value
    else:
        raise DomainError("the value table must be an n x 2 matrix")
    points = []
    for row in rows:
        if len(row) != 2:
            raise DomainError("the value table must be an n x 2 matrix")
        points.append([domains.to_float(row[0]), domains.to_float(row[1])])
    labels = {}
    if len(node.children) > 1:
        labels["text"] = [render_value(ev.eval(c), "plain")
                          for c in node.children[1:]]
    xs = [p[0] for p in points]
    return PlotData(kind, [min(xs), max(xs)] if xs else [0.0, 1.0],
                    {"series": [{"points": points,
                                 "holes": [False] * len(points),
                                 "label": "", "connected": connected}]},
                    labels)


def _bi_plottext(ev, node):
    if len(node.children) < 3:
        raise DomainError("plotText takes text, x, and y")
    text = ev.eval(node.children[0])
    x = domains.to_float(ev.eval(node.children[1]))
    y = domains.to_float(ev.eval(node.children[2]))
    extra = {}
    if len(node.children) > 3:
        extra["size"] = domains.to_float(ev.eval(node.children[3]))
    if len(node.children) > 4:
        extra["slope"] = domains.to_float(ev.eval(node.children[4]))
    return PlotData("text2d", [x, x], {"text": str(text), "at": [x, y], **extra})


def _bi_showplots(ev, node):
    plots = []
    for child in node.children:
        value = ev.eval(child)
        if isinstance(value, list):
            plots.extend(value)
        else:
            plots.append(value)
    docs = []
    lo, hi = None, None
    for p in plots:
        if not isinstance(p, PlotData):
            raise DomainError("showPlots takes plot values")
        docs.append(p.to_document())
        if p.ranges and len(p.ranges) >= 2:
            lo = p.ranges[0] if lo is None else min(lo, p.ranges[0])
            hi = p.ranges[1] if hi is None else max(hi, p.ranges[1])
    return PlotData("composite2d", [lo or 0.0, hi or 1.0], {"parts": docs})


def _bi_plot3d(ev, node):
    if len(node.children) < 2:
        raise DomainError("plot3d takes a function and a range")
    return _explicit_surface(ev, node.children[0],
                             _eval_range(ev, node.children[1], 4))


def _bi_explicitplot3d(ev, node):
    if not node.children:
        raise DomainError("explicitPlot3d takes a surface function")
    ranges = _eval_range(ev, node.children[1], 4) if len(node.children) > 1 \
        else [-1.0, 1.0, -1.0, 1.0]
    return _explicit_surface(ev, node.children[0], ranges)


def _explicit_surface(ev, f_node, ranges, size=64):
    xy = _pick_variables(ev, [f_node], ["x", "y"])
    grid = _grid(ev, f_node, xy, ranges, size, size)
    return PlotData("surface3d", ranges,
                    {"z": grid, "size": [size, size]},
                    {"variables": xy, "label": render(f_node, "plain")})


def _bi_parametricplot3d(ev, node):
    if len(node.children) < 3:
        raise DomainError("parametricPlot3d takes X, Y, Z (and a range)")
    comps = node.children[:3]
    ranges = _eval_range(ev, node.children[3], 4) if len(node.children) > 3 \
        else [-1.0, 1.0, -1.0, 1.0]
    return _param_surface(ev, list(comps), ranges)


def _bi_implicitplot3d(ev, node):
    if not node.children:
        raise DomainError("implicitPlot3d takes a field function")
    ranges = _eval_range(ev, node.children[1], 6) if len(node.children) > 1 \
        else [-1.0, 1.0, -1.0, 1.0, -1.0, 1.0]
    xyz = _pick_variables(ev, [node.children[0]], ["x", "y", "z"])
    size = 32
    x0, x1, y0, y1, z0, z1 = ranges
    field = []
    for i in range(size):
        x = x0 + (x1 - x0) * i / (size - 1)
        plane = []
        for j in range(size):
            y = y0 + (y1 - y0) * j / (size - 1)
            line = []
            for k in range(size):
                z = z0 + (z1 - z0) * k / (size - 1)
                line.append(_sample_scalar(ev, node.children[0],
                                           {xyz[0]: x, xyz[1]: y, xyz[2]: z}))
            plane.append(line)
        field.append(plane)
    return PlotData("scalarField3d", ranges,
                    {"field": field, "size": [size, size, size]},
                    {"variables": xyz})


_AST_BUILTINS = {
    "print": _bi_print,
    "d": _bi_d,
    "systLDE": _bi_systlde,
    "initCond": _bi_initcond,
    "fromFile": _bi_fromfile,
    "toFile": _bi_tofile,
    "plot": _bi_plot,
    "paramPlot": _bi_paramplot,
    "tablePlot": _bi_tableplot,
    "pointsPlot": _bi_pointsplot,
    "plotText": _bi_plottext,
    "showPlots": _bi_showplots,
    "plot3d": _bi_plot3d,
    "explicitPlot3d": _bi_explicitplot3d,
    "parametricPlot3d": _bi_parametricplot3d,
    "implicitPlot3d": _bi_implicitplot3d,
}


# -- builtins: value-mode -----------------------------------------------------

def _need_matrix(args, name, count=1):
    if len(args) < count or not all(isinstance(a, MatrixValue) for a in args[:count]):
        raise DomainError(f"\\{name} needs a matrix argument")
    return args[:count] if count > 1 else args[0]


def _as_column(value, name):
    if isinstance(value, MatrixValue):
        return value
    if isinstance(value, list):
        return MatrixValue.column(value)
    raise DomainError(f"\\{name} needs a vector argument")


def _polys(args, name):
    out = []
    for a in args:
        if isinstance(a, Poly):
            out.append(a)
        elif isinstance(a, (int, Fraction)) and not isinstance(a, bool):
            out.append(Poly.const(a, ()))
        elif isinstance(a, list):
            out.extend(_polys(a, name))
        else:
            raise DomainError(f"\\{name} works on polynomials")
    return out


def _bi_groebner(ev, args):
    return polynomial.groebner(_polys(args, "groebner"))


def _bi_reducebygb(ev, args):
    if len(args) != 2:
        raise DomainError("reduceByGB takes a polynomial and a basis list")
    g = _polys([args[0]], "reduceByGB")[0]
    basis = _polys(args[1] if isinstance(args[1], list) else [args[1]],
                   "reduceByGB")
    return polynomial.reduce_by_gb(g, basis)


def _bi_solvenae(ev, args):
    solutions = polynomial.solve_nae(_polys(args, "solveNAE"),
                                     ev.session.space)
    rows = []
    variables = sorted({v for sol in solutions for v in sol})
    for sol in solutions:
        rows.append([sol[v] for v in variables])
    return rows


def _bi_solve(ev, args):
    if len(args) != 1:
        raise DomainError("solve takes one polynomial")
    p = args[0]
    if isinstance(p, (int, Fraction, float)):
        raise DomainError("solve needs a polynomial with a variable")
    return polynomial.solve_univariate(p, ev.session.space)


def _bi_gcd(ev, args):
    if len(args) != 2:
        raise DomainError("gcd takes two arguments")
    a, b = args
    if isinstance(a, Poly) or isinstance(b, Poly):
        pa, pb = _polys([a, b], "gcd")
        return polynomial.gcd_poly(pa, pb)
    return math.gcd(_small_int(a), _small_int(b))


def _bi_laplace(ev, args):
    if len(args) != 1:
        raise DomainError("laplaceTransform takes one expression")
    expr = args[0]
    if not isinstance(expr, lde.TimeExpression):
        expr = lde.TimeExpression.constant(_as_fraction(expr))
    return lde.laplace_transform(expr)


def _bi_inverselaplace(ev, args):
    if len(args) != 1:
        raise DomainError("inverseLaplace takes one rational function")
    F = args[0]
    if isinstance(F, Poly):
        F = RationalFunction.from_poly(F)
    if not isinstance(F, RationalFunction):
        raise DomainError("inverseLaplace takes a rational function of s")
    return lde.inverse_laplace(F)


def _bi_solvelde(ev, args):
    if len(args) != 2 or not isinstance(args[0], lde.LDESystem) or \
            not isinstance(args[1], lde.InitialConditions):
        raise DomainError("solveLDE takes a system and initial conditions")
    return lde.solve_lde(args[0], args[1])


def _tropical_matrix(value, name):
    if not isinstance(value, MatrixValue) or not value.is_tropical():
        raise DomainError(f"\\{name} needs a tropical matrix")
    return value.entries


def _bi_closure(ev, args):
    if len(args) != 1:
        raise DomainError("closure takes one argument")
    a = args[0]
    if isinstance(a, MatrixValue):
        return matrix_mod.closure(a)
    if isinstance(a, tropical.TropicalScalar):
        return tropical.closure(a)
    if isinstance(a, (int, Fraction, float)) and not isinstance(a, bool):
        space = ev.session.space
        if space.is_tropical:
            return tropical.closure(space.algebra.coerce(a))
        return domains.arith("/", 1, domains.arith("-", 1, a, space), space)
    raise DomainError("closure takes a number or a matrix")


def _bi_lsuwmdet(ev, args):
    A = _need_matrix(args, "LSUWMDet")
    f = matrix_mod.lsu_factorization(A)
    return [f.L, f.S, f.U, f.W, f.M, f.det]


def _bi_bruhat(ev, args):
    A = _need_matrix(args, "BruhatDecomposition")
    f = matrix_mod.bruhat_decomposition(A)
    return [f.V, f.w, f.U]


def _simplex(ev, args, direction):
    if len(args) != 3:
        raise DomainError("simplex operators take A, b, c")
    A = _need_matrix(args[:1], "Simplex")
    b = _as_column(args[1], "Simplex")
    c = _as_column(args[2], "Simplex")
    result = matrix_mod.simplex(direction, A, b, c)
    if result.status != "optimal":
        return result.status
    return [result.optimum, result.point]


def _bi_vector_result(vector):
    return MatrixValue.column(vector)


def _bi_solvelaetropic(ev, args):
    if len(args) != 2:
        raise DomainError("solveLAETropic takes A and b")
    A = _tropical_matrix(args[0], "solveLAETropic")
    b = _as_column(args[1], "solveLAETropic")
    x = tropical.solve_lae_tropic(A, [row[0] for row in b.entries])
    return MatrixValue.column(x)


def _bi_bellman_eq(ev, args):
    if len(args) != 2:
        raise DomainError("BellmanEquation takes A and b")
    A = _tropical_matrix(args[0], "BellmanEquation")
    b = _as_column(args[1], "BellmanEquation")
    x = tropical.bellman_equation(A, [row[0] for row in b.entries])
    return MatrixValue.column(x)


def _bi_bellman_ineq(ev, args):
    if len(args) != 2:
        raise DomainError("BellmanInequality takes A and b")
    A = _tropical_matrix(args[0], "BellmanInequality")
    b = _as_column(args[1], "BellmanInequality")
    x = tropical.bellman_inequality(A, [row[0] for row in b.entries])
    return MatrixValue.column(x)


def _bi_leastdistances(ev, args):
    A = _tropical_matrix(args[0] if args else None, "searchLeastDistances")
    return MatrixValue(tropical.search_least_distances(A))


def _bi_shortestpath(ev, args):
    if len(args) != 3:
        raise DomainError("findTheShortestPath takes A, i, j")
    A = _tropical_matrix(args[0], "findTheShortestPath")
    i = _small_int(args[1] if not isinstance(args[1], tropical.TropicalScalar)
                   else args[1].value)
    j = _small_int(args[2] if not isinstance(args[2], tropical.TropicalScalar)
                   else args[2].value)
    distance, path = tropical.find_the_shortest_path(A, i, j)
    return [distance, path]


def _bi_randomnumber(ev, args):
    return domains.random_number(ev.session.space, ev.session.rng)


def _bi_randompolynom(ev, args):
    degree = _small_int(args[0]) if args else 3
    return domains.random_polynomial(ev.session.space, degree, ev.session.rng)


def _bi_randommatrix(ev, args):
    rows = _small_int(args[0]) if args else 2
    cols = _small_int(args[1]) if len(args) > 1 else rows
    entries = "polynomial" if len(args) > 2 and args[2] else "number"
    return domains.random_matrix(ev.session.space, rows, cols,
                                 ev.session.rng, entries)


def _bi_value(ev, args):
    """Numeric view of a constant expression under the active space."""
    if len(args) != 1:
        raise DomainError("value takes one argument")
    a = args[0]
    if isinstance(a, Poly) and a.is_constant():
        a = a.constant_value() if a.terms else 0
    if isinstance(a, domains.NamedConstant):
        return a.numeric(ev.session.space)
    return a


_VALUE_BUILTINS = {
    "groebner": _bi_groebner,
    "reduceByGB": _bi_reducebygb,
    "solveNAE": _bi_solvenae,
    "solve": _bi_solve,
    "gcd": _bi_gcd,
    "laplaceTransform": _bi_laplace,
    "inverseLaplace": _bi_inverselaplace,
    "solveLDE": _bi_solvelde,
    "transpose": lambda ev, args: matrix_mod.transpose(_need_matrix(args, "transpose")),
    "conjugate": lambda ev, args: matrix_mod.conjugate(_need_matrix(args, "conjugate")),
    "toEchelonForm": lambda ev, args: matrix_mod.to_echelon_form(_need_matrix(args, "toEchelonForm")),
    "det": lambda ev, args: matrix_mod.det(_need_matrix(args, "det")),
    "rank": lambda ev, args: matrix_mod.rank(_need_matrix(args, "rank")),
    "inverse": lambda ev, args: matrix_mod.inverse(_need_matrix(args, "inverse")),
    "adjoint": lambda ev, args: matrix_mod.adjoint(_need_matrix(args, "adjoint")),
    "genInverse": lambda ev, args: matrix_mod.gen_inverse(_need_matrix(args, "genInverse")),
    "kernel": lambda ev, args: matrix_mod.kernel(_need_matrix(args, "kernel")),
    "charPolynom": lambda ev, args: matrix_mod.char_polynom(_need_matrix(args, "charPolynom")),
    "closure": _bi_closure,
    "SimplexMax": lambda ev, args: _simplex(ev, args, "max"),
    "SimplexMin": lambda ev, args: _simplex(ev, args, "min"),
    "LSUWMDet": _bi_lsuwmdet,
    "BruhatDecomposition": _bi_bruhat,
    "solveLAETropic": _bi_solvelaetropic,
    "BellmanEquation": _bi_bellman_eq,
    "BellmanInequality": _bi_bellman_ineq,
    "searchLeastDistances": _bi_leastdistances,
    "findTheShortestPath": _bi_shortestpath,
    "randomNumber": _bi_randomnumber,
    "randomPolynom": _bi_randompolynom,
    "randomMatrix": _bi_randommatrix,
    "value": _bi_value,
}
