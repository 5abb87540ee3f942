"""Scenario runner and report emitter.

Evaluates expressions over the exact form algebras, runs named check
suites, and renders text or machine reports.

Expression grammar (whitespace-insensitive except inside ``^h``):

    expr     : product (('+' | '-') product)*
    product  : factor (('*' | '^' | '^h') factor)*      left associative
    factor   : '-' factor | atom
    atom     : rational | h | e[i] | dx[i] | x[i]
             | mode(k1, ..., km) | '(' expr ')'
    rational : integer or p/q with integer p, q

``*`` and ``^`` are the classical wedge (a 0-form factor acts as a
scalar multiple); ``^h`` (written without an inner space) is the
deformed wedge against the model's bivector.  ``e[i]`` and ``dx[i]``
are the constant basis covectors, ``x[i]`` the i-th coordinate
(polynomial models only), ``mode(k1, ..., km)`` the Fourier character
of the integer vector k (torus models only).  Expressions that mention
``x``, ``dx``, or ``mode`` evaluate in the model's function-coefficient
algebra; pure ``e[i]``/``h`` expressions on flat and custom models
evaluate with constant coefficients.

Scenario files are JSON objects with keys

    model       "flat" | "torus" | "lie_poisson_so3" | "heisenberg" | "custom"
    dim         even dimension (flat, custom)
    n           half-dimension (flat, torus)
    omega       matrix rows of "p/q" strings, antisymmetric invertible (custom)
    truncation  torus mode cutoff N >= 1
    seed        integer seed for every randomized task (default 0)
    tasks       list of task objects, or bare strings naming check suites
    suite       a suite name or list of names, appended to the task list

Task objects carry an "op" key: product, power, operator, spectrum,
cohomology, integral, stokes, chern, cpn_table, or suite.  Unknown keys
anywhere are rejected.  Machine reports are JSON trees whose numbers
are exact strings ("p/q") or exponent/coefficient pair lists.

Exit codes: 0 all assertion-bearing tasks passed, 1 at least one
failed, 2 usage, parse, or model-validation error.  The environment
variable QDR_MAX_DIM (default 8) caps the working dimension.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from random import Random

from .bigraded import derive_adjoint_law, hermitian_gram
from .chernweil import (
    GaugeTransform,
    MatrixForm,
    bianchi_check,
    char_form,
    curvature_gauge_check,
    quantum_curvature,
)
from .cohomology import (
    build_complex,
    dr_cohomology_dims,
    e1_dims,
    lemma62_check,
    poisson_homology_dims,
    quantum_cohomology_dims,
    quantum_integral,
    stokes_check,
)
from .cpn import cpn_structure_constants, derived_recursion_report, verify_relation_17
from .exterior import (
    Bivector,
    QForm,
    quantum_power,
    quantum_wedge,
    quantum_wedge_multi,
    wedge,
)
from .fields import (
    FieldForm,
    contract_field,
    delta_component_check,
    exterior_d,
    jacobi_check,
    koszul_delta,
    quantum_d,
    quantum_d_mirror,
    quantum_dolbeault_split,
    quantum_wedge_field,
    wedge_field,
)
from .fixtures import (
    heisenberg,
    lie_poisson_so3,
    non_poisson_example,
    standard_symplectic,
    torus,
)
from .functions import FourierFn, PolyFn, moyal_product
from .rand import (
    random_bivector,
    random_blade_form,
    random_fieldform,
    random_pairing,
    random_polyfn,
    random_qform,
)
from .scalars import HPoly, frac_str
from .symplectic import (
    SymplecticForm,
    apply_A,
    apply_Ah,
    apply_K,
    apply_L,
    apply_Lh,
    apply_Lhstar,
    apply_Lstar,
    bivector_of,
    contract_bivector,
    decomposition_report,
    lefschetz_matrix,
    relation_report,
    symplectic_star,
)

DEFAULT_MAX_DIM = 8

MODELS = ("flat", "torus", "lie_poisson_so3", "heisenberg", "custom")


class ScenarioError(ValueError):
    """Bad scenario, expression, or option: reported with exit code 2."""


def max_dim() -> int:
    raw = os.environ.get("QDR_MAX_DIM", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_DIM
    except ValueError:
        raise ScenarioError(f"QDR_MAX_DIM is not an integer: {raw!r}")


def _check_dim(dim: int):
    cap = max_dim()
    if dim > cap:
        raise ScenarioError(f"dimension {dim} exceeds QDR_MAX_DIM={cap}")
    if dim < 2 or dim % 2:
        raise ScenarioError(f"dimension must be even and positive, got {dim}")


# ---------------------------------------------------------------------------
# expression parser

_TOKEN = re.compile(
    r"""\s*(?:
      (?P<num>\d+(?:\s*/\s*\d+)?)
    | (?P<qwedge>\^h\b)
    | (?P<name>[A-Za-z_]\w*)
    | (?P<punct>[+\-*^()\[\],])
    )""",
    re.VERBOSE,
)


def tokenize(text: str):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise ScenarioError(
                f"cannot read expression at column {pos + 1}: {rest[:12]!r}")
        pos = m.end()
        for kind in ("num", "qwedge", "name", "punct"):
            if m.group(kind) is not None:
                out.append((kind, m.group(kind), m.start()))
                break
    return out


class _Parser:
    def __init__(self, tokens, space, text):
        self.toks, self.space, self.text = tokens, space, text
        self.pos = 0

    def _peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def _take(self):
        tok = self._peek()
        if tok is None:
            raise ScenarioError(f"expression ends early: {self.text!r}")
        self.pos += 1
        return tok

    def _expect(self, value):
        tok = self._take()
        if tok[1] != value:
            raise ScenarioError(
                f"expected {value!r} at column {tok[2] + 1} in {self.text!r}")

    def parse(self):
        value = self._expr()
        tok = self._peek()
        if tok is not None:
            raise ScenarioError(
                f"trailing {tok[1]!r} at column {tok[2] + 1} in {self.text!r}")
        return value

    def _expr(self):
        value = self._product()
        while (tok := self._peek()) and tok[1] in ("+", "-"):
            self._take()
            rhs = self._product()
            value = value + rhs if tok[1] == "+" else value - rhs
        return value

    def _product(self):
        value = self._factor()
        while (tok := self._peek()) and tok[1] in ("*", "^", "^h"):
            self._take()
            rhs = self._factor()
            if tok[1] == "^h":
                value = self.space.qwedge(value, rhs)
            else:
                value = self.space.wedge(value, rhs)
        return value

    def _factor(self):
        tok = self._peek()
        if tok and tok[1] == "-":
            self._take()
            return -self._factor()
        return self._atom()

    def _int(self):
        tok = self._take()
        sign = 1
        if tok[1] == "-":
            sign, tok = -1, self._take()
        if tok[0] != "num" or "/" in tok[1]:
            raise ScenarioError(
                f"expected an integer at column {tok[2] + 1} in {self.text!r}")
        return sign * int(tok[1])

    def _atom(self):
        tok = self._take()
        kind, val, col = tok
        if kind == "num":
            if "/" in val:
                p, q = val.split("/")
                return self.space.scalar(Fraction(int(p), int(q)))
            return self.space.scalar(Fraction(int(val)))
        if kind == "name":
            if val == "h":
                return self.space.h()
            if val in ("e", "dx", "x"):
                self._expect("[")
                i = self._int()
                self._expect("]")
                if val == "x":
                    return self.space.coord(i)
                return self.space.basis(i)
            if val == "mode":
                self._expect("(")
                ks = [self._int()]
                while self._peek() and self._peek()[1] == ",":
                    self._take()
                    ks.append(self._int())
                self._expect(")")
                return self.space.mode(ks)
            raise ScenarioError(
                f"unknown identifier {val!r} at column {col + 1}")
        if val == "(":
            inner = self._expr()
            self._expect(")")
            return inner
        raise ScenarioError(
            f"unexpected {val!r} at column {col + 1} in {self.text!r}")


class _ConstantSpace:
    """Constant-coefficient forms against a fixed bivector."""

    kind = "constant"

    def __init__(self, dim, w, omega):
        self.dim, self.w, self.omega = dim, w, omega

    def scalar(self, c):
        return QForm.scalar(self.dim, HPoly(c))

    def h(self):
        return QForm.scalar(self.dim, HPoly({1: 1}))

    def basis(self, i):
        if not 1 <= i <= self.dim:
            raise ScenarioError(f"basis index {i} outside 1..{self.dim}")
        return QForm.basis(self.dim, (i,))

    def coord(self, i):
        raise ScenarioError(
            "x[i] needs a function-coefficient model (flat, torus, "
            "lie_poisson_so3, heisenberg)")

    mode = coord

    def wedge(self, a, b):
        return wedge(a, b)

    def qwedge(self, a, b):
        return quantum_wedge(a, b, self.w)


class _FieldSpace:
    """Function-coefficient forms over a fixture model."""

    kind = "field"

    def __init__(self, model):
        self.model, self.dim = model, model.dim

    def scalar(self, c):
        return FieldForm.from_fn(self.model.constant(c))

    def h(self):
        return FieldForm.from_fn(self.model.constant(1), 0, 1)

    def basis(self, i):
        if not 1 <= i <= self.dim:
            raise ScenarioError(f"basis index {i} outside 1..{self.dim}")
        return self.model.lift(QForm.basis(self.dim, (i,)))

    def coord(self, i):
        if self.model.fnring is not PolyFn:
            raise ScenarioError(
                f"x[{i}] needs polynomial coefficients; "
                f"model {self.model.name} uses {self.model.fnring.__name__}")
        if not 1 <= i <= self.dim:
            raise ScenarioError(f"coordinate index {i} outside 1..{self.dim}")
        return FieldForm.from_fn(PolyFn.coord(self.dim, i))

    def mode(self, ks):
        if self.model.fnring is not FourierFn:
            raise ScenarioError(
                f"mode(...) needs a torus model, not {self.model.name}")
        if len(ks) != self.dim:
            raise ScenarioError(
                f"mode needs {self.dim} integers, got {len(ks)}")
        return FieldForm.from_fn(FourierFn(self.dim, {tuple(ks): Fraction(1)}))

    def wedge(self, a, b):
        return wedge_field(a, b)

    def qwedge(self, a, b):
        return quantum_wedge_field(a, b, self.model.poisson)


class Context:
    """A scenario's working model: spaces, bivector, truncation, seed."""

    def __init__(self, name, dim, constant_space, field_space,
                 truncation=None, seed=0):
        self.name, self.dim = name, dim
        self.constant_space, self.field_space = constant_space, field_space
        self.truncation, self.seed = truncation, seed

    @property
    def model(self):
        return self.field_space.model if self.field_space else None

    def default_space(self):
        return self.constant_space or self.field_space

    def eval(self, text, flavor="auto"):
        if not isinstance(text, str):
            raise ScenarioError(f"expression must be a string, got {text!r}")
        toks = tokenize(text)
        needs_field = flavor == "field" or any(
            k == "name" and v in ("x", "dx", "mode") for k, v, _ in toks)
        if needs_field:
            if self.field_space is None:
                raise ScenarioError(
                    f"{text!r} needs function coefficients; "
                    f"model {self.name} is constant-only")
            space = self.field_space
        elif flavor == "constant":
            if self.constant_space is None:
                raise ScenarioError(
                    f"{text!r} needs a constant-coefficient model")
            space = self.constant_space
        else:
            space = self.default_space()
        return _Parser(toks, space, text).parse()


def _parse_omega_rows(rows, dim):
    if (not isinstance(rows, list) or len(rows) != dim
            or any(not isinstance(r, list) or len(r) != dim for r in rows)):
        raise ScenarioError(f"omega must be a {dim}x{dim} matrix of strings")
    out = []
    for r in rows:
        line = []
        for entry in r:
            try:
                line.append(Fraction(str(entry)))
            except (ValueError, ZeroDivisionError):
                raise ScenarioError(f"bad matrix entry {entry!r}")
        out.append(line)
    return out


def build_context(model="flat", dim=None, n=None, omega=None,
                  truncation=None, seed=0) -> Context:
    if model not in MODELS:
        raise ScenarioError(
            f"unknown model {model!r}; choose one of {', '.join(MODELS)}")
    if truncation is not None and (not isinstance(truncation, int)
                                   or truncation < 1):
        raise ScenarioError(f"truncation must be a positive integer, "
                            f"got {truncation!r}")
    if model == "flat":
        if dim is not None:
            _check_dim(dim)
            if n is not None and dim != 2 * n:
                raise ScenarioError(f"dim={dim} and n={n} disagree")
        half = n if n is not None else (dim or 2) // 2
        d = 2 * half
        _check_dim(d)
        m = standard_symplectic(half)
        const = _ConstantSpace(d, Bivector.standard(d), m.omega)
        return Context("flat", d, const, _FieldSpace(m), truncation, seed)
    if model == "torus":
        half = n if n is not None else 1
        d = 2 * half
        _check_dim(d)
        m = torus(half, truncation or 2)
        return Context("torus", d, None, _FieldSpace(m),
                       truncation or 2, seed)
    if model == "lie_poisson_so3":
        m = lie_poisson_so3()
        return Context(model, m.dim, None, _FieldSpace(m), truncation, seed)
    if model == "heisenberg":
        m = heisenberg()
        return Context(model, m.dim, None, _FieldSpace(m), truncation, seed)
    # custom: constant omega given by rows
    if dim is None:
        raise ScenarioError("custom model needs dim")
    _check_dim(dim)
    if omega is None:
        raise ScenarioError("custom model needs an omega matrix")
    try:
        sym = SymplecticForm(dim, _parse_omega_rows(omega, dim))
    except ValueError as ex:
        raise ScenarioError(f"bad omega matrix: {ex}")
    const = _ConstantSpace(dim, bivector_of(sym), sym)
    return Context("custom", dim, const, None, truncation, seed)


# ---------------------------------------------------------------------------
# report plumbing


def _jsonify(value):
    """Exact tree: dict/list/str/int/bool only, so machine output
    round-trips through JSON unchanged."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, Fraction):
        return frac_str(value)
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    if hasattr(value, "serialize"):
        return _jsonify(value.serialize())
    return str(value)


def _value_payload(form):
    return {"value": str(form), "terms": _jsonify(form.serialize())}


def convention_ledger():
    dec = decomposition_report(2)
    rel = relation_report(2)
    l62 = lemma62_check(2, 1)
    flat1 = standard_symplectic(1)
    probe = random_fieldform(Random(3), flat1, degree=2)
    comp = delta_component_check(probe, flat1.poisson)
    return {
        "contraction_scaling": _jsonify(list(dec)),
        "dual_lefschetz": _jsonify(list(rel)),
        "koszul_component": _jsonify(comp),
        "window_identity": _jsonify({
            "multiple": l62["part_i"]["multiple"],
            "printed": l62["part_i"]["printed"],
        }),
    }


def _report(kind, info, results):
    checked = [r for r in results if r.get("pass") is not None]
    failed = [r for r in checked if r["pass"] is False]
    tree = {"kind": kind, **info, "tasks": results,
            "ledger": convention_ledger(),
            "counts": {"tasks": len(results), "checked": len(checked),
                       "failed": len(failed)},
            "passed": not failed}
    return _jsonify(tree)


# ---------------------------------------------------------------------------
# tasks

_TASK_KEYS = {
    "product": {"expr"},
    "power": {"expr", "k"},
    "operator": {"expr", "name"},
    "spectrum": {"n", "parity"},
    "cohomology": {"theory"},
    "integral": {"expr"},
    "stokes": {"count"},
    "chern": {"theta"},
    "cpn_table": {"n"},
    "suite": {"name", "count", "dim", "n", "truncation"},
}

_TASK_REQUIRED = {
    "product": {"expr"},
    "power": {"expr", "k"},
    "operator": {"expr", "name"},
    "spectrum": {"n"},
    "cohomology": set(),
    "integral": {"expr"},
    "stokes": set(),
    "chern": {"theta"},
    "cpn_table": {"n"},
    "suite": {"name"},
}


def _validate_task(task):
    if isinstance(task, str):
        task = {"op": "suite", "name": task}
    if not isinstance(task, dict):
        raise ScenarioError(f"task must be an object or string: {task!r}")
    op = task.get("op")
    if op not in _TASK_KEYS:
        raise ScenarioError(
            f"unknown task op {op!r}; choose one of {', '.join(_TASK_KEYS)}")
    extra = set(task) - _TASK_KEYS[op] - {"op"}
    if extra:
        raise ScenarioError(
            f"unknown keys in {op} task: {', '.join(sorted(extra))}")
    missing = _TASK_REQUIRED[op] - set(task)
    if missing:
        raise ScenarioError(
            f"{op} task needs keys: {', '.join(sorted(missing))}")
    return task


def _int_key(task, key, default=None, low=None, high=None):
    val = task.get(key, default)
    if val is None:
        return None
    if not isinstance(val, int) or isinstance(val, bool):
        raise ScenarioError(f"{key} must be an integer, got {val!r}")
    if low is not None and val < low:
        raise ScenarioError(f"{key} must be >= {low}, got {val}")
    if high is not None and val > high:
        raise ScenarioError(f"{key} must be <= {high}, got {val}")
    return val


def _run_product(ctx, task):
    return {"task": "product", "expr": task["expr"], "pass": None,
            **_value_payload(ctx.eval(task["expr"]))}


def _run_power(ctx, task):
    k = _int_key(task, "k", low=0)
    base = ctx.eval(task["expr"])
    if isinstance(base, QForm):
        value = quantum_power(base, k, ctx.constant_space.w)
    else:
        space = ctx.field_space
        value = space.scalar(1)
        for _ in range(k):
            value = space.qwedge(value, base)
    return {"task": "power", "expr": task["expr"], "k": k, "pass": None,
            **_value_payload(value)}


def _op_constant(ctx, name, form):
    omega = ctx.constant_space.omega
    table = {
        "iota": lambda f: contract_bivector(ctx.constant_space.w, f),
        "L": lambda f: apply_L(f, omega),
        "L_star": lambda f: apply_Lstar(f, omega),
        "K": lambda f: apply_K(f, omega),
        "A": lambda f: apply_A(f, omega),
        "L_h": lambda f: apply_Lh(f, omega),
        "L_h_star": lambda f: apply_Lhstar(f, omega),
        "A_h": lambda f: apply_Ah(f, omega),
        "star": lambda f: symplectic_star(f, omega),
    }
    return table[name](form) if name in table else None


def _op_field(ctx, name, form):
    model = ctx.model
    w = model.poisson
    table = {
        "d": lambda f: exterior_d(f),
        "delta": lambda f: koszul_delta(f, w),
        "d_h": lambda f: quantum_d(f, w),
        "d_h_mirror": lambda f: quantum_d_mirror(f, w),
        "iota": lambda f: contract_field(w, f),
        "L": lambda f: wedge_field(model.omega_form(), f),
        "L_h": lambda f: quantum_wedge_field(model.omega_form(), f, w),
    }
    return table[name](form) if name in table else None


_FIELD_OPS = ("d", "delta", "d_h", "d_h_mirror")
_OPERATOR_NAMES = ("d", "delta", "d_h", "d_h_mirror", "iota", "L", "L_star",
                   "K", "A", "L_h", "L_h_star", "A_h", "star")


def _run_operator(ctx, task):
    name = task["name"]
    if name not in _OPERATOR_NAMES:
        raise ScenarioError(f"unknown operator {name!r}; choose one of "
                            f"{', '.join(_OPERATOR_NAMES)}")
    flavor = "field" if name in _FIELD_OPS else "auto"
    form = ctx.eval(task["expr"], flavor)
    if isinstance(form, QForm):
        value = _op_constant(ctx, name, form)
        if value is None and ctx.field_space is not None:
            form = ctx.eval(task["expr"], "field")
            value = _op_field(ctx, name, form)
    else:
        value = _op_field(ctx, name, form)
        if value is None and ctx.constant_space is not None:
            value = _op_constant(ctx, name, ctx.eval(task["expr"],
                                                     "constant"))
    if value is None:
        raise ScenarioError(
            f"operator {name!r} is not available on model {ctx.name}")
    return {"task": "operator", "name": name, "expr": task["expr"],
            "pass": None, **_value_payload(value)}


def _run_spectrum(ctx, task):
    n = _int_key(task, "n", low=1, high=max_dim() // 2)
    parity = task.get("parity", "odd")
    if parity not in ("even", "odd"):
        raise ScenarioError(f"parity must be even or odd, got {parity!r}")
    op = lefschetz_matrix(n, parity)
    cp = op.char_poly()
    det = op.det()
    return {"task": "spectrum", "n": n, "parity": parity,
            "char_poly": str(cp), "coeffs": _jsonify(cp.serialize()),
            "det": frac_str(det), "pass": det != 0}


_THEORIES = {
    "quantum": quantum_cohomology_dims,
    "de_rham": dr_cohomology_dims,
    "poisson": poisson_homology_dims,
    "first_page": e1_dims,
}


def _run_cohomology(ctx, task):
    if ctx.model is None or not ctx.model.is_torus():
        raise ScenarioError("cohomology task needs a torus model")
    theory = task.get("theory", "quantum")
    if theory not in _THEORIES:
        raise ScenarioError(f"unknown theory {theory!r}; choose one of "
                            f"{', '.join(_THEORIES)}")
    comp = build_complex(ctx.model, ctx.truncation or 2)
    rep = _THEORIES[theory](comp)
    return {"task": "cohomology", "theory": theory,
            "rows": _jsonify(rep.serialize()), "pass": rep.passed()}


def _run_integral(ctx, task):
    if ctx.model is None or not ctx.model.is_torus():
        raise ScenarioError("integral task needs a torus model")
    form = ctx.eval(task["expr"], "field")
    val = quantum_integral(form, ctx.model.omega, ctx.model)
    return {"task": "integral", "expr": task["expr"], "value": str(val),
            "coeffs": _jsonify(val.serialize()), "pass": None}


def _run_stokes(ctx, task):
    if ctx.model is None or not ctx.model.is_torus():
        raise ScenarioError("stokes task needs a torus model")
    count = _int_key(task, "count", default=25, low=1)
    rng = Random(ctx.seed)
    failures = []
    for i in range(count):
        form = random_fieldform(rng, ctx.model, nterms=2,
                                degree=rng.randint(0, ctx.dim))
        res = stokes_check(form, ctx.model)
        if not res["ok"]:
            failures.append({"index": i, "integrals": res["integrals"]})
    return {"task": "stokes", "count": count, "failures": failures,
            "pass": not failures}


def _run_chern(ctx, task):
    if ctx.model is None:
        raise ScenarioError("chern task needs a function-coefficient model")
    theta = task["theta"]
    if isinstance(theta, str):
        entries = [[ctx.eval(theta, "field")]]
    elif (isinstance(theta, list)
          and all(isinstance(r, list) for r in theta)):
        entries = [[ctx.eval(e, "field") for e in row] for row in theta]
    else:
        raise ScenarioError("theta must be an expression string or a "
                            "matrix of expression strings")
    mat = MatrixForm(entries)
    w = ctx.model.poisson
    try:
        curv = quantum_curvature(mat, w)
        bianchi_check(mat, w)
        trace = char_form(curv, "trace", w)
        ok = True
        note = ""
    except AssertionError as ex:
        curv, trace, ok, note = None, None, False, str(ex)
    out = {"task": "chern", "rank": mat.rank, "pass": ok}
    if ok:
        out["curvature"] = [[str(e) for e in row] for row in curv.entries]
        out["trace"] = _value_payload(trace)
    else:
        out["error"] = note
    return out


def _run_cpn_table(ctx, task):
    n = _int_key(task, "n", low=1, high=5)
    ring = cpn_structure_constants(n)
    out = {"task": "cpn_table", "n": n, "table": _jsonify(ring.serialize()),
           "pass": None}
    if n <= 4:
        rel = verify_relation_17(n)
        out["nilpotency_order"] = rel["nilpotency_order"]
        out["pass"] = rel["ok"]
    return out


def _run_suite(ctx, task):
    opts = Options(
        dim=_int_key(task, "dim", default=ctx.dim, low=2, high=max_dim()),
        n=_int_key(task, "n", default=ctx.dim // 2, low=1,
                   high=max_dim() // 2),
        truncation=_int_key(task, "truncation", default=ctx.truncation,
                            low=1),
        count=_int_key(task, "count", low=1),
        seed=ctx.seed,
    )
    name = task["name"]
    payload, passed = run_suite(name, opts)
    return {"task": "suite", "name": name, "pass": passed, **payload}


_RUNNERS = {
    "product": _run_product,
    "power": _run_power,
    "operator": _run_operator,
    "spectrum": _run_spectrum,
    "cohomology": _run_cohomology,
    "integral": _run_integral,
    "stokes": _run_stokes,
    "chern": _run_chern,
    "cpn_table": _run_cpn_table,
    "suite": _run_suite,
}


# ---------------------------------------------------------------------------
# check suites


class Options:
    """Bounds for a named suite: dimension, half-dimension, torus
    truncation, repetition count, seed."""

    def __init__(self, dim=None, n=None, truncation=None, count=None,
                 seed=0):
        self.dim, self.n, self.truncation = dim, n, truncation
        self.count, self.seed = count, seed or 0


def _suite_associativity(o: Options):
    dim = o.dim or 4
    _check_dim(dim)
    count = o.count or 25
    rng = Random(o.seed)
    bad = 0
    for _ in range(count):
        da, db = rng.randint(0, dim), rng.randint(0, dim)
        a = random_blade_form(rng, dim, da)
        b = random_blade_form(rng, dim, db)
        w = random_bivector(rng, dim)
        swapped = quantum_wedge(b, a, w)
        if da * db % 2:
            swapped = -swapped
        if quantum_wedge(a, b, w) != swapped:
            bad += 1
        phi = random_pairing(rng, dim)
        u, v, t = (random_qform(rng, dim, nterms=2) for _ in range(3))
        left = quantum_wedge(quantum_wedge(u, v, phi), t, phi)
        right = quantum_wedge(u, quantum_wedge(v, t, phi), phi)
        if left != right:
            bad += 1
    return {"dim": dim, "count": count, "failed": bad}, bad == 0


def _suite_multiparameter(o: Options):
    count = o.count or 20
    rng = Random(o.seed)
    bad = 0
    for _ in range(count):
        dim = rng.choice([2, 4])
        ws = [random_bivector(rng, dim)
              for _ in range(rng.choice([2, 3]))]
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in ws]
        a = random_qform(rng, dim, nterms=2, max_h=0)
        b = random_qform(rng, dim, nterms=2, max_h=0)
        total = ws[0].scale(coeffs[0])
        for w, c in zip(ws[1:], coeffs[1:]):
            total = total + w.scale(c)
        multi = quantum_wedge_multi(a, b, ws)
        if multi.specialize(coeffs) != quantum_wedge(a, b, total):
            bad += 1
    return {"count": count, "failed": bad}, bad == 0


def _suite_relation17(o: Options):
    rows = []
    for n in range(1, min(o.n or 4, 4) + 1):
        rel = verify_relation_17(n)
        rows.append({"n": n, "ok": rel["ok"],
                     "nilpotency_order": rel["nilpotency_order"]})
    passed = all(r["ok"] and r["nilpotency_order"] == r["n"] + 1
                 for r in rows)
    return {"rows": rows}, passed


def _suite_recursion(o: Options):
    n = min(o.n or 3, 5)
    rep = derived_recursion_report(n)
    passed = all(r["matches_derived"] for r in rep["rows"])
    return {"n": n, "rows": _jsonify(rep["rows"])}, passed


def _suite_complex(o: Options):
    count = o.count or 8
    rng = Random(o.seed)
    models = [standard_symplectic(min(o.n or 1, max_dim() // 2)),
              lie_poisson_so3(), heisenberg(),
              torus(1, o.truncation or 2)]
    bad = 0
    rows = []
    for model in models:
        w = model.poisson
        ok_j, witness = jacobi_check(w)
        if not ok_j:
            bad += 1
        for _ in range(count):
            dega = rng.randint(0, model.dim)
            a = random_fieldform(rng, model, nterms=2, degree=dega)
            b = random_fieldform(rng, model, nterms=2,
                                 degree=rng.randint(0, model.dim))
            if not quantum_d(quantum_d(a, w), w).is_zero():
                bad += 1
            lhs = quantum_d_mirror(quantum_wedge_field(a, b, w), w)
            da = quantum_wedge_field(quantum_d_mirror(a, w), b, w)
            db = quantum_wedge_field(a, quantum_d_mirror(b, w), w)
            if dega % 2:
                db = -db
            if lhs != da + db:
                bad += 1
        rows.append({"model": model.name, "jacobi": ok_j})
    np_ok, np_witness = jacobi_check(non_poisson_example().poisson)
    if np_ok or np_witness is None:
        bad += 1
    rows.append({"model": "non_poisson_example", "jacobi": np_ok,
                 "witness": str(np_witness)})
    return {"count": count, "models": rows, "failed": bad}, bad == 0


def _suite_cohomology(o: Options):
    model = torus(min(o.n or 1, 2), o.truncation or (2 if (o.n or 1) == 1
                                                     else 1))
    comp = build_complex(model, model.torus_N)
    quantum = quantum_cohomology_dims(comp)
    poisson = poisson_homology_dims(comp)
    payload = {"model": str(model),
               "quantum": _jsonify(quantum.serialize()),
               "poisson": _jsonify(poisson.serialize())}
    return payload, quantum.passed() and poisson.passed()


def _suite_lefschetz(o: Options):
    nmax = min(o.n or 2, 3)
    rows = []
    passed = True
    for n in range(1, nmax + 1):
        for parity in ("even", "odd"):
            op = lefschetz_matrix(n, parity)
            det = op.det()
            rows.append({"n": n, "parity": parity, "det": frac_str(det),
                         "char_poly": str(op.char_poly())})
            passed = passed and det != 0
    ident = lefschetz_matrix(1, "odd")
    eye = [[Fraction(i == j) for j in range(2)] for i in range(2)]
    passed = passed and ident.mat == eye
    return {"rows": rows, "identity_base_case": ident.mat == eye}, passed


def _suite_ledger(o: Options):
    rows = {"contraction_scaling": [], "dual_lefschetz": [],
            "koszul_component": [], "window_identity": []}
    passed = True
    for n in (1, 2, 3):
        dec = decomposition_report(n)
        rel = relation_report(n)
        rows["contraction_scaling"].append(_jsonify(list(dec)))
        rows["dual_lefschetz"].append(_jsonify(list(rel)))
        # stable pattern: same contraction constants, dual relation (1, -2n)
        passed = (passed and dec == decomposition_report(1)
                  and rel[0] == relation_report(1)[0]
                  and rel[1] == n * relation_report(1)[1])
    rng = Random(o.seed)
    cs = set()
    for n in (1, 2):
        model = standard_symplectic(n)
        for _ in range(o.count or 5):
            probe = random_fieldform(rng, model, degree=2)
            comp = delta_component_check(probe, model.poisson)
            if comp["matched_terms"]:
                cs.add(comp["c"])
    rows["koszul_component"] = _jsonify(sorted(cs))
    passed = passed and len(cs) == 1
    for n in (1, 2):
        for k in range(n + 1):
            rep = lemma62_check(n, k)
            rows["window_identity"].append(_jsonify({
                "n": n, "k": k, "multiple": rep["part_i"]["multiple"]}))
            passed = passed and rep["part_i"]["multiple"] == -(n - k)
    return rows, passed


def _suite_stokes(o: Options):
    model = torus(min(o.n or 1, 2), o.truncation or 2)
    count = o.count or 25
    rng = Random(o.seed)
    failures = []
    for i in range(count):
        form = random_fieldform(rng, model, nterms=2,
                                degree=rng.randint(0, model.dim))
        res = stokes_check(form, model)
        if not res["ok"]:
            failures.append({"index": i, "integrals": res["integrals"]})
    return {"model": str(model), "count": count,
            "failures": failures}, not failures


def _suite_hermitian(o: Options):
    nmax = min(o.n or 2, 2)
    rows = []
    passed = True
    for n in range(1, nmax + 1):
        law = derive_adjoint_law(n)
        gram = hermitian_gram(n)
        diag_ok = (set(gram) == {(m, m) for m in range(1 << (2 * n))}
                   and all(val == 2 ** bin(ma).count("1")
                           for (ma, _mb), val in gram.items()))
        rows.append({"n": n, "adjoint": law["raw_all"],
                     "gram_diagonal": diag_ok})
        passed = passed and law["raw_all"] and diag_ok
    return {"rows": rows}, passed


def _suite_dolbeault(o: Options):
    count = o.count or 15
    rng = Random(o.seed)
    bad = 0
    for n in sorted({1, min(o.n or 2, 2)}):
        model = standard_symplectic(n)
        w = model.poisson
        for _ in range(count):
            a = random_fieldform(rng, model, nterms=2, max_h=0,
                                 degree=rng.randint(0, model.dim))
            dh, dbh = quantum_dolbeault_split(a, w)
            if dh + dbh != quantum_d(a, w):
                bad += 1
            if not quantum_dolbeault_split(dh, w)[0].is_zero():
                bad += 1
            if not quantum_dolbeault_split(dbh, w)[1].is_zero():
                bad += 1
            cross = (quantum_dolbeault_split(dbh, w)[0]
                     + quantum_dolbeault_split(dh, w)[1])
            if not cross.is_zero():
                bad += 1
    return {"count": count, "failed": bad}, bad == 0


def _line_bundle_example():
    model = standard_symplectic(1)
    theta = MatrixForm([[wedge_field(
        FieldForm.from_fn(PolyFn.coord(2, 1)),
        model.lift(QForm.basis(2, (2,))))]])
    curv = quantum_curvature(theta, model.poisson)
    expected = (model.omega_form()
                + FieldForm.from_fn(model.constant(1), 0, 1))
    closed = quantum_d(curv.entries[0][0], model.poisson).is_zero()
    return curv.entries[0][0] == expected and closed, str(curv.entries[0][0])


def _suite_chern(o: Options):
    count = o.count or 10
    rng = Random(o.seed)
    bad = 0
    for n in sorted({1, min(o.n or 2, 2)}):
        model = standard_symplectic(n)
        w = model.poisson
        for _ in range(count):
            theta = MatrixForm([[random_fieldform(rng, model, nterms=2,
                                                  max_h=0, degree=1,
                                                  max_deg=2)
                                 for _ in range(2)] for _ in range(2)])
            try:
                bianchi_check(theta, w)
                g = GaugeTransform(model, [[1, random_polyfn(rng, model.dim,
                                                             max_deg=1)],
                                           [0, 1]])
                curvature_gauge_check(theta, g, w)
                char_form(quantum_curvature(theta, w), "trace", w)
            except AssertionError:
                bad += 1
    line_ok, line_value = _line_bundle_example()
    if not line_ok:
        bad += 1
    return {"count": count, "failed": bad,
            "line_bundle_curvature": line_value}, bad == 0


def _suite_moyal(o: Options):
    count = o.count or 25
    rng = Random(o.seed)
    bad = 0
    for _ in range(count):
        dim = rng.choice([2, 4])
        w = random_bivector(rng, dim)
        u, v, t = (random_polyfn(rng, dim, max_deg=2) for _ in range(3))
        if (moyal_product(moyal_product(u, v, w), t, w)
                != moyal_product(u, moyal_product(v, t, w), w)):
            bad += 1
        i, j = rng.randint(1, dim), rng.randint(1, dim)
        xi, xj = PolyFn.coord(dim, i), PolyFn.coord(dim, j)
        comm = (moyal_product(xi, xj, w) - moyal_product(xj, xi, w))
        entries = {(a, b): val for a, b, val in w.upper_entries()}
        wij = (entries.get((i, j), Fraction(0))
               - entries.get((j, i), Fraction(0)))
        expected = PolyFn.constant(dim, HPoly({1: 2 * wij}))
        if comm != expected:
            bad += 1
    return {"count": count, "failed": bad}, bad == 0


SUITES = {
    "associativity": _suite_associativity,
    "multiparameter": _suite_multiparameter,
    "relation17": _suite_relation17,
    "recursion": _suite_recursion,
    "complex": _suite_complex,
    "cohomology": _suite_cohomology,
    "lefschetz": _suite_lefschetz,
    "ledger": _suite_ledger,
    "stokes": _suite_stokes,
    "hermitian": _suite_hermitian,
    "dolbeault": _suite_dolbeault,
    "chern": _suite_chern,
    "moyal": _suite_moyal,
}


def run_suite(name, opts: Options):
    if name not in SUITES:
        raise ScenarioError(
            f"unknown suite {name!r}; available: {', '.join(sorted(SUITES))}")
    return SUITES[name](opts)


def check(name, options=None) -> dict:
    """Run one named suite and wrap it in a report tree."""
    opts = options or Options()
    payload, passed = run_suite(name, opts)
    result = {"task": "suite", "name": name, "pass": passed, **payload}
    info = {"suite": name, "seed": opts.seed}
    return _report("check", info, [result])


# ---------------------------------------------------------------------------
# scenarios

_SCENARIO_KEYS = {"model", "dim", "n", "omega", "truncation", "seed",
                  "tasks", "suite"}


def load_scenario(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as ex:
        raise ScenarioError(f"cannot read scenario: {ex}")
    except json.JSONDecodeError as ex:
        raise ScenarioError(
            f"scenario parse error at line {ex.lineno}, column {ex.colno}: "
            f"{ex.msg}")
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    extra = set(data) - _SCENARIO_KEYS
    if extra:
        raise ScenarioError(
            f"unknown scenario keys: {', '.join(sorted(extra))}")
    return data


def run_scenario(path) -> dict:
    """Execute a scenario file and return its report tree."""
    data = load_scenario(path)
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ScenarioError(f"seed must be an integer, got {seed!r}")
    ctx = build_context(
        model=data.get("model", "flat"),
        dim=_int_key(data, "dim", low=2),
        n=_int_key(data, "n", low=1),
        omega=data.get("omega"),
        truncation=data.get("truncation"),
        seed=seed,
    )
    tasks = data.get("tasks", [])
    if not isinstance(tasks, list):
        raise ScenarioError("tasks must be a list")
    tasks = list(tasks)
    suite_key = data.get("suite", [])
    if isinstance(suite_key, str):
        suite_key = [suite_key]
    if not isinstance(suite_key, list):
        raise ScenarioError("suite must be a name or list of names")
    tasks.extend(suite_key)
    results = [_RUNNERS[t["op"]](ctx, t)
               for t in (_validate_task(raw) for raw in tasks)]
    info = {"model": ctx.name, "dim": ctx.dim, "seed": seed}
    if ctx.truncation is not None:
        info["truncation"] = ctx.truncation
    return _report("scenario", info, results)


# ---------------------------------------------------------------------------
# emitters


def _align(rows):
    if not rows:
        return []
    widths = [max(len(str(r[i])) for r in rows) for i in
              range(max(len(r) for r in rows))]
    return ["  ".join(str(cell).ljust(widths[i])
                      for i, cell in enumerate(row)).rstrip()
            for row in rows]


def _text_task_rows(result):
    skip = {"task", "pass"}
    rows = []
    for key, val in result.items():
        if key in skip:
            continue
        if isinstance(val, (dict, list)):
            val = json.dumps(val, sort_keys=True)
        text = str(val)
        if len(text) > 96:
            text = text[:93] + "..."
        rows.append([key, text])
    return rows


def emit(report, fmt="text") -> str:
    """Render a report tree: aligned text or exact-string JSON."""
    if fmt == "machine":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt != "text":
        raise ScenarioError(f"unknown format {fmt!r}; use text or machine")
    lines = []
    head = [f"{k}={report[k]}" for k in
            ("model", "dim", "truncation", "suite", "seed") if k in report]
    lines.append(f"qdr {report['kind']}  " + "  ".join(head))
    lines.append("-" * max(len(lines[0]), 24))
    for idx, result in enumerate(report["tasks"], start=1):
        status = {True: "pass", False: "FAIL", None: "value"}[result["pass"]]
        name = result.get("name", "")
        title = result["task"] + (f" {name}" if name else "")
        lines.append(f"{idx:>3}  {title:<24} {status}")
        for row in _align(_text_task_rows(result)):
            lines.append("       " + row)
    lines.append("")
    led = report["ledger"]
    lines.append("conventions")
    for row in _align([[key, json.dumps(led[key], sort_keys=True)]
                       for key in sorted(led)]):
        lines.append("       " + row)
    counts = report["counts"]
    verdict = "PASS" if report["passed"] else "FAIL"
    lines.append(
        f"{verdict}  {counts['checked']} checks, {counts['failed']} failed, "
        f"{counts['tasks']} tasks")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point


def _build_argparser():
    ap = argparse.ArgumentParser(
        prog="qdr",
        description="Exact deformed exterior calculus: scenario runner "
                    "and check suites.")
    what = ap.add_mutually_exclusive_group(required=True)
    what.add_argument("--scenario", metavar="PATH",
                      help="run a JSON scenario file")
    what.add_argument("--check", metavar="NAME",
                      help="run one named suite "
                           f"({', '.join(sorted(SUITES))})")
    ap.add_argument("--dim", type=int, help="working dimension (even)")
    ap.add_argument("--n", type=int, help="half-dimension")
    ap.add_argument("--truncation", type=int, help="torus mode cutoff")
    ap.add_argument("--seed", type=int, default=0, help="random seed")
    ap.add_argument("--count", type=int, help="repetitions for suites")
    ap.add_argument("--format", choices=("text", "machine"),
                    default="text", help="report rendering")
    return ap


def main(argv=None) -> int:
    ap = _build_argparser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as ex:
        return 2 if ex.code else 0
    try:
        if args.scenario:
            report = run_scenario(args.scenario)
        else:
            opts = Options(dim=args.dim, n=args.n,
                           truncation=args.truncation, count=args.count,
                           seed=args.seed)
            report = check(args.check, opts)
        sys.stdout.write(emit(report, args.format))
    except ScenarioError as ex:
        sys.stderr.write(f"qdr: {ex}\n")
        return 2
    except ValueError as ex:
        sys.stderr.write(f"qdr: {ex}\n")
        return 2
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
