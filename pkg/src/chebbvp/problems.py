"""Problem files: a line-based format for operators, grids, and conditions.

Format (sections in any order, '#' starts a comment):

    [operator]
    linear 0              # factor (D - a), one per line, applied first
    linear 1e6
    # quadratic <b> <c>   -> factor (D^2 + b D + c), listed after the linear ones
    # ysecond <p> <q1> <q0> <r> -> p u'' + (q1 y + q0) u' + r u (diffmat backend only)

    [rhs]
    expr = const:0
    # or a sum of terms: 'pi*cospi + 1e6*sinpi', bases: one, y, sinpi, cospi

    [grid]
    m = 8192
    # or piecewise:  nodes = -1 0.99995 0.99999 1
    #                orders = 32 32 32

    [bc]
    at=-1 d0=1 value=0    # sum_d (d<k>=coeff) u^(k)(at) = value

    [exact]
    name = exp_ramp:1e6:1:2   # optional, enables error reporting

Exact-solution builtins: const:<k>; sinpi; saturating_exp:<a> for
1 - e^{-a(y+1)}; exp_ramp:<a>:<ul>:<ur> for the two-value exponential layer
profile; cosh_pair:<a>:<b> for the clamped fourth-order layer solution;
erf_step:<eps> for the internal-layer error-function profile.  All are
evaluated in expm1/stable forms so that layer regions do not lose more
digits than the arithmetic itself must.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import erf

from .diffmat import AffineConvectionOp
from .factored import BoundaryCondition, OperatorFactorization
from .integration import FirstOrderOp, SecondOrderOp
from .piecewise import PiecewiseGrid


class ProblemFormatError(ValueError):
    """Problem-file validation failure, annotated with the offending line."""

    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


@dataclass(frozen=True)
class ProblemSpec:
    operator: OperatorFactorization | AffineConvectionOp
    rhs: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    rhs_text: str
    grid: int | PiecewiseGrid
    bcs: tuple[BoundaryCondition, ...]
    backend: str = "spectral"
    exact: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    exact_name: str | None = None

    @property
    def order(self) -> int:
        return self.operator.order

    @property
    def is_piecewise(self) -> bool:
        return isinstance(self.grid, PiecewiseGrid)


_RHS_BASES = {
    "one": lambda y: np.ones_like(y),
    "y": lambda y: np.asarray(y, dtype=float),
    "sinpi": lambda y: np.sin(np.pi * y),
    "cospi": lambda y: np.cos(np.pi * y),
}


def _number(token: str, line: int) -> float:
    token = token.strip()
    if token == "pi":
        return math.pi
    if token == "-pi":
        return -math.pi
    try:
        return float(token)
    except ValueError:
        raise ProblemFormatError(f"malformed number {token!r}", line) from None


def parse_rhs_expr(text: str, line: int = 0) -> Callable[[np.ndarray], np.ndarray]:
    """Sum of '<coef>*<basis>' terms, bare numbers, or 'const:<k>'."""
    text = text.strip()
    if text.startswith("const:"):
        k = _number(text[len("const:") :], line)
        return lambda y, k=k: np.full_like(np.asarray(y, dtype=float), k)
    terms = []
    for raw in text.split("+"):
        raw = raw.strip()
        if not raw:
            raise ProblemFormatError("empty term in rhs expression", line)
        if "*" in raw:
            coef_s, basis = raw.split("*", 1)
            coef, basis = _number(coef_s, line), basis.strip()
        elif raw in _RHS_BASES:
            coef, basis = 1.0, raw
        else:
            coef, basis = _number(raw, line), "one"
        if basis not in _RHS_BASES:
            raise ProblemFormatError(f"unknown rhs basis {basis!r}", line)
        terms.append((coef, _RHS_BASES[basis]))

    def rhs(y, terms=tuple(terms)):
        y = np.asarray(y, dtype=float)
        out = np.zeros_like(y)
        for coef, fn in terms:
            out += coef * fn(y)
        return out

    return rhs


def exact_function(name: str, line: int = 0) -> Callable[[np.ndarray], np.ndarray]:
    """Named analytic solutions, in numerically stable forms."""
    parts = name.strip().split(":")
    kind, args = parts[0], [_number(p, line) for p in parts[1:]]

    def need(n):
        if len(args) != n:
            raise ProblemFormatError(f"exact solution {kind!r} takes {n} parameter(s)", line)

    if kind == "const":
        need(1)
        return lambda y: np.full_like(np.asarray(y, dtype=float), args[0])
    if kind == "sinpi":
        need(0)
        return lambda y: np.sin(np.pi * y)
    if kind == "saturating_exp":
        need(1)
        a = args[0]
        return lambda y: -np.expm1(-a * (y + 1.0))
    if kind == "exp_ramp":
        need(3)
        a, ul, ur = args
        span = ur - ul

        def ramp(y):
            return ul + span * (np.expm1(a * (y - 1.0)) - np.expm1(-2.0 * a)) / -np.expm1(-2.0 * a)

        return ramp
    if kind == "cosh_pair":
        need(2)
        a, b = args
        ta, tb = np.tanh(a), np.tanh(b)
        k = 1.0 / (b * tb - a * ta)

        def phi(x, y):
            return (np.exp(x * (y - 1.0)) + np.exp(-x * (y + 1.0))) / (1.0 + np.exp(-2.0 * x))

        return lambda y: 1.0 - b * tb * k * phi(a, y) + a * ta * k * phi(b, y)
    if kind == "erf_step":
        need(1)
        s = math.sqrt(2.0 * args[0])
        scale = erf(1.0 / s)
        return lambda y: -1.0 + (erf(y / s) + scale) / scale
    raise ProblemFormatError(f"unknown exact solution {kind!r}", line)


def _split_sections(text: str):
    """Yield (section, line_number, payload) for every non-empty line."""
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in ("operator", "rhs", "grid", "bc", "exact"):
                raise ProblemFormatError(f"unknown section [{section}]", lineno)
            continue
        if section is None:
            raise ProblemFormatError("content before any [section]", lineno)
        yield section, lineno, line


def _parse_bc_line(line: str, lineno: int) -> BoundaryCondition:
    at = None
    value = None
    weights = []
    for token in line.split():
        if "=" not in token:
            raise ProblemFormatError(f"expected key=value, got {token!r}", lineno)
        key, _, val = token.partition("=")
        if key == "at":
            at = _number(val, lineno)
        elif key == "value":
            value = _number(val, lineno)
        elif key.startswith("d") and key[1:].isdigit():
            weights.append((int(key[1:]), _number(val, lineno)))
        else:
            raise ProblemFormatError(f"unknown boundary-condition key {key!r}", lineno)
    if at not in (-1.0, 1.0):
        raise ProblemFormatError("boundary condition needs at=-1 or at=+1", lineno)
    if value is None:
        raise ProblemFormatError("boundary condition needs value=", lineno)
    if not weights:
        raise ProblemFormatError("boundary condition needs at least one d<k>= weight", lineno)
    try:
        return BoundaryCondition(int(at), tuple(weights), value)
    except ValueError as exc:
        raise ProblemFormatError(str(exc), lineno) from None


def parse_problem(text: str) -> ProblemSpec:
    """Parse and validate a problem file; raises ProblemFormatError on first error."""
    linear: list[FirstOrderOp] = []
    quadratic: list[SecondOrderOp] = []
    affine: AffineConvectionOp | None = None
    affine_line = 0
    rhs = None
    rhs_text = "const:0"
    grid_m = None
    nodes = None
    nodes_line = 0
    orders = None
    bcs: list[BoundaryCondition] = []
    exact = None
    exact_name = None

    for section, lineno, line in _split_sections(text):
        if section == "operator":
            parts = line.split()
            kind, vals = parts[0], [_number(p, lineno) for p in parts[1:]]
            if kind == "linear" and len(vals) == 1:
                linear.append(FirstOrderOp(vals[0]))
            elif kind == "quadratic" and len(vals) == 2:
                quadratic.append(SecondOrderOp(vals[0], vals[1]))
            elif kind == "ysecond" and len(vals) == 4:
                affine = AffineConvectionOp(vals[0], vals[1], vals[2], vals[3])
                affine_line = lineno
            else:
                raise ProblemFormatError(
                    f"expected 'linear a', 'quadratic b c', or 'ysecond p q1 q0 r', got {line!r}", lineno
                )
        elif section == "rhs":
            key, _, val = line.partition("=")
            if key.strip() != "expr":
                raise ProblemFormatError(f"unknown rhs key {key.strip()!r}", lineno)
            rhs_text = val.strip()
            rhs = parse_rhs_expr(rhs_text, lineno)
        elif section == "grid":
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key == "m":
                grid_m = int(_number(val, lineno))
            elif key == "nodes":
                nodes = [_number(p, lineno) for p in val.split()]
                nodes_line = lineno
            elif key == "orders":
                orders = [int(_number(p, lineno)) for p in val.split()]
            else:
                raise ProblemFormatError(f"unknown grid key {key!r}", lineno)
        elif section == "bc":
            bcs.append(_parse_bc_line(line, lineno))
        elif section == "exact":
            key, _, val = line.partition("=")
            if key.strip() != "name":
                raise ProblemFormatError(f"unknown exact key {key.strip()!r}", lineno)
            exact_name = val.strip()
            exact = exact_function(exact_name, lineno)

    if affine is not None and (linear or quadratic):
        raise ProblemFormatError("ysecond cannot be combined with factored terms", affine_line)
    if affine is not None:
        operator = affine
        backend = "diffmat"
    elif linear or quadratic:
        operator = OperatorFactorization(tuple(linear), tuple(quadratic))
        backend = "spectral"
    else:
        raise ProblemFormatError("missing [operator] section")

    if rhs is None:
        rhs = parse_rhs_expr(rhs_text)

    if grid_m is not None and nodes is not None:
        raise ProblemFormatError("give either m or nodes/orders, not both", nodes_line)
    if nodes is not None or orders is not None:
        if nodes is None or orders is None:
            raise ProblemFormatError("piecewise grids need both nodes and orders", nodes_line)
        try:
            grid: int | PiecewiseGrid = PiecewiseGrid(np.array(nodes), tuple(orders))
        except ValueError as exc:
            raise ProblemFormatError(str(exc), nodes_line) from None
    elif grid_m is not None:
        grid = grid_m
    else:
        raise ProblemFormatError("missing [grid] section")

    r = operator.order
    if len(bcs) != r:
        raise ProblemFormatError(f"bc count mismatch: operator order {r} needs {r} conditions, got {len(bcs)}")
    for bc in bcs:
        if bc.max_order >= r:
            raise ProblemFormatError(f"boundary derivative order {bc.max_order} must be < {r}")

    return ProblemSpec(
        operator=operator,
        rhs=rhs,
        rhs_text=rhs_text,
        grid=grid,
        bcs=tuple(bcs),
        backend=backend,
        exact=exact,
        exact_name=exact_name,
    )


def load_problem(path) -> ProblemSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_problem(fh.read())
