"""LP relaxations of the balanced covering objectives.

Three formulations over selection variables x_i in [0, 1]:

* MINLP (maximize z):  z <= sum_i a_ij x_i  and  z <= sum_i (1-a_ij) x_i
  for every probe j, with sum_i x_i <= s.  z* bounds the best cmin.
* MAXLP (minimize z):  z >= |sum_i a_ij x_i - s/2| split into two linear
  rows per probe, with sum_i x_i = s exactly.  z* bounds the best dmax.
* AVGLP (maximize (1/n) sum_j z_j):  per-probe margin variables with the
  same pair of rows as MINLP.  z* bounds the best cavg.

AVGLP is stored with raw objective sum_j z_j and a rational scale 1/n
applied when reporting, so the tableau holds only integers and halves
and the exact solver mode stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .core import Instance
from .errors import InputError
from .simplex import EQ, GE, LE, solve_simplex


class Formulation(Enum):
    MINLP = "minlp"
    MAXLP = "maxlp"
    AVGLP = "avglp"


@dataclass(frozen=True)
class LpProblem:
    """A fully materialized LP: objective, rows, bounds, and naming.

    ``num_selection_vars`` counts the leading x_i columns; any further
    columns are auxiliary (z variables).  The reported optimum is the
    raw optimum times ``objective_scale`` (a rational num/den pair).
    """

    formulation: Formulation
    maximize: bool
    c: np.ndarray
    A: np.ndarray
    relations: tuple[str, ...]
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    var_names: tuple[str, ...]
    num_selection_vars: int
    objective_scale: tuple[int, int]
    label: str

    def __post_init__(self):
        rows, cols = self.A.shape
        if not (
            self.c.shape == (cols,)
            and self.lower.shape == (cols,)
            and self.upper.shape == (cols,)
            and self.rhs.shape == (rows,)
            and len(self.relations) == rows
            and len(self.var_names) == cols
        ):
            raise InputError(f"{self.label}: inconsistent LP dimensions")
        if not np.isfinite(self.rhs).all():
            raise InputError(f"{self.label}: nonfinite right-hand side")
        if (self.lower > self.upper).any():
            raise InputError(f"{self.label}: lower bound exceeds upper bound")
        for arr in (self.c, self.A, self.rhs, self.lower, self.upper):
            arr.flags.writeable = False

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    @property
    def num_vars(self) -> int:
        return self.A.shape[1]


@dataclass(frozen=True)
class SolverStats:
    iterations: int
    basis: tuple[int, ...]
    residual_primal: float
    residual_bound: float
    residual_dual: float


@dataclass(frozen=True)
class FractionalSolution:
    """Optimal LP value and the fractional selection vector x*.

    ``z_star`` is a float normally, a Fraction when solved exactly.
    """

    formulation: Formulation
    z_star: float | Fraction
    x: np.ndarray
    stats: SolverStats


def _check_budget(instance: Instance, s) -> int:
    s = int(s)
    if not 1 <= s <= instance.num_clones:
        raise InputError(f"budget s={s} must lie in [1, {instance.num_clones}]")
    return s


def build_min_lp(instance: Instance, s: int) -> LpProblem:
    s = _check_budget(instance, s)
    a = instance.adjacency.astype(float)
    m, n = a.shape
    nvars = m + 1
    A = np.zeros((2 * n + 1, nvars))
    for j in range(n):
        A[2 * j, :m] = -a[:, j]
        A[2 * j, m] = 1.0
        A[2 * j + 1, :m] = a[:, j] - 1.0
        A[2 * j + 1, m] = 1.0
    A[2 * n, :m] = 1.0
    rhs = np.zeros(2 * n + 1)
    rhs[2 * n] = float(s)
    c = np.zeros(nvars)
    c[m] = 1.0
    lower = np.zeros(nvars)
    upper = np.ones(nvars)
    upper[m] = np.inf
    return LpProblem(
        formulation=Formulation.MINLP,
        maximize=True,
        c=c,
        A=A,
        relations=(LE,) * (2 * n + 1),
        rhs=rhs,
        lower=lower,
        upper=upper,
        var_names=tuple(f"x{i + 1}" for i in range(m)) + ("z",),
        num_selection_vars=m,
        objective_scale=(1, 1),
        label=f"minlp(m={m}, n={n}, s={s})",
    )


def build_max_lp(instance: Instance, s: int) -> LpProblem:
    s = _check_budget(instance, s)
    a = instance.adjacency.astype(float)
    m, n = a.shape
    nvars = m + 1
    A = np.zeros((2 * n + 1, nvars))
    relations = []
    rhs = np.zeros(2 * n + 1)
    for j in range(n):
        A[2 * j, :m] = a[:, j]
        A[2 * j, m] = -1.0
        relations.append(LE)
        rhs[2 * j] = s / 2.0
        A[2 * j + 1, :m] = a[:, j]
        A[2 * j + 1, m] = 1.0
        relations.append(GE)
        rhs[2 * j + 1] = s / 2.0
    A[2 * n, :m] = 1.0
    relations.append(EQ)
    rhs[2 * n] = float(s)
    c = np.zeros(nvars)
    c[m] = 1.0
    lower = np.zeros(nvars)
    upper = np.ones(nvars)
    upper[m] = np.inf
    return LpProblem(
        formulation=Formulation.MAXLP,
        maximize=False,
        c=c,
        A=A,
        relations=tuple(relations),
        rhs=rhs,
        lower=lower,
        upper=upper,
        var_names=tuple(f"x{i + 1}" for i in range(m)) + ("z",),
        num_selection_vars=m,
        objective_scale=(1, 1),
        label=f"maxlp(m={m}, n={n}, s={s})",
    )


def build_avg_lp(instance: Instance, s: int) -> LpProblem:
    s = _check_budget(instance, s)
    a = instance.adjacency.astype(float)
    m, n = a.shape
    nvars = m + n
    A = np.zeros((2 * n + 1, nvars))
    for j in range(n):
        A[2 * j, :m] = -a[:, j]
        A[2 * j, m + j] = 1.0
        A[2 * j + 1, :m] = a[:, j] - 1.0
        A[2 * j + 1, m + j] = 1.0
    A[2 * n, :m] = 1.0
    rhs = np.zeros(2 * n + 1)
    rhs[2 * n] = float(s)
    c = np.zeros(nvars)
    c[m:] = 1.0
    lower = np.zeros(nvars)
    upper = np.concatenate([np.ones(m), np.full(n, np.inf)])
    return LpProblem(
        formulation=Formulation.AVGLP,
        maximize=True,
        c=c,
        A=A,
        relations=(LE,) * (2 * n + 1),
        rhs=rhs,
        lower=lower,
        upper=upper,
        var_names=tuple(f"x{i + 1}" for i in range(m)) + tuple(f"z{j + 1}" for j in range(n)),
        num_selection_vars=m,
        objective_scale=(1, n),
        label=f"avglp(m={m}, n={n}, s={s})",
    )


_BUILDERS = {
    Formulation.MINLP: build_min_lp,
    Formulation.MAXLP: build_max_lp,
    Formulation.AVGLP: build_avg_lp,
}


def build_lp(instance: Instance, s: int, formulation: Formulation) -> LpProblem:
    return _BUILDERS[formulation](instance, s)


def solve_lp(problem: LpProblem, *, tol: float = 1e-9, exact: bool = False) -> FractionalSolution:
    """Solve a built LP and report the scaled optimum and x* slice.

    Repeated calls on an equal problem return bit-identical results:
    the solver's pivot rules are deterministic and depend only on the
    problem data.
    """
    res = solve_simplex(
        problem.c,
        problem.A,
        problem.relations,
        problem.rhs,
        problem.lower,
        problem.upper,
        maximize=problem.maximize,
        tol=tol,
        exact=exact,
    )
    num, den = problem.objective_scale
    if exact:
        z = res.objective * Fraction(num, den)
    else:
        # + 0.0 turns an IEEE -0.0 into +0.0 for clean reporting
        z = res.objective * num / den + 0.0
    x = res.x[: problem.num_selection_vars].copy()
    if x.dtype != object:
        x.setflags(write=False)
    stats = SolverStats(
        iterations=res.iterations,
        basis=res.basis,
        residual_primal=res.residual_primal,
        residual_bound=res.residual_bound,
        residual_dual=res.residual_dual,
    )
    return FractionalSolution(formulation=problem.formulation, z_star=z, x=x, stats=stats)


def solve_formulation(
    instance: Instance,
    s: int,
    formulation: Formulation,
    *,
    tol: float = 1e-9,
    exact: bool = False,
) -> FractionalSolution:
    return solve_lp(build_lp(instance, s, formulation), tol=tol, exact=exact)


def _term(coef: float, name: str) -> str:
    sign = "+" if coef >= 0 else "-"
    return f"{sign} {abs(coef):.12g} {name}"


def to_lp_text(problem: LpProblem) -> str:
    """Serialize to CPLEX LP format for inspection or external solvers.

    When the objective carries a rational scale (AVGLP), the file holds
    the raw objective and a comment states the multiplier to apply.
    """
    lines = [f"\\ {problem.label}"]
    num, den = problem.objective_scale
    if (num, den) != (1, 1):
        lines.append(f"\\ reported optimum = file optimum * {num}/{den}")
    lines.append("Maximize" if problem.maximize else "Minimize")
    terms = [
        _term(c, name) for c, name in zip(problem.c, problem.var_names) if c != 0
    ]
    lines.append(" obj: " + " ".join(terms))
    lines.append("Subject To")
    for i in range(problem.num_rows):
        row = [
            _term(problem.A[i, j], problem.var_names[j])
            for j in range(problem.num_vars)
            if problem.A[i, j] != 0
        ]
        lines.append(f" r{i + 1}: " + " ".join(row) + f" {problem.relations[i]} {problem.rhs[i]:.12g}")
    lines.append("Bounds")
    for j in range(problem.num_vars):
        lo, hi = problem.lower[j], problem.upper[j]
        if np.isinf(hi):
            lines.append(f" {problem.var_names[j]} >= {lo:.12g}")
        else:
            lines.append(f" {lo:.12g} <= {problem.var_names[j]} <= {hi:.12g}")
    lines.append("End")
    return "\n".join(lines) + "\n"
