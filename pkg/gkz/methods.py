"""
The A-hypergeometric (GKZ) system of an Euler integral.

With z the coefficients of f_1, ..., f_l, the integral of
(f_1(z))^-s_1 ... (f_l(z))^-s_l x^nu dx/x is annihilated by the toric
ideal of the Cayley configuration A and by the Euler operators
A theta - beta, with beta = -(s, nu).

Functions:
    - cayley: Cayley matrix of a list of supports
    - toric_binomials: degree-bounded binomial generators of the toric ideal
    - euler_operators: the l + n first-order operators
    - gkz_system: both, for an IntegralSpec or a list of factors
    - check_nonresonant: r_Q . beta against the facets of pos(A)
    - specialize: operators in the remaining coordinates once some z are 1
    - cayley_volume: normalized volume of the Cayley polytope
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

import networkx as nx
import sympy

from laurent.helpers import as_number, number_to_json, number_to_short_json, parameter_symbols, to_sympy
from polytope.geometry import cone_facets, convex_hull
from polytope.helpers import dot, nullspace, pivot_columns, primitive_integer

from .exceptions import GkzError, TorusRecipeError
from .operators import DifferentialOperator, degrevlex_key

logger = logging.getLogger(__name__)

BETA_CONVENTION = "beta = -(s, nu)"
INTEGER_TOL = 1e-9


@dataclass(frozen=True)
class CayleyMatrix:
    """Columns (e_i, alpha) for alpha in the support of f_i, labelled (i, alpha)."""

    columns: tuple
    labels: tuple
    nfactors: int
    nvars: int

    @property
    def d(self):
        return self.nfactors + self.nvars

    @property
    def ncolumns(self):
        return len(self.columns)

    @property
    def rows(self):
        return [tuple(col[k] for col in self.columns) for k in range(self.d)]

    @property
    def rank(self):
        return sympy.Matrix(self.rows).rank()

    def variables(self):
        return tuple(f"z{k + 1}" for k in range(self.ncolumns))

    def to_json(self):
        return {
            "matrix": [list(row) for row in self.rows],
            "labels": [{"factor": i + 1, "exponent": list(alpha)} for i, alpha in self.labels],
            "rank": self.rank,
        }


def cayley(supports):
    """
    Args:
        supports: one ordered list of exponent tuples per factor; column
            order follows it

    Raises:
        GkzError: an empty support or inconsistent dimensions
    """
    supports = [list(A_i) for A_i in supports]
    if not supports:
        raise GkzError("at least one support set is required")
    if any(not A_i for A_i in supports):
        raise GkzError("empty support set")
    n = len(supports[0][0])
    l = len(supports)
    columns, labels = [], []
    for i, A_i in enumerate(supports):
        indicator = tuple(int(k == i) for k in range(l))
        for alpha in A_i:
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n:
                raise GkzError(f"exponent {alpha} has length {len(alpha)}, expected {n}")
            columns.append(indicator + alpha)
            labels.append((i, alpha))
    return CayleyMatrix(tuple(columns), tuple(labels), l, n)


def kernel_basis(A):
    """Rational kernel basis of A, each vector scaled to a primitive integer vector."""
    return [primitive_integer(v) for v in nullspace(A.rows, A.ncolumns)]


def _fibres(A, degree):
    """Monomials of the given degree grouped by their A-degree."""
    fibres = {}
    N = A.ncolumns
    for chosen in combinations_with_replacement(range(N), degree):
        u = [0] * N
        for k in chosen:
            u[k] += 1
        image = tuple(sum(col[r] * uk for col, uk in zip(A.columns, u)) for r in range(A.d))
        fibres.setdefault(image, []).append(tuple(u))
    return fibres


def _fibre_graph(nodes, moves):
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    members = set(nodes)
    for m in nodes:
        for u, v in moves:
            for a, b in ((u, v), (v, u)):
                if all(x >= y for x, y in zip(m, a)):
                    other = tuple(x - y + z for x, y, z in zip(m, a, b))
                    if other in members:
                        graph.add_edge(m, other)
    return graph


def _disjoint(u, v):
    return all(x == 0 or y == 0 for x, y in zip(u, v))


def binomial_operator(variables, u, v):
    zero = (0,) * len(u)
    return DifferentialOperator(variables, {(zero, u): 1, (zero, v): -1})


def toric_binomials(A, degree_bound=None):
    """
    d^u - d^v with A(u - v) = 0 and |u - v|_1 <= degree_bound.

    Fibres of the A-grading are visited degree by degree; a binomial is
    kept only when its two monomials are not yet connected by the moves
    already kept, so the list is a minimal generating set of the toric
    ideal up to the bound. Default bound: largest l1-norm of the kernel
    basis plus 2.
    """
    basis = kernel_basis(A)
    if not basis:
        return []
    if degree_bound is None:
        degree_bound = max(sum(abs(x) for x in w) for w in basis) + 2
    if degree_bound < 1:
        raise GkzError(f"degree bound must be at least 1, got {degree_bound}")

    moves = []
    # A contains the indicator block, so kernel vectors have even l1-norm
    for degree in range(1, degree_bound // 2 + 1):
        for nodes in _fibres(A, degree).values():
            if len(nodes) < 2:
                continue
            nodes = sorted(nodes, key=degrevlex_key)
            graph = _fibre_graph(nodes, moves)
            components = sorted(
                (sorted(c, key=degrevlex_key) for c in nx.connected_components(graph)),
                key=lambda c: degrevlex_key(c[0]),
            )
            hub = components[0]
            for component in components[1:]:
                pairs = [(p, q) for p in reversed(component) for q in hub if _disjoint(p, q)]
                u, v = pairs[0] if pairs else (component[-1], hub[0])
                moves.append((u, v))
                hub = hub + component
        logger.debug(f"toric_binomials: {len(moves)} moves up to degree {degree}")

    for u, v in moves:
        w = tuple(x - y for x, y in zip(u, v))
        if any(dot(row, w) != 0 for row in A.rows):
            raise GkzError(f"move {w} is not in the kernel of A")
    variables = A.variables()
    operators = [binomial_operator(variables, u, v).normalized() for u, v in moves]
    return sorted(operators, key=lambda op: degrevlex_key(next(iter(op.terms))[1]), reverse=True)


def beta_vector(s, nu):
    return tuple(-to_sympy(x) for x in tuple(s) + tuple(nu))


def euler_operators(A, s=None, nu=None):
    """
    sum_alpha A[k, alpha] z_alpha d_alpha - beta_k for k = 1..l+n, with
    beta = -(s, nu). Missing parameters stay symbolic.
    """
    symbols_s, symbols_nu = parameter_symbols(A.nfactors, A.nvars)
    s = symbols_s if s is None else tuple(s)
    nu = symbols_nu if nu is None else tuple(nu)
    if len(s) != A.nfactors or len(nu) != A.nvars:
        raise GkzError(f"expected {A.nfactors} values of s and {A.nvars} of nu")
    beta = beta_vector(s, nu)
    variables = A.variables()
    operators = []
    for k, row in enumerate(A.rows):
        op = DifferentialOperator.constant(variables, -beta[k])
        for alpha, entry in enumerate(row):
            if entry:
                op = op + DifferentialOperator.theta(variables, alpha).scale(entry)
        operators.append(op)
    return operators


@dataclass
class GkzSystem:
    cayley: CayleyMatrix
    binomials: list
    euler_ops: list
    beta: tuple
    degree_bound: int = None
    kernel: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.euler_ops) != self.cayley.d:
            raise GkzError(f"{len(self.euler_ops)} Euler operators for d = {self.cayley.d}")

    @property
    def operators(self):
        return list(self.binomials) + list(self.euler_ops)

    def to_json(self):
        return {
            "beta_convention": BETA_CONVENTION,
            "cayley": self.cayley.to_json(),
            "beta": [str(b) for b in self.beta],
            "degree_bound": self.degree_bound,
            "kernel_basis": [list(w) for w in self.kernel],
            "binomials": [op.to_json() for op in self.binomials],
            "euler_operators": [op.to_json() for op in self.euler_ops],
        }


def gkz_system(supports, s=None, nu=None, degree_bound=None):
    """
    The GKZ system of a list of ordered supports, or of an IntegralSpec
    (columns then follow the canonical term order of each factor).
    """
    if hasattr(supports, "polys"):
        spec = supports
        supports = [f.support for f in spec.polys]
        s = spec.s if s is None else s
        nu = spec.nu if nu is None else nu
    A = cayley(supports)
    kernel = kernel_basis(A)
    if degree_bound is None and kernel:
        degree_bound = max(sum(abs(x) for x in w) for w in kernel) + 2
    binomials = toric_binomials(A, degree_bound)
    euler_ops = euler_operators(A, s, nu)
    symbols_s, symbols_nu = parameter_symbols(A.nfactors, A.nvars)
    beta = beta_vector(symbols_s if s is None else s, symbols_nu if nu is None else nu)
    logger.info(f"gkz_system: {A.d}x{A.ncolumns} Cayley matrix, {len(binomials)} binomials")
    return GkzSystem(A, binomials, euler_ops, beta, degree_bound, kernel)


@dataclass
class ResonanceReport:
    nonresonant: bool
    facets: list
    pairings: list
    # first facet normal with an integer pairing
    witness: tuple = None

    def to_json(self):
        return {
            "nonresonant": self.nonresonant,
            "beta_convention": BETA_CONVENTION,
            "facets": [list(r) for r in self.facets],
            "pairings": [number_to_json(p) for p in self.pairings],
            "witness": None if self.witness is None else list(self.witness),
        }


def _is_integer(value):
    if isinstance(value, Fraction):
        return value.denominator == 1
    value = complex(value)
    return abs(value.imag) < INTEGER_TOL and abs(value.real - round(value.real)) < INTEGER_TOL


def _beta_number(value):
    if isinstance(value, sympy.Basic):
        if value.is_Rational:
            return Fraction(int(value.p), int(value.q))
        if not value.is_number:
            raise GkzError(f"resonance needs numeric beta, got {value}")
        return as_number(complex(value))
    return as_number(value)


def check_nonresonant(A, beta):
    """
    beta is non-resonant when r_Q . beta is not an integer for any facet Q
    of pos(A), r_Q the primitive inward normal.

    Raises:
        DegenerateConeError: the columns of A do not span R^d
    """
    beta = [_beta_number(b) for b in beta]
    if len(beta) != A.d:
        raise GkzError(f"beta has {len(beta)} entries, expected {A.d}")
    facets = cone_facets(A.columns)
    pairings, witness = [], None
    for r in facets:
        value = sum((k * b for k, b in zip(r, beta)), Fraction(0))
        pairings.append(value)
        if witness is None and _is_integer(value):
            witness = r
    report = ResonanceReport(witness is None, facets, pairings, witness)
    if witness is not None:
        logger.info(f"check_nonresonant: resonant, r = {witness} pairs to {pairings[facets.index(witness)]}")
    return report


@dataclass
class TorusRecipe:
    """
    Coordinates in `fixed` are set to 1; every other column k becomes
    z_k = scales[k] * t_k with t_k named names[k]. Indices are 0-based.
    """

    fixed: tuple
    scales: dict = field(default_factory=dict)
    names: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, data):
        """1-based column indices, e.g. {"fixed": [1, 2, 3], "scale": {"4": -1}, "names": {"4": "t1"}}"""
        fixed = tuple(int(k) - 1 for k in data["fixed"])
        scales = {int(k) - 1: as_number(v) for k, v in data.get("scale", {}).items()}
        names = {int(k) - 1: str(v) for k, v in data.get("names", {}).items()}
        return cls(fixed, scales, names)

    def to_json(self):
        return {
            "fixed": [k + 1 for k in self.fixed],
            "scale": {str(k + 1): number_to_short_json(v) for k, v in self.scales.items()},
            "names": {str(k + 1): v for k, v in self.names.items()},
        }


class _Specializer:
    def __init__(self, system, recipe):
        A = system.cayley
        self.A = A
        self.beta = system.beta
        self.fixed = tuple(recipe.fixed)
        if len(set(self.fixed)) != len(self.fixed) or any(not 0 <= k < A.ncolumns for k in self.fixed):
            raise TorusRecipeError(f"fixed coordinates {[k + 1 for k in self.fixed]} are not distinct columns")
        self.rest = tuple(k for k in range(A.ncolumns) if k not in self.fixed)
        self.variables = tuple(recipe.names.get(k, f"z{k + 1}") for k in self.rest)
        self.scales = {k: to_sympy(recipe.scales.get(k, 1)) for k in self.rest}
        if any(c == 0 for c in self.scales.values()):
            raise TorusRecipeError("a torus recipe scale is zero")

        A_F = sympy.Matrix([[A.columns[f][r] for f in self.fixed] for r in range(A.d)])
        if A_F.rank() != len(self.fixed):
            raise TorusRecipeError(
                f"torus recipe not applicable: the Euler operators cannot be solved for "
                f"d_{', d_'.join(str(k + 1) for k in self.fixed)}"
            )
        self.pivot_rows = pivot_columns(A_F.T.tolist())
        self.B_inv = A_F.extract(list(self.pivot_rows), list(range(len(self.fixed)))).inv()
        self.left_kernel = [primitive_integer(y) for y in nullspace(A_F.T.tolist(), A.d)]

    def _unit(self, k):
        j = self.rest.index(k)
        return tuple(int(i == j) for i in range(len(self.rest)))

    def theta(self, k):
        return DifferentialOperator.theta(self.variables, self.rest.index(k))

    def solve(self, f, beta):
        """d_f at z_fixed = 1 as a first-order operator in the remaining variables."""
        row = self.fixed.index(f)
        op = DifferentialOperator.constant(self.variables, 0)
        for q, p in enumerate(self.pivot_rows):
            weight = self.B_inv[row, q]
            if weight == 0:
                continue
            piece = DifferentialOperator.constant(self.variables, beta[p])
            for k in self.rest:
                entry = self.A.columns[k][p]
                if entry:
                    piece = piece - self.theta(k).scale(entry)
            op = op + piece.scale(weight)
        return op

    def kernel_operator(self, y, beta):
        op = DifferentialOperator.constant(self.variables, -sum(yk * bk for yk, bk in zip(y, beta)))
        for k in self.rest:
            weight = sum(yk * ck for yk, ck in zip(y, self.A.columns[k]))
            if weight:
                op = op + self.theta(k).scale(weight)
        return op

    def reduce(self, op, keep, beta):
        """Add multiples of the specialized Euler operators to drop theta_k for k outside `keep`."""
        if not self.left_kernel or not keep:
            return op
        drop = [k for k in self.rest if k not in keep]
        if not drop:
            return op
        M = sympy.Matrix([[sum(yk * ck for yk, ck in zip(y, self.A.columns[k])) for y in self.left_kernel]
                          for k in drop])
        rhs = sympy.Matrix([-op.terms.get((self._unit(k), self._unit(k)), 0) for k in drop])
        try:
            solution, parameters = M.gauss_jordan_solve(rhs)
        except ValueError:
            return op
        solution = solution.subs({p: 0 for p in parameters})
        for lam, y in zip(solution, self.left_kernel):
            if lam != 0:
                op = op + self.kernel_operator(y, beta).scale(lam)
        return op

    def monomial(self, u):
        """(d^u I)(1, z_rest) as an operator on I(1, z_rest)."""
        keep = {k for k in self.rest if u[k]}
        chain = [f for f in self.fixed for _ in range(u[f])]
        # d_f1 ... d_fm I: the function hit by d_fj solves the system at beta - sum_{i > j} a_fi
        result = DifferentialOperator.constant(self.variables, 1)
        beta = list(self.beta)
        factors = []
        for f in reversed(chain):
            factors.append(self.reduce(self.solve(f, beta), keep, beta))
            beta = [b - a for b, a in zip(beta, self.A.columns[f])]
        for factor in reversed(factors):
            result = result * factor
        for k in reversed(self.rest):
            if u[k]:
                d = DifferentialOperator.derivative(self.variables, self.rest.index(k)).scale(1 / self.scales[k])
                result = d ** u[k] * result
        return result


def specialize(system, recipe):
    """
    Operators in the remaining coordinates annihilating I(1, ..., 1, c t).

    Each binomial d^u - d^v has its fixed derivatives solved from the Euler
    operators (stepping beta by the columns already differentiated) and
    reduced with the specialized Euler operators so that only the thetas
    of variables it differentiates survive. The specialized Euler
    operators, one per left-kernel vector of the fixed columns, follow.

    Raises:
        TorusRecipeError: the fixed columns are not linearly independent
    """
    worker = _Specializer(system, recipe)
    zero = (0,) * system.cayley.ncolumns
    operators = []
    for binomial in system.binomials:
        op = DifferentialOperator.constant(worker.variables, 0)
        for (a, b), c in binomial.terms.items():
            if a != zero:
                raise TorusRecipeError("binomials carry constant coefficients")
            op = op + worker.monomial(b).scale(c)
        op = op.normalized()
        if not op.is_zero() and op not in operators:
            operators.append(op)
    for y in worker.left_kernel:
        op = worker.kernel_operator(y, system.beta).normalized()
        if not op.is_zero() and op not in operators:
            operators.append(op)
    logger.info(f"specialize: {len(operators)} operators in {', '.join(worker.variables)}")
    return operators


def cayley_volume(A):
    """Normalized volume of the Cayley polytope, the columns with the first indicator row dropped."""
    points = [col[1:] for col in A.columns]
    if A.d == 1:
        return Fraction(1)
    return convex_hull(points).normalized_volume()


def torus_action(A, u, z):
    """(u^a_1 z_1, ..., u^a_N z_N) for u in the torus (C*)^d."""
    if len(u) != A.d or len(z) != A.ncolumns:
        raise GkzError(f"expected u in C*^{A.d} and z in C^{A.ncolumns}")
    result = []
    for col, zk in zip(A.columns, z):
        factor = 1
        for uj, aj in zip(u, col):
            factor *= uj ** aj
        result.append(factor * zk)
    return tuple(result)


def torus_character(beta, u):
    """u^beta for numeric beta and u on the positive real torus."""
    value = 1
    for uj, bj in zip(u, beta):
        value *= complex(uj) ** complex(bj)
    return value
