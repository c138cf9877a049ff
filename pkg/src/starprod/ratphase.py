"""Exact associativity of quadratic-phase kernels over the rationals.

The product is associative iff the two nested-integral phases agree after
the intermediate point is integrated out.  For the flat catalog cocycles
the phases are linear in the intermediate point, so integrating it out
yields delta constraints (linear in the outer points) plus a residual
phase; both sides are compared exactly with Fraction arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = ["PhasePolynomial", "phase_associativity_check", "AssocVerdict", "triangle_phase", "good_phase", "heisenberg_phase"]


VARS = ("a1", "a2", "b1", "b2", "c1", "c2", "x1", "x2", "w1", "w2")
NVAR = len(VARS)
IDX = {v: i for i, v in enumerate(VARS)}
W1, W2 = IDX["w1"], IDX["w2"]


@dataclass(frozen=True)
class PhasePolynomial:
    """Polynomial with Fraction coefficients over the fixed variable list."""

    coeffs: tuple  # sorted ((exponent tuple, Fraction), ...)

    @staticmethod
    def make(d: dict) -> "PhasePolynomial":
        clean = {k: Fraction(v) for k, v in d.items() if v != 0}
        return PhasePolynomial(tuple(sorted(clean.items())))

    @staticmethod
    def var(name: str) -> "PhasePolynomial":
        e = [0] * NVAR
        e[IDX[name]] = 1
        return PhasePolynomial.make({tuple(e): Fraction(1)})

    @staticmethod
    def const(c) -> "PhasePolynomial":
        return PhasePolynomial.make({tuple([0] * NVAR): Fraction(c)})

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def __add__(self, o):
        d = self.as_dict()
        for k, v in o.coeffs:
            d[k] = d.get(k, Fraction(0)) + v
        return PhasePolynomial.make(d)

    def __sub__(self, o):
        return self + o * Fraction(-1)

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return PhasePolynomial.make({k: v * o for k, v in self.coeffs})
        d: dict = {}
        for ka, va in self.coeffs:
            for kb, vb in o.coeffs:
                k = tuple(i + j for i, j in zip(ka, kb))
                d[k] = d.get(k, Fraction(0)) + va * vb
        return PhasePolynomial.make(d)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree_in(self, var_index: int) -> int:
        return max((k[var_index] for k, _ in self.coeffs), default=0)

    def coefficient_of(self, var_index: int) -> "PhasePolynomial":
        """Coefficient polynomial of the first power (requires degree <= 1)."""
        out = {}
        for k, v in self.coeffs:
            if k[var_index] == 1:
                kk = list(k)
                kk[var_index] = 0
                out[tuple(kk)] = v
            elif k[var_index] > 1:
                raise ValueError("phase is not linear in the intermediate")
        return PhasePolynomial.make(out)

    def coefficient_of_linear(self, var_index: int) -> "PhasePolynomial":
        """Coefficient polynomial of the first power (any total degree)."""
        out = {}
        for k, v in self.coeffs:
            if k[var_index] == 1:
                kk = list(k)
                kk[var_index] = 0
                out[tuple(kk)] = v
        return PhasePolynomial.make(out)

    def drop(self, var_index: int) -> "PhasePolynomial":
        return PhasePolynomial.make({k: v for k, v in self.coeffs if k[var_index] == 0})

    def substitute(self, var_index: int, repl: "PhasePolynomial") -> "PhasePolynomial":
        out = PhasePolynomial.const(0)
        for k, v in self.coeffs:
            term = PhasePolynomial.make({tuple(0 if i == var_index else e for i, e in enumerate(k)): v})
            for _ in range(k[var_index]):
                term = term * repl
            out = out + term
        return out

    def evaluate(self, values: dict) -> Fraction:
        total = Fraction(0)
        for k, v in self.coeffs:
            term = v
            for name, e in zip(VARS, k):
                if e:
                    term *= Fraction(values.get(name, 0)) ** e
            total += term
        return total


def _pt(prefix: str):
    return PhasePolynomial.var(prefix + "1"), PhasePolynomial.var(prefix + "2")


def triangle_phase(P, Q, T) -> PhasePolynomial:
    """Pair-arrow cocycle phase through points P -> Q -> T (printed bracket,
    twice the triangle-area cocycle)."""
    return (T[0] - Q[0]) * (Q[1] - P[1]) - (T[1] - Q[1]) * (Q[0] - P[0])


def good_phase(eps: Fraction):
    """Normalized epsilon-twisted phase: triangle plus the coboundary of
    h = y'y minus the y^2 counterterm at the product point."""
    e = Fraction(eps)

    def phase(P, Q, T):
        return triangle_phase(P, Q, T) + e * (
            Q[1] * P[1] - P[1] * T[1] + Q[1] * T[1] - Q[1] * Q[1]
        )

    return phase


def heisenberg_phase(z: Fraction):
    """Fixed-leaf pair phase of the Heisenberg kernel: -triangle/z."""
    zq = Fraction(z)

    def phase(P, Q, T):
        return triangle_phase(P, Q, T) * (Fraction(-1) / zq)

    return phase


@dataclass(frozen=True)
class AssocVerdict:
    equal: bool
    witness: dict | None  # variable assignment where the phases differ


def _rref(rows):
    """Reduced row echelon form over Fraction; rows are lists (last = const)."""
    rows = [list(r) for r in rows]
    n_cols = len(rows[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        f = rows[r][c]
        rows[r] = [x / f for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                g = rows[i][c]
                rows[i] = [x - g * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [row for row in rows if any(x != 0 for x in row)], pivots


def _linear_rows(poly: PhasePolynomial):
    """Affine form of a degree-<=1 polynomial as a coefficient row (vars..., const)."""
    row = [Fraction(0)] * (NVAR + 1)
    for k, v in poly.coeffs:
        deg = sum(k)
        if deg == 0:
            row[-1] = v
        elif deg == 1:
            row[k.index(1)] = v
        else:
            raise ValueError("delta constraint is not affine-linear")
    return row


def phase_associativity_check(phase_fn, n_witness_scan: int = 3) -> AssocVerdict:
    """Compare the two nested phases after exact delta elimination.

    `phase_fn(P, Q, T)` builds the cocycle phase through three points.  The
    left association composes through the intermediate w; equality holds iff
    the delta-constraint subspaces coincide and the residual phases agree on
    them.
    """
    a, b, c, x, w = _pt("a"), _pt("b"), _pt("c"), _pt("x"), _pt("w")
    # ((f g) h): pairs (x -> w -> a) with triangle(P=b, Q=w, T=a)? geometry per the
    # nested-integral domains: S(arrow w->a, arrow b->w) + S(arrow x->w, arrow c->x)
    lhs = phase_fn(b, w, a) + phase_fn(c, x, w)
    # (f (g h)): S(arrow x->a over w'?) : S(arrow w->... pairs (x->a with x'=w):
    rhs = phase_fn(w, x, a) + phase_fn(c, w, b)

    def eliminate(phase):
        """Integrate out w1, w2: delta constraints for linear coordinates,
        exact Fresnel completion for quadratic ones (constant leading term)."""
        constraints = []
        fresnels = []
        linear = [wi for wi in (W1, W2) if phase.degree_in(wi) <= 1]
        quadratic = [wi for wi in (W1, W2) if phase.degree_in(wi) == 2]
        if any(phase.degree_in(wi) > 2 for wi in (W1, W2)):
            raise ValueError("phase has degree > 2 in the intermediate")
        for wi in linear:
            beta = phase.coefficient_of(wi)
            for wo in (W1, W2):
                if wo != wi and beta.degree_in(wo) > 0:
                    raise ValueError("phase couples the intermediate coordinates bilinearly")
            constraints.append(beta)
            phase = phase.drop(wi)
        for wi in quadratic:
            quad_part = {tuple(0 if i == wi else e for i, e in enumerate(k)): v
                         for k, v in phase.coeffs if k[wi] == 2}
            if list(quad_part.keys()) != [tuple([0] * NVAR)]:
                raise ValueError("quadratic intermediate term is not constant")
            alpha = quad_part[tuple([0] * NVAR)]
            beta = phase.coefficient_of_linear(wi)
            gamma = PhasePolynomial.make({k: v for k, v in phase.coeffs if k[wi] == 0})
            # int dw exp(i(alpha w^2 + beta w)) ~ exp(-i beta^2/(4 alpha)) x const(alpha)
            phase = gamma - beta * beta * (Fraction(1) / (4 * alpha))
            fresnels.append(alpha)
        return phase, constraints, tuple(fresnels)

    k0_l, cons_l, fres_l = eliminate(lhs)
    k0_r, cons_r, fres_r = eliminate(rhs)
    if fres_l != fres_r:
        return AssocVerdict(False, {"reason": "Fresnel prefactors differ"})

    rref_l, piv_l = _rref([_linear_rows(p) for p in cons_l])
    rref_r, piv_r = _rref([_linear_rows(p) for p in cons_r])
    if rref_l != rref_r:
        return AssocVerdict(False, {"reason": "delta constraints differ"})

    # reduce the phase difference modulo the constraints: substitute pivots
    diff = k0_l - k0_r
    for row, pc in zip(rref_l, piv_l):
        repl = {}
        base = [0] * NVAR
        repl_poly = PhasePolynomial.const(-row[-1])
        for j in range(NVAR):
            if j != pc and row[j] != 0:
                e = [0] * NVAR
                e[j] = 1
                repl_poly = repl_poly - PhasePolynomial.make({tuple(e): row[j]})
        diff = diff.substitute(pc, repl_poly)
    if diff.is_zero():
        return AssocVerdict(True, None)
    # find a rational witness satisfying the constraints where diff != 0
    free = [j for j in range(NVAR) if j not in piv_l and j not in (W1, W2)]
    from itertools import product

    for vals in product(range(-n_witness_scan, n_witness_scan + 1), repeat=len(free)):
        assign = {VARS[j]: Fraction(v) for j, v in zip(free, vals)}
        if diff.evaluate(assign) != 0:
            for row, pc in zip(rref_l, piv_l):
                val = -row[-1] - sum(row[j] * assign.get(VARS[j], Fraction(0)) for j in range(NVAR) if j != pc)
                assign[VARS[pc]] = val
            return AssocVerdict(False, {k: str(v) for k, v in assign.items()})
    return AssocVerdict(False, {"reason": "nonzero residual phase (no small witness found)"})
