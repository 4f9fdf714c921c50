"""Shared test utilities: independent oracles and samplers.

The matrix oracle realizes the Heisenberg-type lattice inside 3x3
unitriangular matrices, where exp and log are exact quadratic polynomials;
it shares no code with the series evaluation it checks.  The lattice
oracle computes ultrametric least distances to a finitely generated
right-ideal lattice by weighted elimination, independently of the
symbol-rewriting canonicalizer.
"""

import math
from fractions import Fraction

INF = math.inf


# ---------------------------------------------------------------------------
# exact 3x3 unitriangular oracle for [X1, X2] = c X3

def _matmul3(A, B):
    return [
        [sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)]
        for i in range(3)
    ]


def heisenberg_mat_exp(coords, c):
    """exp of x1*(c E12) + x2*E23 + x3*E13; exact since strictly upper."""
    x1, x2, x3 = coords
    E = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    E[0][1] = c * x1
    E[1][2] = Fraction(x2)
    E[0][2] = Fraction(x3) + c * x1 * x2 / 2
    return E

def heisenberg_mat_log(E, c):
    A01, A12, A02 = E[0][1], E[1][2], E[0][2]
    return (A01 / c, A12, A02 - A01 * A12 / 2)


def heisenberg_bch_oracle(x, y, c):
    """First-kind coordinates of exp(x)exp(y) through the matrix model."""
    return heisenberg_mat_log(
        _matmul3(heisenberg_mat_exp(x, c), heisenberg_mat_exp(y, c)), c
    )


def heisenberg_second_kind_oracle(coords, c):
    """Second-kind coordinates via ordered matrix products."""
    # solve exp(a c E12) exp(b E23) exp(e E13) = exp(coords) entrywise
    E = heisenberg_mat_exp(coords, c)
    a = E[0][1] / c
    b = E[1][2]
    e = E[0][2] - c * a * b
    return (a, b, e)


# ---------------------------------------------------------------------------
# ultrametric lattice-distance oracle

class LatticeOracle:
    """Least distance to the span of given distributions, at a fixed radius."""

    def __init__(self, span, r):
        self.r = r
        if span:
            self.kappa = span[0].algebra.kappa
        self.basis = []
        self._echelonize([v for v in span if not v.is_zero])

    def _exp(self, alpha, coeff):
        return coeff.abs_exponent() + self.kappa * sum(alpha) * self.r.exponent

    def _norm(self, v):
        return min((self._exp(a, c) for a, c in v.coeffs.items()), default=INF)

    def _leads(self, v):
        q = self._norm(v)
        return [a for a, c in v.coeffs.items() if self._exp(a, c) == q]

    def _echelonize(self, pending):
        while pending:
            best_i, best_q = None, None
            for i, v in enumerate(pending):
                q = self._norm(v)
                if q is not INF and (best_q is None or q < best_q):
                    best_i, best_q = i, q
            if best_i is None:
                return
            v = pending.pop(best_i)
            while not v.is_zero:
                leads = self._leads(v)
                hit = next(((p, pv) for (p, pv) in self.basis if p in leads), None)
                if hit is None:
                    break
                p, pv = hit
                v = v - pv.scale(v.coeffs[p] * pv.coeffs[p].inv())
            if v.is_zero:
                continue
            self.basis.append((sorted(self._leads(v))[0], v))

    def distance(self, lam, step_cap=500):
        """Exact norm distance from lam to the span (exponent; INF if inside)."""
        v = lam
        for _ in range(step_cap):
            if v.is_zero:
                return INF
            leads = self._leads(v)
            hit = next(
                ((a, pv) for a in leads for (p, pv) in self.basis if p == a), None
            )
            if hit is None:
                return self._norm(v)
            a, pv = hit
            v = v - pv.scale(v.coeffs[a] * pv.coeffs[a].inv())
        raise RuntimeError("distance reduction did not stabilize")


def random_scalar(field, rng, valuation_window=2, allow_negative=False):
    lo = -valuation_window if allow_negative else 0
    unit = field.scalar(rng.randrange(1, field.p))
    if field.f > 1 and rng.randrange(2):
        unit = unit + field.unram_gen() * rng.randrange(1, field.p)
    return unit * field.uniformizer() ** rng.randrange(lo, valuation_window + 1)


def random_support(algebra, rng, max_degree, max_terms=3, valuation_window=2):
    terms = {}
    for _ in range(rng.randrange(1, max_terms + 1)):
        alpha = tuple(rng.randrange(0, max_degree + 1) for _ in range(algebra.d))
        if sum(alpha) > max_degree:
            continue
        terms[alpha] = random_scalar(algebra.field, rng, valuation_window)
    if not terms:
        terms[(0,) * algebra.d] = algebra.field.one()
    return algebra.from_terms(terms)
