"""The truncated Banach-algebra model of distributions on a uniform group.

Elements are finitely supported series sum_alpha d_alpha b^alpha with
coefficients in K and support degree bounded by the truncation N; the
norm at a radius r = p^(-a/b) is sup |d_alpha| r^(kappa |alpha|), held in
exponent space.  Multiplication goes through the structure-constant
table: stored coefficients of a product are always the true ones, and
whatever lies beyond degree N is covered by a certified tail bound
(``mul_tail_bound``), so norm and symbol claims under the degree
precondition deg(lambda) + deg(mu) <= N are exact.

Distribution literals read and print as ``coeff * b1^2*b2 + ...``; the
coefficient grammar admits integers, fractions, ``p``, ``pi``, ``w`` and
products/powers of these.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import DegreeOverflow, ParseError, ZeroDistribution
from .grading import Symbol, SymbolContext
from .indices import grlex_key, iter_multi_indices, unit_index
from .mahler import StructureConstants, binom_rational
from .radii import NormValue, dominant_log_index, log_tail_exponent

INF = math.inf


class DistAlgebra:
    """The degree-N model of the distribution algebra of a lattice group."""

    def __init__(self, lattice, field, N, cache_dir=None):
        if field.p != lattice.p:
            raise ValueError("field and lattice have different primes")
        self.lattice = lattice
        self.field = field
        self.N = N
        self.table = StructureConstants(lattice, N, cache_dir=cache_dir)
        self.labels = lattice.labels
        self.xlabels = tuple("X" + lab[1:] for lab in self.labels)

    @property
    def d(self):
        return self.lattice.d

    @property
    def kappa(self):
        return self.lattice.kappa

    def symbol_context(self, r):
        return SymbolContext(self.field, self.kappa, r.exponent, self.xlabels)

    # -- constructors -----------------------------------------------------------

    def zero(self):
        return Distribution(self, {})

    def one(self):
        return Distribution(self, {(0,) * self.d: self.field.one()})

    def generator(self, i):
        """The series generator b_{i+1} = h_{i+1} - 1."""
        return Distribution(self, {unit_index(self.d, i): self.field.one()})

    def monomial(self, alpha, coeff=1):
        alpha = tuple(alpha)
        if sum(alpha) > self.N:
            raise DegreeOverflow(f"monomial degree {sum(alpha)} exceeds N = {self.N}")
        c = self.field.scalar(coeff)
        return Distribution(self, {} if c.is_zero else {alpha: c})

    def from_terms(self, terms):
        out = {}
        for alpha, c in terms.items():
            alpha = tuple(alpha)
            if sum(alpha) > self.N:
                raise DegreeOverflow(f"support degree {sum(alpha)} exceeds N = {self.N}")
            c = self.field.scalar(c)
            if not c.is_zero:
                out[alpha] = c
        return Distribution(self, out)

    def delta(self, g):
        """The image of a group element: coefficients binom(x, alpha) in the
        second-kind coordinates x."""
        x = g.second()
        terms = {}
        for alpha in iter_multi_indices(self.d, self.N):
            val = Fraction(1)
            for k in range(self.d):
                if alpha[k]:
                    val *= binom_rational(x[k], alpha[k])
            if val:
                terms[alpha] = self.field.scalar(val)
        return Distribution(self, terms)

    def log_series(self, i):
        """Degree-N truncation of log(1 + b_{i+1}).

        The discarded tail has norm exponent ``log_tail_exponent(N, r,
        kappa, p)`` at every radius r.
        """
        terms = {}
        for k in range(1, self.N + 1):
            coeff = Fraction((-1) ** (k - 1), k)
            terms[tuple(k if j == i else 0 for j in range(self.d))] = self.field.scalar(coeff)
        return Distribution(self, terms, truncated=True)

    # -- multiplication ----------------------------------------------------------

    def mul(self, lam, mu, strict=False):
        """Product through the structure-constant table.

        Stored coefficients (degree <= N) are exact; when the combined
        support degree exceeds N the result is a truncation and, in strict
        mode, DegreeOverflow is raised instead.
        """
        if strict and lam.degree + mu.degree > self.N:
            raise DegreeOverflow(
                f"strict product of degrees {lam.degree} + {mu.degree} > N = {self.N}",
                required_degree=lam.degree + mu.degree,
            )
        acc = {}
        truncated = lam.truncated or mu.truncated
        for alpha, da in lam.coeffs.items():
            for beta, eb in mu.coeffs.items():
                weight = da * eb
                for gamma, c in self.table.row(alpha, beta).items():
                    prev = acc.get(gamma)
                    term = weight.scale(c)
                    acc[gamma] = term if prev is None else prev + term
                truncated = truncated or self.table.has_tail(alpha, beta)
        return Distribution(
            self, {g: v for g, v in acc.items() if not v.is_zero}, truncated=truncated
        )

    # -- parsing / printing --------------------------------------------------------

    def parse(self, text):
        return _parse_distribution(self, text)

    def format(self, dist):
        if not dist.coeffs:
            return "0"
        parts = []
        for alpha in sorted(dist.coeffs, key=grlex_key):
            c = dist.coeffs[alpha]
            mono = "*".join(
                f"{self.labels[k]}^{alpha[k]}" if alpha[k] > 1 else self.labels[k]
                for k in range(self.d)
                if alpha[k]
            )
            cs = c.short_str()
            if " + " in cs:
                cs = f"({cs})"
            if mono:
                parts.append(f"{cs} * {mono}" if cs != "1" else mono)
            else:
                parts.append(cs)
        return " + ".join(parts)


class Distribution:
    """A finitely supported series over the generator monomials."""

    __slots__ = ("algebra", "coeffs", "truncated")

    def __init__(self, algebra, coeffs, truncated=False):
        self.algebra = algebra
        self.coeffs = coeffs
        self.truncated = truncated

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        """Max support degree (-inf when zero)."""
        return max((sum(a) for a in self.coeffs), default=-INF)

    def __add__(self, other):
        out = dict(self.coeffs)
        for alpha, c in other.coeffs.items():
            prev = out.get(alpha)
            s = c if prev is None else prev + c
            if s.is_zero:
                out.pop(alpha, None)
            else:
                out[alpha] = s
        return Distribution(self.algebra, out, self.truncated or other.truncated)

    def __neg__(self):
        return Distribution(
            self.algebra, {a: -c for a, c in self.coeffs.items()}, self.truncated
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Distribution):
            return self.algebra.mul(self, other)
        return self.scale(other)

    def scale(self, c):
        c = self.algebra.field.scalar(c)
        if c.is_zero:
            return Distribution(self.algebra, {}, self.truncated)
        return Distribution(
            self.algebra, {a: v * c for a, v in self.coeffs.items()}, self.truncated
        )

    def norm(self, r):
        """sup_alpha |d_alpha| r^(kappa |alpha|), as a NormValue exponent."""
        if not self.coeffs:
            return NormValue(INF)
        kappa = self.algebra.kappa
        q = min(
            c.abs_exponent() + kappa * sum(alpha) * r.exponent
            for alpha, c in self.coeffs.items()
        )
        return NormValue(q)

    def term_exponent(self, alpha, r):
        c = self.coeffs[alpha]
        return c.abs_exponent() + self.algebra.kappa * sum(alpha) * r.exponent

    def leading_support(self, r):
        """Support indices attaining the norm."""
        if not self.coeffs:
            return []
        q = self.norm(r).exponent
        return [a for a in self.coeffs if self.term_exponent(a, r) == q]

    def principal_symbol(self, r):
        """The leading form in the graded ring k[e0^(+-1)][X..]."""
        if not self.coeffs:
            raise ZeroDistribution("the zero distribution has no principal symbol")
        ctx = self.algebra.symbol_context(r)
        terms = {}
        for alpha in self.leading_support(r):
            c = self.coeffs[alpha]
            terms[(c.valuation, alpha)] = c.leading_residue()
        return Symbol(ctx, terms)

    def __eq__(self, other):
        return (
            isinstance(other, Distribution)
            and self.algebra is other.algebra
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"Dist({self.algebra.format(self)})"


def mul_tail_bound(lam, mu, r):
    """Certified norm-exponent lower bound for what mul() discards.

    For each support pair the dropped coefficients at degree g > N satisfy
    v_p(c) >= max(0, kappa (|alpha|+|beta| - g)), so the dropped term
    exponent is minimized at g = N+1 or g = |alpha|+|beta|; both endpoint
    bounds are taken.  Returns +inf when nothing can have been discarded.
    """
    alg = lam.algebra
    N, kappa, rexp = alg.N, alg.kappa, r.exponent
    best = INF
    for alpha, da in lam.coeffs.items():
        for beta, eb in mu.coeffs.items():
            if not alg.table.has_tail(alpha, beta):
                continue
            base = da.abs_exponent() + eb.abs_exponent()
            tot = sum(alpha) + sum(beta)
            cand1 = base + kappa * max(0, tot - (N + 1)) + kappa * (N + 1) * rexp
            cand2 = base + kappa * max(N + 1, tot) * rexp
            best = min(best, cand1, cand2)
    return best


def log_series_tail(algebra, r):
    """Tail bound of the truncated log series at radius r."""
    return log_tail_exponent(algebra.N, r, algebra.kappa, algebra.lattice.p)


# ---------------------------------------------------------------------------
# text form

_TOKEN_RE = re.compile(r"\s*([+-]|\*|\^|/|\d+|pi|p|w|b\d+)")


def _parse_distribution(algebra, text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected input {text[pos:pos + 8]!r}", position=pos)
        tokens.append((m.group(1), pos))
        pos = m.end()
    if not tokens:
        raise ParseError("empty distribution literal", position=0)

    field = algebra.field
    terms = {}
    idx = 0

    def peek():
        return tokens[idx][0] if idx < len(tokens) else None

    while idx < len(tokens):
        sign = 1
        while peek() in ("+", "-"):
            if peek() == "-":
                sign = -sign
            idx += 1
        coeff = field.scalar(sign)
        alpha = [0] * algebra.d
        expect_factor = True
        while True:
            tok = peek()
            if tok is None or tok in ("+", "-"):
                break
            if tok == "*":
                idx += 1
                expect_factor = True
                continue
            if not expect_factor:
                break
            base_pos = tokens[idx][1]
            idx += 1
            power = 1
            if peek() == "^":
                idx += 1
                if peek() is None or not peek().isdigit():
                    raise ParseError("exponent must be an integer", position=base_pos)
                power = int(peek())
                idx += 1
            if tok.isdigit():
                num = int(tok)
                if peek() == "/":
                    idx += 1
                    if peek() is None or not peek().isdigit():
                        raise ParseError("bad fraction", position=base_pos)
                    coeff = coeff * Fraction(num, int(peek())) ** power
                    idx += 1
                else:
                    coeff = coeff * Fraction(num) ** power
            elif tok == "p":
                coeff = coeff * Fraction(field.p) ** power
            elif tok == "pi":
                coeff = coeff * field.uniformizer() ** power
            elif tok == "w":
                coeff = coeff * field.unram_gen() ** power
            elif tok.startswith("b"):
                k = _generator_index(algebra, tok, base_pos)
                alpha[k] += power
            expect_factor = False
        key = tuple(alpha)
        if sum(key) > algebra.N:
            raise ParseError(f"monomial degree {sum(key)} exceeds N = {algebra.N}")
        prev = terms.get(key)
        terms[key] = coeff if prev is None else prev + coeff
    return Distribution(algebra, {a: c for a, c in terms.items() if not c.is_zero})


def _generator_index(algebra, token, pos):
    try:
        return algebra.labels.index(token)
    except ValueError:
        raise ParseError(f"unknown generator {token!r}", position=pos) from None


def radius_for(algebra, text):
    from .radii import parse_radius

    _, r = parse_radius(text, p=algebra.field.p)
    return r


def dominant_index(algebra, r):
    return dominant_log_index(r, algebra.kappa, algebra.lattice.p)
