"""Finite differences on Z_p^d and distribution-algebra structure constants.

The product law of the generator monomials b^alpha is recovered from the
group itself: writing F(x, y) for the second-kind coordinates of
h^x * h^y, the coefficients c of b^alpha b^beta = sum_gamma c * b^gamma
are the joint finite differences of (x, y) -> binom(F(x, y), gamma) over
integer grid points.  Everything is computed in exact rational
arithmetic; rows are built on demand and memoized, and the whole table
serializes to a versioned cache file keyed by (group digest, N, M).
"""

from __future__ import annotations

import pickle
from fractions import Fraction
from math import gcd
from pathlib import Path

from .errors import CounterexampleFound, DegreeOverflow
from .indices import (
    add_index,
    iter_box,
    iter_multi_indices,
    le_componentwise,
    multi_binom,
)
from .radii import vp_rational

CACHE_FORMAT_VERSION = 1


def binom_rational(t, k):
    """binom(t, k) for a rational (or integer) upper argument."""
    t = Fraction(t)
    out = Fraction(1)
    for i in range(k):
        out *= (t - i) / (i + 1)
    return out


def mahler_coefficients(values, N, d):
    """Mahler table of a grid function: c_alpha for |alpha| <= N.

    ``values`` maps integer points of the simplex {|x| <= N} to ring
    elements (anything supporting +, - and integer scaling); c_alpha =
    sum_{beta <= alpha} (-1)^{|alpha - beta|} binom(alpha, beta) f(beta).
    """
    get = values.__getitem__ if hasattr(values, "__getitem__") else values
    coeffs = {}
    for alpha in iter_multi_indices(d, N):
        acc = None
        for beta in iter_box(alpha):
            sign = (-1) ** (sum(alpha) - sum(beta))
            term = get(beta) * (sign * multi_binom(alpha, beta))
            acc = term if acc is None else acc + term
        coeffs[alpha] = acc
    return MahlerTable(coeffs, N, d)


class MahlerTable:
    """Finitely supported Mahler coefficients with a degree bound."""

    def __init__(self, coeffs, N, d):
        self.coeffs = coeffs
        self.N = N
        self.d = d

    def __getitem__(self, alpha):
        return self.coeffs[alpha]

    def reconstruct(self, x):
        """sum_alpha c_alpha binom(x, alpha) at an integer point of the simplex."""
        acc = None
        for alpha, c in self.coeffs.items():
            if not le_componentwise(alpha, x):
                continue
            term = c * multi_binom(x, alpha)
            acc = term if acc is None else acc + term
        return acc


class StructureConstants:
    """Lazy table of the product-law coefficients c^gamma_{alpha beta}.

    Rows are exact: the value at every stored gamma (|gamma| <= N) is the
    true coefficient, obtained from finite differences of the group law,
    not from truncated series chaining.  ``has_tail(alpha, beta)`` reports
    whether degrees beyond N were discarded for that row.
    """

    def __init__(self, lattice, N, cache_dir=None):
        self.lattice = lattice
        self.N = N
        self._first_kind = {}   # grid point -> first-kind coords
        self._law = {}          # (x, y) -> second-kind coords of h^x h^y
        self._expansion = {}    # (x, y) -> {gamma: binom(F(x,y), gamma)}
        self._rows = {}         # (alpha, beta) -> {gamma: Fraction}
        self._gammas = list(iter_multi_indices(lattice.d, N))
        self._cache_path = None
        if cache_dir is not None:
            key = f"sc-{lattice.structure_digest()}-N{N}-M{lattice.precision}-v{CACHE_FORMAT_VERSION}"
            self._cache_path = Path(cache_dir) / f"{key}.bin"
            self._load_cache()

    # -- group-law evaluation ---------------------------------------------------

    def _point(self, x):
        coords = self._first_kind.get(x)
        if coords is None:
            g = self.lattice.element_second(tuple(Fraction(c) for c in x))
            coords = g.first()
            self._first_kind[x] = coords
        return coords

    def group_law(self, x, y):
        """Second-kind coordinates of h^x h^y at integer points."""
        key = (x, y)
        out = self._law.get(key)
        if out is None:
            z = self.lattice.bch(self._point(x), self._point(y))
            out = self.lattice.element_first(z).second()
            for c in out:
                if vp_rational(c, self.lattice.p) < 0:
                    raise CounterexampleFound(
                        "group law left Z_p; the lattice is not powerful enough",
                        witness=(x, y, out),
                    )
            self._law[key] = out
        return out

    def expansion(self, x, y):
        """binom(F(x, y), gamma) for all |gamma| <= N.

        Stored integer-scaled as (ints, D) with value = ints[gamma] / D;
        D is prime to p, so valuations are unaffected.
        """
        key = (x, y)
        out = self._expansion.get(key)
        if out is None:
            F = self.group_law(x, y)
            d = self.lattice.d
            # one-dimensional binomial ladders per coordinate
            ladders = []
            for k in range(d):
                row = [Fraction(1)]
                for j in range(self.N):
                    row.append(row[-1] * (F[k] - j) / (j + 1))
                ladders.append(row)
            vals = {}
            denom = 1
            for gamma in self._gammas:
                val = Fraction(1)
                for k in range(d):
                    if gamma[k]:
                        val *= ladders[k][gamma[k]]
                if val:
                    vals[gamma] = val
                    denom = denom * val.denominator // gcd(denom, val.denominator)
            out = ({g: int(v * denom) for g, v in vals.items()}, denom)
            self._expansion[key] = out
        return out

    # -- rows ---------------------------------------------------------------------

    def row(self, alpha, beta):
        """c^gamma_{alpha beta} for |gamma| <= N, as a sparse dict."""
        if sum(alpha) > self.N or sum(beta) > self.N:
            raise DegreeOverflow(
                f"row ({alpha}, {beta}) outside the degree-{self.N} table",
                required_degree=max(sum(alpha), sum(beta)),
            )
        key = (alpha, beta)
        out = self._rows.get(key)
        if out is None and self.lattice.abelian:
            gamma = add_index(alpha, beta)
            out = {gamma: Fraction(1)} if sum(gamma) <= self.N else {}
            self._rows[key] = out
        if out is None:
            ta, tb = sum(alpha), sum(beta)
            box_a = list(iter_box(alpha))
            box_b = list(iter_box(beta))
            pieces = []
            denom = 1
            for x in box_a:
                wa = multi_binom(alpha, x) * (-1) ** (ta - sum(x))
                for y in box_b:
                    w = wa * multi_binom(beta, y) * (-1) ** (tb - sum(y))
                    ints, dd = self.expansion(x, y)
                    pieces.append((w, ints, dd))
                    denom = denom * dd // gcd(denom, dd)
            acc = {}
            for w, ints, dd in pieces:
                scale = w * (denom // dd)
                for gamma, val in ints.items():
                    acc[gamma] = acc.get(gamma, 0) + scale * val
            out = {g: Fraction(v, denom) for g, v in acc.items() if v}
            self._rows[key] = out
        return out

    def has_tail(self, alpha, beta):
        """Whether the (alpha, beta) product may have terms beyond degree N."""
        if self.lattice.abelian:
            return sum(alpha) + sum(beta) > self.N
        return True

    def materialize(self):
        """Build every row with |alpha|, |beta| <= N; returns the row count."""
        count = 0
        for alpha in self._gammas:
            for beta in self._gammas:
                self.row(alpha, beta)
                count += 1
        if self._cache_path is not None:
            self.save()
        return count

    # -- verification ----------------------------------------------------------

    def check_filtration_bound(self):
        """v_p(c) >= kappa (|alpha| + |beta| - |gamma|) over the whole table.

        Materializes the table; raises CounterexampleFound on violation and
        returns the number of entries checked.
        """
        kappa = self.lattice.kappa
        p = self.lattice.p
        checked = 0
        for alpha in self._gammas:
            for beta in self._gammas:
                for gamma, c in self.row(alpha, beta).items():
                    lower = kappa * (sum(alpha) + sum(beta) - sum(gamma))
                    if vp_rational(c, p) < lower:
                        raise CounterexampleFound(
                            "structure-constant valuation bound fails",
                            witness=(alpha, beta, gamma, c),
                        )
                    checked += 1
        if self._cache_path is not None:
            self.save()
        return checked

    def verify_convolution(self, x, y):
        """Check the characterizing grid identity at one integer pair.

        Expands delta_{h^x} delta_{h^y} through the table and compares with
        delta at the group-law point, coefficientwise up to degree N.
        """
        lhs = {}
        for alpha in self._gammas:
            ca = multi_binom(x, alpha) if le_componentwise(alpha, x) else 0
            if not ca:
                continue
            for beta in self._gammas:
                cb = multi_binom(y, beta) if le_componentwise(beta, y) else 0
                if not cb:
                    continue
                for gamma, val in self.row(alpha, beta).items():
                    lhs[gamma] = lhs.get(gamma, Fraction(0)) + ca * cb * val
        F = self.group_law(x, y)
        for gamma in self._gammas:
            expect = Fraction(1)
            for k in range(self.lattice.d):
                if gamma[k]:
                    expect *= binom_rational(F[k], gamma[k])
            if lhs.get(gamma, Fraction(0)) != expect:
                return False
        return True

    # -- cache -------------------------------------------------------------------

    def save(self):
        path = self._cache_path
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            "version": CACHE_FORMAT_VERSION,
            "digest": self.lattice.structure_digest(),
            "N": self.N,
            "M": self.lattice.precision,
            "rows": {
                key: {g: (v.numerator, v.denominator) for g, v in row.items()}
                for key, row in self._rows.items()
            },
        }
        with open(path, "wb") as fh:
            pickle.dump(payload, fh, protocol=4)

    def _load_cache(self):
        path = self._cache_path
        if path is None or not path.exists():
            return
        try:
            with open(path, "rb") as fh:
                payload = pickle.load(fh)
        except Exception:
            return
        if (
            payload.get("version") != CACHE_FORMAT_VERSION
            or payload.get("digest") != self.lattice.structure_digest()
            or payload.get("N") != self.N
            or payload.get("M") != self.lattice.precision
        ):
            return
        self._rows = {
            key: {g: Fraction(n, ddd) for g, (n, ddd) in row.items()}
            for key, row in payload["rows"].items()
        }


def chu_vandermonde_identity(table, alpha, beta):
    """Abelian-case oracle: the row is the single entry 1 at gamma = alpha+beta."""
    gamma = add_index(alpha, beta)
    row = table.row(alpha, beta)
    if sum(gamma) > table.N:
        return row == {}
    return row == {gamma: Fraction(1)}
