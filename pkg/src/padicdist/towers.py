"""Lower-p-series subalgebras: restriction, orthogonal systems and transfer.

The m-th step subalgebra is generated by b'_i = (1 + b_i)^(p^m) - 1.  The
norm of the ambient algebra restricts on it to the intrinsic norm at the
radius r^(p^m) whenever r^(kappa (p^m - 1)) > p^(-1); outside that range
the generator norm flips to |p| r^kappa, which the hypothesis probe
reports.  The p-power-root radius family delta^(1/p^m) transfers the
quotient norm of a locally analytic group to the intrinsic norm of a deep
step; the transfer check certifies exact exponent equality on the
step-generator monomial sublattice through a nonvanishing-symbol
certificate in the graded quotient, and reports two-sided exponent data
for general combinations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .distalg import DistAlgebra
from .errors import (
    ConditionFailed,
    CounterexampleFound,
    DegreeOverflow,
    HypothesisFailed,
    InjectivityFailed,
    UniqueAttainmentFailed,
)
from .grading import symbol_class_nonzero
from .indices import iter_multi_indices
from .padics import rational_mod_prime_power
from .radii import radius_root

INF = math.inf


def step_generator(algebra, i, m):
    """b'_i = (1 + b_i)^(p^m) - 1, expanded exactly."""
    p = algebra.lattice.p
    q = p**m
    if q > algebra.N:
        raise DegreeOverflow(
            f"step generator needs degree {q} > N = {algebra.N}", required_degree=q
        )
    terms = {}
    for k in range(1, q + 1):
        terms[tuple(k if t == i else 0 for t in range(algebra.d))] = math.comb(q, k)
    return algebra.from_terms(terms)


def step_monomial(algebra, alpha, m):
    """The ordered monomial b'_1^(alpha_1) ... b'_d^(alpha_d)."""
    p = algebra.lattice.p
    if p**m * sum(alpha) > algebra.N:
        raise DegreeOverflow(
            f"step monomial degree {p**m * sum(alpha)} > N = {algebra.N}",
            required_degree=p**m * sum(alpha),
        )
    out = algebra.one()
    for i, a in enumerate(alpha):
        gen = step_generator(algebra, i, m) if a else None
        for _ in range(a):
            out = algebra.mul(out, gen)
    return out


def restriction_hypothesis(r, m, kappa, p):
    """r^(kappa (p^m - 1)) > p^(-1), as an exact rational comparison."""
    return kappa * (p**m - 1) * r.exponent < 1


def boundary_probe(algebra, r):
    """Generator norm at a radius violating the m = 1 hypothesis.

    Returns (actual exponent of ||b'_1||_r, expected exponent of |p| r^kappa).
    """
    gen = step_generator(algebra, 0, 1)
    return gen.norm(r).exponent, 1 + algebra.kappa * r.exponent


def restriction_check(algebra, m, r, samples, rng, max_alpha_degree=None):
    """Exact agreement of the restricted norm with the intrinsic step norm.

    Samples finitely supported combinations of step-generator monomials,
    expands them in the ambient algebra and compares ||.||_r with the
    intrinsic formula at the radius exponent p^m * (a/b), exactly.
    Raises HypothesisFailed with the boundary probe outside the admissible
    radius range, and CounterexampleFound on any norm disagreement.
    """
    lat = algebra.lattice
    p, kappa = lat.p, algebra.kappa
    if not restriction_hypothesis(r, m, kappa, p):
        actual, expected = boundary_probe(algebra, r)
        raise HypothesisFailed(
            f"radius violates r^(kappa(p^m - 1)) > 1/p at m = {m}",
            probe={"actual": actual, "expected": expected,
                   "matches": actual == expected},
        )
    sub_exponent = (p**m) * r.exponent
    cap = max_alpha_degree or max(1, algebra.N // p**m)
    records = []
    field = algebra.field
    for _ in range(samples):
        support = {}
        for _t in range(rng.randrange(1, 4)):
            alpha = tuple(rng.randrange(0, cap + 1) for _ in range(lat.d))
            if p**m * sum(alpha) > algebra.N:
                continue
            coeff = field.uniformizer() ** rng.randrange(0, 3) * field.scalar(
                rng.randrange(1, p)
            )
            support[alpha] = coeff
        if not support:
            support[(0,) * lat.d] = field.one()
        big = algebra.zero()
        intrinsic = INF
        for alpha, c in support.items():
            big = big + step_monomial(algebra, alpha, m).scale(c)
            intrinsic = min(
                intrinsic, c.abs_exponent() + kappa * sum(alpha) * sub_exponent
            )
        ambient = big.norm(r).exponent
        if ambient != intrinsic:
            raise CounterexampleFound(
                "restriction norm mismatch",
                witness=(support, ambient, intrinsic),
            )
        records.append({"support_size": len(support), "exponent": ambient})
    return records


def orthogonal_system_check(system, r, trials, rng, valuation_window=2):
    """Orthogonality certificate for a finite system of distributions.

    Each element must attain its norm at a unique support index and the
    induced index map must be injective; then the max formula is verified
    on random coefficient vectors.  Returns {"iota": ..., "basis": ...},
    where "basis" reports whether the attainment indices exhaust the
    degree-N simplex.
    """
    if not system:
        return {"iota": {}, "basis": False}
    algebra = system[0].algebra
    iota = {}
    for idx, t in enumerate(system):
        leads = t.leading_support(r)
        if len(leads) != 1:
            raise UniqueAttainmentFailed(
                f"element {idx} attains its norm at {len(leads)} indices"
            )
        iota[idx] = leads[0]
    if len(set(iota.values())) != len(system):
        raise InjectivityFailed("attainment indices collide")
    field = algebra.field
    for _ in range(trials):
        combo = algebra.zero()
        expected = INF
        for t in system:
            v = rng.randrange(0, valuation_window + 1)
            c = field.scalar(rng.randrange(1, field.p)) * field.uniformizer() ** v
            combo = combo + t.scale(c)
            expected = min(expected, c.abs_exponent() + t.norm(r).exponent)
        if combo.norm(r).exponent != expected:
            raise CounterexampleFound(
                "orthogonal system max formula failed",
                witness=(iota, combo.norm(r).exponent, expected),
            )
    full = set(iter_multi_indices(algebra.d, algebra.N))
    return {"iota": iota, "basis": set(iota.values()) == full}


# ---------------------------------------------------------------------------
# coset systems

@dataclass
class CosetSystem:
    """Representatives of the step-subgroup cosets, identity first."""

    lattice: object
    m: int
    reps: list

    @property
    def index(self):
        return len(self.reps)


def lower_p_transversal(lattice, m):
    """The canonical transversal {h^beta : beta < p^m componentwise}."""
    p, d = lattice.p, lattice.d
    reps = []

    def rec(prefix):
        if len(prefix) == d:
            reps.append(lattice.element_second(tuple(prefix)))
            return
        for u in range(p**m):
            rec(prefix + [u])

    rec([])
    return CosetSystem(lattice, m, reps)


def coset_conditions(cs, rng, normality_samples=12):
    """Group-level crossed-product conditions for a coset system.

    Verifies normality of the step subgroup (by conjugation sampling),
    closure of representatives under products and inverses, and reports
    the index t with its absolute value.  Raises ConditionFailed naming
    the violated clause.
    """
    lat = cs.lattice
    p, m, d = lat.p, cs.m, lat.d
    mod = p**m

    def coset_key(g):
        return tuple(rational_mod_prime_power(c, p, m) for c in g.second())

    def in_subgroup(g):
        coords = g.second()
        return all(rational_mod_prime_power(c, p, m) == 0 for c in coords)

    if not cs.reps or any(cs.reps[0].second()):
        raise ConditionFailed("transversal must start with the identity")
    keys = {}
    for idx, g in enumerate(cs.reps):
        k = coset_key(g)
        if k in keys:
            raise ConditionFailed(f"representatives {keys[k]} and {idx} share a coset")
        keys[k] = idx

    for idx, g in enumerate(cs.reps):
        for _ in range(normality_samples):
            h = lat.element_second(
                tuple(mod * rng.randrange(0, p**2) for _ in range(d))
            )
            if not in_subgroup(h.conjugate(g)):
                raise ConditionFailed(f"normality fails at representative {idx}")

    for i, gi in enumerate(cs.reps):
        for j, gj in enumerate(cs.reps):
            prod = gi * gj
            k = keys.get(coset_key(prod))
            if k is None or not in_subgroup(cs.reps[k].inverse() * prod):
                raise ConditionFailed(f"product of reps {i}, {j} misses the transversal")
        inv = gi.inverse()
        k = keys.get(coset_key(inv))
        if k is None or not in_subgroup(cs.reps[k].inverse() * inv):
            raise ConditionFailed(f"inverse of rep {i} misses the transversal")

    t = cs.index
    return {
        "index": t,
        "index_abs_exponent": Fraction(m * d),
        "p_divides_index": m * d > 0,
        "invertible_in_K": True,  # characteristic zero
    }


# ---------------------------------------------------------------------------
# the p-power-root radius family and norm transfer

def delta_family(delta, p, kappa, count):
    """The radii delta^(1/p^m) for m = 0..count-1; increasing towards 1."""
    return [radius_root(delta, m, p, kappa) for m in range(count)]


def norm_transfer_check(lgspec, delta, m, samples, rng, max_alpha_degree=1,
                        cache_dir=None):
    """Transfer of the quotient norm to the level-(m + kappa - 1) step.

    For each sampled combination of step-generator monomials in the
    first-row variables the check computes (i) the ambient norm of its
    expansion at r = delta^(1/p^level), (ii) the intrinsic norm at delta
    in the step algebra, and (iii) a nonvanishing-symbol certificate in
    the graded quotient.  When the certificate holds, the restricted
    quotient norm equals the ambient norm, and exact equality with the
    intrinsic exponent is asserted; records carry both exponents so
    equivalence offsets are visible either way.
    """
    field = lgspec.field
    p, kappa = field.p, field.kappa
    if p != 2:
        level = m  # kappa = 1: r^(p^m) = delta
    else:
        level = m + 1  # kappa = 2: r^(p^(m+1)) = delta
    r = radius_root(delta, level, p, kappa)
    assert (p**level) * r.exponent == delta.exponent
    if not restriction_hypothesis(r, m, kappa, p):
        raise HypothesisFailed(
            "the root-family radius violates the restriction hypothesis",
            probe={"m": m, "exponent": r.exponent},
        )

    q = p**level
    N = q * max(1, max_alpha_degree)
    lattice = lgspec.restrict()
    algebra = DistAlgebra(lattice, field, N, cache_dir=cache_dir)
    vbars = [lgspec.residue_of_v(i) for i in range(1, lgspec.n + 1)]

    from .radii import dominant_log_index

    h = dominant_log_index(r, kappa, p)
    if h is None:
        raise HypothesisFailed("root-family radius is critical", probe={"m": m})

    records = []
    first_row = [lgspec.flat_index(1, j) for j in range(1, lgspec.d + 1)]
    for trial in range(samples):
        if trial == 0:
            support = {tuple(1 if j == 0 else 0 for j in range(lgspec.d)): field.one()}
        else:
            support = {}
            for _t in range(rng.randrange(1, 3)):
                alpha = tuple(
                    rng.randrange(0, max_alpha_degree + 1) for _ in range(lgspec.d)
                )
                coeff = field.uniformizer() ** rng.randrange(0, 2) * field.scalar(
                    rng.randrange(1, p)
                )
                support[alpha] = coeff
            if not support:
                continue
        big = algebra.zero()
        intrinsic = INF
        for alpha, c in support.items():
            mono = algebra.one()
            for j, a in enumerate(alpha):
                gen = step_generator(algebra, first_row[j], level) if a else None
                for _ in range(a):
                    mono = algebra.mul(mono, gen)
            big = big + mono.scale(c)
            intrinsic = min(
                intrinsic, c.abs_exponent() + kappa * sum(alpha) * delta.exponent
            )
        if big.is_zero:
            continue
        ambient = big.norm(r).exponent
        certificate = symbol_class_nonzero(
            big.principal_symbol(r), h, vbars, lgspec.n, lgspec.d
        )
        monomial_case = len(support) == 1
        if monomial_case and (not certificate or ambient != intrinsic):
            raise CounterexampleFound(
                "norm transfer failed on a step-generator monomial",
                witness=(support, ambient, intrinsic, certificate),
            )
        records.append(
            {
                "monomial": monomial_case,
                "ambient_exponent": ambient,
                "intrinsic_exponent": intrinsic,
                "certified_equal": bool(certificate),
                "offset": intrinsic - ambient,
            }
        )
    return records
