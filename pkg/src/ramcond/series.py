"""Truncated arithmetic in mixed power series rings over a p-adic base.

A ring spec fixes a prime p, a block of formal ("open disc") variables, a
block of power-bounded ("closed disc") variables and a total-degree cap D.
Series store exact rational coefficients indexed by exponent multi-indices of
total degree <= D; terms of higher degree are unknown and discarded.  Because
the grading is by total degree, ring operations are exact on the whole
window: degree-> D tails can never contribute to degree-<= D coefficients.

Coefficients may be any rationals; the coefficient's p-valuation is what the
Gauss/lattice valuation sees, and p-integrality (valuation >= 0) is the
lattice membership criterion.  Prime-to-p denominators are legitimate p-adic
integers and do occur, e.g. in multiplicative-group endomorphisms [r] with r
a p-integral rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf
from typing import NamedTuple

from .errors import CheckFailure, InputError
from .exact import is_prime, p_valuation

__all__ = [
    "SeriesRingSpec",
    "MixedSeries",
    "gauss_valuation",
    "series_arith",
    "is_lattice_member",
    "dilatation_member",
    "is_distinguished",
    "weierstrass_divide",
    "WeierstrassResult",
    "binomial_series_coefficient",
    "mult_endo",
    "endo_apply",
    "endo_to_scalar",
    "substitute",
    "symmetric_descent",
]


@dataclass(frozen=True)
class SeriesRingSpec:
    """Shape of a mixed power series ring: prime, variable blocks, degree cap."""

    p: int
    s_vars: tuple = ()
    t_vars: tuple = ()
    degree_cap: int = 16

    def __post_init__(self):
        object.__setattr__(self, "s_vars", tuple(self.s_vars))
        object.__setattr__(self, "t_vars", tuple(self.t_vars))
        if not is_prime(self.p):
            raise InputError(f"ring prime {self.p} is not prime")
        if self.degree_cap < 1:
            raise InputError("degree cap must be >= 1")
        names = self.s_vars + self.t_vars
        if len(set(names)) != len(names):
            raise InputError("variable names must be pairwise distinct")

    @property
    def variables(self):
        return self.s_vars + self.t_vars

    def index_of(self, name):
        try:
            return self.variables.index(name)
        except ValueError:
            raise InputError(f"unknown variable {name!r}") from None


class MixedSeries:
    """A truncated series: exponent multi-index -> nonzero rational coefficient."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        cleaned = {}
        nvars = len(ring.variables)
        for expo, c in coeffs.items():
            c = Fraction(c)
            if c == 0:
                continue
            expo = tuple(int(e) for e in expo)
            if len(expo) != nvars or any(e < 0 for e in expo):
                raise InputError(f"bad exponent multi-index {expo}")
            if sum(expo) > ring.degree_cap:
                continue
            cleaned[expo] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("MixedSeries is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, ring):
        return cls(ring, {})

    @classmethod
    def const(cls, ring, value):
        zero_expo = (0,) * len(ring.variables)
        return cls(ring, {zero_expo: Fraction(value)})

    @classmethod
    def variable(cls, ring, name):
        i = ring.index_of(name)
        expo = tuple(1 if j == i else 0 for j in range(len(ring.variables)))
        return cls(ring, {expo: Fraction(1)})

    # -- bookkeeping ---------------------------------------------------------

    def terms(self):
        """Deterministically ordered (exponent, coefficient) pairs."""
        return tuple(sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0])))

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def constant_term(self):
        return self.coeffs.get((0,) * len(self.ring.variables), Fraction(0))

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise InputError("series ring spec mismatch")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MixedSeries.const(self.ring, other)
        if not isinstance(other, MixedSeries):
            return NotImplemented
        self._check_ring(other)
        out = dict(self.coeffs)
        for expo, c in other.coeffs.items():
            out[expo] = out.get(expo, Fraction(0)) + c
        return MixedSeries(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MixedSeries(self.ring, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MixedSeries.const(self.ring, other)
        if not isinstance(other, MixedSeries):
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return MixedSeries(self.ring, {e: c * v for e, v in self.coeffs.items()})
        if not isinstance(other, MixedSeries):
            return NotImplemented
        self._check_ring(other)
        cap = self.ring.degree_cap
        out = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for e2, c2 in other.coeffs.items():
                if d1 + sum(e2) > cap:
                    continue
                expo = tuple(a + b for a, b in zip(e1, e2))
                out[expo] = out.get(expo, Fraction(0)) + c1 * c2
        return MixedSeries(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise InputError("negative series power")
        out = MixedSeries.const(self.ring, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MixedSeries):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    __hash__ = None

    def __str__(self):
        return render_series(self)

    def __repr__(self):
        return f"MixedSeries({self.ring!r}, {dict(self.terms())!r})"


def render_series(f):
    if f.is_zero():
        return "0"
    names = f.ring.variables
    parts = []
    for expo, c in f.terms():
        factors = []
        for name, e in zip(names, expo):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        elif c == -1:
            parts.append("-" + "*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    out = parts[0]
    for term in parts[1:]:
        out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return out


# ---------------------------------------------------------------------------
# valuations and lattice membership


def gauss_valuation(f):
    """Minimum p-valuation over stored coefficients; +infinity for zero."""
    if f.is_zero():
        return inf
    return min(p_valuation(c, f.ring.p) for c in f.coeffs.values())


def series_arith(f, g, op):
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise InputError(f"unknown series operation {op!r}")


def is_lattice_member(f):
    """True iff f lies in the distinguished integral lattice (valuation >= 0)."""
    return gauss_valuation(f) >= 0


def dilatation_member(f, n):
    """Coefficient criterion for the n-th dilatation lattice of the open disc.

    Requires a pure formal-variable ring (no power-bounded block).  A term
    with exponent multi-index m belongs iff its coefficient valuation is at
    least -floor(|m| / (n+1)).
    """
    if f.ring.t_vars:
        raise InputError("dilatation membership needs a ring without T-variables")
    if n < 0:
        raise InputError("dilatation index must be a natural number")
    p = f.ring.p
    for expo, c in f.coeffs.items():
        if p_valuation(c, p) < -(sum(expo) // (n + 1)):
            return False
    return True


# ---------------------------------------------------------------------------
# distinguished series and Weierstrass division


def is_distinguished(f, z):
    """Reduce modulo (p, all non-z variables); test for a nonzero non-unit.

    Returns (True, residual_order) when the reduction in the residue series
    ring has a positive, finite order within the window; (False, None)
    otherwise.  Series outside the integral lattice are never distinguished.
    """
    zi = f.ring.index_of(z)
    p = f.ring.p
    if not is_lattice_member(f):
        return False, None
    residual = {}
    for expo, c in f.coeffs.items():
        if any(e != 0 for j, e in enumerate(expo) if j != zi):
            continue
        if c.numerator % p != 0:
            residual[expo[zi]] = c
    if not residual:
        return False, None
    order = min(residual)
    if order == 0:
        return False, None
    return True, order


class WeierstrassResult(NamedTuple):
    q: MixedSeries
    r: MixedSeries
    certified_valuation: object  # int or math.inf when the division is exact


def _z_low(f, zi, n):
    return MixedSeries(f.ring, {e: c for e, c in f.coeffs.items() if e[zi] < n})


def _z_shift_down(f, zi, n):
    out = {}
    for e, c in f.coeffs.items():
        if e[zi] >= n:
            shifted = tuple(x - n if j == zi else x for j, x in enumerate(e))
            out[shifted] = c
    return MixedSeries(f.ring, out)


def _unit_inverse(b):
    """Invert a series whose all-variables constant term is a nonzero rational."""
    c0 = b.constant_term()
    if c0 == 0:
        raise CheckFailure("series inversion: constant term vanishes")
    h = MixedSeries.const(b.ring, 1) - b * (Fraction(1) / c0)
    out = MixedSeries.const(b.ring, 1)
    power = MixedSeries.const(b.ring, 1)
    for _ in range(b.ring.degree_cap):
        power = power * h
        if power.is_zero():
            break
        out = out + power
    return out * (Fraction(1) / c0)


def weierstrass_divide(g, f, z, val_bound=32):
    """Divide g by a z-distinguished f: g = q*f + r with deg_z r < order(f).

    Successive approximation; the correction terms gain at least one unit of
    combined (p-adic + non-z degree) weight per step, so the loop stops once
    the correction either vanishes inside the window (exact division,
    certified_valuation = +inf) or has Gauss valuation >= val_bound (the
    certified p-adic precision of the reported pair).
    """
    if g.ring != f.ring:
        raise InputError("series ring spec mismatch")
    ok, n = is_distinguished(f, z)
    if not ok:
        raise InputError(f"divisor is not distinguished in {z}")
    zi = f.ring.index_of(z)
    a = _z_low(f, zi, n)
    b = _z_shift_down(f, zi, n)
    binv = _unit_inverse(b)

    tg = _z_shift_down(g, zi, n)
    delta = binv * tg
    q = delta
    certified = inf
    vg = gauss_valuation(g)
    headroom = -vg if (not g.is_zero() and vg < 0) else 0
    max_iter = val_bound + 2 * f.ring.degree_cap + headroom + 64
    for _ in range(max_iter):
        if delta.is_zero():
            certified = inf
            break
        delta = -(binv * _z_shift_down(delta * a, zi, n))
        if delta.is_zero():
            certified = inf
            break
        q = q + delta
        if gauss_valuation(delta) >= val_bound:
            certified = val_bound
            break
    else:
        raise CheckFailure("weierstrass division failed to stabilize")

    remainder_full = g - q * f
    r = _z_low(remainder_full, zi, n)
    return WeierstrassResult(q, r, certified)


# ---------------------------------------------------------------------------
# formal multiplicative group endomorphisms


def binomial_series_coefficient(r, k):
    """Generalized binomial coefficient r(r-1)...(r-k+1)/k! evaluated in Q."""
    r = Fraction(r)
    num = Fraction(1)
    for i in range(k):
        num *= r - i
    den = 1
    for i in range(2, k + 1):
        den *= i
    return num / den


def mult_endo(r, ring):
    """The endomorphism [r]: T -> (1 + T)^r - 1 of the formal multiplicative group.

    r must be a p-integral rational (a p-adic integer presented exactly); the
    expansion coefficients are then p-adic integers too, which is asserted.
    """
    if len(ring.variables) != 1:
        raise InputError("mult_endo needs a single-variable ring")
    r = Fraction(r)
    if p_valuation(r, ring.p) < 0:
        raise InputError(f"{r} is not a p-adic integer for p={ring.p}")
    out = {}
    for k in range(1, ring.degree_cap + 1):
        c = binomial_series_coefficient(r, k)
        if c == 0:
            continue
        if p_valuation(c, ring.p) < 0:
            raise CheckFailure("binomial coefficient of a p-adic integer not integral")
        out[(k,)] = c
    return MixedSeries(ring, out)


def endo_apply(r, f):
    """Evaluate the endomorphism [r] on a series with zero constant term."""
    if f.constant_term() != 0:
        raise InputError("endo_apply needs a series with zero constant term")
    if p_valuation(Fraction(r), f.ring.p) < 0:
        raise InputError(f"{r} is not a p-adic integer for p={f.ring.p}")
    out = MixedSeries.zero(f.ring)
    power = MixedSeries.const(f.ring, 1)
    for k in range(1, f.ring.degree_cap + 1):
        power = power * f
        if power.is_zero():
            break
        c = binomial_series_coefficient(r, k)
        if c != 0:
            out = out + power * c
    return out


def endo_to_scalar(e):
    """Recognize a series as [r] and return r; reject non-endomorphisms."""
    if len(e.ring.variables) != 1:
        raise InputError("endo_to_scalar needs a single-variable ring")
    if e.constant_term() != 0:
        raise InputError("endomorphisms have zero constant term")
    r = e.coeffs.get((1,), Fraction(0))
    if r == 0:
        if e.is_zero():
            return Fraction(0)
        raise CheckFailure("no linear term: only [0] = 0 lacks one")
    if p_valuation(r, e.ring.p) < 0:
        raise CheckFailure("linear coefficient is not a p-adic integer")
    if e != mult_endo(r, e.ring):
        raise CheckFailure("series does not match [r] within the window")
    return r


# ---------------------------------------------------------------------------
# substitution and symmetric descent generators


def substitute(f, images):
    """Substitute variables by series with zero constant term (exact on window)."""
    ring = f.ring
    for name, img in images.items():
        ring.index_of(name)
        if img.ring != ring:
            raise InputError("substitution image in a different ring")
        if img.constant_term() != 0:
            raise InputError("substitution images must have zero constant term")
    names = ring.variables
    base = {
        name: images.get(name, MixedSeries.variable(ring, name)) for name in names
    }
    # per-variable power cache: powers[name][k] = image^k
    powers = {name: [MixedSeries.const(ring, 1)] for name in names}

    def var_power(name, k):
        cache = powers[name]
        while len(cache) <= k:
            cache.append(cache[-1] * base[name])
        return cache[k]

    out = MixedSeries.zero(ring)
    for expo, c in f.terms():
        term = MixedSeries.const(ring, c)
        for name, e in zip(names, expo):
            if e:
                term = term * var_power(name, e)
        out = out + term
    return out


def symmetric_descent(group, action, variables=None):
    """Elementary symmetric polynomials of variable orbits under a group action.

    ``action`` maps every element id of ``group`` to a substitution dict
    (variable name -> series with zero constant term).  The action must be a
    homomorphism of ring substitutions, which is verified within the window.
    For each requested variable the |group| elementary symmetric polynomials
    of its orbit multiset are returned; each output is checked to be fixed by
    every substitution.
    """
    ring = None
    for gid in range(group.order):
        if gid not in action:
            raise InputError(f"action missing group element {gid}")
        for name, img in action[gid].items():
            if ring is None:
                ring = img.ring
            if img.ring != ring:
                raise InputError("action images live in different rings")
    if ring is None:
        raise InputError("empty action")
    if variables is None:
        variables = ring.variables
    for name in ring.variables:
        for gid in range(group.order):
            if name not in action[gid]:
                raise InputError(f"action of element {gid} missing variable {name}")

    ident = {
        name: MixedSeries.variable(ring, name) for name in ring.variables
    }
    for name in ring.variables:
        if action[0][name] != ident[name]:
            raise InputError("identity element must act as the identity substitution")
    for a in range(group.order):
        for b in range(group.order):
            ab = group.mult(a, b)
            for name in ring.variables:
                composed = substitute(action[b][name], action[a])
                if composed != action[ab][name]:
                    raise InputError(
                        "action is not a homomorphism within the window"
                    )

    results = {}
    for name in variables:
        orbit = [action[gid][name] for gid in range(group.order)]
        # elementary symmetric polynomials via the running product expansion
        esym = [MixedSeries.const(ring, 1)]
        for t in orbit:
            new = esym + [MixedSeries.zero(ring)]
            for k in range(len(esym), 0, -1):
                new[k] = new[k] + esym[k - 1] * t
            esym = new
        outputs = esym[1:]
        for u in outputs:
            for gid in range(group.order):
                if substitute(u, action[gid]) != u:
                    raise CheckFailure("descent generator is not action-invariant")
        results[name] = outputs
    return results
