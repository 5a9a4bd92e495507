"""Base change conductors of character modules with finite Galois action.

A :class:`CharModule` is a finite free lattice of rank d with a group acting
by p-integral rational matrices; it stands for the character group of a
formal torus twisted by the given action.  Its conductor is computed
exclusively through the class-function pairing with the Artin bisection, and
cross-checked against the induction formula

    c(induced module) = c(module over the subextension) + (1/2) * v(disc) * rank.

Also here: Weil restriction as a block-matrix induced module, isogeny tests
by exact character equality, idempotent splitting into saturated image and
kernel lattices, and adaptation of an integral lattice to a p-adic idempotent
decomposition, with an independent checker for the latter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .characters import char_of_rep, induce, pair
from .errors import CheckFailure, InputError
from .exact import p_valuation
from .groups import Subgroup
from .linalg import (
    as_matrix,
    det,
    hnf_rows,
    identity_matrix,
    integer_kernel,
    lattice_contains,
    mat_mul,
    mat_sub,
    mat_vec,
    solve,
    transpose,
)
from .ramification import bisection, disc_valuation, restrict_ramdata

__all__ = [
    "CharModule",
    "char_module",
    "module_from_generators",
    "trivial_module",
    "regular_module",
    "Conductor",
    "module_character",
    "conductor",
    "weil_restriction",
    "conductor_via_induction",
    "is_isogenous",
    "direct_sum",
    "split_idempotent",
    "adapt_lattice",
    "adapt_lattice_pair",
    "check_adapted_basis",
]


class CharModule:
    """Finite free lattice with a group action by p-integral exact matrices."""

    __slots__ = ("name", "group", "p", "rank", "action", "_char")

    def __init__(self, name, group, p, action):
        action = {int(g): as_matrix(m) for g, m in action.items()}
        if set(action) != set(range(group.order)):
            raise InputError("module action must cover every group element")
        ranks = {len(m) for m in action.values()}
        if len(ranks) != 1:
            raise InputError("module action matrices must share one rank")
        (d,) = ranks
        for m in action.values():
            if any(len(row) != d for row in m):
                raise InputError("module action matrices must be square")
            for row in m:
                for x in row:
                    if p_valuation(x, p) < 0:
                        raise InputError(f"entry {x} is not p-integral at p={p}")
        if d > 0:
            ident = identity_matrix(d)
            if action[0] != ident:
                raise InputError("identity must act by the identity matrix")
            gens = group.generating_set()
            for g in range(group.order):
                for s in gens:
                    if mat_mul(action[g], action[s]) != action[group.mult(g, s)]:
                        raise InputError("module action is not a homomorphism")
            for g in gens:
                if p_valuation(det(action[g]), p) != 0:
                    raise InputError("module action determinant must be a p-unit")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "p", int(p))
        object.__setattr__(self, "rank", d)
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "_char", None)

    def __setattr__(self, name, value):
        raise AttributeError("CharModule is immutable")

    def matrix(self, g):
        return self.action[g]

    def is_integral(self):
        return all(
            x.denominator == 1 for m in self.action.values() for row in m for x in row
        )

    def __repr__(self):
        return f"CharModule({self.name!r}, {self.group.name}, rank={self.rank})"


def char_module(name, group, p, action):
    return CharModule(name, group, p, action)


def module_from_generators(name, group, p, gen_action):
    """Complete an action given on a generating set to the whole group."""
    gen_action = {int(g): as_matrix(m) for g, m in gen_action.items()}
    ranks = {len(m) for m in gen_action.values()}
    if len(ranks) != 1:
        raise InputError("generator matrices must share one rank")
    (d,) = ranks
    action = {0: identity_matrix(d)}
    frontier = [0]
    while frontier:
        g = frontier.pop()
        for s, ms in gen_action.items():
            h = group.mult(g, s)
            if h not in action:
                action[h] = mat_mul(action[g], ms)
                frontier.append(h)
    if len(action) != group.order:
        raise InputError("given generators do not generate the group")
    return CharModule(name, group, p, action)


def trivial_module(group, p, rank=1, name=None):
    ident = identity_matrix(rank)
    return CharModule(
        name or f"trivial:{rank}", group, p, {g: ident for g in range(group.order)}
    )


def regular_module(group, p, name="regular"):
    """Permutation matrices of left translation on the group basis."""
    action = {}
    for g in range(group.order):
        m = [[Fraction(0)] * group.order for _ in range(group.order)]
        for x in range(group.order):
            m[group.mult(g, x)][x] = Fraction(1)
        action[g] = tuple(tuple(row) for row in m)
    return CharModule(name, group, p, action)


def module_character(m):
    """Trace character of the module action (validated at construction)."""
    if m._char is None:
        chi = char_of_rep(m.group, m.action, validate=False)
        object.__setattr__(m, "_char", chi)
    return m._char


@dataclass(frozen=True)
class Conductor:
    """A base change conductor: non-negative, with denominator dividing |G|."""

    value: Fraction
    denominator_bound: int

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if self.value < 0:
            raise CheckFailure(f"negative conductor {self.value}")
        if (self.value * self.denominator_bound).denominator != 1:
            raise CheckFailure(
                f"conductor {self.value} not integral against e={self.denominator_bound}"
            )

    def __str__(self):
        return str(self.value)


def conductor(m, rd):
    """The base change conductor as the bisection/character pairing."""
    if m.group != rd.group:
        raise InputError("module and ramification data live on different groups")
    if m.p != rd.p:
        raise InputError("module and ramification data disagree on p")
    value = pair(bisection(rd), module_character(m))
    ok, q = value.rational_part()
    if not ok:
        raise CheckFailure(
            f"conductor pairing is not rational ({value}); omega and the module action are inconsistent"
        )
    return Conductor(q, rd.group.order)


def weil_restriction(m_sub, sub):
    """Induced module over a left-coset transversal, as block matrices.

    ``m_sub`` lives on ``sub.as_group()``; the result lives on the parent and
    its character equals the induced character (asserted).
    """
    if not isinstance(sub, Subgroup):
        raise InputError("weil_restriction needs a Subgroup")
    grp = sub.parent
    hgrp, to_sub, _ = sub.as_group()
    if m_sub.group != hgrp:
        raise InputError("module does not live on the given subgroup")
    d = m_sub.rank
    # left cosets t*H, deterministic transversal by least member
    seen = set()
    transversal = []
    for x in range(grp.order):
        if x in seen:
            continue
        coset = {grp.mult(x, s) for s in sub.elements}
        transversal.append(min(coset))
        seen |= coset
    k = len(transversal)
    coset_index = {}
    for i, t in enumerate(transversal):
        for s in sub.elements:
            coset_index[grp.mult(t, s)] = i

    action = {}
    for g in range(grp.order):
        m = [[Fraction(0)] * (d * k) for _ in range(d * k)]
        for i, t in enumerate(transversal):
            gt = grp.mult(g, t)
            ip = coset_index[gt]
            h = grp.mult(grp.inv(transversal[ip]), gt)
            block = m_sub.matrix(to_sub[h])
            for r in range(d):
                for c in range(d):
                    if block[r][c]:
                        m[ip * d + r][i * d + c] = block[r][c]
        action[g] = tuple(tuple(row) for row in m)
    result = CharModule(f"Ind({m_sub.name})", grp, m_sub.p, action)
    if module_character(result) != induce(module_character(m_sub), sub):
        raise CheckFailure("induced module character mismatch")
    return result


def conductor_via_induction(m_sub, sub, rd):
    """Induction formula: conductor over the subextension plus the discriminant term.

    Asserted equal to the direct conductor of the Weil restriction.
    """
    if sub.parent != rd.group:
        raise InputError("subgroup does not live on the ramification group")
    rd_sub = restrict_ramdata(rd, sub)
    inner = conductor(m_sub, rd_sub)
    v = disc_valuation(rd, sub)
    value = inner.value + Fraction(v * m_sub.rank, 2)
    result = Conductor(value, rd.group.order)
    direct = conductor(weil_restriction(m_sub, sub), rd)
    if direct.value != result.value:
        raise CheckFailure(
            f"induction formula mismatch: direct {direct.value} vs formula {result.value}"
        )
    return result


def is_isogenous(m1, m2):
    """Isogeny test: exact equality of trace characters."""
    if m1.group != m2.group:
        raise InputError("isogeny test across different groups")
    return module_character(m1) == module_character(m2)


def direct_sum(m1, m2):
    if m1.group != m2.group:
        raise InputError("direct sum across different groups")
    if m1.p != m2.p:
        raise InputError("direct sum across different primes")
    d1, d2 = m1.rank, m2.rank
    action = {}
    for g in range(m1.group.order):
        a, b = m1.matrix(g), m2.matrix(g)
        m = [[Fraction(0)] * (d1 + d2) for _ in range(d1 + d2)]
        for r in range(d1):
            for c in range(d1):
                m[r][c] = a[r][c]
        for r in range(d2):
            for c in range(d2):
                m[d1 + r][d1 + c] = b[r][c]
        action[g] = tuple(tuple(row) for row in m)
    return CharModule(f"{m1.name}+{m2.name}", m1.group, m1.p, action)


def _check_idempotent(m, e):
    e = as_matrix(e)
    d = m.rank
    if len(e) != d or any(len(row) != d for row in e):
        raise InputError("idempotent has the wrong shape")
    for row in e:
        for x in row:
            if p_valuation(x, m.p) < 0:
                raise InputError("idempotent entries must be p-integral")
    if mat_mul(e, e) != e:
        raise InputError("matrix is not idempotent")
    for s in m.group.generating_set():
        if mat_mul(e, m.matrix(s)) != mat_mul(m.matrix(s), e):
            raise InputError("idempotent does not commute with the action")
    return e


def _restricted_action(m, basis_rows):
    """Action matrices in the coordinates of a stable lattice basis (rows)."""
    if not basis_rows:
        return {g: () for g in range(m.group.order)}
    bt = transpose(as_matrix(basis_rows))
    action = {}
    for g in range(m.group.order):
        cols = []
        for v in basis_rows:
            image = mat_vec(m.matrix(g), v)
            cols.append(solve(bt, image))
        action[g] = transpose(as_matrix(cols))
    return action


def split_idempotent(m, e, names=("plus", "minus")):
    """Split a module along an equivariant idempotent into saturated summands.

    The image and kernel lattices are the full integer kernels of (1 - E) and
    E, hence saturated; their ranks add to the module rank and their
    characters add to the module character (asserted).
    """
    e = _check_idempotent(m, e)
    d = m.rank
    ident = identity_matrix(d)
    plus_rows = integer_kernel(mat_sub(ident, e))
    minus_rows = integer_kernel(e)
    if len(plus_rows) + len(minus_rows) != d:
        raise CheckFailure("idempotent split ranks do not add up")
    m_plus = CharModule(
        f"{m.name}.{names[0]}", m.group, m.p, _restricted_action(m, plus_rows)
    )
    m_minus = CharModule(
        f"{m.name}.{names[1]}", m.group, m.p, _restricted_action(m, minus_rows)
    )
    if m_plus.rank or m_minus.rank:
        total = module_character(direct_sum(m_plus, m_minus))
        if total != module_character(m):
            raise CheckFailure("split characters do not add to the module character")
    return m_plus, m_minus


def _lift_mod_pk(x, p, k):
    """Integer congruent mod p^k to a rational with denominator prime to p."""
    mod = p**k
    den = x.denominator
    if den % p == 0:
        raise CheckFailure("cannot lift a rational with p in the denominator")
    return (x.numerator * pow(den, -1, mod)) % mod


def adapt_lattice(m, e, precision=8, within=None):
    """Find a stable sublattice of p-unit index adapted to an idempotent.

    Follows the approximation recipe: take integer generators of the image
    and kernel lattices of E, approximate each one modulo p^precision by a
    vector of the target lattice (the ambient lattice, or ``within`` for the
    nested variant), and return a Hermite basis of their group span.  The
    output is verified by :func:`check_adapted_basis`; by Nakayama the span
    has p-unit index whenever the approximation is within p times the
    ambient lattice.
    """
    e = _check_idempotent(m, e)
    if not m.is_integral():
        raise InputError("adapt_lattice expects an integral module action")
    d = m.rank
    if d == 0:
        return ()
    ident = identity_matrix(d)
    gens = list(integer_kernel(mat_sub(ident, e))) + list(integer_kernel(e))
    if within is not None:
        bt = transpose(as_matrix(within))
        approx = []
        for v in gens:
            coords = solve(bt, v)
            lifted = tuple(
                Fraction(_lift_mod_pk(c, m.p, precision)) for c in coords
            )
            w = mat_vec(bt, lifted)
            approx.append(tuple(int(x) for x in w))
        gens = approx
    span = []
    for v in gens:
        for g in range(m.group.order):
            image = mat_vec(m.matrix(g), v)
            span.append(tuple(int(x) for x in image))
    basis = hnf_rows(span)
    if len(basis) != d:
        raise CheckFailure(
            f"adapted lattice has rank {len(basis)} < {d}; approximation failed "
            f"within precision {precision}"
        )
    check_adapted_basis(m, e, basis, precision)
    return basis


def adapt_lattice_pair(m, e_inner, e_outer, precision=8):
    """Adapted bases for nested idempotents, with nested output lattices."""
    outer = adapt_lattice(m, e_outer, precision)
    inner = adapt_lattice(m, e_inner, precision, within=outer)
    for v in inner:
        if not lattice_contains(outer, v):
            raise CheckFailure("nested adapted lattices are not nested")
    return inner, outer


def check_adapted_basis(m, e, basis, precision=8):
    """Independent verifier for adapted lattice bases.

    Checks: B is a rank-d integer basis whose index in the ambient lattice is
    a p-unit; the lattice is stable under the group action; E maps the
    lattice into itself p-integrally (equivalently, the idempotent
    decomposition restricts to the lattice after p-completion).  Any basis
    passing these checks is acceptable; the output is not unique.
    """
    e = as_matrix(e)
    d = m.rank
    basis = tuple(tuple(int(x) for x in row) for row in basis)
    if len(basis) != d or any(len(row) != d for row in basis):
        raise CheckFailure("adapted basis has the wrong shape")
    dval = det(basis)
    if dval == 0:
        raise CheckFailure("adapted basis is singular")
    if p_valuation(dval, m.p) != 0:
        raise CheckFailure(f"adapted basis index {dval} is not a p-unit")
    for g in m.group.generating_set():
        for v in basis:
            image = mat_vec(m.matrix(g), v)
            if not lattice_contains(basis, tuple(int(x) for x in image)):
                raise CheckFailure("adapted basis is not action-stable")
    bt = transpose(as_matrix(basis))
    for v in basis:
        image = mat_vec(e, v)
        coords = solve(bt, image)
        for c in coords:
            if p_valuation(c, m.p) < 0:
                raise CheckFailure(
                    "idempotent does not preserve the adapted lattice p-integrally"
                )
    if precision < 1:
        raise InputError("precision must be at least 1")
    return True
