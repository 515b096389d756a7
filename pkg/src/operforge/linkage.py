"""Critical-level weight combinatorics.

Affine weights are pairs (delta degree, finite weight); the level is pinned
at critical and never varies, which degenerates the linkage condition: a
real-root step at any loop depth is allowed exactly when the rho-shifted
coroot pairing is a positive integer (and reflects the finite part), while
imaginary-root steps are always allowed and fix the finite part.

Characters of Verma modules are computed two ways: the product over
positive affine roots (real multiplicity 1, imaginary multiplicity = rank)
and an independent multiset enumeration of lowering monomials; the
acceptance suite compares the tables entry by entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from math import comb

from . import _linalg
from .errors import DomainError
from .rootdata import (kostant_project, weight_pairing_with_coroot,
                       weyl_orbit)


@dataclass(frozen=True)
class AffineWeight:
    """(t d/dt eigenvalue, finite weight in fundamental coordinates)."""
    delta: Q
    finite: tuple


# ---------------------------------------------------------------------------
# anti-dominance


def is_antidominant_weight(alg, lam):
    """True when no coroot pairing of lam is a positive integer.

    The pairing form checks <lam, coroot(alpha)> for every positive root;
    the orbit form checks that lam is the only point of W(lam) inside
    lam - Span_{Z>=0}(positive roots).  Both are computed and must agree.
    """
    lam = tuple(Q(x) for x in lam)
    by_pairing = True
    for root in alg.root_datum.positive_roots:
        p = weight_pairing_with_coroot(alg, lam, root)
        if p.denominator == 1 and p > 0:
            by_pairing = False
            break
    by_orbit = True
    cartan = alg.root_datum.cartan_matrix
    r = alg.rank
    mat = [[Q(cartan[i][j]) for j in range(r)] for i in range(r)]
    inv = _linalg.inverse(mat)
    for mu in weyl_orbit(alg, lam):
        if mu == lam:
            continue
        diff = [lam[i] - mu[i] for i in range(r)]
        coords = [sum(inv[i][j] * diff[j] for j in range(r)) for i in range(r)]
        if all(c.denominator == 1 and c >= 0 for c in coords):
            by_orbit = False
            break
    if by_pairing != by_orbit:
        raise AssertionError(
            "anti-dominance characterizations disagree at %s" % (lam,))
    return by_pairing


# ---------------------------------------------------------------------------
# Kac-Kazhdan chains at the critical level


def kk_chain_search(alg, start, depth=6):
    """All affine weights reachable by linkage chains within the depth.

    Depth bounds the total descent in the delta direction.  Real-root
    steps subtract b * (m delta + eps alpha) with b = eps <mu + rho,
    coroot(alpha)> a positive integer (m >= 0 for eps = +1, m >= 1 for
    eps = -1); imaginary steps subtract any positive multiple of delta.
    """
    if depth < 0:
        raise DomainError("depth must be nonnegative")
    start = AffineWeight(Q(start.delta), tuple(Q(x) for x in start.finite))
    rho = alg.rho()
    r = alg.rank
    seen = {start}
    frontier = [start]
    floor = start.delta - depth
    while frontier:
        nxt = []
        for w in frontier:
            remaining = int(w.delta - floor)
            # imaginary steps: finite part fixed
            for j in range(1, remaining + 1):
                cand = AffineWeight(w.delta - j, w.finite)
                if cand not in seen:
                    seen.add(cand)
                    nxt.append(cand)
            # real steps
            shifted = tuple(w.finite[i] + rho[i] for i in range(r))
            for root in alg.root_datum.positive_roots:
                pairing = weight_pairing_with_coroot(alg, shifted, root)
                if pairing.denominator != 1 or pairing == 0:
                    continue
                fc = alg.root_datum.root_fundamental_coords(root)
                reflected = tuple(w.finite[i] - pairing * fc[i]
                                  for i in range(r))
                for eps in (1, -1):
                    b = eps * pairing
                    if b <= 0:
                        continue
                    m_min = 0 if eps == 1 else 1
                    m = m_min
                    while b * m <= remaining:
                        cand = AffineWeight(w.delta - b * m, reflected)
                        if cand not in seen:
                            seen.add(cand)
                            nxt.append(cand)
                        m += 1
        frontier = nxt
    return seen


def reducibility_witness(alg, lam, depth=6):
    """A chain-reachable weight witnessing a proper highest weight, if any.

    The witness must have finite part lam - beta with beta a nonzero
    nonnegative-integer combination of positive roots.
    """
    lam = tuple(Q(x) for x in lam)
    r = alg.rank
    cartan = alg.root_datum.cartan_matrix
    mat = [[Q(cartan[i][j]) for j in range(r)] for i in range(r)]
    inv = _linalg.inverse(mat)
    start = AffineWeight(Q(0), lam)
    for w in sorted(kk_chain_search(alg, start, depth),
                    key=lambda a: (-a.delta, a.finite)):
        if w.finite == lam:
            continue
        diff = [lam[i] - w.finite[i] for i in range(r)]
        coords = [sum(inv[i][j] * diff[j] for j in range(r))
                  for i in range(r)]
        if all(c.denominator == 1 and c >= 0 for c in coords):
            return w
    return None


def verma_irreducible_critical(alg, lam):
    """Irreducibility of the critical-level Verma with highest weight lam."""
    lam = tuple(Q(x) for x in lam)
    rho = alg.rho()
    shifted = tuple(lam[i] + rho[i] for i in range(alg.rank))
    return is_antidominant_weight(alg, shifted)


# ---------------------------------------------------------------------------
# central characters


def central_character(alg, lam):
    """The point varpi(-lam - rho) of h // W supporting the Verma module.

    The weight is moved to the Cartan subalgebra through the invariant
    form normalized so long roots have square length 2.
    """
    lam = tuple(Q(x) for x in lam)
    d = alg.root_datum.symmetrizers
    coords = tuple(d[i] * (-lam[i] - 1) for i in range(alg.rank))
    return kostant_project(alg, alg.coweight_vec(coords))


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class CharacterTable:
    highest: tuple
    depth: int
    height_bound: int
    include_finite: bool
    entries: tuple   # sorted tuple of ((delta_drop, weight coords), dim)

    def dimension(self, delta_drop, weight):
        key = (delta_drop, tuple(weight))
        for k, v in self.entries:
            if k == key:
                return v
        return 0

    def delta_slice_total(self, delta_drop):
        return sum(v for (n, _), v in self.entries if n == delta_drop)


def _generator_list(alg, depth, include_finite):
    """(delta cost, finite drop in root coordinates, multiplicity) triples."""
    r = alg.rank
    zero = tuple(0 for _ in range(r))
    pos = alg.root_datum.positive_roots
    gens = []
    for m in range(1, depth + 1):
        for root in pos:
            gens.append((m, tuple(-c for c in root), 1))
        gens.append((m, zero, r))
        for root in pos:
            gens.append((m, root, 1))
    if include_finite:
        for root in pos:
            gens.append((0, root, 1))
    return gens


def _finalize_table(alg, lam, depth, bound, include_finite, raw):
    entries = []
    for (n, beta), cnt in raw.items():
        if sum(beta) > bound:
            continue
        fc = alg.root_datum.root_fundamental_coords(beta)
        weight = tuple(Q(lam[i]) - fc[i] for i in range(alg.rank))
        entries.append(((n, weight), cnt))
    entries.sort(key=lambda kv: (kv[0][0], kv[0][1]))
    return CharacterTable(tuple(Q(x) for x in lam), depth, bound,
                          include_finite, tuple(entries))


def default_height_bound(alg, depth):
    return depth + alg.root_datum.heights[-1]


def verma_character(alg, lam, depth, height_bound=None, include_finite=True):
    """Verma character by the product over positive affine roots.

    Entries are exact for delta drop <= depth and drops beta of height
    <= height_bound; the finite direction needs its own bound because the
    delta-degree-0 slice alone is the whole finite Verma character.
    """
    if height_bound is None:
        height_bound = default_height_bound(alg, depth)
    hmax = alg.root_datum.heights[-1]
    cap = height_bound + depth * hmax
    state = {(0, tuple(0 for _ in range(alg.rank))): 1}
    for m, gamma, mult in _generator_list(alg, depth, include_finite):
        htg = sum(gamma)
        new = {}
        for (n, beta), cnt in state.items():
            k = 0
            while True:
                nn = n + k * m
                bb = tuple(b + k * g for b, g in zip(beta, gamma))
                if nn > depth or sum(bb) > cap:
                    break
                factor = comb(k + mult - 1, k)
                key = (nn, bb)
                new[key] = new.get(key, 0) + cnt * factor
                k += 1
                if m == 0 and htg <= 0:
                    raise AssertionError("finite generator with no height")
        state = new
    return _finalize_table(alg, lam, depth, height_bound, include_finite,
                           state)


def pbw_character(alg, lam, depth, height_bound=None, include_finite=True):
    """Independent cross-check: enumerate lowering monomials directly.

    Multisets in a basis of n^-_aff = (g x t^{-1}C[t^{-1}]) + n^- are walked
    one generator at a time; loop generators (which can only lower the
    height of the drop) come first so the finite tail can prune exactly.
    """
    if height_bound is None:
        height_bound = default_height_bound(alg, depth)
    r = alg.rank
    pos = alg.root_datum.positive_roots
    loop_gens = []
    for m in range(1, depth + 1):
        for root in pos:
            loop_gens.append((m, tuple(-c for c in root)))
        for _ in range(r):
            loop_gens.append((m, tuple(0 for _ in range(r))))
        for root in pos:
            loop_gens.append((m, root))
    tail_gens = []
    if include_finite:
        tail_gens = [(0, root) for root in pos]
    gens = loop_gens + tail_gens
    raw = {}
    zero = tuple(0 for _ in range(r))

    def walk(i, n, beta):
        if i == len(gens):
            if sum(beta) <= height_bound:
                key = (n, beta)
                raw[key] = raw.get(key, 0) + 1
            return
        m, gamma = gens[i]
        htg = sum(gamma)
        k = 0
        while True:
            nn = n + k * m
            bb = tuple(b + k * g for b, g in zip(beta, gamma))
            if nn > depth:
                break
            if m == 0 and sum(bb) > height_bound:
                break
            walk(i + 1, nn, bb)
            k += 1

    walk(0, 0, zero)
    return _finalize_table(alg, lam, depth, height_bound, include_finite,
                           raw)
