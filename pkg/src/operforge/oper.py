"""Opers on the formal punctured disc.

Connections are represented by their dt-coefficient: a g-valued Laurent
series A(t), standing for nabla = d/dt + A(t).  A gauge by g acts as
A -> Ad_g(A) - (dg/dt) g^{-1}.  Gauge elements are stored as a torus part
(cocharacter coordinates, one invertible scalar series per simple root,
valid because the group is of adjoint type) followed by an ordered product
of unipotent exponentials.

The canonical form is nabla = d/dt + p_{-1} + v(t) with v valued in the
Kostant slice; singularity order, residues, nilpotent normal forms and
horizontal sections are all computed from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from math import factorial

from .errors import DomainError, PrecisionError
from .rootdata import (CartanOrbitPoint, kostant_project, vec_add, vec_scale,
                       vec_sub)
from .series import LieSeries, ScalarSeries, _min_prec

# ---------------------------------------------------------------------------
# gauge elements


@dataclass(frozen=True)
class GaugeElement:
    """Torus part applied first, then each unipotent exponential in order."""
    algebra: object
    torus: tuple        # invertible ScalarSeries, one per simple root
    unipotents: tuple   # n-valued LieSeries u, meaning exp(u)

    @classmethod
    def identity(cls, algebra):
        ones = tuple(ScalarSeries.one() for _ in range(algebra.rank))
        return cls(algebra, ones, ())

    @classmethod
    def from_torus(cls, algebra, coords):
        return cls(algebra, tuple(coords), ())

    @classmethod
    def from_unipotent(cls, algebra, u):
        ones = tuple(ScalarSeries.one() for _ in range(algebra.rank))
        return cls(algebra, ones, (u,))

    def is_identity(self):
        return (all(s == ScalarSeries.one() for s in self.torus)
                and not self.unipotents)

    @property
    def torus_part(self):
        return self.torus

    @property
    def unipotent_part(self):
        return self.unipotents

    def then(self, other):
        """The gauge applying self first, then other."""
        if self.algebra is not other.algebra:
            raise DomainError("gauges live over different algebras")
        torus = tuple(a * b for a, b in zip(other.torus, self.torus))
        moved = tuple(_torus_adjoint(u, other.torus)
                      for u in self.unipotents)
        return GaugeElement(self.algebra, torus, moved + other.unipotents)

    def inverse(self):
        inv_coords = tuple(s.invert() for s in self.torus)
        moved = tuple(_torus_adjoint(u.scale(Q(-1)), inv_coords)
                      for u in reversed(self.unipotents))
        return GaugeElement(self.algebra, inv_coords, moved)


def coweight_torus_coordinates(algebra, coweight):
    """Cocharacter coordinates of t^{coweight} for an integral coweight."""
    coords = []
    for i in range(algebra.rank):
        m = Q(coweight[i])
        if m.denominator != 1:
            raise DomainError("t^coweight needs integral pairings")
        coords.append(ScalarSeries.monomial(Q(1), int(m)))
    return tuple(coords)


def _root_multiplier(algebra, coords, root, sign):
    out = ScalarSeries.one()
    for i, m in enumerate(root):
        e = sign * m
        if e:
            out = out * coords[i].power(e)
    return out


def _torus_adjoint(x, coords):
    """Ad_h(x) for the torus element with the given cocharacter coordinates."""
    alg = x.algebra
    ch = alg.chevalley
    root_of = {}
    for r, i in ch.e_index.items():
        root_of[i] = (r, 1)
    for r, i in ch.f_index.items():
        root_of[i] = (r, -1)
    out = LieSeries.zero(alg, "g", x.prec)
    for k in sorted(x.support_indices()):
        comp = x.component_series(k)
        if k in root_of:
            r, sign = root_of[k]
            comp = comp * _root_multiplier(alg, coords, r, sign)
        out = out + LieSeries.from_scalar(alg, comp, {k: Q(1)})
    return out


def apply_torus(conn, coords):
    """Gauge a connection by the torus element with the given coordinates."""
    alg = conn.algebra
    out = _torus_adjoint(conn, coords)
    for i, c in enumerate(coords):
        dlog = c.derivative() * c.invert()
        if dlog.coeffs or dlog.prec is not None:
            term = LieSeries.from_scalar(alg, dlog,
                                         alg.fundamental_coweight_vec(i))
            out = out - term
    return out


def _nilpotency_bound(algebra, u, target):
    """Iterations after which ad_u^k(target) vanishes identically."""
    gr = algebra.chevalley.principal_grading
    hmax = algebra.root_datum.heights[-1]
    u_min = min((gr[k] for k in u.support_indices()), default=hmax + 1)
    if u_min < 1:
        raise DomainError("unipotent exponent must be n-valued")
    t_min = min((gr[k] for k in target.support_indices()), default=hmax)
    t_min = min(t_min, -1)  # connections can carry f-parts
    return max(0, (hmax - t_min) // u_min)


def apply_unipotent(conn, u):
    """Gauge a connection by exp(u) for an n-valued series u."""
    bound = _nilpotency_bound(conn.algebra, u, conn)
    acc = conn
    term = conn
    for k in range(1, bound + 1):
        term = u.bracket(term)
        if term.exact_polynomial and term.is_zero_on_window():
            break
        acc = acc + term.scale(Q(1, factorial(k)))
    du = u.derivative()
    if du.coeffs or du.prec is not None:
        # (d/dt exp(u)) exp(-u) = sum_k ad_u^k(u') / (k+1)!
        total = du
        term = du
        hmax = conn.algebra.root_datum.heights[-1]
        for k in range(1, hmax + 1):
            term = u.bracket(term)
            if term.exact_polynomial and term.is_zero_on_window():
                break
            total = total + term.scale(Q(1, factorial(k + 1)))
        acc = acc - total
    return acc


def apply_gauge(conn, g):
    """Gauge a connection (LieSeries, RawOper or CanonicalOper)."""
    conn = as_connection(conn)
    out = apply_torus(conn, g.torus)
    for u in g.unipotents:
        out = apply_unipotent(out, u)
    return out


def as_connection(obj):
    if isinstance(obj, LieSeries):
        return obj
    if isinstance(obj, (RawOper, CanonicalOper)):
        return obj.connection()
    raise DomainError("cannot interpret %r as a connection" % (type(obj),))


# ---------------------------------------------------------------------------
# oper shapes


@dataclass(frozen=True)
class RawOper:
    """Connection of oper shape: sum_i phi_i(t) f_i + q(t), q Borel-valued."""
    algebra: object
    phi: tuple
    q: object

    def __post_init__(self):
        if len(self.phi) != self.algebra.rank:
            raise DomainError("need one phi per simple root")
        for i, s in enumerate(self.phi):
            if not s.coeffs:
                raise (PrecisionError if s.prec is not None else DomainError)(
                    "phi[%d] is not invertible on its window" % i)

    def connection(self):
        alg = self.algebra
        ch = alg.chevalley
        out = LieSeries(alg, "g", dict(self.q.coeffs), self.q.prec,
                        validate=False)
        simple = [tuple(1 if k == i else 0 for k in range(alg.rank))
                  for i in range(alg.rank)]
        for i, s in enumerate(self.phi):
            fi = ch.f_index[simple[i]]
            out = out + LieSeries.from_scalar(alg, s, {fi: Q(1)})
        return out


def split_oper(conn):
    """Write a g-valued connection in RawOper shape; rejects non-oper shapes."""
    alg = conn.algebra
    ch = alg.chevalley
    simple = [tuple(1 if k == i else 0 for k in range(alg.rank))
              for i in range(alg.rank)]
    simple_f = {ch.f_index[s] for s in simple}
    f_all = _f_indices(alg)
    q_coeffs = {}
    for d, vec in conn.coeffs.items():
        for k, c in vec.items():
            if k in simple_f:
                continue
            if k in f_all:
                root = next(r for r, i in ch.f_index.items() if i == k)
                raise DomainError(
                    "connection has a lowering component along f[%s];"
                    " not an oper shape" % (",".join(map(str, root))))
            q_coeffs.setdefault(d, {})[k] = c
    phi = tuple(conn.component_series(ch.f_index[s]) for s in simple)
    q = LieSeries(alg, "b", q_coeffs, conn.prec)
    return RawOper(alg, phi, q)


class CanonicalOper:
    """Drinfeld-Sokolov canonical form d/dt + p_{-1} + v(t), v in V_can."""

    def __init__(self, algebra, v):
        self.algebra = algebra
        coord_maps = [dict() for _ in algebra.principal.vcan_basis]
        for d, vec in v.coeffs.items():
            cs = algebra.vcan_coords(vec)
            for j, c in enumerate(cs):
                if c:
                    coord_maps[j][d] = c
        self.coordinates = tuple(ScalarSeries(m, v.prec) for m in coord_maps)
        self.v = v
        self.prec = v.prec

    @classmethod
    def from_coordinates(cls, algebra, coordinate_series):
        basis = algebra.principal.vcan_basis
        if len(coordinate_series) != len(basis):
            raise DomainError("need one coordinate series per V_can slot")
        prec = _min_prec(*[s.prec for s in coordinate_series])
        total = LieSeries.zero(algebra, "n", prec)
        for s, (_, b) in zip(coordinate_series, basis):
            total = total + LieSeries.from_scalar(algebra, s, b, space="n")
        return cls(algebra, total.truncate(prec))

    def connection(self):
        alg = self.algebra
        p = LieSeries.constant(alg, alg.principal.p_minus1, space="g")
        return p + LieSeries(alg, "g", self.v.coeffs, self.v.prec,
                             validate=False)

    def agrees(self, other):
        return all(a.agrees(b)
                   for a, b in zip(self.coordinates, other.coordinates))

    def __repr__(self):
        return "<CanonicalOper %s>" % (list(self.coordinates),)


# ---------------------------------------------------------------------------
# canonicalization


def canonicalize(raw):
    """Unique canonical representative plus the gauge witness reaching it."""
    if isinstance(raw, LieSeries):
        raw = split_oper(raw)
    alg = raw.algebra
    conn = apply_torus(raw.connection(), raw.phi)
    gauge = GaugeElement.from_torus(alg, raw.phi)
    hmax = alg.root_datum.heights[-1]
    gr = alg.chevalley.principal_grading
    p_minus1 = alg.principal.p_minus1
    for d in range(0, hmax):
        _, _, solve = alg.principal_degree_solver(d)
        idx = _h_indices(alg) if d == 0 else {
            i for i in _e_indices(alg) if gr[i] == d}
        u_coeffs = {}
        for tdeg, vec in conn.coeffs.items():
            yd = {k: v for k, v in vec.items() if k in idx}
            if yd:
                u_vec, _ = solve(yd)
                if u_vec:
                    u_coeffs[tdeg] = u_vec
        if u_coeffs:
            u = LieSeries(alg, "n", u_coeffs, conn.prec, validate=False)
            conn = apply_unipotent(conn, u)
            gauge = GaugeElement(alg, gauge.torus, gauge.unipotents + (u,))
    v = conn - LieSeries.constant(alg, p_minus1, space="g")
    if any(k in _f_indices(alg) or k in _h_indices(alg)
           for k in v.support_indices()):
        raise AssertionError("canonicalization left the slice complement")
    return CanonicalOper(alg, v.retag("n")), gauge


def _h_indices(alg):
    ch = alg.chevalley
    return set(range(ch.h_start, ch.h_start + ch.rank))


def _e_indices(alg):
    return set(alg.chevalley.e_index.values())


def _f_indices(alg):
    return set(alg.chevalley.f_index.values())


# ---------------------------------------------------------------------------
# loop rotation and singularity data


def loop_rotate(oper, c):
    """Action of the loop rotation t -> c t: v_d(t) -> c^{d+1} v_d(c t)."""
    c = Q(c)
    if not c:
        raise DomainError("loop rotation needs a nonzero scale")
    out = []
    for s, d in zip(oper.coordinates, oper.algebra.principal.vcan_degrees):
        out.append(s.compose_scale(c).scale(c ** (d + 1)))
    return CanonicalOper.from_coordinates(oper.algebra, out)


def _pole_order(series):
    if series.prec is not None and series.prec < 0:
        raise PrecisionError(
            "window [.., %d) does not determine the polar part" % series.prec)
    md = min(series.coeffs, default=0)
    return max(0, -md)


def singularity_order(oper):
    """Least k with pole(v_d) <= k (d + 1) for every exponent d."""
    k = 0
    for s, d in zip(oper.coordinates, oper.algebra.principal.vcan_degrees):
        p = _pole_order(s)
        k = max(k, -(-p // (d + 1)))
    return k


def res_rs(oper):
    """Residue of an oper with regular singularities, in h // W.

    Top polar part per exponent, with the affine shift by p_1/4 in the
    exponent-1 slot.
    """
    if singularity_order(oper) > 1:
        raise DomainError("res_rs needs singularity order <= 1")
    alg = oper.algebra
    coords = []
    for s, d in zip(oper.coordinates, alg.principal.vcan_degrees):
        c = s.coefficient(-d - 1)
        if d == 1:
            c += Q(1, 4)
        coords.append(c)
    return alg.orbit_point(coords)


def nilpotent_point(alg):
    """The orbit point varpi(-rho_check), the residue of regular opers."""
    rho_vec = alg.coweight_vec(alg.rho_check())
    return kostant_project(alg, vec_scale(rho_vec, Q(-1)))


def is_nilpotent_oper(oper):
    """Pole bound pole(v_d) <= d; asserted equivalent to the residue test."""
    alg = oper.algebra
    by_bound = all(_pole_order(s) <= d for s, d in
                   zip(oper.coordinates, alg.principal.vcan_degrees))
    by_residue = (singularity_order(oper) <= 1
                  and res_rs(oper) == nilpotent_point(alg))
    if by_bound != by_residue:
        raise AssertionError("nilpotency characterizations disagree")
    return by_bound


# ---------------------------------------------------------------------------
# nilpotent and lambda-nilpotent normal forms


@dataclass(frozen=True)
class NilpOperForm:
    """Connection d/dt + sum_i f_i + q(t)/t with q regular and q(0) in n."""
    algebra: object
    q: object                  # b-valued LieSeries, regular
    residue_n: dict            # q(0), in n
    gauge_from_canonical: object

    def connection(self):
        alg = self.algebra
        base = LieSeries.constant(alg, alg.principal.p_minus1, space="g")
        return base + self.q.shift(-1)


@dataclass(frozen=True)
class LambdaNilpForm:
    """Connection d/dt + sum_i t^{<alpha_i, lam>} phi_i f_i + q(t)/t."""
    algebra: object
    lam: tuple                 # the coweight
    exponents: tuple           # <alpha_i, lam> per simple root
    phi: tuple                 # invertible scalar series
    q: object                  # b-valued LieSeries, regular
    residue: dict              # q(0)
    levi_set: tuple            # Dynkin indices with <alpha_i, lam> = -1
    gauge_from_canonical: object

    def connection(self):
        alg = self.algebra
        ch = alg.chevalley
        out = self.q.shift(-1)
        simple = [tuple(1 if k == i else 0 for k in range(alg.rank))
                  for i in range(alg.rank)]
        for i, (n, s) in enumerate(zip(self.exponents, self.phi)):
            fi = ch.f_index[simple[i]]
            out = out + LieSeries.from_scalar(alg, s.shift(n), {fi: Q(1)})
        return out


def nilp_normal_form(oper):
    """Normal form of an oper with nilpotent singularity, with gauge chain."""
    if not is_nilpotent_oper(oper):
        raise DomainError("oper is not nilpotent: res_rs != varpi(-rho)")
    alg = oper.algebra
    zero = tuple(Q(0) for _ in range(alg.rank))
    q, phi, exps, residue, gauge, levi = _graded_reduction(oper, zero)
    hpart = {k: v for k, v in residue.items() if k in _h_indices(alg)}
    if hpart:
        label = alg.chevalley.labels[next(iter(hpart))]
        raise AssertionError(
            "nilpotent residue has a Cartan component along %s" % label)
    return NilpOperForm(alg, q, residue, gauge)


def lambda_nilp_form(oper, lam):
    """lambda-nilpotent normal form for an integral coweight lam

    with lam + rho_check dominant; the oper must lie over varpi(-lam-rho).
    """
    alg = oper.algebra
    lam = tuple(Q(x) for x in lam)
    for x in lam:
        if x.denominator != 1:
            raise DomainError("lambda_nilp_form needs an integral coweight")
    q, phi, exps, residue, gauge, levi = _graded_reduction(oper, lam)
    return LambdaNilpForm(alg, lam, exps, phi, q, residue, levi, gauge)


def _graded_reduction(oper, lam):
    """Shared engine behind the nilpotent and lambda-nilpotent forms.

    Works on the ad(lam + rho_check) grading: twist to the regular-
    singularity frame, conjugate the residue onto p_{-1} - (lam + rho) by
    the finite Kostant step, clear each graded component degree by degree
    with the descending sweeps, then untwist.
    """
    alg = oper.algebra
    rank = alg.rank
    mu = tuple(Q(l) + 1 for l in lam)          # lam + rho_check
    exps = tuple(int(Q(l)) for l in lam)
    m_pair = tuple(int(Q(x)) for x in mu)
    if any(m < 0 for m in m_pair):
        raise DomainError("lam + rho_check must be dominant")
    levi = tuple(i for i, m in enumerate(m_pair) if m == 0)
    grades = alg.grading_by_coweight(mu)
    mu_vec = alg.coweight_vec(mu)

    # residue precondition
    target = kostant_project(alg, vec_scale(mu_vec, Q(-1)))
    if res_rs(oper) != target:
        raise DomainError(
            "residue mismatch: res_rs is %s but varpi(-lam-rho) is %s"
            % (res_rs(oper).coords, target.coords))

    # regular-singularity frame
    rho_coords = coweight_torus_coordinates(alg, alg.rho_check())
    conn = apply_torus(oper.connection(), rho_coords)
    gauge = GaugeElement.from_torus(alg, rho_coords)
    p_minus1 = alg.principal.p_minus1

    def q_series():
        return conn.shift(1) - LieSeries.constant(alg, p_minus1, space="g")

    # finite step: conjugate the residue onto p_{-1} - mu
    qs = q_series()
    x0 = qs.coefficient(0)
    _, wit1 = kostant_project(alg, x0, with_witness=True)
    _, wit2 = kostant_project(alg, vec_scale(mu_vec, Q(-1)),
                              with_witness=True)
    if wit1 != wit2:
        steps = [LieSeries.constant(alg, u, space="n") for u in wit1]
        steps += [LieSeries.constant(alg, vec_scale(u, Q(-1)), space="n")
                  for u in reversed(wit2)]
        for u in steps:
            conn = apply_unipotent(conn, u)
            gauge = GaugeElement(alg, gauge.torus, gauge.unipotents + (u,))
    qs = q_series()
    check = vec_sub(qs.coefficient(0), vec_scale(mu_vec, Q(-1)))
    if check:
        raise AssertionError("residue normalization failed")

    # graded sweeps: make the Gamma = k component of q divisible by t^k
    e_set = _e_indices(alg)
    gamma_max = max((grades[i] for i in e_set), default=0)
    n0 = {}
    for i in levi:
        s = tuple(1 if j == i else 0 for j in range(rank))
        n0[alg.chevalley.f_index[s]] = Q(1)
    for d in range(1, gamma_max):
        for k in range(gamma_max, d, -1):
            space = [i for i in sorted(e_set) if grades[i] == k]
            if not space:
                continue
            qs = q_series()
            if qs.prec is not None and d >= qs.prec:
                raise PrecisionError(
                    "window exhausted during the graded reduction at t^%d"
                    % d)
            coeff = qs.coefficient(d)
            y = {i: coeff[i] for i in space if i in coeff}
            if not y:
                continue
            u_vec = _solve_sweep(alg, space, n0, k, d, y)
            u = LieSeries(alg, "n", {d: u_vec}, qs.prec, validate=False)
            conn = apply_unipotent(conn, u)
            gauge = GaugeElement(alg, gauge.torus, gauge.unipotents + (u,))

    # untwist
    inv_coords = tuple(ScalarSeries.monomial(Q(1), -m) for m in m_pair)
    conn = apply_torus(conn, inv_coords)
    gauge = gauge.then(GaugeElement.from_torus(alg, inv_coords))

    # read off the final shape
    ch = alg.chevalley
    simple = [tuple(1 if k == i else 0 for k in range(rank))
              for i in range(rank)]
    phi = []
    rest = conn
    for i, s in enumerate(simple):
        fi = ch.f_index[s]
        comp = conn.component_series(fi)
        phi_i = comp.shift(-exps[i])
        phi.append(phi_i)
        rest = rest - LieSeries.from_scalar(alg, comp, {fi: Q(1)})
    q = rest.shift(1)
    if q.coeffs and min(q.coeffs) < 0:
        raise AssertionError("graded reduction left a deep pole")
    residue = q.coefficient(0)
    _assert_levi_nilpotent(alg, levi, phi, residue)
    return (q.retag("b"), tuple(phi), exps, residue, gauge, levi)


def _solve_sweep(alg, space, n0, k, d, y):
    """Solve (k - d) u - ad(n0) u = -y restricted to the Gamma = k slice.

    n0 is the sum of the Levi lowering generators; the residue
    normalization makes it the only Gamma-degree-0 term besides -mu.
    """
    br = alg.chevalley.bracket
    gr = alg.chevalley.principal_grading
    cols = []
    for i in space:
        img = br({i: Q(1)}, n0)
        img = vec_add(img, {i: Q(k - d)})
        cols.append([img.get(j, Q(0)) for j in space])
    mat = [[cols[c][r] for c in range(len(space))]
           for r in range(len(space))]
    from . import _linalg
    rhs = [-y.get(i, Q(0)) for i in space]
    try:
        sol = _linalg.solve_unique(mat, rhs)
    except ValueError:
        raise DomainError(
            "graded step is not uniquely solvable at degree %d" % k)
    return {i: c for i, c in zip(space, sol) if c}


def _assert_levi_nilpotent(alg, levi, phi, residue):
    """Residue condition: the Levi block of the polar part is nilpotent."""
    ch = alg.chevalley
    levi_roots = set()
    for root in alg.root_datum.positive_roots:
        if all(root[i] == 0 for i in range(alg.rank) if i not in levi):
            levi_roots.add(root)
    elem = {}
    for i in levi:
        s = tuple(1 if j == i else 0 for j in range(alg.rank))
        elem = vec_add(elem, vec_scale({ch.f_index[s]: Q(1)},
                                       phi[i].coefficient(0)))
    for key, val in residue.items():
        if key in _h_indices(alg):
            elem = vec_add(elem, {key: val})
        else:
            root = next((r for r, i in ch.e_index.items() if i == key), None)
            if root is not None and root in levi_roots:
                elem = vec_add(elem, {key: val})
    if not elem:
        return
    mat = alg.chevalley.ad_matrix(elem)
    from . import _linalg
    if _linalg.mat_power_rank(mat, alg.chevalley.dim):
        raise DomainError(
            "polar part violates the Levi nilpotency condition")


# ---------------------------------------------------------------------------
# secondary residue


@dataclass(frozen=True)
class NilpResidue:
    n_element: dict
    ad_ranks: tuple
    jordan_partition: tuple     # type A only, else ()

    def is_zero(self):
        return not self.n_element


def res_nilp(form):
    """Secondary residue of a nilpotent oper: q(0) with orbit invariants."""
    alg = form.algebra
    x = form.residue_n
    mat = alg.chevalley.ad_matrix(x)
    h = alg.root_datum.coxeter_number
    ranks = tuple(_rank_of_power(mat, k) for k in range(1, h + 1))
    jordan = ()
    if alg.family == "A":
        m = alg.matrix_of(x)
        n = alg.rank + 1
        rs = [n] + [_rank_of_power(m, k) for k in range(1, n + 1)]
        parts = []
        for k in range(1, n + 1):
            cnt = rs[k - 1] - 2 * rs[k] + (rs[k + 1] if k + 1 <= n else 0)
            parts.extend([k] * cnt)
        jordan = tuple(sorted(parts, reverse=True))
    return NilpResidue(x, ranks, jordan)


def _rank_of_power(mat, k):
    from . import _linalg
    return _linalg.mat_power_rank(mat, k)


# ---------------------------------------------------------------------------
# horizontal sections


def horizontal_sections(oper, depth):
    """Basis of solutions of u' + [p_{-1} + v, u] = 0 in g[[t]] mod t^depth.

    Only defined for regular opers; each solution is determined by u(0), so
    the space has dimension dim g.
    """
    if depth < 1:
        raise DomainError("depth must be at least 1")
    if singularity_order(oper) != 0:
        raise DomainError("horizontal sections need a regular oper")
    alg = oper.algebra
    a = oper.connection()
    prec = depth if a.prec is None else min(depth, a.prec + 1)
    sols = []
    br = alg.chevalley.bracket
    for seed in range(alg.chevalley.dim):
        coeffs = {0: {seed: Q(1)}}
        for n in range(0, prec - 1):
            # u_{n+1} = -(1/(n+1)) [A, u]_n, triangular in n
            acc = {}
            for d, avec in a.coeffs.items():
                prev = coeffs.get(n - d)
                if prev is not None:
                    acc = vec_add(acc, br(avec, prev))
            nxt = vec_scale(acc, Q(-1, n + 1))
            if nxt:
                coeffs[n + 1] = nxt
        sols.append(LieSeries(alg, "g", coeffs, prec, validate=False))
    return sols
