"""The Miura transformation and the structure of its fibers.

An H-connection is an h-valued connection d/dt + u(t) on the rho-check
power of the canonical bundle, trivialized by the fixed coordinate.  The
Miura transformation adds the sum of the simple lowering generators and
takes the canonical form.  The inverse for dominant residues runs the
horizontal Borel-reduction recursion; over a nilpotent oper the Miura
structures are classified by Weyl-group elements through the residue, with
the transported-flag verification in type A.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from . import _linalg
from .errors import DomainError, PrecisionError, SingularRecursionError
from .oper import (CanonicalOper, GaugeElement, RawOper, apply_torus,
                   apply_unipotent, canonicalize, coweight_torus_coordinates,
                   is_nilpotent_oper, nilp_normal_form, res_nilp, res_rs,
                   _e_indices, _f_indices, _h_indices)
from .rootdata import kostant_project, vec_scale, vec_sub
from .series import DEFAULT_PRECISION, LieSeries, ScalarSeries


@dataclass(frozen=True)
class HConnection:
    """h-valued connection d/dt + u(t), the source of the Miura map."""
    algebra: object
    u: object     # h-tagged LieSeries

    def __post_init__(self):
        if self.u.space != "h":
            raise DomainError("an H-connection must carry an h-valued series")

    def pole_order(self):
        md = min(self.u.coeffs, default=0)
        if self.u.prec is not None and self.u.prec < 0:
            raise PrecisionError("window does not determine the polar part")
        return max(0, -md)

    @property
    def rs_flag(self):
        return self.pole_order() <= 1

    def residue(self):
        """Residue in fundamental-coweight coordinates (pole order <= 1)."""
        if not self.rs_flag:
            raise DomainError("connection does not have a regular singularity")
        return self.algebra.coweight_of_cartan_vec(self.u.coefficient(-1))


def h_connection(algebra, u):
    return HConnection(algebra, u)


def _miura_raw(chi):
    alg = chi.algebra
    ones = tuple(ScalarSeries.one() for _ in range(alg.rank))
    return RawOper(alg, ones, chi.u.retag("b"))


def miura_transform(chi, with_gauge=False):
    """Canonical form of d/dt + p_{-1} + u(t)."""
    oper, gauge = canonicalize(_miura_raw(chi))
    if with_gauge:
        return oper, gauge
    return oper


@dataclass(frozen=True)
class ResidueDiagram:
    lhs: object   # res_rs(MT(chi))
    rhs: object   # varpi(res_h(chi) - rho_check)
    equal: bool


def check_residue_diagram(chi):
    """Both routes around the residue square, as evidence."""
    alg = chi.algebra
    lhs = res_rs(miura_transform(chi))
    res_h = chi.residue()
    shifted = tuple(Q(c) - 1 for c in res_h)
    rhs = kostant_project(alg, alg.coweight_vec(shifted))
    return ResidueDiagram(lhs, rhs, lhs == rhs)


# ---------------------------------------------------------------------------
# dominant inverse


def miura_inverse_dominant(oper, lam, depth=None):
    """Inverse of the Miura transformation over varpi(lam), lam dominant.

    Returns the H-connection with residue lam + rho_check mapping to the
    oper.  When lam fails dominance the degree-k recursion matrix becomes
    singular and SingularRecursionError reports the degree, as predicted.
    """
    alg = oper.algebra
    lam = tuple(Q(x) for x in lam)
    lam_vec = alg.coweight_vec(lam)
    target = kostant_project(alg, lam_vec)
    got = res_rs(oper)
    if got != target:
        raise DomainError(
            "residue mismatch: res_rs is %s but varpi(lam) is %s"
            % (got.coords, target.coords))

    rho_coords = coweight_torus_coordinates(alg, alg.rho_check())
    conn = apply_torus(oper.connection(), rho_coords)

    # constant step: move the residue onto p_{-1} + lam
    q0_target = lam_vec
    qs = conn.shift(1)
    x0 = vec_sub(qs.coefficient(0), _p_minus1_vec(alg))
    _, wit1 = kostant_project(alg, x0, with_witness=True)
    _, wit2 = kostant_project(alg, q0_target, with_witness=True)
    if wit1 != wit2:
        for u in wit1:
            conn = apply_unipotent(
                conn, LieSeries.constant(alg, u, space="n"))
        for u in reversed(wit2):
            conn = apply_unipotent(
                conn, LieSeries.constant(alg, vec_scale(u, Q(-1)), space="n"))

    # Drinfeld recursion: kill the n-components of q degree by degree
    if depth is None:
        depth = DEFAULT_PRECISION if conn.prec is None else conn.prec + 1
    e_list = sorted(_e_indices(alg))
    br = alg.chevalley.bracket
    q0 = conn.shift(1).coefficient(0)
    mats = {}
    for k in range(1, depth):
        qs = conn.shift(1)
        if qs.prec is not None and k >= qs.prec:
            break
        qk = qs.coefficient(k)
        y = {i: qk[i] for i in e_list if i in qk}
        if not y:
            continue
        if k not in mats:
            cols = []
            for j in e_list:
                img = br(q0, {j: Q(1)})
                col = {i: img.get(i, Q(0)) for i in e_list}
                col[j] = col.get(j, Q(0)) + k
                cols.append([col.get(i, Q(0)) for i in e_list])
            mats[k] = [[cols[c][r] for c in range(len(e_list))]
                       for r in range(len(e_list))]
        try:
            sol = _linalg.solve_unique(mats[k], [y.get(i, Q(0))
                                                 for i in e_list])
        except ValueError:
            raise SingularRecursionError(
                "recursion matrix k + ad(q0) on g/b^- is singular at k=%d;"
                " lam is not dominant" % k, k)
        u_vec = {i: c for i, c in zip(e_list, sol) if c}
        u = LieSeries(alg, "n", {k: u_vec}, None, validate=False)
        conn = apply_unipotent(conn, u)

    qs = conn.shift(1)
    stray = [i for i in qs.support_indices()
             if i in _e_indices(alg) and any(
                 d < depth for d, vec in qs.coeffs.items() if i in vec)]
    if stray:
        raise AssertionError("recursion left raising components")
    h_part = qs.select(_h_indices(alg), space="h")
    rho_vec = alg.coweight_vec(alg.rho_check())
    u_series = (h_part + LieSeries.constant(alg, rho_vec, space="h")
                ).shift(-1)
    if u_series.prec is None:
        # the reduction was only performed below the requested depth
        u_series = u_series.truncate(depth - 1)
    return HConnection(alg, u_series.retag("h"))


def _p_minus1_vec(alg):
    return dict(alg.principal.p_minus1)


# ---------------------------------------------------------------------------
# classification of Miura opers with nilpotent singularity


@dataclass(frozen=True)
class MiuraClass:
    weyl_element: object
    limit_flag: tuple     # type A: per-step Plucker coordinate tuples
    flag_checked: bool


def classify_miura_nilp(chi, check_flag=True):
    """The Weyl chamber of a Miura structure on a nilpotent oper.

    The residue of chi must equal rho_check - w(rho_check) for a unique w;
    in type A the transported lowering flag is computed at t = 0 and its
    relative position is verified against w, as is the containment of the
    secondary residue.
    """
    alg = chi.algebra
    res = chi.residue()
    rho = alg.rho_check()
    found = None
    for w in alg.weyl_group():
        delta = tuple(a - b for a, b in zip(rho, w.apply_coweight(rho)))
        if delta == tuple(res):
            found = w
            break
    if found is None:
        raise DomainError(
            "residue (%s) is not of the form rho - w(rho)"
            % ", ".join(str(c) for c in res))
    if alg.family != "A" or not check_flag:
        return MiuraClass(found, (), False)

    oper, g1 = miura_transform(chi, with_gauge=True)
    if not is_nilpotent_oper(oper):
        raise DomainError("the Miura image is not a nilpotent oper")
    form = nilp_normal_form(oper)
    total = g1.then(form.gauge_from_canonical)
    mat = _gauge_matrix(alg, total)
    n = alg.rank + 1
    flags = []
    pluckers = []
    for k in range(1, n + 1):
        cols = [[mat[i][n - k + j] for i in range(n)] for j in range(k)]
        basis = _limit_subspace(cols)
        flags.append(basis)
        pluckers.append(_plucker(basis))
    perm = _jump_permutation(flags)
    w_flag = _weyl_from_flag_permutation(alg, perm)
    if w_flag.word != found.word:
        raise AssertionError(
            "limit flag position %s disagrees with the residue chamber %s"
            % (w_flag.word, found.word))
    # the secondary residue must lie in the Borel of the limit flag
    nres = res_nilp(form)
    nmat = alg.matrix_of(nres.n_element)
    for basis in flags[:-1]:
        if not _preserves(nmat, basis):
            raise AssertionError(
                "secondary residue does not preserve the limit flag")
    return MiuraClass(found, tuple(pluckers), True)


def _gauge_matrix(alg, gauge):
    """Matrix of a gauge element in the fundamental representation (type A).

    The adjoint-torus coordinates are lifted to the diagonal GL-matrix with
    d_j / d_{j+1} = c_j and d_{rank+1} = 1; flags do not see the central
    ambiguity of the lift.
    """
    n = alg.rank + 1
    diag = []
    for j in range(n):
        d = ScalarSeries.one()
        for i in range(j, alg.rank):
            d = d * gauge.torus[i]
        diag.append(d)
    out = [[diag[i] if i == j else ScalarSeries.zero()
            for j in range(n)] for i in range(n)]
    for u in gauge.unipotents:
        out = _series_mat_mul(_series_exp(alg, u), out)
    return out


def _series_identity(n):
    return [[ScalarSeries.one() if i == j else ScalarSeries.zero()
             for j in range(n)] for i in range(n)]


def _series_mat_mul(a, b):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = ScalarSeries.zero()
            for k in range(n):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _series_exp(alg, u):
    """exp of an n-valued LieSeries in the fundamental representation."""
    n = alg.rank + 1
    rep = alg.fundamental_matrices()
    m = [[ScalarSeries.zero() for _ in range(n)] for _ in range(n)]
    for d, vec in u.coeffs.items():
        for idx, c in vec.items():
            base = rep[idx]
            for i in range(n):
                for j in range(n):
                    if base[i][j]:
                        m[i][j] = m[i][j] + ScalarSeries.monomial(
                            c * base[i][j], d)
    out = _series_identity(n)
    term = _series_identity(n)
    for k in range(1, n):
        term = _series_mat_mul(term, m)
        term = [[x.scale(Q(1, k)) for x in row] for row in term]
        out = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(out, term)]
    return out


def _limit_subspace(cols):
    """Limit at t=0 of the span of series columns, as exact rational vectors.

    Columns are repeatedly normalized to valuation zero and reduced until
    their leading vectors are independent; this is the saturation of the
    column module over the power series ring.
    """
    n = len(cols[0])
    work = [list(c) for c in cols]
    for _ in range(1000):
        leads = []
        for c in work:
            vals = [s.valuation() for s in c if s.coeffs]
            if not vals:
                raise DomainError("flag column degenerates to zero")
            v = min(vals)
            for i in range(n):
                c[i] = c[i].shift(-v)
            leads.append([s.coefficient(0) for s in c])
        if _linalg.matrix_rank(leads) == len(work):
            return tuple(tuple(row) for row in leads)
        # eliminate one dependency among the leading vectors and retry
        coeffs = _linalg.nullspace(list(map(list, zip(*leads))))[0]
        k = max(i for i, c in enumerate(coeffs) if c)
        for i in range(n):
            acc = work[k][i].scale(coeffs[k])
            for j, cj in enumerate(coeffs):
                if j != k and cj:
                    acc = acc + work[j][i].scale(cj)
            work[k][i] = acc
    raise AssertionError("flag limit did not stabilize")


def _plucker(basis):
    """Maximal minors of the basis matrix, in lexicographic row order."""
    from itertools import combinations
    k = len(basis)
    n = len(basis[0])
    out = []
    for rows in combinations(range(n), k):
        sub = [[basis[j][r] for j in range(k)] for r in rows]
        out.append(_det(sub))
    # normalize: first nonzero entry positive
    lead = next((x for x in out if x), None)
    if lead and lead < 0:
        out = [-x for x in out]
    return tuple(out)


def _det(m):
    k = len(m)
    if k == 1:
        return m[0][0]
    total = Q(0)
    for i in range(k):
        if m[i][0]:
            minor = [row[1:] for r, row in enumerate(m) if r != i]
            total += (-1) ** i * m[i][0] * _det(minor)
    return total


def _jump_permutation(flags):
    """perm[k] = the standard-basis stage entering at flag step k (1-based)."""
    n = len(flags)
    r = {}
    for k in range(0, n + 1):
        for j in range(0, n + 1):
            if k == 0 or j == 0:
                r[(j, k)] = 0
                continue
            rows = [list(v) for v in flags[k - 1]]
            for jj in range(j):
                unit = [Q(0)] * n
                unit[jj] = Q(1)
                rows.append(unit)
            r[(j, k)] = j + k - _linalg.matrix_rank(rows)
    perm = []
    for k in range(1, n + 1):
        for j in range(1, n + 1):
            if (r[(j, k)] - r[(j - 1, k)] - r[(j, k - 1)]
                    + r[(j - 1, k - 1)]) == 1:
                perm.append(j)
                break
    return perm


def _weyl_permutation(alg, w):
    """The permutation of 1..rank+1 realized by a type A Weyl element.

    The word (i1, ..., ik) denotes s_{i1} o ... o s_{ik} as functions, so
    the transpositions are composed from the right.
    """
    n = alg.rank + 1
    perm = list(range(1, n + 1))
    for letter in reversed(w.word):
        a, b = letter + 1, letter + 2
        perm = [b if v == a else a if v == b else v for v in perm]
    return perm


def _weyl_from_flag_permutation(alg, perm):
    """Match the flag jump data to a Weyl element.

    The flag of a point of B w^{-1} B^- has jumps perm[k] = tau(n+2-k)
    with tau the permutation of w^{-1}.
    """
    n = alg.rank + 1
    tau = [0] * n
    for k in range(1, n + 1):
        tau[n + 1 - k - 1] = perm[k - 1]
    target = list(tau)
    for w in alg.weyl_group():
        sigma = _weyl_permutation(alg, w)
        inv = [0] * n
        for i, s in enumerate(sigma):
            inv[s - 1] = i + 1
        if inv == target:
            return w
    raise AssertionError("no Weyl element matches the flag position")


def _preserves(nmat, basis):
    """Does the matrix map span(basis) into itself?"""
    rows = [list(v) for v in basis]
    k = len(rows)
    for v in basis:
        img = [sum(nmat[i][j] * v[j] for j in range(len(v)))
               for i in range(len(v))]
        test = rows + [img]
        if _linalg.matrix_rank(test) != k:
            return False
    return True
