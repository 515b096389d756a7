"""Root systems, Chevalley bases and principal sl2 data for simple Lie algebras.

All arithmetic is exact over `fractions.Fraction`.  The fixed basis of the
algebra is: raising vectors e_alpha for positive roots ordered by (height,
lexicographic coordinates), then the Cartan generators h_1..h_rank, then the
lowering vectors f_alpha in the same root order.  Structure constants are
integers produced by the extraspecial-pair algorithm over that ordering, so
the tables are reproducible bit for bit.

Coordinate conventions used everywhere downstream:

* weights (elements of h*) are tuples of Fractions in fundamental-weight
  coordinates, entry i being the pairing with the simple coroot i;
* coweights (elements of h) are tuples in fundamental-coweight coordinates,
  entry i being the pairing of the simple root i with the coweight;
* roots are tuples of integers in the simple-root basis;
* cartan_matrix[i][j] is the pairing of the simple root j with the simple
  coroot i.

Algebra elements are sparse dicts {basis index: Fraction}; helpers vec_add,
vec_sub, vec_scale live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache

from . import _linalg
from .errors import DomainError

MAX_RANK = 8
_WEYL_ENUMERATION_CAP = 60000

# ---------------------------------------------------------------------------
# sparse vectors over the algebra basis


def vec_add(x, y):
    out = dict(x)
    for k, v in y.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_sub(x, y):
    out = dict(x)
    for k, v in y.items():
        s = out.get(k, 0) - v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(x, c):
    if not c:
        return {}
    return {k: c * v for k, v in x.items()}


# ---------------------------------------------------------------------------
# Cartan matrices

_VALID = {"A": (1, 8), "B": (2, 8), "C": (2, 8), "D": (4, 8),
          "E": (6, 8), "F": (4, 4), "G": (2, 2)}


def _validate_type(family, rank):
    if family not in _VALID:
        raise DomainError("unknown family %r; expected one of A-G" % (family,))
    lo, hi = _VALID[family]
    if not isinstance(rank, int) or not lo <= rank <= hi:
        raise DomainError(
            "invalid rank %r for family %s (allowed %d..%d)"
            % (rank, family, lo, hi))


def cartan_matrix(family, rank):
    """Cartan matrix in Bourbaki numbering; entry [i][j] = <alpha_j, coroot_i>."""
    _validate_type(family, rank)
    r = rank
    a = [[2 if i == j else 0 for j in range(r)] for i in range(r)]

    def bond(i, j):
        a[i][j] = -1
        a[j][i] = -1

    if family in ("A", "B", "C"):
        for i in range(r - 1):
            bond(i, i + 1)
        if family == "B":
            a[r - 1][r - 2] = -2      # last simple root short
        if family == "C":
            a[r - 2][r - 1] = -2      # last simple root long
    elif family == "D":
        for i in range(r - 2):
            bond(i, i + 1)
        bond(r - 3, r - 1)
    elif family == "E":
        chain = [0, 2, 3, 4, 5, 6, 7][: r - 1]
        for u, v in zip(chain, chain[1:]):
            bond(u, v)
        bond(1, 3)
    elif family == "F":
        bond(0, 1)
        bond(2, 3)
        a[1][2] = -1
        a[2][1] = -2                  # roots 3,4 short
    elif family == "G":
        a[0][1] = -1
        a[1][0] = -3                  # second root short
    return tuple(tuple(row) for row in a)


def _symmetrizers(cartan):
    """d_i = (alpha_i, alpha_i) / 2, normalized so long roots have length^2 = 2."""
    r = len(cartan)
    d = [None] * r
    d[0] = Q(1)
    changed = True
    while changed:
        changed = False
        for i in range(r):
            if d[i] is None:
                continue
            for j in range(r):
                if i != j and cartan[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * Q(cartan[i][j], cartan[j][i])
                    changed = True
    top = max(d)
    return tuple(x / top for x in d)


# ---------------------------------------------------------------------------
# root system enumeration


def _positive_roots(cartan):
    """Positive roots in simple-root coordinates, ordered by (height, lex)."""
    r = len(cartan)
    simple = [tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]
    known = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(r):
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in known:
                        p += 1
                    else:
                        break
                pairing = sum(cartan[i][j] * beta[j] for j in range(r))
                if p - pairing > 0:
                    up = tuple(b + (1 if k == i else 0)
                               for k, b in enumerate(beta))
                    if up not in known:
                        known.add(up)
                        nxt.append(up)
        frontier = nxt
    return tuple(sorted(known, key=lambda t: (sum(t), t)))


def _exponents(positive_roots):
    """Exponents of the algebra: conjugate partition of the height counts."""
    heights = [sum(r) for r in positive_roots]
    hmax = max(heights)
    counts = [heights.count(k) for k in range(1, hmax + 2)]
    exps = []
    for k in range(1, hmax + 1):
        exps.extend([k] * (counts[k - 1] - counts[k]))
    return tuple(sorted(exps))


# ---------------------------------------------------------------------------
# datum types


@dataclass(frozen=True, eq=False)
class RootDatum:
    family: str
    rank: int
    cartan_matrix: tuple
    simple_roots: tuple          # fundamental-weight coordinates, per root
    simple_coroots: tuple        # fundamental-coweight coordinates, per coroot
    positive_roots: tuple        # simple-root coordinates, (height, lex) order
    heights: tuple
    exponents: tuple
    weyl_order: int
    symmetrizers: tuple          # d_i = (alpha_i, alpha_i)/2, long roots = 1

    @property
    def num_positive_roots(self):
        return len(self.positive_roots)

    @property
    def coxeter_number(self):
        return self.heights[-1] + 1

    def root_fundamental_coords(self, root):
        a = self.cartan_matrix
        r = self.rank
        return tuple(sum(a[i][j] * root[j] for j in range(r)) for i in range(r))

    def root_length_sq(self, root):
        a = self.cartan_matrix
        d = self.symmetrizers
        r = self.rank
        tot = Q(0)
        for i in range(r):
            if root[i]:
                pairing = sum(a[i][j] * root[j] for j in range(r))
                tot += root[i] * d[i] * pairing
        return tot

    def coroot_coordinates(self, root):
        """Coefficients of the coroot of `root` over the simple coroots."""
        d_beta = self.root_length_sq(root) / 2
        return tuple(root[i] * self.symmetrizers[i] / d_beta
                     for i in range(self.rank))


@dataclass(frozen=True, eq=False)
class ChevalleyAlgebra:
    dim: int
    rank: int
    labels: tuple
    e_index: dict                # positive root -> basis index
    f_index: dict
    h_start: int
    principal_grading: tuple     # ad-rho-check degree per basis index
    bracket_rows: dict           # (i, j) -> tuple of (k, int coeff); all i, j

    def h_index(self, i):
        return self.h_start + i

    def bracket(self, x, y):
        out = {}
        rows = self.bracket_rows
        for i, xi in x.items():
            for j, yj in y.items():
                terms = rows.get((i, j))
                if terms:
                    c = xi * yj
                    for k, n in terms:
                        s = out.get(k, 0) + c * n
                        if s:
                            out[k] = s
                        else:
                            del out[k]
        return out

    def ad_matrix(self, x):
        n = self.dim
        mat = [[Q(0)] * n for _ in range(n)]
        for j in range(n):
            img = self.bracket(x, {j: Q(1)})
            for k, v in img.items():
                mat[k][j] = v
        return mat


@dataclass(frozen=True, eq=False)
class PrincipalData:
    p_minus1: dict
    two_rho_check: dict
    p_1: dict
    vcan_basis: tuple            # tuple of (degree, sparse vec), degree order
    vcan_degrees: tuple

    @property
    def dim_vcan(self):
        return len(self.vcan_basis)


@dataclass(frozen=True)
class CartanOrbitPoint:
    """A point of h // W in Kostant-slice coordinates (V_can basis)."""
    family: str
    rank: int
    coords: tuple


# ---------------------------------------------------------------------------
# structure constants via extraspecial pairs


class _ConstantTable:
    """Chevalley structure constants N(x, y) over the full root system.

    Signs are pinned by setting N = p + 1 > 0 on extraspecial pairs for the
    (height, lex) root order; every other constant is forced by antisymmetry,
    N(-x,-y) = -N(x,y), the rotation rule for zero-sum triples, and the
    Jacobi identity for zero-sum quadruples.
    """

    def __init__(self, datum):
        self.datum = datum
        self.posset = set(datum.positive_roots)
        self.rootset = self.posset | {tuple(-c for c in r)
                                      for r in datum.positive_roots}
        self.order = {r: i for i, r in enumerate(datum.positive_roots)}
        self.lensq = {r: datum.root_length_sq(r) for r in datum.positive_roots}
        self.table = {}
        self._build()

    def _is_root(self, t):
        return t in self.rootset

    def _p(self, a, b):
        """Largest k with b - k*a a root."""
        k = 0
        cur = tuple(x - y for x, y in zip(b, a))
        while self._is_root(cur):
            k += 1
            cur = tuple(x - y for x, y in zip(cur, a))
        return k

    def _build(self):
        for gamma in self.datum.positive_roots:
            if sum(gamma) < 2:
                continue
            pairs = []
            for alpha in self.datum.positive_roots:
                if self.order[alpha] >= self.order[gamma]:
                    break
                beta = tuple(g - a for g, a in zip(gamma, alpha))
                if beta in self.posset and self.order[alpha] < self.order[beta]:
                    pairs.append((alpha, beta))
            alpha0, beta0 = pairs[0]
            self.table[(alpha0, beta0)] = self._p(alpha0, beta0) + 1
            for xi, eta in pairs[1:]:
                self.table[(xi, eta)] = self._derive(xi, eta, alpha0, beta0)

    def _derive(self, xi, eta, alpha, beta):
        # Jacobi for the zero-sum quadruple (xi, eta, -alpha, -beta):
        # N(xi,eta) N(gamma,-alpha) + N(eta,-alpha) N(eta-alpha,xi)
        #                           + N(-alpha,xi) N(xi-alpha,eta) = 0.
        gamma = tuple(x + y for x, y in zip(xi, eta))
        neg_a = tuple(-c for c in alpha)
        denom = self.n(gamma, neg_a)
        acc = Q(0)
        if self._is_root(tuple(x - y for x, y in zip(eta, alpha))):
            em = tuple(x - y for x, y in zip(eta, alpha))
            acc += self.n(eta, neg_a) * self.n(em, xi)
        if self._is_root(tuple(x - y for x, y in zip(xi, alpha))):
            xm = tuple(x - y for x, y in zip(xi, alpha))
            acc += self.n(neg_a, xi) * self.n(xm, eta)
        val = -acc / denom
        if val.denominator != 1:
            raise AssertionError("special-pair constant is not integral")
        return int(val)

    def n(self, x, y):
        """N(x, y) as a Fraction, for any roots x, y with x + y a root."""
        s = tuple(a + b for a, b in zip(x, y))
        if not self._is_root(s):
            return Q(0)
        xp = x in self.posset
        yp = y in self.posset
        if xp and yp:
            if self.order[x] < self.order[y]:
                return Q(self.table[(x, y)])
            return -Q(self.table[(y, x)])
        if not xp and not yp:
            return -self.n(tuple(-c for c in x), tuple(-c for c in y))
        # mixed signs
        if s in self.posset:
            # one positive among (x, y, -s); flip all signs first
            return -self.n(tuple(-c for c in x), tuple(-c for c in y))
        # two positives among the zero-sum triple (x, y, -s):
        # rotation rule  N(a,b)/(c,c) = N(b,c)/(a,a) = N(c,a)/(b,b)
        c = tuple(-a for a in s)
        if xp:
            # pair (c, x) is positive-positive: N(x,y) = N(c,x) (c,c)... solve
            # N(c,a)/(b,b) = N(a,b)/(c,c) with a = x, b = y, c = c:
            # N(x,y) = N(c,x) * (c,c) / (y,y)
            return self.n(c, x) * self.lensq[c] / self.lensq[_abs_root(y)]
        # pair (y, c) is positive-positive: N(x,y) = N(y,c) * (c,c) / (x,x)
        return self.n(y, c) * self.lensq[c] / self.lensq[_abs_root(x)]


def _abs_root(x):
    return x if any(v > 0 for v in x) else tuple(-c for c in x)


# ---------------------------------------------------------------------------
# algebra assembly


class Algebra:
    """Bundle of root datum, Chevalley table and principal data, with caches.

    Instances are immutable after construction and safe to share between
    threads; build one per (family, rank) via :func:`algebra`.
    """

    def __init__(self, family, rank):
        _validate_type(family, rank)
        self.family = family
        self.rank = rank
        self.root_datum = _build_root_datum(family, rank)
        self.chevalley = _build_chevalley(self.root_datum)
        self.principal = _build_principal(self.root_datum, self.chevalley)
        self._decomp_cache = {}
        self._vcan_matrix = None
        self._weyl = None
        self._rep = None

    # -- basic vectors ------------------------------------------------------

    def coweight_vec(self, coweight):
        """Cartan element with the given fundamental-coweight coordinates."""
        at = _transpose(self.root_datum.cartan_matrix)
        xs = _linalg.solve_unique([[Q(v) for v in row] for row in at],
                                  [Q(v) for v in coweight])
        h0 = self.chevalley.h_start
        return {h0 + j: x for j, x in enumerate(xs) if x}

    def fundamental_coweight_vec(self, i):
        return self.coweight_vec(tuple(Q(1) if j == i else Q(0)
                                       for j in range(self.rank)))

    def rho_check(self):
        return tuple(Q(1) for _ in range(self.rank))

    def rho(self):
        return tuple(Q(1) for _ in range(self.rank))

    def cartan_part(self, x):
        h0 = self.chevalley.h_start
        return {k: v for k, v in x.items() if h0 <= k < h0 + self.rank}

    def coweight_of_cartan_vec(self, x):
        """Fundamental-coweight coordinates of a Cartan-subalgebra element."""
        h0 = self.chevalley.h_start
        a = self.root_datum.cartan_matrix
        out = []
        for i in range(self.rank):
            out.append(sum((x.get(h0 + j, Q(0))) * a[j][i]
                           for j in range(self.rank)))
        return tuple(out)

    # -- gradings -----------------------------------------------------------

    def principal_component(self, x, degree):
        gr = self.chevalley.principal_grading
        return {k: v for k, v in x.items() if gr[k] == degree}

    def grading_by_coweight(self, coweight):
        """Per-basis-index integer grading by ad of the given coweight."""
        rd = self.root_datum
        ch = self.chevalley
        grades = [0] * ch.dim
        for root, idx in ch.e_index.items():
            pairing = sum(Q(root[i]) * coweight[i] for i in range(self.rank))
            if pairing.denominator != 1:
                raise DomainError("coweight pairing with %r is not integral"
                                  % (root,))
            grades[idx] = int(pairing)
            grades[ch.f_index[root]] = -int(pairing)
        return tuple(grades)

    # -- Kostant slice ------------------------------------------------------

    def vcan_coords(self, x):
        """Coordinates of x in the V_can basis; raises if x is outside."""
        basis = self.principal.vcan_basis
        support = sorted({k for _, b in basis for k in b} | set(x))
        cols = [[b.get(k, Q(0)) for k in support] for _, b in basis]
        target = [x.get(k, Q(0)) for k in support]
        try:
            coeffs = _linalg.solve_in_span(cols, target)
        except ValueError:
            raise DomainError("vector is not in the Kostant slice V_can")
        return tuple(coeffs)

    def vcan_vec(self, coords):
        out = {}
        for c, (_, b) in zip(coords, self.principal.vcan_basis):
            out = vec_add(out, vec_scale(b, c))
        return out

    def orbit_point(self, coords):
        return CartanOrbitPoint(self.family, self.rank, tuple(coords))

    def principal_degree_solver(self, d):
        """Solver for b_d = [p_{-1}, n_{d+1}] (+) V_can,d.

        Returns (n_basis, vcan_slice, solve) where solve(y) gives the pair
        (u, c) with y = [p_{-1}, u] + c, u in n_{d+1}, c in V_can,d.
        """
        if d in self._decomp_cache:
            return self._decomp_cache[d]
        ch = self.chevalley
        gr = ch.principal_grading
        e_set = set(ch.e_index.values())
        if d == 0:
            space = list(range(ch.h_start, ch.h_start + self.rank))
        else:
            space = [i for i, g in enumerate(gr) if g == d and i in e_set]
        upper = [i for i, g in enumerate(gr) if g == d + 1 and i in e_set]
        vcan_slice = [b for deg, b in self.principal.vcan_basis if deg == d]
        cols = []
        for i in upper:
            cols.append(self.chevalley.bracket(self.principal.p_minus1,
                                               {i: Q(1)}))
        cols.extend(vcan_slice)
        support = space
        mat = [[col.get(k, Q(0)) for col in cols] for k in support]
        inv = _linalg.inverse(mat)

        def solve(y, _inv=inv, _support=support, _upper=upper,
                  _nv=len(upper), _slice=vcan_slice):
            rhs = [y.get(k, Q(0)) for k in _support]
            coeffs = [sum(row[j] * rhs[j] for j in range(len(rhs)) if rhs[j])
                      for row in _inv]
            u = {idx: c for idx, c in zip(_upper, coeffs[:_nv]) if c}
            c_coeffs = coeffs[_nv:]
            cvec = {}
            for cc, b in zip(c_coeffs, _slice):
                if cc:
                    cvec = vec_add(cvec, vec_scale(b, cc))
            return u, cvec

        entry = (upper, vcan_slice, solve)
        self._decomp_cache[d] = entry
        return entry

    # -- Weyl group ---------------------------------------------------------

    def weyl_group(self):
        if self._weyl is None:
            self._weyl = _enumerate_weyl(self)
        return self._weyl

    def longest_element(self):
        return max(self.weyl_group(), key=lambda w: (len(w.word),))

    # -- type A fundamental representation -----------------------------------

    def fundamental_matrices(self):
        """Images of the basis in the (rank+1)-dim rep; type A only."""
        if self.family != "A":
            raise DomainError("matrix realization is only kept for type A")
        if self._rep is None:
            self._rep = _build_type_a_rep(self)
        return self._rep

    def matrix_of(self, x):
        rep = self.fundamental_matrices()
        n = self.rank + 1
        out = [[Q(0)] * n for _ in range(n)]
        for idx, coeff in x.items():
            m = rep[idx]
            for i in range(n):
                for j in range(n):
                    if m[i][j]:
                        out[i][j] += coeff * m[i][j]
        return out


def _transpose(m):
    return tuple(tuple(row[i] for row in m) for i in range(len(m[0])))


def _build_root_datum(family, rank):
    cm = cartan_matrix(family, rank)
    pos = _positive_roots(cm)
    heights = tuple(sum(r) for r in pos)
    exps = _exponents(pos)
    weyl_order = 1
    for d in exps:
        weyl_order *= d + 1
    simple_roots = tuple(tuple(cm[i][j] for i in range(rank))
                         for j in range(rank))
    simple_coroots = tuple(tuple(cm[j][i] for i in range(rank))
                           for j in range(rank))
    datum = RootDatum(
        family=family, rank=rank, cartan_matrix=cm,
        simple_roots=simple_roots, simple_coroots=simple_coroots,
        positive_roots=pos, heights=heights, exponents=exps,
        weyl_order=weyl_order, symmetrizers=_symmetrizers(cm))
    if sum(exps) != len(pos):
        raise AssertionError("exponent sum does not match root count")
    return datum


def _build_chevalley(datum):
    rank = datum.rank
    pos = datum.positive_roots
    npos = len(pos)
    dim = 2 * npos + rank
    e_index = {r: i for i, r in enumerate(pos)}
    h_start = npos
    f_index = {r: npos + rank + i for i, r in enumerate(pos)}
    labels = tuple(["e[%s]" % ",".join(map(str, r)) for r in pos]
                   + ["h%d" % (i + 1) for i in range(rank)]
                   + ["f[%s]" % ",".join(map(str, r)) for r in pos])
    grading = [0] * dim
    for r, i in e_index.items():
        grading[i] = sum(r)
        grading[f_index[r]] = -sum(r)

    consts = _ConstantTable(datum)
    rows = {}

    def put(i, j, terms):
        clean = []
        for k, c in terms:
            if not c:
                continue
            frac = Q(c)
            if frac.denominator != 1:
                raise AssertionError("non-integral structure constant")
            clean.append((k, int(frac)))
        if clean:
            rows[(i, j)] = tuple(clean)
            rows[(j, i)] = tuple((k, -c) for k, c in clean)

    def index_of(root):
        if root in e_index:
            return e_index[root]
        return f_index[tuple(-c for c in root)]

    a = datum.cartan_matrix
    # Cartan against root vectors
    for r, ei in e_index.items():
        fi = f_index[r]
        for i in range(rank):
            pairing = sum(a[i][j] * r[j] for j in range(rank))
            if pairing:
                put(h_start + i, ei, [(ei, pairing)])
                put(h_start + i, fi, [(fi, -pairing)])
    # root vector against root vector
    signed_roots = list(pos) + [tuple(-c for c in r) for r in pos]
    for x in signed_roots:
        ix = index_of(x)
        for y in signed_roots:
            iy = index_of(y)
            if ix >= iy:
                continue
            s = tuple(p + q for p, q in zip(x, y))
            if all(c == 0 for c in s):
                # [e_alpha, f_alpha] = coroot of alpha
                alpha = _abs_root(x)
                coro = datum.coroot_coordinates(alpha)
                sign = 1 if x in e_index else -1
                terms = [(h_start + i, sign * c)
                         for i, c in enumerate(coro) if c]
                put(ix, iy, terms)
            else:
                nval = consts.n(x, y)
                if nval:
                    if nval.denominator != 1:
                        raise AssertionError("non-integral structure constant")
                    put(ix, iy, [(index_of(s), int(nval))])

    return ChevalleyAlgebra(
        dim=dim, rank=rank, labels=labels, e_index=e_index, f_index=f_index,
        h_start=h_start, principal_grading=tuple(grading),
        bracket_rows=rows)


def _build_principal(datum, chev):
    rank = datum.rank
    simple = [tuple(1 if k == i else 0 for k in range(rank))
              for i in range(rank)]
    p_minus1 = {chev.f_index[s]: Q(1) for s in simple}
    # rho_check: <alpha_j, rho_check> = 1 for all j
    at = [[Q(datum.cartan_matrix[i][j]) for i in range(rank)]
          for j in range(rank)]
    xs = _linalg.solve_unique(at, [Q(1)] * rank)
    two_rho_check = {chev.h_start + i: 2 * x for i, x in enumerate(xs) if x}
    # p_1 = sum m_i e_i with [p_1, p_minus1] = 2 rho_check; since
    # [e_i, f_j] = delta_ij h_i the coefficients are read off directly.
    p_1 = {chev.e_index[s]: 2 * xs[i] for i, s in enumerate(simple) if xs[i]}
    bracket = chev.bracket
    if vec_sub(bracket(p_1, p_minus1), two_rho_check):
        raise AssertionError("sl2 relation [p1, p-1] = 2 rho_check failed")
    if vec_sub(bracket(two_rho_check, p_1), vec_scale(p_1, Q(2))):
        raise AssertionError("sl2 relation [2rho_check, p1] = 2 p1 failed")
    if vec_sub(bracket(two_rho_check, p_minus1), vec_scale(p_minus1, Q(-2))):
        raise AssertionError("sl2 relation [2rho_check, p-1] = -2 p-1 failed")

    # V_can,d = ker(ad p_1) on the degree-d part of n
    grading = chev.principal_grading
    e_indices = sorted(chev.e_index.values())
    vcan = []
    for d in sorted(set(datum.exponents)):
        space = [i for i in e_indices if grading[i] == d]
        mat_rows = sorted({k for i in space
                           for k in bracket(p_1, {i: Q(1)})})
        mat = [[bracket(p_1, {i: Q(1)}).get(k, Q(0)) for i in space]
               for k in mat_rows]
        if not mat:
            kern = [[Q(1) if i == j else Q(0) for j in range(len(space))]
                    for i in range(len(space))]
        else:
            kern = _linalg.nullspace(mat)
        for kv in kern:
            vec = {space[i]: kv[i] for i in range(len(space)) if kv[i]}
            vcan.append((d, vec))
    if len(vcan) != rank:
        raise AssertionError("dim V_can != rank")
    # normalize the degree-1 slot to be exactly p_1
    vcan = [(d, (dict(p_1) if d == 1 else v)) for d, v in vcan]
    degs = tuple(d for d, _ in vcan)
    if degs != datum.exponents:
        raise AssertionError("V_can degrees do not match the exponents")
    return PrincipalData(
        p_minus1=p_minus1, two_rho_check=two_rho_check, p_1=p_1,
        vcan_basis=tuple(vcan), vcan_degrees=degs)


def _build_type_a_rep(alg):
    """Images of all basis vectors in the fundamental rep of sl_{rank+1}.

    Simple generators go to the standard matrix units; higher root vectors
    are defined through the extraspecial decomposition, so the map is a Lie
    algebra homomorphism for the generated structure constants.
    """
    n = alg.rank + 1
    ch = alg.chevalley
    rd = alg.root_datum

    def unit(i, j):
        m = [[Q(0)] * n for _ in range(n)]
        m[i][j] = Q(1)
        return m

    def msub(a, b):
        return [[a[i][j] - b[i][j] for j in range(n)] for i in range(n)]

    def mbracket(a, b):
        return msub(_linalg._matmul(a, b), _linalg._matmul(b, a))

    rep = {}
    simple = [tuple(1 if k == i else 0 for k in range(alg.rank))
              for i in range(alg.rank)]
    for i, s in enumerate(simple):
        rep[ch.e_index[s]] = unit(i, i + 1)
        rep[ch.f_index[s]] = unit(i + 1, i)
        rep[ch.h_start + i] = msub(unit(i, i), unit(i + 1, i + 1))
    consts = _ConstantTable(rd)
    for gamma in rd.positive_roots:
        if sum(gamma) < 2:
            continue
        for alpha in rd.positive_roots:
            beta = tuple(g - a for g, a in zip(gamma, alpha))
            if beta in consts.posset and consts.order[alpha] < consts.order[beta]:
                nval = consts.table[(alpha, beta)]
                ea = rep[ch.e_index[alpha]]
                eb = rep[ch.e_index[beta]]
                rep[ch.e_index[gamma]] = [
                    [x / nval for x in row] for row in mbracket(ea, eb)]
                fa = rep[ch.f_index[alpha]]
                fb = rep[ch.f_index[beta]]
                rep[ch.f_index[gamma]] = [
                    [-x / nval for x in row] for row in mbracket(fa, fb)]
                break
    return rep


@lru_cache(maxsize=None)
def algebra(family, rank):
    """Memoized algebra bundle; the shared instance is immutable."""
    return Algebra(family, rank)


def build_algebra(family, rank):
    """Root datum, Chevalley table and principal data for a simple type."""
    alg = algebra(family, rank)
    return alg.root_datum, alg.chevalley, alg.principal


# ---------------------------------------------------------------------------
# Weyl group


@dataclass(frozen=True)
class WeylElement:
    word: tuple                  # reduced word in simple reflections
    weight_matrix: tuple         # action on fundamental-weight coordinates
    coweight_matrix: tuple       # action on fundamental-coweight coordinates

    def apply_weight(self, weight):
        return tuple(sum(row[j] * weight[j] for j in range(len(weight)))
                     for row in self.weight_matrix)

    def apply_coweight(self, coweight):
        return tuple(sum(row[j] * coweight[j] for j in range(len(coweight)))
                     for row in self.coweight_matrix)

    @property
    def length(self):
        return len(self.word)


def reflect_weight(alg, weight, i):
    """Simple reflection s_i on fundamental-weight coordinates."""
    a = alg.root_datum.cartan_matrix
    r = alg.rank
    return tuple(weight[k] - weight[i] * a[k][i] for k in range(r))


def reflect_coweight(alg, coweight, i):
    a = alg.root_datum.cartan_matrix
    r = alg.rank
    return tuple(coweight[k] - coweight[i] * a[i][k] for k in range(r))


def _reflection_matrices(alg, i):
    r = alg.rank
    wm = []
    cm = []
    for j in range(r):
        basis = tuple(Q(1) if k == j else Q(0) for k in range(r))
        wm.append(reflect_weight(alg, basis, i))
        cm.append(reflect_coweight(alg, basis, i))
    # rows of the matrix acting on column vectors
    weight_matrix = tuple(tuple(wm[j][k] for j in range(r)) for k in range(r))
    coweight_matrix = tuple(tuple(cm[j][k] for j in range(r)) for k in range(r))
    return weight_matrix, coweight_matrix


def _enumerate_weyl(alg):
    if alg.root_datum.weyl_order > _WEYL_ENUMERATION_CAP:
        raise DomainError(
            "Weyl group of order %d exceeds the enumeration cap"
            % alg.root_datum.weyl_order)
    r = alg.rank
    gens = [_reflection_matrices(alg, i) for i in range(r)]
    ident = tuple(tuple(Q(1) if i == j else Q(0) for j in range(r))
                  for i in range(r))
    # BFS by right multiplication, so each word is reduced and the word
    # (i1, ..., ik) denotes s_{i1} ... s_{ik} acting matrix-on-column-vector.
    seen = {ident: ((), ident)}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            word, cmat = seen[m]
            for i in range(r):
                wi, ci = gens[i]
                nm = _mat_mul(m, wi)
                if nm not in seen:
                    seen[nm] = (word + (i,), _mat_mul(cmat, ci))
                    nxt.append(nm)
        frontier = nxt
    elems = sorted(((word, wm, cm) for wm, (word, cm) in seen.items()),
                   key=lambda t: (len(t[0]), t[0]))
    out = tuple(WeylElement(word=w, weight_matrix=wm, coweight_matrix=cm)
                for w, wm, cm in elems)
    if len(out) != alg.root_datum.weyl_order:
        raise AssertionError("Weyl closure count disagrees with |W|")
    return out


def _mat_mul(a, b):
    r = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(r))
                       for j in range(r)) for i in range(r))


def weyl_orbit(alg, weight):
    """Orbit of a weight (fundamental coordinates) under reflection closure."""
    start = tuple(Q(x) for x in weight)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(alg.rank):
                im = reflect_weight(alg, w, i)
                if im not in seen:
                    seen.add(im)
                    nxt.append(im)
        frontier = nxt
    return frozenset(seen)


def weyl_orbit_coweight(alg, coweight):
    start = tuple(Q(x) for x in coweight)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(alg.rank):
                im = reflect_coweight(alg, w, i)
                if im not in seen:
                    seen.add(im)
                    nxt.append(im)
        frontier = nxt
    return frozenset(seen)


# ---------------------------------------------------------------------------
# dominance


def coweight_pairing_with_root(alg, root, coweight):
    return sum(Q(root[i]) * Q(coweight[i]) for i in range(alg.rank))


def is_dominant(alg, coweight):
    """No pairing with a positive root is a negative integer."""
    for root in alg.root_datum.positive_roots:
        p = coweight_pairing_with_root(alg, root, coweight)
        if p.denominator == 1 and p < 0:
            return False
    return True


def is_antidominant(alg, coweight):
    """No pairing with a positive root is a positive integer."""
    for root in alg.root_datum.positive_roots:
        p = coweight_pairing_with_root(alg, root, coweight)
        if p.denominator == 1 and p > 0:
            return False
    return True


def weight_pairing_with_coroot(alg, weight, root):
    """<weight, coroot of root> for a positive root."""
    coro = alg.root_datum.coroot_coordinates(root)
    return sum(Q(weight[i]) * coro[i] for i in range(alg.rank))


# ---------------------------------------------------------------------------
# Kostant projection


def kostant_project(alg, x, with_witness=False):
    """Unique c in V_can with Ad_n(p_-1 + x) = p_-1 + c for some n in N.

    x is a sparse vector in the Borel (no f-components).  The witness, when
    requested, is the list of constant nilpotent exponents applied in order.
    """
    ch = alg.chevalley
    gr = ch.principal_grading
    f_indices = set(ch.f_index.values())
    if any(k in f_indices for k in x):
        raise DomainError("kostant_project input must lie in the Borel")
    rest = dict(x)
    witness = []
    hmax = alg.root_datum.heights[-1]
    for d in range(0, hmax):
        _, _, solve = alg.principal_degree_solver(d)
        yd = alg.principal_component(rest, d)
        # y_d = [p_-1, u] + c; conjugating by exp(u) replaces y_d with c
        u, _ = solve(yd)
        if u:
            witness.append(u)
            rest = _conjugate_constant(alg, rest, u)
    point = alg.orbit_point(alg.vcan_coords(rest))
    if with_witness:
        return point, witness
    return point


def _conjugate_constant(alg, x, u):
    """Ad_{exp(u)}(p_-1 + x) - p_-1 for constant nilpotent u."""
    ch = alg.chevalley
    total = vec_add(alg.principal.p_minus1, x)
    acc = dict(total)
    term = total
    k = 1
    while True:
        term = ch.bracket(u, term)
        if not term:
            break
        term = vec_scale(term, Q(1, k))
        acc = vec_add(acc, term)
        k += 1
    return vec_sub(acc, alg.principal.p_minus1)


# ---------------------------------------------------------------------------
# coinvariant algebra


def coinvariant_dim(alg):
    """Dimension of Sym(h*) modulo positive-degree W-invariants.

    Linear algebra on monomials up to total degree = number of positive
    roots; the result equals |W|.
    """
    r = alg.rank
    group = alg.weyl_group()
    maxdeg = sum(alg.root_datum.exponents)
    # polynomials as dicts {exponent tuple: Q} in the fundamental-weight
    # coordinates of h*
    def act(w, poly):
        out = {}
        lin = [dict() for _ in range(r)]
        for i in range(r):
            for j in range(r):
                c = w.weight_matrix[j][i]
                if c:
                    lin[i][j] = c
        for mono, coeff in poly.items():
            prod = {tuple([0] * r): coeff}
            for i, e in enumerate(mono):
                for _ in range(e):
                    nxt = {}
                    for m2, c2 in prod.items():
                        for j, cj in lin[i].items():
                            key = list(m2)
                            key[j] += 1
                            key = tuple(key)
                            s = nxt.get(key, Q(0)) + c2 * cj
                            if s:
                                nxt[key] = s
                            else:
                                nxt.pop(key, None)
                    prod = nxt
            for m2, c2 in prod.items():
                s = out.get(m2, Q(0)) + c2
                if s:
                    out[m2] = s
                else:
                    out.pop(m2, None)
        return out

    def monomials(total):
        if r == 1:
            return [(total,)]
        out = []

        def rec(prefix, left, slots):
            if slots == 1:
                out.append(tuple(prefix + [left]))
                return
            for v in range(left + 1):
                rec(prefix + [v], left - v, slots - 1)
        rec([], total, r)
        return out

    invariants_by_degree = {}
    for m in range(1, maxdeg + 1):
        monos = monomials(m)
        index = {mo: i for i, mo in enumerate(monos)}
        spans = []
        for mo in monos:
            avg = {}
            for w in group:
                img = act(w, {mo: Q(1)})
                for k, v in img.items():
                    s = avg.get(k, Q(0)) + v
                    if s:
                        avg[k] = s
                    else:
                        avg.pop(k, None)
            if avg:
                spans.append([avg.get(mo2, Q(0)) for mo2 in monos])
        if spans:
            basis_rows, pivots = _linalg._eliminate(spans)
            invariants_by_degree[m] = [
                {monos[j]: row[j] for j in range(len(monos)) if row[j]}
                for row in basis_rows[: len(pivots)]]
        else:
            invariants_by_degree[m] = []

    total_dim = 1  # degree 0
    for m in range(1, maxdeg + 1):
        monos = monomials(m)
        index = {mo: i for i, mo in enumerate(monos)}
        ideal_rows = []
        for k in range(1, m + 1):
            for inv in invariants_by_degree.get(k, []):
                for mono in monomials(m - k):
                    row = [Q(0)] * len(monos)
                    for im, ic in inv.items():
                        key = tuple(a + b for a, b in zip(im, mono))
                        row[index[key]] += ic
                    ideal_rows.append(row)
        rank_ideal = _linalg.matrix_rank(ideal_rows) if ideal_rows else 0
        total_dim += len(monos) - rank_ideal
    return total_dim
