"""JSON encoding of the document types used by the command line.

Rationals travel as "p/q" strings (plain integers allowed on input);
series are {"window": [v, N], "coeffs": [[degree, value], ...]} with N
null for exact polynomials; vector values are coordinate arrays in the
basis order of the tagged ambient space.  Parse errors carry the JSON
path of the offending value.
"""

from __future__ import annotations

from fractions import Fraction as Q

from .errors import DomainError
from .oper import CanonicalOper, GaugeElement, RawOper
from .miura import HConnection
from .rootdata import algebra
from .series import LieSeries, ScalarSeries, space_basis_indices


class ParseError(ValueError):
    def __init__(self, message, path):
        super().__init__("%s (at %s)" % (message, path))
        self.path = path


# ---------------------------------------------------------------------------
# rationals


def encode_rational(x):
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def parse_rational(node, path):
    if isinstance(node, bool):
        raise ParseError("expected a rational, got a boolean", path)
    if isinstance(node, int):
        return Q(node)
    if isinstance(node, str):
        try:
            return Q(node)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError("invalid rational %r: %s" % (node, exc), path)
    raise ParseError("expected a rational (int or 'p/q' string)", path)


def parse_rational_list(node, path, length=None):
    if not isinstance(node, list):
        raise ParseError("expected a list of rationals", path)
    if length is not None and len(node) != length:
        raise ParseError("expected %d entries, got %d" % (length, len(node)),
                         path)
    return tuple(parse_rational(v, "%s[%d]" % (path, i))
                 for i, v in enumerate(node))


# ---------------------------------------------------------------------------
# algebras


def encode_algebra(alg):
    return {"type": alg.family, "rank": alg.rank}


def parse_algebra(node, path):
    if not isinstance(node, dict):
        raise ParseError("expected an algebra object", path)
    fam = node.get("type")
    rank = node.get("rank")
    if not isinstance(fam, str):
        raise ParseError("missing or invalid 'type'", path + ".type")
    if not isinstance(rank, int):
        raise ParseError("missing or invalid 'rank'", path + ".rank")
    return algebra(fam, rank)


# ---------------------------------------------------------------------------
# series


def encode_scalar_series(s):
    v, n = s.window()
    coeffs = [[d, encode_rational(c)] for d, c in sorted(s.coeffs.items())]
    return {"window": [v if v is not None else 0, n], "coeffs": coeffs}


def parse_scalar_series(node, path):
    if not isinstance(node, dict):
        raise ParseError("expected a series object", path)
    window = node.get("window")
    prec = None
    if window is not None:
        if (not isinstance(window, list) or len(window) != 2
                or not all(x is None or isinstance(x, int) for x in window)):
            raise ParseError("window must be [min_degree, precision]",
                             path + ".window")
        prec = window[1]
    coeffs = {}
    raw = node.get("coeffs", [])
    if not isinstance(raw, list):
        raise ParseError("coeffs must be a list", path + ".coeffs")
    for i, pair in enumerate(raw):
        ppath = "%s.coeffs[%d]" % (path, i)
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError("expected [degree, value]", ppath)
        d = pair[0]
        if not isinstance(d, int):
            raise ParseError("degree must be an integer", ppath + "[0]")
        coeffs[d] = parse_rational(pair[1], ppath + "[1]")
    return ScalarSeries(coeffs, prec)


def _vcan_vectors(alg):
    return [b for _, b in alg.principal.vcan_basis]


def encode_lie_series(x):
    alg = x.algebra
    if x.space == "vcan":
        # coordinates over the V_can basis
        coords = {}
        for d, vec in x.coeffs.items():
            coords[d] = alg.vcan_coords(vec)
        width = alg.principal.dim_vcan
        rows = [[d, [encode_rational(c) for c in cs]]
                for d, cs in sorted(coords.items())]
    else:
        basis = space_basis_indices(alg, x.space)
        rows = []
        for d, vec in sorted(x.coeffs.items()):
            rows.append([d, [encode_rational(vec.get(k, 0)) for k in basis]])
    v, n = x.window()
    return {"space": x.space, "window": [v if v is not None else 0, n],
            "coeffs": rows}


def parse_lie_series(node, path, alg, expect_space=None):
    if not isinstance(node, dict):
        raise ParseError("expected a series object", path)
    space = node.get("space")
    if expect_space is not None and space != expect_space:
        raise ParseError("expected a series in space %r, got %r"
                         % (expect_space, space), path + ".space")
    window = node.get("window")
    prec = None
    if window is not None:
        if (not isinstance(window, list) or len(window) != 2
                or not all(x is None or isinstance(x, int) for x in window)):
            raise ParseError("window must be [min_degree, precision]",
                             path + ".window")
        prec = window[1]
    raw = node.get("coeffs", [])
    if not isinstance(raw, list):
        raise ParseError("coeffs must be a list", path + ".coeffs")
    if space == "vcan":
        width = alg.principal.dim_vcan
        basis_vecs = _vcan_vectors(alg)
    else:
        try:
            basis = space_basis_indices(alg, space)
        except DomainError as exc:
            raise ParseError(str(exc), path + ".space")
        width = len(basis)
    coeffs = {}
    for i, pair in enumerate(raw):
        ppath = "%s.coeffs[%d]" % (path, i)
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError("expected [degree, coordinates]", ppath)
        d = pair[0]
        if not isinstance(d, int):
            raise ParseError("degree must be an integer", ppath + "[0]")
        cs = parse_rational_list(pair[1], ppath + "[1]", width)
        vec = {}
        if space == "vcan":
            for c, b in zip(cs, basis_vecs):
                for k, v in b.items():
                    s = vec.get(k, 0) + c * v
                    if s:
                        vec[k] = s
                    else:
                        vec.pop(k, None)
        else:
            vec = {k: c for k, c in zip(basis, cs) if c}
        if vec:
            coeffs[d] = vec
    tag = "n" if space == "vcan" else space
    out = LieSeries(alg, tag, coeffs, prec)
    return out


# ---------------------------------------------------------------------------
# documents


def encode_canonical_oper(oper):
    v = LieSeries(oper.algebra, "vcan", oper.v.coeffs, oper.v.prec,
                  validate=False)
    return {"algebra": encode_algebra(oper.algebra),
            "v": encode_lie_series(v)}


def parse_canonical_oper(node, path="$"):
    alg = parse_algebra(node.get("algebra"), path + ".algebra")
    vnode = node.get("v")
    if vnode is None:
        raise ParseError("missing canonical coordinates 'v'", path + ".v")
    v = parse_lie_series(vnode, path + ".v", alg, expect_space="vcan")
    try:
        return CanonicalOper(alg, v)
    except DomainError as exc:
        raise ParseError(str(exc), path + ".v")


def encode_raw_oper(raw):
    return {"algebra": encode_algebra(raw.algebra),
            "phi": [encode_scalar_series(s) for s in raw.phi],
            "q": encode_lie_series(raw.q)}


def parse_raw_oper(node, path="$"):
    alg = parse_algebra(node.get("algebra"), path + ".algebra")
    phi_node = node.get("phi")
    if not isinstance(phi_node, list) or len(phi_node) != alg.rank:
        raise ParseError("phi must list one series per simple root",
                         path + ".phi")
    phi = tuple(parse_scalar_series(s, "%s.phi[%d]" % (path, i))
                for i, s in enumerate(phi_node))
    qnode = node.get("q")
    if qnode is None:
        raise ParseError("missing Borel part 'q'", path + ".q")
    q = parse_lie_series(qnode, path + ".q", alg, expect_space="b")
    try:
        return RawOper(alg, phi, q)
    except DomainError as exc:
        raise ParseError(str(exc), path)


def encode_h_connection(chi):
    return {"algebra": encode_algebra(chi.algebra),
            "u": encode_lie_series(chi.u)}


def parse_h_connection(node, path="$"):
    alg = parse_algebra(node.get("algebra"), path + ".algebra")
    unode = node.get("u")
    if unode is None:
        raise ParseError("missing h-valued series 'u'", path + ".u")
    u = parse_lie_series(unode, path + ".u", alg, expect_space="h")
    return HConnection(alg, u)


def encode_orbit_point(point):
    return [encode_rational(c) for c in point.coords]


def encode_gauge(g):
    return {"torus": [encode_scalar_series(s) for s in g.torus],
            "unipotents": [encode_lie_series(u) for u in g.unipotents]}


def parse_gauge(node, path, alg):
    if not isinstance(node, dict):
        raise ParseError("expected a gauge object", path)
    tor = node.get("torus")
    if not isinstance(tor, list) or len(tor) != alg.rank:
        raise ParseError("torus must list one series per simple root",
                         path + ".torus")
    torus = tuple(parse_scalar_series(s, "%s.torus[%d]" % (path, i))
                  for i, s in enumerate(tor))
    unis = node.get("unipotents", [])
    if not isinstance(unis, list):
        raise ParseError("unipotents must be a list", path + ".unipotents")
    ups = tuple(parse_lie_series(u, "%s.unipotents[%d]" % (path, i), alg,
                                 expect_space="n")
                for i, u in enumerate(unis))
    return GaugeElement(alg, torus, ups)
