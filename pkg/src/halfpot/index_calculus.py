"""Index sets, index families and exponent-matrix arithmetic.

An index set is a discrete subset of C x N0 describing which terms
rho^z log^p(rho) may appear in an asymptotic expansion at a boundary face.
Index sets here are represented by a finite list of *generators* plus a real
truncation bound T: a pair (w, q) with Re w <= T is a member exactly when
some generator (z, p) has w = z + m for an integer m >= 0 and q <= p.  The
represented set is faithful below T; every binary operation enumerates
members up to the common truncation and re-canonicalises.

Real parts are compared with an absolute epsilon of 1e-12; exponents that
are integers (the case of every shipped fixture) are exact in float64, so
integer arithmetic below ~2^53 incurs no rounding at all.
"""

import json
import math
from dataclasses import dataclass
from importlib import resources
from itertools import product as _iproduct

from .errors import IntegrabilityViolation

RE_EPS = 1e-12
_INT_EPS = 1e-9
DEFAULT_TRUNCATION = 12.0

SINGLE = "single"
DOUBLE = "double"
_KINDS = (SINGLE, DOUBLE)


def _check_kind(kind):
    if kind not in _KINDS:
        raise ValueError(f"kind must be 'single' or 'double', got {kind!r}")


# ---------------------------------------------------------------------------
# index pairs and sets


@dataclass(frozen=True)
class IndexPair:
    """A single exponent: rho^z log^p(rho)."""

    z: complex
    p: int

    def __post_init__(self):
        if self.p < 0 or int(self.p) != self.p:
            raise ValueError(f"log power must be a non-negative integer, got {self.p}")
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "p", int(self.p))


def _as_pair(item):
    if isinstance(item, IndexPair):
        return item
    z, p = item
    return IndexPair(complex(z), int(p))


def _implied_by(a, b):
    """True when pair a is generated by pair b under the closure rules."""
    if a.p > b.p:
        return False
    if abs(a.z.imag - b.z.imag) > _INT_EPS:
        return False
    d = a.z.real - b.z.real
    return d > -_INT_EPS and abs(d - round(d)) <= _INT_EPS


@dataclass(frozen=True)
class IndexSet:
    """Canonical finite-generator representation of an index set."""

    generators: tuple
    truncation: float

    @property
    def is_empty(self):
        return not self.generators

    @property
    def real_part(self):
        """min Re z over members; +inf sentinel for the empty set."""
        if self.is_empty:
            return math.inf
        return min(g.z.real for g in self.generators)

    def members(self, upto=None):
        """All member pairs with Re z <= upto (default: the truncation)."""
        bound = self.truncation if upto is None else min(upto, self.truncation)
        seen = {}
        for g in self.generators:
            m = 0
            while g.z.real + m <= bound + RE_EPS:
                z = g.z + m
                key = (round(z.real, 9), round(z.imag, 9))
                if key not in seen or seen[key].p < g.p:
                    seen[key] = IndexPair(z, g.p)
                m += 1
        out = []
        for pair in seen.values():
            out.extend(IndexPair(pair.z, q) for q in range(pair.p + 1))
        out.sort(key=lambda pr: (pr.z.real, pr.z.imag, pr.p))
        return out

    def contains(self, z, p=0):
        z = complex(z)
        if z.real > self.truncation + RE_EPS:
            raise ValueError(f"membership of Re z = {z.real} undecidable beyond "
                             f"truncation {self.truncation}")
        probe = IndexPair(z, p)
        return any(_implied_by(probe, g) for g in self.generators)

    def __eq__(self, other):
        if not isinstance(other, IndexSet):
            return NotImplemented
        if abs(self.truncation - other.truncation) > RE_EPS:
            return False
        if len(self.generators) != len(other.generators):
            return False
        for a, b in zip(self.generators, other.generators):
            if a.p != b.p or abs(a.z - b.z) > _INT_EPS:
                return False
        return True

    def __hash__(self):
        return hash((len(self.generators), round(self.truncation, 9)))

    def __repr__(self):
        if self.is_empty:
            return f"IndexSet(empty, T={self.truncation:g})"
        gens = ", ".join(
            f"({g.z.real:g}{f'{g.z.imag:+g}j' if g.z.imag else ''},{g.p})"
            for g in self.generators
        )
        return f"IndexSet({{{gens}}}, T={self.truncation:g})"


def canonicalize(raw_pairs, truncation=DEFAULT_TRUNCATION):
    """Build the canonical IndexSet generated by ``raw_pairs``.

    Pairs implied by another under (z,p) -> (z, q<=p) and (z,p) -> (z+1, p)
    are removed; pairs beyond the truncation are dropped.
    """
    if not math.isfinite(truncation):
        raise ValueError("truncation must be finite")
    pairs = [_as_pair(it) for it in raw_pairs]
    pairs = [pr for pr in pairs if pr.z.real <= truncation + RE_EPS]
    pairs.sort(key=lambda pr: (pr.z.real, pr.z.imag, -pr.p))
    kept = []
    for cand in pairs:
        if not any(_implied_by(cand, g) for g in kept):
            kept.append(cand)
    return IndexSet(tuple(kept), float(truncation))


def index_set(pairs, truncation=DEFAULT_TRUNCATION):
    """Convenience alias for :func:`canonicalize`."""
    return canonicalize(pairs, truncation)


def integer_index_set(k, truncation=DEFAULT_TRUNCATION):
    """The integer index set k = {(z, 0) : z in Z, z >= k}."""
    return canonicalize([(k, 0)], truncation)


def empty_index_set(truncation=DEFAULT_TRUNCATION):
    """The empty index set (rapidly vanishing expansions)."""
    return IndexSet((), float(truncation))


def real_part(g):
    """min Re z over members of g; +inf for the empty set."""
    return g.real_part


def _common_truncation(g1, g2):
    return min(g1.truncation, g2.truncation)


def index_union(g1, g2):
    t = _common_truncation(g1, g2)
    return canonicalize(list(g1.generators) + list(g2.generators), t)


def extended_union(g1, g2):
    """g1 u g2 plus log-promoted pairs (z, p1+p2+1) at shared exponents z."""
    t = _common_truncation(g1, g2)
    m1 = g1.members(t)
    m2 = g2.members(t)
    by_z2 = {}
    for pr in m2:
        key = (round(pr.z.real, 9), round(pr.z.imag, 9))
        by_z2[key] = max(by_z2.get(key, 0), pr.p)
    promoted = []
    for pr in m1:
        key = (round(pr.z.real, 9), round(pr.z.imag, 9))
        if key in by_z2:
            promoted.append(IndexPair(pr.z, pr.p + by_z2[key] + 1))
    return canonicalize(m1 + m2 + promoted, t)


def index_sum(g1, g2):
    """{(z + z', max(p, p'))} over member pairs, up to the common truncation."""
    t = _common_truncation(g1, g2)
    if g1.is_empty or g2.is_empty:
        return empty_index_set(t)
    m1 = g1.members(t - g2.real_part)
    m2 = g2.members(t - g1.real_part)
    pairs = []
    for a, b in _iproduct(m1, m2):
        z = a.z + b.z
        if z.real <= t + RE_EPS:
            pairs.append(IndexPair(z, max(a.p, b.p)))
    return canonicalize(pairs, t)


def index_intersection(g1, g2):
    t = _common_truncation(g1, g2)
    by_z = {}
    for pr in g2.members(t):
        key = (round(pr.z.real, 9), round(pr.z.imag, 9))
        by_z[key] = max(by_z.get(key, 0), pr.p)
    pairs = []
    for pr in g1.members(t):
        key = (round(pr.z.real, 9), round(pr.z.imag, 9))
        if key in by_z:
            pairs.append(IndexPair(pr.z, min(pr.p, by_z[key])))
    return canonicalize(pairs, t)


def index_shift(g, c):
    """Shift every exponent by c: (z, p) -> (z + c, p)."""
    c = complex(c)
    return canonicalize([IndexPair(gen.z + c, gen.p) for gen in g.generators],
                        g.truncation)


# ---------------------------------------------------------------------------
# integrability thresholds for the layer operators


def ceil_strict(t):
    """Smallest integer strictly greater than t (so ceil_strict(2) = 3)."""
    return math.floor(t) + 1


def alpha(kind, k):
    """Integrability threshold: data must satisfy Re E > alpha(kind, k)."""
    _check_kind(kind)
    if k < 0:
        raise ValueError(f"modification order must be >= 0, got {k}")
    return (1 - k) if kind == SINGLE else (-1 - k)


def k_min(kind, e_set):
    """Smallest modification order making the layer potential of data with
    index set E convergent: min{l in N : l > +/-1 - Re E}."""
    _check_kind(kind)
    re = e_set.real_part if isinstance(e_set, IndexSet) else float(e_set)
    if not math.isfinite(re) and re > 0:
        return 0  # empty data index set: any order works
    sign = 1 if kind == SINGLE else -1
    return max(0, ceil_strict(sign - re))


# ---------------------------------------------------------------------------
# face lattices, families, exponent matrices


@dataclass(frozen=True)
class FaceLattice:
    """Ordered tuple of boundary-face names."""

    faces: tuple

    def __post_init__(self):
        if len(set(self.faces)) != len(self.faces):
            raise ValueError(f"face names must be unique: {self.faces}")
        object.__setattr__(self, "faces", tuple(self.faces))

    def index(self, face):
        return self.faces.index(face)

    def __len__(self):
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)


#: Compactified half-space: finite boundary Y, boundary at infinity Z.
HALF_SPACE_FACES = FaceLattice(("Y", "Z"))
#: Resolved double space carrying the layer-kernel densities.
RESOLVED_FACES = FaceLattice(("lf(Y)", "lf(Z)", "rf", "bf", "df"))
#: b-double space of the boundary plane.
BOUNDARY_DOUBLE_FACES = FaceLattice(("lf", "rf", "bf"))
#: Compactified data plane: a single face, the sphere at infinity.
DATA_FACES = FaceLattice(("infinity",))


@dataclass(frozen=True)
class IndexFamily:
    """One index set per face of a lattice."""

    lattice: FaceLattice
    sets: tuple

    def __post_init__(self):
        if len(self.sets) != len(self.lattice):
            raise ValueError("need exactly one index set per face")
        object.__setattr__(self, "sets", tuple(self.sets))

    def get(self, face):
        return self.sets[self.lattice.index(face)]

    def replace(self, face, new_set):
        i = self.lattice.index(face)
        sets = list(self.sets)
        sets[i] = new_set
        return IndexFamily(self.lattice, tuple(sets))

    def __repr__(self):
        parts = ", ".join(f"{f}: {s!r}" for f, s in zip(self.lattice, self.sets))
        return f"IndexFamily({parts})"


def integer_family(lattice, orders, truncation=DEFAULT_TRUNCATION):
    """Family of integer index sets given by a tuple of leading orders."""
    return IndexFamily(lattice, tuple(integer_index_set(o, truncation)
                                      for o in orders))


def family_sum(f1, f2):
    if f1.lattice != f2.lattice:
        raise ValueError("family sum needs matching lattices")
    return IndexFamily(f1.lattice, tuple(index_sum(a, b)
                                         for a, b in zip(f1.sets, f2.sets)))


@dataclass(frozen=True)
class ExponentMatrix:
    """Non-negative integer boundary exponents e(G, H) of a b-map."""

    domain_lattice: FaceLattice
    range_lattice: FaceLattice
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        if len(rows) != len(self.domain_lattice):
            raise ValueError("one row per domain face required")
        for row in rows:
            if len(row) != len(self.range_lattice):
                raise ValueError("one column per range face required")
            if any(v < 0 for v in row):
                raise ValueError("boundary exponents must be non-negative")
        object.__setattr__(self, "entries", rows)

    def entry(self, g_face, h_face):
        return self.entries[self.domain_lattice.index(g_face)][
            self.range_lattice.index(h_face)]

    @property
    def null_faces(self):
        """Domain faces whose whole row vanishes (not hit by any range face)."""
        return tuple(g for g, row in zip(self.domain_lattice, self.entries)
                     if all(v == 0 for v in row))


def identity_exponent_matrix(lattice):
    n = len(lattice)
    rows = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return ExponentMatrix(lattice, lattice, rows)


# ---------------------------------------------------------------------------
# pull-back / push-forward of index families


def pullback_family(e, fam):
    """Index family of F*f on the domain, for f polyhomogeneous on the range.

    At a domain face G the set is {(q + sum_H e(G,H) z_H, sum_H p_H)} with
    q in N0 and (z_H, p_H) ranging over the range sets of the faces G maps
    into; no extended unions (pull-backs never create logarithms).
    """
    if fam.lattice != e.range_lattice:
        raise ValueError("family must live on the range lattice of e")
    t = min(s.truncation for s in fam.sets)
    out = []
    for gi, g_face in enumerate(e.domain_lattice):
        cols = [(h, e.entries[gi][hi]) for hi, h in enumerate(e.range_lattice)
                if e.entries[gi][hi] > 0]
        if not cols:
            out.append(integer_index_set(0, t))
            continue
        sets = [fam.get(h) for h, _ in cols]
        if any(s.is_empty for s in sets):
            out.append(empty_index_set(t))
            continue
        mins = [ev * s.real_part for s, (_, ev) in zip(sets, cols)]
        lists = []
        for (h, ev), s, mn in zip(cols, sets, mins):
            budget = (t - (sum(mins) - mn)) / ev
            lists.append([(ev * pr.z, pr.p) for pr in s.members(budget)])
        combos = []
        for picks in _iproduct(*lists):
            z = sum(z for z, _ in picks)
            if z.real <= t + RE_EPS:
                combos.append(IndexPair(z, sum(p for _, p in picks)))
        out.append(canonicalize(combos, t))
    return IndexFamily(e.domain_lattice, tuple(out))


def pushforward_family(e, fam):
    """Index family of the push-forward F_* u on the range.

    Requires Re(E(G)) > 0 on every null face of e (the integrability
    condition); at a range face H the result is the extended union over the
    contributing domain faces G of {(z / e(G,H), p)}.
    """
    if fam.lattice != e.domain_lattice:
        raise ValueError("family must live on the domain lattice of e")
    for g in e.null_faces:
        re = fam.get(g).real_part
        if not re > 0:
            raise IntegrabilityViolation(g, re)
    t_global = min(s.truncation for s in fam.sets)
    out = []
    for hi, h_face in enumerate(e.range_lattice):
        contributors = [(g, e.entries[gi][hi])
                        for gi, g in enumerate(e.domain_lattice)
                        if e.entries[gi][hi] > 0]
        if not contributors:
            out.append(empty_index_set(t_global))
            continue
        t_h = min(fam.get(g).truncation / ev for g, ev in contributors)
        acc = None
        for g, ev in contributors:
            s = fam.get(g)
            scaled = canonicalize(
                [(pr.z / ev, pr.p) for pr in s.members(s.truncation)], t_h)
            acc = scaled if acc is None else extended_union(acc, scaled)
        out.append(acc)
    return IndexFamily(e.range_lattice, tuple(out))


# ---------------------------------------------------------------------------
# bundled exponent-matrix fixtures (blow-down projections of the resolved
# double space onto the half-space and onto the data plane)


def _load_asset(name):
    path = resources.files("halfpot") / "_assets" / name
    return json.loads(path.read_text())


def matrix_from_json(doc):
    return ExponentMatrix(FaceLattice(tuple(doc["domain"])),
                          FaceLattice(tuple(doc["range"])),
                          tuple(tuple(row) for row in doc["entries"]))


def matrix_to_json(e):
    return {"domain": list(e.domain_lattice.faces),
            "range": list(e.range_lattice.faces),
            "entries": [list(row) for row in e.entries]}


def left_projection_matrix():
    """Exponent matrix of the projection onto the half-space factor."""
    return matrix_from_json(_load_asset("exponent_matrix_left.json"))


def right_projection_matrix():
    """Exponent matrix of the projection onto the data-plane factor."""
    return matrix_from_json(_load_asset("exponent_matrix_right.json"))


# ---------------------------------------------------------------------------
# layer-kernel density families and the derived potential families


def layer_density_family(kind, k, n, truncation=DEFAULT_TRUNCATION):
    """Boundary exponents of the (modified) layer kernel as a b-density on
    the resolved double space, ordered (lf(Y), lf(Z), rf, bf, df)."""
    _check_kind(kind)
    if n < 3:
        raise ValueError(f"dimension must be >= 3, got {n}")
    if k == 0:
        orders = (0, -1, -1, -n, 1) if kind == SINGLE else (1, 0, 1, 1 - n, 0)
    else:
        orders = ((0, 2 - n - k, k - 1, -n, 1) if kind == SINGLE
                  else (1, 1 - n - k, k + 1, 1 - n, 0))
    return integer_family(RESOLVED_FACES, orders, truncation)


def layer_potential_index_family(kind, k, n, e_set):
    """Index family on (Y, Z) of the (modified) layer potential of data with
    index set E.

    Composes: pull the data family back to the resolved double space, add
    the kernel-density family, push forward along the left projection
    (raising IntegrabilityViolation exactly when Re E <= alpha(kind, k)),
    undo the density identification at Z, and use smoothness up to the
    finite boundary to replace the Y set by the integer set 0.

    Closed forms, with u = extended union: single (E-1) u (n-2); double
    E u (n-1); modified single (E-1) u (1-k); modified double E u (-k).
    """
    _check_kind(kind)
    t = e_set.truncation
    data_fam = IndexFamily(DATA_FACES, (e_set,))
    lifted = pullback_family(right_projection_matrix(), data_fam)
    summed = family_sum(lifted, layer_density_family(kind, k, n, t))
    pushed = pushforward_family(left_projection_matrix(), summed)
    z_set = index_shift(pushed.get("Z"), n - 1)
    return IndexFamily(HALF_SPACE_FACES, (integer_index_set(0, t), z_set))


# ---------------------------------------------------------------------------
# JSON serialisation of families


def family_to_json(fam):
    doc = {"lattice": list(fam.lattice.faces), "sets": {},
           "truncation": min(s.truncation for s in fam.sets)}
    for face, s in zip(fam.lattice, fam.sets):
        doc["sets"][face] = [[g.z.real, g.z.imag, g.p] for g in s.generators]
    return doc


def family_from_json(doc):
    lattice = FaceLattice(tuple(doc["lattice"]))
    t = float(doc["truncation"])
    sets = tuple(canonicalize([(complex(re, im), p)
                               for re, im, p in doc["sets"][face]], t)
                 for face in lattice)
    return IndexFamily(lattice, sets)
