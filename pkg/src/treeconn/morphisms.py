"""Maps between ordered trees and the pair categories built from them.

A morphism here is a ``Connection``: a pair of a surjection part (big tree
to small tree, possibly restricted to an initial segment) and an embedding
part (small tree into big tree), tagged with the category it lives in.  The
injection-only and surjection-only categories reuse the same container with
the unused half set to ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidMorphismError
from .trees import OrderedTree, tree_from_record, tree_to_record

# Category tags.
CONN = "conn"              # connections between trees
PSC = "psc"                # partial strong connections
CONN_LINEAR = "conn-linear"  # connections between the underlying linear orders
CONN_ROOT = "conn-root"    # linear connections whose embedding fixes the minimum
INC_INJ = "incinj"         # increasing injections (embedding half only)
RIGID = "rigid"            # rigid surjections (surjection half only)
EMB = "emb"                # tree embeddings (embedding half only)

CATEGORIES = (CONN, PSC, CONN_LINEAR, CONN_ROOT, INC_INJ, RIGID, EMB)
PAIR_CATEGORIES = (CONN, PSC, CONN_LINEAR, CONN_ROOT)
EMB_ONLY = (INC_INJ, EMB)
SURJ_ONLY = (RIGID,)


@dataclass(frozen=True)
class TreeMap:
    """A vertex map between two trees, total or restricted to a prefix.

    When ``domain_top`` is set the map is defined on the initial segment
    0..domain_top of its source tree only, and ``values`` has exactly
    domain_top + 1 entries.
    """

    source: OrderedTree
    target: OrderedTree
    values: tuple[int, ...]
    domain_top: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.domain_top is None:
            expect = self.source.n
        else:
            if not 0 <= self.domain_top < self.source.n:
                raise InvalidMorphismError(
                    f"domain_top {self.domain_top} out of range for source of size {self.source.n}"
                )
            expect = self.domain_top + 1
        if len(self.values) != expect:
            raise InvalidMorphismError(
                f"map has {len(self.values)} values, expected {expect}"
            )
        for v in self.values:
            if not 0 <= v < self.target.n:
                raise InvalidMorphismError(f"value {v} outside target of size {self.target.n}")

    @property
    def top(self) -> int:
        """Last source vertex the map is defined on."""
        return self.source.n - 1 if self.domain_top is None else self.domain_top

    @property
    def effective_n(self) -> int:
        return self.top + 1

    @property
    def is_total(self) -> bool:
        return self.top == self.source.n - 1

    def __call__(self, v: int) -> int:
        if not 0 <= v <= self.top:
            raise IndexError(f"vertex {v} outside map domain 0..{self.top}")
        return self.values[v]


@dataclass(frozen=True)
class Connection:
    """A tagged pair of maps T <-> S regarded as a morphism S -> T."""

    category: str
    surj: TreeMap | None
    emb: TreeMap | None

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise InvalidMorphismError(f"unknown category tag {self.category!r}")
        if self.category in PAIR_CATEGORIES:
            if self.surj is None or self.emb is None:
                raise InvalidMorphismError(f"{self.category} needs both halves")
            if self.surj.target != self.emb.source:
                raise InvalidMorphismError("surjection target differs from embedding source")
            if self.surj.source != self.emb.target:
                raise InvalidMorphismError("surjection source differs from embedding target")
            if not self.emb.is_total:
                raise InvalidMorphismError("embedding half must be total")
            if self.category != PSC and not self.surj.is_total:
                raise InvalidMorphismError(f"{self.category} surjection half must be total")
        elif self.category in EMB_ONLY:
            if self.emb is None or self.surj is not None:
                raise InvalidMorphismError(f"{self.category} carries the embedding half only")
            if not self.emb.is_total:
                raise InvalidMorphismError("embedding half must be total")
        else:  # RIGID
            if self.surj is None or self.emb is not None:
                raise InvalidMorphismError("rigid carries the surjection half only")
            if not self.surj.is_total:
                raise InvalidMorphismError("rigid surjection half must be total")

    @property
    def source(self) -> OrderedTree:
        """The small tree S of the Hom-set Hom(S, T)."""
        return self.emb.source if self.emb is not None else self.surj.target

    @property
    def target(self) -> OrderedTree:
        return self.emb.target if self.emb is not None else self.surj.source

    @property
    def top(self) -> int:
        """Last vertex of the target tree in play (restricted surjections)."""
        if self.surj is not None:
            return self.surj.top
        return self.target.n - 1

    def key(self) -> tuple:
        """Canonical sort/deduplication key within a fixed Hom-set."""
        s = self.surj.values if self.surj is not None else ()
        e = self.emb.values if self.emb is not None else ()
        return (s, e)


# ---------------------------------------------------------------------------
# Predicates.
# ---------------------------------------------------------------------------

def is_embedding(f: TreeMap) -> bool:
    """Root-preserving, strictly increasing, meet-preserving map check."""
    if not f.is_total:
        raise InvalidMorphismError("embedding check needs a total map")
    vals = f.values
    if vals[0] != 0:
        return False
    for x in range(1, len(vals)):
        if vals[x] <= vals[x - 1]:
            return False
    ms = f.source.meet_table
    mt = f.target.meet_table
    n = len(vals)
    for x in range(n):
        for y in range(x + 1, n):
            if mt[vals[x], vals[y]] != vals[ms[x, y]]:
                return False
    return True


def is_increasing_injection(f: TreeMap) -> bool:
    vals = f.values
    return all(vals[x] < vals[x + 1] for x in range(len(vals) - 1))


def induced_embedding(s: TreeMap) -> TreeMap | None:
    """The map sending each target vertex to the meet of its preimages.

    Returns the map only when it is an embedding and forms an adjoint pair
    with s (s(i(x)) = x and i(s(y)) below y); returns None otherwise.
    Raises when s is not surjective.
    """
    ns = s.target.n
    pre: list[list[int]] = [[] for _ in range(ns)]
    for y in range(s.effective_n):
        pre[s.values[y]].append(y)
    if any(not p for p in pre):
        raise InvalidMorphismError("induced embedding needs a surjective map")
    meet = s.source.meet_table
    vals = []
    for x in range(ns):
        m = pre[x][0]
        for y in pre[x][1:]:
            m = int(meet[m, y])
        vals.append(m)
    cand = TreeMap(s.target, s.source, tuple(vals))
    if not is_embedding(cand):
        return None
    anc = s.source.anc
    for x in range(ns):
        if s.values[vals[x]] != x:
            return None
    for y in range(s.effective_n):
        if not anc[vals[s.values[y]], y]:
            return None
    return cand


def is_rigid_surjection(s: TreeMap) -> bool:
    """True when s is surjective and its induced embedding closes the pair.

    Only the induced candidate is tested; the adjoint partner of a rigid
    surjection is unique, and the slow search over all embeddings lives in
    the test suite as an oracle.
    """
    seen = [False] * s.target.n
    for v in s.values:
        seen[v] = True
    if not all(seen):
        return False
    return induced_embedding(s) is not None


def is_linear_rigid_surjection(values: tuple[int, ...], onto_n: int) -> bool:
    """Rigid surjection between the underlying linear orders: surjective with
    strictly increasing minimum preimages."""
    mins = [-1] * onto_n
    for y, x in enumerate(values):
        if not 0 <= x < onto_n:
            return False
        if mins[x] < 0:
            mins[x] = y
    if any(m < 0 for m in mins):
        return False
    return all(mins[x] < mins[x + 1] for x in range(onto_n - 1))


def condition_a(s: TreeMap, i: TreeMap) -> bool:
    """The partial-inverse compatibility: s(i(x)) = x and everything strictly
    below i(x) maps to x or lower."""
    top = s.top
    for x in range(i.effective_n):
        ix = i.values[x]
        if ix > top or s.values[ix] != x:
            return False
        for y in range(ix):
            if s.values[y] > x:
                return False
    return True


def is_linear_connection(s_values, i_values) -> bool:
    """Literal linear-order connection check on raw value sequences."""
    for x, ix in enumerate(i_values):
        if ix >= len(s_values) or s_values[ix] != x:
            return False
        for y in range(ix):
            if s_values[y] > x:
                return False
    return True


def validate_connection(c: Connection) -> None:
    """Raise InvalidMorphismError naming the first failed condition."""
    cat = c.category
    if cat == EMB:
        if not is_embedding(c.emb):
            raise InvalidMorphismError("embedding half is not a tree embedding")
        return
    if cat == INC_INJ:
        if not is_increasing_injection(c.emb):
            raise InvalidMorphismError("embedding half is not strictly increasing")
        return
    if cat == RIGID:
        if not is_rigid_surjection(c.surj):
            raise InvalidMorphismError("surjection half is not a rigid surjection")
        return
    if cat == PSC:
        top = c.surj.top
        if max(c.emb.values) > top:
            raise InvalidMorphismError("embedding leaves the restricted initial segment")
        if c.emb.values[-1] != top:
            raise InvalidMorphismError(
                "pair is not strong: embedding misses the top of its initial segment"
            )
    if not condition_a(c.surj, c.emb):
        raise InvalidMorphismError("pair fails the partial-inverse compatibility")
    if cat in (CONN, PSC):
        if induced_embedding(c.surj) is None:
            raise InvalidMorphismError("surjection half is not a rigid surjection")
        if not is_embedding(c.emb):
            raise InvalidMorphismError("embedding half is not a tree embedding")
        return
    # Linear categories.
    if not is_linear_rigid_surjection(c.surj.values, c.surj.target.n):
        raise InvalidMorphismError("surjection half is not linearly rigid")
    if not is_increasing_injection(c.emb):
        raise InvalidMorphismError("embedding half is not strictly increasing")
    if cat == CONN_ROOT and c.emb.values[0] != 0:
        raise InvalidMorphismError("embedding does not fix the minimum element")


def connection_ok(c: Connection) -> bool:
    try:
        validate_connection(c)
    except InvalidMorphismError:
        return False
    return True


def is_connection(surj: TreeMap, emb: TreeMap, category: str = CONN) -> bool:
    """Check a pair of maps against the conditions of the tagged category."""
    if surj.target != emb.source or surj.source != emb.target:
        raise InvalidMorphismError("maps do not run between the same pair of trees")
    return connection_ok(Connection(category, surj, emb))


def is_sealed(s: TreeMap) -> bool:
    """True when the induced embedding hits the top of s's domain segment."""
    ind = induced_embedding(s)
    if ind is None:
        raise InvalidMorphismError("sealedness is defined for rigid surjections")
    return ind.values[-1] == s.top


def is_strong(c: Connection) -> bool:
    if c.emb is None:
        raise InvalidMorphismError("strongness needs an embedding half")
    return c.emb.values[-1] == c.top


# ---------------------------------------------------------------------------
# Construction helpers.
# ---------------------------------------------------------------------------

def restrict(m: TreeMap, v: int) -> TreeMap:
    """Restrict a map to the initial segment 0..v of its source."""
    if v > m.top:
        raise IndexError(f"vertex {v} outside map domain 0..{m.top}")
    return TreeMap(m.source, m.target, m.values[: v + 1], domain_top=v)


def identity_connection(t: OrderedTree, category: str = CONN) -> Connection:
    ident = TreeMap(t, t, tuple(range(t.n)))
    if category in EMB_ONLY:
        return Connection(category, None, ident)
    if category in SURJ_ONLY:
        return Connection(category, ident, None)
    if category == PSC:
        surj = TreeMap(t, t, tuple(range(t.n)), domain_top=t.n - 1)
        return Connection(PSC, surj, ident)
    return Connection(category, ident, ident)


def compose(f: Connection, g: Connection) -> Connection:
    """Composite of f: S -> T with g: T -> V, re-validated after construction."""
    if f.category != g.category:
        raise InvalidMorphismError(f"category mismatch: {f.category} vs {g.category}")
    if f.target != g.source:
        raise InvalidMorphismError("middle trees do not match")
    cat = f.category
    S, V = f.source, g.target
    if cat in EMB_ONLY:
        vals = tuple(g.emb.values[v] for v in f.emb.values)
        out = Connection(cat, None, TreeMap(S, V, vals))
    elif cat in SURJ_ONLY:
        vals = tuple(f.surj.values[v] for v in g.surj.values)
        out = Connection(cat, TreeMap(V, S, vals), None)
    elif cat == PSC:
        new_top = g.emb.values[f.top]
        svals = []
        for y in range(new_top + 1):
            mid = g.surj.values[y]
            if mid > f.top:
                raise InvalidMorphismError("composite escapes the inner initial segment")
            svals.append(f.surj.values[mid])
        evals = tuple(g.emb.values[f.emb.values[x]] for x in range(S.n))
        out = Connection(
            PSC,
            TreeMap(V, S, tuple(svals), domain_top=new_top),
            TreeMap(S, V, evals),
        )
    else:
        svals = tuple(f.surj.values[g.surj.values[y]] for y in range(V.n))
        evals = tuple(g.emb.values[f.emb.values[x]] for x in range(S.n))
        out = Connection(cat, TreeMap(V, S, svals), TreeMap(S, V, evals))
    try:
        validate_connection(out)
    except InvalidMorphismError as exc:
        raise InvalidMorphismError(f"composite failed re-validation: {exc}") from exc
    return out


def complete_strong(p: Connection) -> Connection:
    """Extend a partial strong pair to a total connection by sending every
    vertex above the segment top to the root of the small tree."""
    if p.category != PSC:
        raise InvalidMorphismError("completion applies to partial strong pairs")
    validate_connection(p)
    T, S = p.target, p.source
    svals = p.surj.values + (0,) * (T.n - 1 - p.top)
    out = Connection(CONN, TreeMap(T, S, svals), TreeMap(S, T, p.emb.values))
    validate_connection(out)
    return out


# ---------------------------------------------------------------------------
# Structured records.
# ---------------------------------------------------------------------------

def connection_to_record(c: Connection) -> dict:
    return {
        "category": c.category,
        "source": tree_to_record(c.source),
        "target": tree_to_record(c.target),
        "surj": list(c.surj.values) if c.surj is not None else None,
        "emb": list(c.emb.values) if c.emb is not None else None,
        "domain_top": c.surj.domain_top if c.surj is not None else None,
    }


def connection_from_record(rec: dict) -> Connection:
    cat = rec["category"]
    S = tree_from_record(rec["source"])
    T = tree_from_record(rec["target"])
    surj = None
    if rec.get("surj") is not None:
        surj = TreeMap(T, S, tuple(rec["surj"]), domain_top=rec.get("domain_top"))
    emb = None
    if rec.get("emb") is not None:
        emb = TreeMap(S, T, tuple(rec["emb"]))
    c = Connection(cat, surj, emb)
    validate_connection(c)
    return c
