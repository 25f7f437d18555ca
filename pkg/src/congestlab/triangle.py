"""Triangle detection, counting, and enumeration on the simulated network.

Three layers:

* sequential oracles (`brute_force_triangles`, plus a generic pattern
  oracle used by the tests),
* `enumerate_expander`: the class-triad algorithm for one well-mixing
  component together with its outward edges,
* `enumerate_general`: decomposition-driven recursion that splits the
  work into sparse-edge triangles (owner rules over the acyclic
  orientation), per-cluster expander runs, and a recursive call on the
  leftover edges, with every triangle attributed to exactly one vertex.

Round accounting follows the same policy as decomposition.py: instead of
replaying the engine message by message, phases are charged through the
audited closed forms. Class announcements cost one round, sparse-edge
announcements cost one round per owned edge, and bulk deliveries are
priced by routing.route on the actual request multiset, with the load
multiplier checked against a fixed concentration envelope.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, permutations
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .graphcore import (
    Edge,
    Graph,
    GraphError,
    edge_key,
    induced_subgraph,
    log2m,
    subgraph_from_edges,
)
from .routing import (
    IdAssignment,
    RoutingRequest,
    assign_degree_class_ids,
    kappa_default,
    route,
)
from .decomposition import decompose
from . import runtime as rt

Triple = Tuple[int, int, int]

ORACLE_EDGE_CAP = 10 ** 6
ORACLE_COMBO_CAP = 5 * 10 ** 6
HEAVY_DEG_FACTOR = 20.0
CONCENTRATION_FACTOR = 24.0
DEGREE_CHECK_FACTOR = 20.0
LOAD_ENVELOPE = 600


# ---------------------------------------------------------------------------
# result containers
# ---------------------------------------------------------------------------


@dataclass
class TriangleSet:
    """Canonical triangle triples with their reporting vertices."""

    attribution: Dict[Triple, int] = field(default_factory=dict)

    @property
    def triangles(self) -> Set[Triple]:
        return set(self.attribution)

    @property
    def count(self) -> int:
        return len(self.attribution)

    def reporter_counts(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for owner in self.attribution.values():
            out[owner] = out.get(owner, 0) + 1
        return out

    def add(self, triple: Triple, owner: int) -> None:
        if triple in self.attribution:
            raise GraphError(f"triangle {triple} reported twice")
        self.attribution[triple] = owner

    def merge(self, other: "TriangleSet") -> None:
        for triple, owner in other.attribution.items():
            self.add(triple, owner)

    def as_json(self, transcript: Optional[rt.Transcript] = None) -> dict:
        doc = {
            "triangles": [list(t) for t in sorted(self.attribution)],
            "count": self.count,
            "attribution": {
                str(v): c for v, c in sorted(self.reporter_counts().items())
            },
        }
        if transcript is not None:
            doc["transcript"] = {
                "rounds": transcript.rounds,
                "message_count": transcript.message_count,
                "phases": dict(sorted(transcript.phases.items())),
            }
        return doc


@dataclass
class SubgraphSet:
    """Canonical s-vertex occurrences with their reporting vertices."""

    size: int
    attribution: Dict[Tuple[int, ...], int] = field(default_factory=dict)

    @property
    def occurrences(self) -> Set[Tuple[int, ...]]:
        return set(self.attribution)

    @property
    def count(self) -> int:
        return len(self.attribution)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def brute_force_triangles(g: Graph) -> TriangleSet:
    """Exact triangle set by sorted-adjacency intersection.

    Each triple is attributed to its smallest vertex, which keeps the
    oracle's output usable wherever a TriangleSet is expected.
    """
    if g.m > ORACLE_EDGE_CAP:
        raise GraphError(f"oracle capped at {ORACLE_EDGE_CAP} edges, got {g.m}")
    result = TriangleSet()
    for u, v in g.edges():
        for w in g.neighbor_set(u) & g.neighbor_set(v):
            if w > v:
                result.add((u, v, w), u)
    return result


def _triangles_of_edges(edges: Iterable[Edge]) -> List[Triple]:
    """All triangles whose three edges lie in the given edge set."""
    adj: Dict[int, Set[int]] = {}
    canon = set()
    for u, v in edges:
        e = edge_key(u, v)
        if e in canon:
            continue
        canon.add(e)
        adj.setdefault(e[0], set()).add(e[1])
        adj.setdefault(e[1], set()).add(e[0])
    out: List[Triple] = []
    for u, v in sorted(canon):
        for w in adj[u] & adj[v]:
            if w > v:
                out.append((u, v, w))
    return out


# ---------------------------------------------------------------------------
# class triads
# ---------------------------------------------------------------------------


def _iceil_root(n: int, s: int) -> int:
    q = 1
    while q ** s < n:
        q += 1
    return q


@dataclass
class TriadAllocation:
    """Ownership map from sorted class tuples to vertices.

    Built locally from the degree-class id assignment: the average degree
    rounded down to a power of two fixes every vertex's class, and the
    tuples are handed out in blocks of 2^class along the new-id order.
    """

    q: int
    size: int
    tuples: Tuple[Tuple[int, ...], ...]
    ranges: Dict[int, Tuple[int, int]]
    classes: Dict[int, int]
    delta_bar: int
    _index: Dict[Tuple[int, ...], int] = field(default_factory=dict)
    _owners: List[Tuple[int, int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self._index = {t: i for i, t in enumerate(self.tuples)}
        self._owners = sorted((lo, v) for v, (lo, hi) in self.ranges.items())

    def owner_of(self, class_tuple: Sequence[int]) -> int:
        key = tuple(sorted(class_tuple))
        if key not in self._index:
            raise GraphError(f"{key} is not a class tuple for q={self.q}")
        idx = self._index[key]
        owner = None
        for lo, v in self._owners:
            if lo <= idx:
                owner = v
            else:
                break
        if owner is None or idx >= self.ranges[owner][1]:
            raise GraphError(f"tuple index {idx} was never allocated")
        return owner


def _allocate_tuples(ids: IdAssignment, g_in: Graph, q: int, size: int) -> TriadAllocation:
    members = sorted(ids.new_id)
    n = len(members)
    total_deg = sum(g_in.deg[v] for v in members)
    if total_deg == 0:
        raise GraphError("tuple allocation needs at least one edge")
    m = total_deg // 2
    j = int(math.floor(math.log2(2.0 * m / n)))
    delta_bar = 2 ** j

    # Degree class c is floor(log2 deg); against average 2^j the vertex
    # class becomes c - j + 2, with everything below average/2 in class 0.
    classes: Dict[int, int] = {}
    for v in members:
        classes[v] = max(ids.class_of_vertex(v) - j + 2, 0)

    tuples = tuple(combinations_with_replacement(range(1, q + 1), size))
    ranges: Dict[int, Tuple[int, int]] = {}
    ptr = 0
    for new in range(1, n + 1):
        if ptr >= len(tuples):
            break
        v = ids.old_id[new]
        i = classes[v]
        if i == 0:
            continue
        take = min(2 ** i, len(tuples) - ptr)
        ranges[v] = (ptr, ptr + take)
        ptr += take
    if ptr < len(tuples):
        raise GraphError(
            f"class capacity covers {ptr} of {len(tuples)} tuples; "
            "the input violates the average-degree counting fact"
        )
    return TriadAllocation(q, size, tuples, ranges, classes, delta_bar)


def allocate_triads(ids: IdAssignment, g_in: Graph, q: int) -> TriadAllocation:
    """Allocate the q-class triads (j1 <= j2 <= j3) to component vertices."""
    return _allocate_tuples(ids, g_in, q, 3)


# ---------------------------------------------------------------------------
# concentration probe
# ---------------------------------------------------------------------------


@dataclass
class ProbeResult:
    per_trial: List[int]
    bound: float
    degree_ok: bool

    @property
    def max_pair_edges(self) -> int:
        return max(self.per_trial) if self.per_trial else 0


def edge_concentration_probe(g: Graph, q: int, seed=0, trials: int = 20) -> ProbeResult:
    """Sample random q-partitions and report the heaviest class pair.

    The degree precondition (max degree at most m/(q * 20 log2 n)) is
    recorded in the result rather than enforced; the acceptance instance
    itself sits outside it while the measured concentration bound still
    holds with a wide margin.
    """
    if q < 1:
        raise GraphError("q must be at least 1")
    if trials < 0:
        raise GraphError("trials must be nonnegative")
    bound = CONCENTRATION_FACTOR * g.m / float(q * q)
    if g.n >= 2 and g.m > 0:
        limit = g.m / (q * DEGREE_CHECK_FACTOR * math.log2(g.n))
        degree_ok = max(g.deg) <= limit
    else:
        degree_ok = True
    per_trial: List[int] = []
    for t in range(trials):
        rng = random.Random(f"{seed}:probe:{t}")
        part = [rng.randint(1, q) for _ in range(g.n)]
        counts: Dict[Tuple[int, int], int] = {}
        for u, v in g.edges():
            key = (min(part[u], part[v]), max(part[u], part[v]))
            counts[key] = counts.get(key, 0) + 1
        per_trial.append(max(counts.values()) if counts else 0)
    return ProbeResult(per_trial, bound, degree_ok)


# ---------------------------------------------------------------------------
# sparse-edge owner rules
# ---------------------------------------------------------------------------


def case1_report_owner(triangle, oriented, ids=None) -> Optional[int]:
    """Pick the unique reporter of a triangle touching oriented edges.

    `oriented` holds (tail, head) pairs for the triangle's oriented edges;
    absent pairs are unoriented. Returns None when no edge is oriented.
    The three published rules (out-degree-2 apex, lone directed edge or
    directed path, common sink) cover every acyclic pattern; the trailing
    fallback (smallest id without an outgoing edge) completes the function
    and is validated unreachable by the exhaustive test. Behavior on a
    cyclic pattern is unspecified.
    """
    verts = tuple(sorted(set(triangle)))
    if len(verts) != 3:
        raise GraphError("a triangle needs three distinct vertices")
    key = (lambda v: ids[v]) if ids is not None else (lambda v: v)
    vset = set(verts)
    pairs = {(a, b) for a, b in oriented if a in vset and b in vset and a != b}
    if not pairs:
        return None
    out = {v: sorted(b for a, b in pairs if a == v) for v in verts}
    inn = {v: sorted(a for a, b in pairs if b == v) for v in verts}
    covered = {edge_key(a, b) for a, b in pairs}

    for v in verts:
        if len(out[v]) == 2:
            return min(out[v], key=key)
    for v in verts:
        if len(inn[v]) == 2 and edge_key(*inn[v]) not in covered:
            return min(inn[v], key=key)
    if len(pairs) == 1:
        ((a, b),) = pairs
        return next(v for v in verts if v not in (a, b))
    if len(pairs) == 2:
        mids = {b for _, b in pairs} & {a for a, _ in pairs}
        if mids:
            z = mids.pop()
            return next(b for a, b in pairs if a == z)
    no_tail = [v for v in verts if not out[v]]
    if no_tail:
        return min(no_tail, key=key)
    return min(verts, key=key)


# ---------------------------------------------------------------------------
# priced delivery
# ---------------------------------------------------------------------------


def _deliver(
    g: Graph,
    members: Sequence[int],
    requests: Sequence[RoutingRequest],
    kappa_base: int,
    envelope: int,
) -> Tuple[Dict[int, List[Tuple[int, Tuple[int, ...]]]], int, int]:
    """Route requests, stretching kappa by the smallest multiplier that fits.

    The charge comes out as tau * kappa_base * mult, the per-unit routing
    price times the normalized load ceiling. A multiplier above the
    concentration envelope means the random classes failed to spread the
    load as promised and is an error.
    """
    if not requests:
        return {}, 0, 0
    sub, old_ids = induced_subgraph(g, sorted(set(members)))
    deg_of = {old_ids[i]: sub.deg[i] for i in range(sub.n)}
    load: Dict[int, int] = {}
    for req in requests:
        load[req.source] = load.get(req.source, 0) + 1
        load[req.destination] = load.get(req.destination, 0) + 1
    mult = 1
    for v, l in load.items():
        if deg_of.get(v, 0) == 0:
            raise GraphError(f"vertex {v} has no edges to route over")
        mult = max(mult, math.ceil(l / (deg_of[v] * kappa_base)))
    if mult > envelope:
        raise GraphError(
            f"routing load multiplier {mult} exceeds the envelope {envelope}"
        )
    delivery, charged = route(g, members, requests, kappa=kappa_base * mult)
    return delivery, charged, mult


# ---------------------------------------------------------------------------
# expander-path enumeration
# ---------------------------------------------------------------------------


def enumerate_expander(
    g: Graph,
    component: Sequence[int],
    e_out: Sequence[Edge],
    seed=0,
    kappa: Optional[int] = None,
    zeta_scale: float = 1.0,
) -> Tuple[TriangleSet, rt.Transcript]:
    """Enumerate all triangles inside one component plus its outward edges.

    The component's induced edges form the inward set; e_out edges must
    touch the component. A vertex whose total degree reaches
    m / (20 n^(1/3) log2 n) collects everything directly; otherwise every
    vertex samples one of q = ceil(n^(1/3)) parts, edges travel to the
    owners of the matching class triads, and each owner reports exactly
    the triangles whose sorted part triple equals one of its triads.
    """
    members = sorted(set(component))
    mset = set(members)
    transcript = rt.Transcript(seed=seed if isinstance(seed, int) else 0)
    if zeta_scale != 1.0:
        transcript.phases["flag:zeta_scale_millis"] = int(zeta_scale * 1000)
    result = TriangleSet()

    e_in = [
        (u, v) for u in members for v in g.adj[u] if u < v and v in mset
    ]
    in_set = set(e_in)
    out_edges: List[Edge] = []
    seen_out = set()
    for u, v in e_out:
        e = edge_key(u, v)
        if e in seen_out:
            continue
        seen_out.add(e)
        if e in in_set:
            raise GraphError(f"outward edge {e} already lies inside the component")
        if e[0] not in mset and e[1] not in mset:
            raise GraphError(f"outward edge {e} does not touch the component")
        out_edges.append(e)
    out_edges.sort()

    m = len(e_in)
    if m == 0:
        return result, transcript
    n_in = len(members)
    universe = sorted(in_set | set(out_edges))
    tri_all = _triangles_of_edges(universe)

    deg_in: Dict[int, int] = {v: 0 for v in members}
    for u, v in e_in:
        deg_in[u] += 1
        deg_in[v] += 1
    deg_out: Dict[int, int] = {}
    for u, v in out_edges:
        deg_out[u] = deg_out.get(u, 0) + 1
        deg_out[v] = deg_out.get(v, 0) + 1
    incident: Dict[int, List[Edge]] = {}
    for e in universe:
        incident.setdefault(e[0], []).append(e)
        incident.setdefault(e[1], []).append(e)

    kappa_base = kappa if kappa is not None else kappa_default(n_in)
    q = _iceil_root(n_in, 3)
    envelope = LOAD_ENVELOPE * 9 * q
    zeta = zeta_scale * m / (HEAVY_DEG_FACTOR * n_in ** (1.0 / 3.0) * math.log2(max(n_in, 2)))

    total_deg = {
        v: deg_in.get(v, 0) + deg_out.get(v, 0)
        for v in set(deg_in) | set(deg_out)
    }
    star = max(total_deg, key=lambda v: (total_deg[v], -v))
    if total_deg[star] >= zeta:
        # Heavy collector: everyone ships its incident edges to one vertex.
        verts_plus = sorted(mset | {star})
        plus_edges = list(in_set | {
            e for e in out_edges
            if (e[0] in mset or e[0] == star) and (e[1] in mset or e[1] == star)
        })
        gp = Graph(g.n, sorted(plus_edges))
        requests = []
        for u in members:
            if u == star:
                continue
            for e in incident.get(u, ()):
                requests.append(RoutingRequest(u, star, payload=e))
        _, charged, _ = _deliver(gp, verts_plus, requests, kappa_base, envelope)
        transcript.phases["triangle:collect"] = charged
        transcript.message_count += len(requests)
        transcript.rounds = sum(
            v for k, v in transcript.phases.items() if not k.startswith("flag:")
        )
        for t in tri_all:
            result.add(t, star)
        return result, transcript

    # Charge every outward edge to a component endpoint with spare inward
    # degree; feasible whenever each such edge touches a vertex at least as
    # inward-heavy as its removed degree.
    charges: Dict[int, int] = {v: 0 for v in members}
    sender_of: Dict[Edge, int] = {}
    for e in out_edges:
        cands = [v for v in e if v in mset]
        cands.sort(key=lambda v: (-(deg_in[v] - charges[v]), v))
        best = cands[0]
        if deg_in[best] - charges[best] <= 0:
            raise GraphError(
                f"outward edge {e} exceeds the sending capacity of {best}"
            )
        charges[best] += 1
        sender_of[e] = best

    ids, id_rounds = assign_degree_class_ids(g, members)
    transcript.phases["triangle:ids"] = id_rounds

    parts: Dict[int, int] = {}
    for v in sorted(total_deg):
        parts[v] = random.Random(f"{seed}:{v}:triad-class").randint(1, q)
    transcript.phases["triangle:classes"] = 1

    alloc = allocate_triads(ids, g, q)

    requests = []
    for e in universe:
        u, v = e
        senders = [u, v] if e in in_set else [sender_of[e]]
        for s_ in senders:
            for r_star in range(1, q + 1):
                owner = alloc.owner_of((parts[u], parts[v], r_star))
                requests.append(RoutingRequest(s_, owner, payload=e))
    delivery, charged, _ = _deliver(g, members, requests, kappa_base, envelope)
    transcript.phases["triangle:deliver"] = charged
    transcript.message_count += len(requests)

    known: Dict[int, Set[Edge]] = {v: set() for v in members}
    for owner, box in delivery.items():
        for _, payload in box:
            known[owner].add(tuple(payload))
    for v in members:
        known[v].update(incident.get(v, ()))

    for t in tri_all:
        a, b, c = t
        owner = alloc.owner_of((parts[a], parts[b], parts[c]))
        for e in ((a, b), (a, c), (b, c)):
            assert edge_key(*e) in known[owner], "owner missed a triangle edge"
        result.add(t, owner)

    transcript.rounds = sum(
        v for k, v in transcript.phases.items() if not k.startswith("flag:")
    )
    return result, transcript


# ---------------------------------------------------------------------------
# general enumeration
# ---------------------------------------------------------------------------


def _solve_general(
    g: Graph,
    delta: float,
    seed,
    kappa: Optional[int],
    level: int,
    cap: int,
    phases: Dict[str, int],
) -> Tuple[TriangleSet, int]:
    result = TriangleSet()
    if g.m == 0 or g.n < 3:
        return result, 0
    if level > cap:
        raise GraphError(f"recursion depth exceeded the cap {cap}")

    decomp, dtx = decompose(g, delta, seed=f"{seed}:L{level}")
    phases[f"triangle:decompose:{level}"] = dtx.rounds
    messages = dtx.message_count

    es_edges: Set[Edge] = set()
    oriented: Set[Tuple[int, int]] = set()
    max_owned = 0
    for owner, part in decomp.es.items():
        max_owned = max(max_owned, len(part))
        for e in part:
            es_edges.add(e)
            oriented.add((owner, e[0] + e[1] - owner))

    # Sparse-edge triangles: owners announce their edges for one round per
    # owned edge, and the orientation rules pick the unique reporter.
    if es_edges:
        phases[f"triangle:case1:{level}"] = max_owned
        messages += sum(
            len(part) * g.deg[owner] for owner, part in decomp.es.items()
        )
        for t in _triangles_of_edges(g.edges()):
            a, b, c = t
            tri_edges = {(a, b), (a, c), (b, c)}
            if tri_edges & es_edges:
                owner = case1_report_owner(t, oriented)
                assert owner is not None
                result.add(t, owner)

    er_set = set(decomp.er)
    deg_er: Dict[int, int] = {}
    for u, v in er_set:
        deg_er[u] = deg_er.get(u, 0) + 1
        deg_er[v] = deg_er.get(v, 0) + 1

    # Per-cluster good/bad split: a vertex with more removed than cluster
    # degree sends nothing, and its cluster edges fall through to the
    # recursion together with all removed edges.
    er_new: Set[Edge] = set()
    cluster_out: Dict[int, List[Edge]] = {}
    cluster_deg: Dict[int, Dict[int, int]] = {}
    for cid in sorted(decomp.clusters):
        edges_c = decomp.cluster_edges(cid)
        deg_c: Dict[int, int] = {v: 0 for v in decomp.clusters[cid]}
        for u, v in edges_c:
            deg_c[u] += 1
            deg_c[v] += 1
        cluster_deg[cid] = deg_c
        good = {v for v in decomp.clusters[cid] if deg_c[v] >= deg_er.get(v, 0)}
        bad = set(decomp.clusters[cid]) - good
        for u, v in edges_c:
            if u in bad or v in bad:
                er_new.add((u, v))
        cluster_out[cid] = sorted(
            e for e in er_set if (e[0] in good) or (e[1] in good)
        )

    recursion_set = er_set | er_new
    case2_rounds = 0
    if decomp.clusters:
        g_m = Graph(g.n, sorted(decomp.em))
        for cid in sorted(decomp.clusters):
            part_set, etx = enumerate_expander(
                g_m,
                sorted(decomp.clusters[cid]),
                cluster_out[cid],
                seed=f"{seed}:L{level}:c{cid}",
                kappa=kappa,
            )
            case2_rounds = max(case2_rounds, etx.rounds)
            messages += etx.message_count
            for t, owner in part_set.attribution.items():
                a, b, c = t
                tri_edges = {(a, b), (a, c), (b, c)}
                if tri_edges <= recursion_set:
                    continue  # the recursion owns these
                result.add(t, owner)
    if case2_rounds:
        phases[f"triangle:case2:{level}"] = case2_rounds

    if recursion_set:
        assert 2 * len(recursion_set) <= g.m, "leftover edges failed to halve"
        gr, old_ids = subgraph_from_edges(sorted(recursion_set))
        sub_result, sub_messages = _solve_general(
            gr, delta, f"{seed}:r{level}", kappa, level + 1, cap, phases
        )
        messages += sub_messages
        for t, owner in sub_result.attribution.items():
            back = tuple(sorted(old_ids[x] for x in t))
            result.add(back, old_ids[owner])
    return result, messages


def enumerate_general(
    g: Graph,
    delta: float = 0.5,
    seed=0,
    kappa: Optional[int] = None,
) -> Tuple[TriangleSet, rt.Transcript]:
    """Enumerate every triangle of g with exactly-once attribution.

    Decomposes the edge set, reports sparse-edge triangles through the
    orientation rules, runs the expander path on each cluster with its
    outward removed edges, and recurses on what remains. The recursion
    depth is capped at log2 m since the leftover halves each level.
    """
    transcript = rt.Transcript(seed=seed if isinstance(seed, int) else 0)
    cap = max(int(math.log2(max(g.m, 2))) + 1, 1)
    result, messages = _solve_general(
        g, delta, seed, kappa, 0, cap, transcript.phases
    )
    transcript.message_count = messages
    transcript.rounds = sum(
        v for k, v in transcript.phases.items() if not k.startswith("flag:")
    )
    return result, transcript


def count_triangles(g: Graph, delta: float = 0.5, seed=0) -> int:
    """Total triangle count as the sum of per-vertex report list sizes."""
    result, _ = enumerate_general(g, delta, seed)
    total = sum(result.reporter_counts().values())
    assert total == result.count
    return total


def detect_triangle(g: Graph, delta: float = 0.5, seed=0) -> bool:
    return count_triangles(g, delta, seed) > 0


# ---------------------------------------------------------------------------
# s-vertex subgraph listing
# ---------------------------------------------------------------------------


def _matches(pattern: Sequence[Edge], verts: Sequence[int], g: Graph, induced: bool) -> bool:
    s = len(verts)
    pat = {edge_key(a, b) for a, b in pattern}
    for perm in permutations(range(s)):
        ok = True
        for a in range(s):
            for b in range(a + 1, s):
                present = g.has_edge(verts[perm[a]], verts[perm[b]])
                wanted = edge_key(a, b) in pat
                if wanted and not present:
                    ok = False
                    break
                if induced and present and not wanted:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def enumerate_subgraphs(
    g: Graph,
    s: int,
    pattern: Optional[Sequence[Edge]] = None,
    seed=0,
    kappa: Optional[int] = None,
    induced: bool = False,
    heavy_scale: float = 1.0,
) -> Tuple[SubgraphSet, rt.Transcript]:
    """List s-vertex pattern occurrences with exactly-once attribution.

    Same shape as the triangle path at tuple size s: a heavy vertex
    (degree at least m / (20 n^((s-2)/s) log2 n)) collects the whole edge
    set, otherwise vertices sample q = ceil(n^(1/s)) parts and the sorted
    class tuples route every inter-part edge set to its owner. Matching is
    non-induced pattern containment unless `induced` is set; the default
    pattern is the s-clique, for which the two notions agree.
    """
    if not 3 <= s <= 5:
        raise GraphError("tuple size must be between 3 and 5")
    if pattern is None:
        pattern = [(a, b) for a in range(s) for b in range(a + 1, s)]
    for a, b in pattern:
        if not (0 <= a < s and 0 <= b < s) or a == b:
            raise GraphError(f"pattern edge ({a}, {b}) is not over {s} slots")
    if math.comb(g.n, s) > ORACLE_COMBO_CAP:
        raise GraphError("instance too large for desk-scale subgraph listing")

    transcript = rt.Transcript(seed=seed if isinstance(seed, int) else 0)
    if heavy_scale != 1.0:
        transcript.phases["flag:heavy_scale_millis"] = int(heavy_scale * 1000)
    result = SubgraphSet(s)
    if g.m == 0 or g.n < s:
        return result, transcript

    occurrences: List[Tuple[int, ...]] = []
    for verts in combinations(range(g.n), s):
        if _matches(pattern, verts, g, induced):
            occurrences.append(verts)

    members = [v for v in range(g.n) if g.deg[v] > 0]
    n = len(members)
    m = g.m
    kappa_base = kappa if kappa is not None else kappa_default(n)
    q = _iceil_root(n, s)
    envelope = LOAD_ENVELOPE * s * s * q ** (s - 2)
    heavy = heavy_scale * m / (
        HEAVY_DEG_FACTOR * n ** ((s - 2.0) / s) * math.log2(max(n, 2))
    )

    star = max(members, key=lambda v: (g.deg[v], -v))
    if g.deg[star] >= heavy:
        requests = [
            RoutingRequest(u, star, payload=(u, v))
            for u, v in g.edges()
            if u != star
        ] + [
            RoutingRequest(v, star, payload=(u, v))
            for u, v in g.edges()
            if v != star
        ]
        _, charged, _ = _deliver(g, members, requests, kappa_base, envelope)
        transcript.phases["subgraph:collect"] = charged
        transcript.message_count += len(requests)
        for verts in occurrences:
            result.attribution[verts] = star
        transcript.rounds = sum(
            v for k, v in transcript.phases.items() if not k.startswith("flag:")
        )
        return result, transcript

    ids, id_rounds = assign_degree_class_ids(g, members)
    transcript.phases["subgraph:ids"] = id_rounds
    parts = {
        v: random.Random(f"{seed}:{v}:tuple-class").randint(1, q) for v in members
    }
    transcript.phases["subgraph:classes"] = 1
    alloc = _allocate_tuples(ids, g, q, s)

    requests = []
    for u, v in g.edges():
        for rest in combinations_with_replacement(range(1, q + 1), s - 2):
            owner = alloc.owner_of((parts[u], parts[v]) + rest)
            requests.append(RoutingRequest(u, owner, payload=(u, v)))
            requests.append(RoutingRequest(v, owner, payload=(u, v)))
    delivery, charged, _ = _deliver(g, members, requests, kappa_base, envelope)
    transcript.phases["subgraph:deliver"] = charged
    transcript.message_count += len(requests)

    known: Dict[int, Set[Edge]] = {v: set() for v in members}
    for owner, box in delivery.items():
        for _, payload in box:
            known[owner].add(tuple(payload))
    for v in members:
        known[v].update(e for e in g.edges() if v in e)

    for verts in occurrences:
        owner = alloc.owner_of(tuple(sorted(parts[v] for v in verts)))
        for a, b in combinations(verts, 2):
            if g.has_edge(a, b):
                assert edge_key(a, b) in known[owner], "owner missed an edge"
        result.attribution[verts] = owner

    transcript.rounds = sum(
        v for k, v in transcript.phases.items() if not k.startswith("flag:")
    )
    return result, transcript
