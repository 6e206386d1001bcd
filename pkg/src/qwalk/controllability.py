"""Combinatorial controllability criteria and the structure report.

Three mutually cross-checking criteria decide whether a walk can realize
every unitary evolution:

* joint orbits of permutation-power pairs, reduced to an N-vertex
  connectivity graph whose connectedness is the verdict;
* reachability sets: some vertex must cover the whole graph with walks of
  one exact length;
* a parity test: some vertex must be reachable in both an odd and an even
  number of steps.

Coin labels ``l, m`` in the joint-orbit API are 1-based (1..d); vertices
are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CriterionConflictError, IndexOutOfRangeError
from .graph_model import WalkSpec
from .walk_core import shift_order

K_SEARCH_CAP_FACTOR = 3


@dataclass(frozen=True)
class JointOrbit:
    """Vertex pairs traced out by equal powers of two permutations."""

    l: int
    m: int
    pairs: frozenset


@dataclass(frozen=True)
class ParityReport:
    """Outcome of the odd/even reachability test from one vertex."""

    m: int
    witness: int | None
    even: tuple[int, ...]
    odd: tuple[int, ...]


@dataclass(frozen=True)
class AgreementReport:
    """Side-by-side verdicts of the three criteria."""

    agree: bool
    orbit_m: int
    reach_controllable: bool
    parity_m: int
    partitions_match: bool


@dataclass(frozen=True)
class ControllabilityReport:
    components: tuple[tuple[int, ...], ...]
    sizes: tuple[int, ...]
    m: int
    controllable: bool
    predicted_lie_dim: int
    kappa: int | None
    kappa_vertex: int | None
    step_bound: int | None
    verdicts_agree: bool


def _check_vertex(spec: WalkSpec, j: int):
    if not 0 <= j < spec.n:
        raise IndexOutOfRangeError(f"vertex {j} out of range 0..{spec.n - 1}")


def joint_orbit(spec: WalkSpec, l: int, m: int) -> JointOrbit:
    """All pairs (P_l^k j, P_m^k j) over j and k = 0..r-1 (l, m are 1-based)."""
    for label in (l, m):
        if not 1 <= label <= spec.d:
            raise IndexOutOfRangeError(f"coin index {label} out of range 1..{spec.d}")
    r = shift_order(spec)
    pl = np.arange(spec.n)
    pm = np.arange(spec.n)
    pairs = set()
    for _ in range(r):
        pairs.update(zip(pl.tolist(), pm.tolist()))
        pl = spec.perms[l - 1].map[pl]
        pm = spec.perms[m - 1].map[pm]
    return JointOrbit(l=l, m=m, pairs=frozenset(pairs))


def _array_cycles(qmap: np.ndarray):
    n = qmap.size
    seen = np.zeros(n, dtype=bool)
    for start in range(n):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        v = int(qmap[start])
        while v != start:
            cyc.append(v)
            seen[v] = True
            v = int(qmap[v])
        yield cyc


def reduced_connectivity_graph(spec: WalkSpec) -> list[set[int]]:
    """Adjacency sets of the N-vertex graph deciding controllability.

    For every coin pair l < m and every k = 0..r-1, vertices sharing a cycle
    of P_l^-k P_m^k are pairwise connected.  Powers beyond r-1 repeat, so
    this range is exhaustive.
    """
    n = spec.n
    adj: list[set[int]] = [set() for _ in range(n)]
    r = shift_order(spec)
    for l in range(spec.d):
        linv = spec.perms[l].inverse().map
        for m in range(l + 1, spec.d):
            plinv = np.arange(n)
            pm = np.arange(n)
            for k in range(r):
                if k:
                    plinv = linv[plinv]
                    pm = spec.perms[m].map[pm]
                    q = plinv[pm]
                    for cyc in _array_cycles(q):
                        for a_i, a in enumerate(cyc):
                            for b in cyc[a_i + 1:]:
                                adj[a].add(b)
                                adj[b].add(a)
    return adj


def connected_components(adj: list[set[int]]) -> list[list[int]]:
    """Sorted components of an adjacency-set graph, ordered by least vertex."""
    n = len(adj)
    unseen = set(range(n))
    comps = []
    while unseen:
        start = min(unseen)
        comp = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for u in adj[v]:
                if u not in comp:
                    comp.add(u)
                    frontier.append(u)
        unseen -= comp
        comps.append(sorted(comp))
    return comps


def reachable_sets(spec: WalkSpec, j: int, kmax: int) -> list[set[int]]:
    """Exact image sets: vertices reachable from j in exactly 0, 1, ..., kmax
    steps.  Not monotone in general."""
    _check_vertex(spec, j)
    sets = [{j}]
    current = {j}
    for _ in range(kmax):
        arr = np.fromiter(current, dtype=np.int64)
        current = set(np.concatenate([p.map[arr] for p in spec.perms]).tolist())
        sets.append(current)
    return sets


def parity_check(spec: WalkSpec, j: int = 0) -> ParityReport:
    """Breadth-first parity labelling of the graph from vertex j.

    m = 1 when some vertex is reachable in both an odd and an even number of
    steps (with a witness); otherwise m = 2 with the even/odd partition.
    """
    _check_vertex(spec, j)
    even, odd = {j}, set()
    frontier = [(j, 0)]
    while frontier:
        nxt = []
        for v, par in frontier:
            for u in spec.neighbors(v):
                target = odd if par == 0 else even
                if u not in target:
                    target.add(u)
                    nxt.append((u, 1 - par))
        frontier = nxt
    both = even & odd
    if both:
        return ParityReport(m=1, witness=min(both), even=tuple(sorted(even)), odd=tuple(sorted(odd)))
    return ParityReport(m=2, witness=None, even=tuple(sorted(even)), odd=tuple(sorted(odd)))


def k_of(spec: WalkSpec, j: int, cap: int | None = None) -> int | None:
    """Least k with every vertex reachable from j in exactly k steps.

    Returns None when no such k exists up to the cap (default 3N) and the
    parity test confirms the walk is not coverable; raises
    CriterionConflictError if the cap is hit although parity says it should
    be coverable (internal assertion; the cap argument makes this
    impossible).
    """
    _check_vertex(spec, j)
    if cap is None:
        cap = K_SEARCH_CAP_FACTOR * spec.n
    current = {j}
    if len(current) == spec.n:
        return 0
    for k in range(1, cap + 1):
        arr = np.fromiter(current, dtype=np.int64)
        current = set(np.concatenate([p.map[arr] for p in spec.perms]).tolist())
        if len(current) == spec.n:
            return k
    if parity_check(spec, j).m == 1:
        raise CriterionConflictError(
            f"no covering step count for vertex {j} up to cap {cap}, "
            "but the parity test reports a coverable walk"
        )
    return None


def kappa(spec: WalkSpec) -> tuple[int, int] | None:
    """Minimum over vertices of k_of, with the achieving vertex.

    Ties go to the smallest vertex.  None when the walk is not coverable.
    """
    best = None
    for j in range(spec.n):
        kj = k_of(spec, j)
        if kj is not None and (best is None or kj < best[0]):
            best = (kj, j)
    return best


def verdicts_agree(spec: WalkSpec) -> AgreementReport:
    """Cross-check the three criteria; when both partition-producing criteria
    report two blocks, the partitions must also coincide vertex-by-vertex."""
    comps = connected_components(reduced_connectivity_graph(spec))
    orbit_m = len(comps)
    reach_ok = kappa(spec) is not None
    par = parity_check(spec, 0)
    agree = (orbit_m == 1) == reach_ok == (par.m == 1)
    partitions_match = True
    if orbit_m == 2 and par.m == 2:
        partitions_match = {frozenset(c) for c in comps} == {
            frozenset(par.even),
            frozenset(par.odd),
        }
        agree = agree and partitions_match
    return AgreementReport(
        agree=agree,
        orbit_m=orbit_m,
        reach_controllable=reach_ok,
        parity_m=par.m,
        partitions_match=partitions_match,
    )


def analyze(spec: WalkSpec) -> ControllabilityReport:
    """Full controllability report.

    Components come from the reduced connectivity graph; the predicted
    operator-algebra dimension is sum((d*v_j)^2) over component sizes v_j:
    the algebra splits into one full unitary block per component (every
    block's phase direction is independently reachable through per-vertex
    phase coins), so it is (dN)^2 exactly when there is a single component.
    The covering step count and the 2k+r transfer bound are filled in only
    for controllable walks.
    """
    comps = connected_components(reduced_connectivity_graph(spec))
    sizes = tuple(len(c) for c in comps)
    m = len(comps)
    controllable = m == 1
    predicted = sum((spec.d * v) ** 2 for v in sizes)
    kk = kv = bound = None
    if controllable:
        kk, kv = kappa(spec)
        bound = 2 * kk + shift_order(spec)
    agreement = verdicts_agree(spec)
    return ControllabilityReport(
        components=tuple(tuple(c) for c in comps),
        sizes=sizes,
        m=m,
        controllable=controllable,
        predicted_lie_dim=predicted,
        kappa=kk,
        kappa_vertex=kv,
        step_bound=bound,
        verdicts_agree=agreement.agree,
    )
