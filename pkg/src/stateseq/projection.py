"""Optimal elimination of short events by shortest-path projection.

A sequence is replaced by the minimizer of (integral distance to it) plus a
per-jump penalty ``gamma``; every finite event of the minimizer then lasts at
least ``gamma`` (``2*gamma`` for two-state sequences).  The minimizer is found
exactly: events long enough to survive some optimal solution are frozen, the
stretches between them become independent subproblems, and each subproblem is
solved as a shortest source-to-sink path in a weighted DAG over candidate
jump times.  Weight columns are computed lazily from occupancy prefix sums,
so solving never materializes the quadratic arc matrix; :func:`build_graph`
materializes it on demand for inspection and enumeration.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .sequence import (
    COST_TOL,
    DISCRETE,
    INF,
    DiscreteMetric,
    Labels,
    StateMetric,
    StateSequence,
    standard_distance,
)

# Slack for gap-vs-threshold comparisons (arc feasibility, event freezing);
# absorbs float noise in differences of decimal-valued times.
GAP_TOL = 1e-12


def energy(f: StateSequence, g: StateSequence, gamma: float, metric: StateMetric = DISCRETE) -> float:
    """dist(f, g) + gamma * (number of jumps of g)."""
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    return standard_distance(f, g, metric) + gamma * g.n_jumps


def most_common_state(f: StateSequence, start: float, end: float) -> int:
    """State of f with the largest occupancy time in [start, end).

    Unbounded intervals return the corresponding boundary state (the only
    state with infinite occupancy there); ties go to the smallest state id.
    """
    if start >= end:
        raise ValueError("need start < end")
    if start == -INF:
        return f.initial_state
    if end == INF:
        return f.final_state
    occupancy: dict[int, float] = {}
    for ev in f.events():
        lo = max(ev.start, start)
        hi = min(ev.end, end)
        if hi > lo:
            occupancy[ev.state] = occupancy.get(ev.state, 0.0) + (hi - lo)
    best = max(occupancy.values())
    return min(s for s, occ in occupancy.items() if occ == best)


@dataclass(frozen=True)
class Subproblem:
    """A run of removable short events between two frozen anchors.

    ``sequence`` is the sub-function with the anchor states extended to
    +-inf (its initial and final states are the left and right anchors);
    ``first_jump`` / ``last_jump`` index into the jumps of the original
    sequence.
    """

    sequence: StateSequence
    first_jump: int
    last_jump: int

    @property
    def span(self) -> tuple[float, float]:
        times = self.sequence.jump_times
        return times[0], times[-1]


def split_long_events(f: StateSequence, gamma: float, binary: bool = False) -> tuple[Subproblem, ...]:
    """Freeze events no optimal solution needs to remove and split between them.

    An event at least ``2*gamma`` long is kept verbatim in some optimal
    projection, as are the two unbounded boundary events; each maximal run
    of shorter events in between forms one independent subproblem.  The
    threshold is ``2*gamma`` for two-state sequences as well: freezing at
    ``gamma`` looks tempting there but is unsound, since keeping an event of
    length in (gamma, 2*gamma) pins two retained jumps closer than the
    binary minimum gap, and removing such an event can be strictly optimal.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    threshold = 2.0 * gamma
    events = f.events()
    frozen = [ev.length >= threshold - GAP_TOL for ev in events]
    subs = []
    i = 1
    while i < len(events) - 1:
        if frozen[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(events) - 1 and not frozen[j + 1]:
            j += 1
        # Jump into events[i] is f.jumps[i-1]; jump out of events[j] is f.jumps[j].
        sub_seq = StateSequence(events[i - 1].state, f.jumps[i - 1 : j + 1])
        subs.append(Subproblem(sub_seq, i - 1, j))
        i = j + 1
    return tuple(subs)


class _Core:
    """Per-subproblem weight machinery shared by the solver and the graph.

    Vertices are indexed 0 (source, -inf), 1..k (candidate jump times in
    order), k+1 (sink, +inf).  ``column(j)`` returns the arc weights from
    every earlier vertex into j, computed from occupancy prefix sums; absent
    arcs are +inf.
    """

    def __init__(self, f: StateSequence, gamma: float, metric: StateMetric, binary: bool):
        n = f.n_jumps
        if gamma <= 0:
            raise ValueError("gamma must be positive")
        if n < 2:
            raise ValueError("graph construction needs at least 2 jumps")
        states = list(f.states_used)
        if binary and len(states) != 2:
            raise ValueError("binary graph requires a two-state sequence")
        comp = {s: i for i, s in enumerate(states)}
        m = len(states)

        t = np.array(f.jump_times)
        svec = np.array([comp[f.initial_state]] + [comp[s] for _, s in f.jumps])
        internal = np.diff(t)
        if internal.size and internal.max() > 2.0 * gamma + GAP_TOL:
            raise ValueError("internal gap exceeds the split threshold; split the sequence first")

        # Occupancy of each state within [t_1, t_i), column i = 1..n.
        pref = np.zeros((m, n + 1))
        onehot = np.zeros((m, n - 1))
        onehot[svec[1:n], np.arange(n - 1)] = internal
        pref[:, 2:] = np.cumsum(onehot, axis=1)

        # Candidate jump vertices.  The second (second-to-last) jump can be
        # dropped when the gap to its neighbour is at most gamma: a solution
        # jumping there can shift that jump onto the neighbour at no extra
        # cost under the discrete metric.  For wider gaps, keeping both
        # boundary jumps of an event can be uniquely optimal.
        drop: set[int] = set()
        if not binary and n > 2 and isinstance(metric, DiscreteMetric):
            if t[1] - t[0] <= gamma + GAP_TOL:
                drop.add(2)
            if t[n - 1] - t[n - 2] <= gamma + GAP_TOL:
                drop.add(n - 1)
        kept = [i for i in range(1, n + 1) if i not in drop]

        self.gamma = gamma
        self.binary = binary
        self.discrete = isinstance(metric, DiscreteMetric)
        self.states = states
        self.dmat = metric.matrix(states)
        self.n = n
        self.kidx = np.array(kept)
        self.ktimes = t[self.kidx - 1]
        self.k = len(kept)
        self.pref_k = pref[:, self.kidx]
        self.pref_end = pref[:, n]
        self.c0 = int(svec[0])
        self.cn = int(svec[n])
        self.skept = svec[self.kidx]  # state right after each candidate jump
        self.min_gap = (2.0 * gamma if binary else gamma) - GAP_TOL
        self.times = np.concatenate(([-INF], self.ktimes, [INF]))

        # Forced-state arcs touching the sentinels.
        self.w_source = self.dmat[self.c0] @ self.pref_k + gamma
        self.w_sink = self.dmat[self.cn] @ (self.pref_end[:, None] - self.pref_k)
        self.direct_ok = (n + 1) % 2 == 1 if binary else self.c0 == self.cn
        self.w_direct = float(self.dmat[self.c0] @ self.pref_end) if self.direct_ok else INF
        # qmat[c, i] = sum_x d(c, x) * occupancy of x in [t_1, kept time i);
        # binary arc weights are differences of its entries.
        self.qmat = self.dmat @ self.pref_k

    @property
    def n_vertices(self) -> int:
        return self.k + 2

    def _finite_weights(self, j: int, p: int) -> np.ndarray:
        """Weights from finite vertices 1..p into finite vertex j (1-based)."""
        if self.binary:
            rows = self.skept[:p]
            w = self.qmat[rows, j - 1] - self.qmat[rows, np.arange(p)]
        elif self.discrete:
            occ = self.pref_k[:, j - 1 : j] - self.pref_k[:, :p]
            w = (self.ktimes[j - 1] - self.ktimes[:p]) - occ.max(axis=0)
        else:
            occ = self.pref_k[:, j - 1 : j] - self.pref_k[:, :p]
            smc = occ.argmax(axis=0)
            w = np.einsum("km,mk->k", self.dmat[smc], occ)
        return w + self.gamma

    def column(self, j: int) -> np.ndarray:
        """Arc weights from every vertex below j into vertex j; +inf if absent."""
        out = np.full(j, INF)
        if j <= self.k:
            b = self.kidx[j - 1]
            if not self.binary or b % 2 == 1:
                out[0] = self.w_source[j - 1]
            p = int(np.searchsorted(self.ktimes[: j - 1], self.ktimes[j - 1] - self.min_gap, side="right"))
            if p:
                w = self._finite_weights(j, p)
                if self.binary:
                    w = np.where((b - self.kidx[:p]) % 2 == 1, w, INF)
                out[1 : p + 1] = w
        else:
            out[0] = self.w_direct
            w = self.w_sink.copy()
            if self.binary:
                w = np.where((self.n + 1 - self.kidx) % 2 == 1, w, INF)
            out[1:] = w
        return out

    def arc_state(self, a: int, b: int) -> int:
        """Segment state carried by the arc between vertices a < b."""
        if a == 0:
            return self.states[self.c0]
        if self.binary:
            return self.states[int(self.skept[a - 1])]
        if b == self.k + 1:
            return self.states[self.cn]
        occ = self.pref_k[:, b - 1] - self.pref_k[:, a - 1]
        return self.states[int(occ.argmax())]

    def _weight_single(self, j: int, k: int) -> float:
        """Exact arc weight from finite vertex k into finite vertex j.

        Evaluates the same elementwise expression as :meth:`_finite_weights`
        so results are bitwise identical to the reference columns.
        """
        if self.binary:
            s = self.skept[k - 1]
            w = self.qmat[s, j - 1] - self.qmat[s, k - 1]
        else:
            occ = self.pref_k[:, j - 1] - self.pref_k[:, k - 1]
            w = (self.ktimes[j - 1] - self.ktimes[k - 1]) - occ.max()
        return float(w) + self.gamma

    def solve_primary(self) -> tuple[tuple[int, ...], float]:
        """Single best path in O(vertices * states) via running minima.

        For the discrete metric the arc weight decomposes per candidate
        segment state c as (dist[k] - t_k + occ_c[k]) + (gamma + t_j -
        occ_c[j]); the binary weight decomposes per predecessor parity
        class.  A running minimum (plus runner-up for safety) per class
        over the feasible prefix then yields each column's winner in O(m).
        The winner's cost is recomputed with the exact reference arc
        expression, and whenever the runner-up comes within a safety margin
        the whole column is recomputed exactly, so results match the
        reference DP bit for bit including tie-breaking.  Metrics other
        than the discrete one take the reference path.
        """
        if not (self.discrete or self.binary):
            path, cost, _ = _dp(self.times, self.column, all_optimal=False)
            return path, cost

        margin = 1e-9
        kk = self.k
        n_v = kk + 2
        dist = np.full(n_v, INF)
        dist[0] = 0.0
        parent = np.full(n_v, -1, dtype=int)
        njumps = np.zeros(n_v, dtype=int)
        ktimes = self.ktimes
        pref_k = self.pref_k
        qmat = self.qmat

        def path_times(v: int) -> tuple[float, ...]:
            out: list[float] = []
            while v > 0:
                out.append(float(self.times[v]))
                v = int(parent[v])
            return tuple(reversed(out))

        def fallback(j: int) -> None:
            cand = dist[:j] + self.column(j)
            best = cand.min()
            if not math.isfinite(best):
                return
            ties = np.flatnonzero(cand <= best + _tie_tol(best))
            if len(ties) == 1:
                k = int(ties[0])
            else:
                k = int(min(ties, key=lambda i: (njumps[i], path_times(int(i)))))
            dist[j] = cand[k]
            parent[j] = k
            njumps[j] = njumps[k] + (1 if j < n_v - 1 else 0)

        if self.binary:
            # One class per predecessor index parity; all members share the
            # post-jump state, so R[k] = dist[k] - qmat[s, k].
            s_by_par = {int(self.kidx[i]) % 2: int(self.skept[i]) for i in range(kk)}
            classes = [0, 1]

            def admit_classes(i: int) -> list[int]:
                return [int(self.kidx[i]) % 2]

            def r_value(i: int, c: int) -> float:
                return dist[i + 1] - qmat[self.skept[i], i]

            def col_term(j: int, c: int) -> float:
                return qmat[s_by_par[c], j - 1] + self.gamma

            def class_allowed(j: int, c: int) -> bool:
                return (int(self.kidx[j - 1]) - c) % 2 == 1
        else:
            # One class per candidate segment state.
            classes = list(range(len(self.states)))

            def admit_classes(i: int) -> list[int]:
                return classes

            def r_value(i: int, c: int) -> float:
                return dist[i + 1] - ktimes[i] + pref_k[c, i]

            def col_term(j: int, c: int) -> float:
                return self.gamma + ktimes[j - 1] - pref_k[c, j - 1]

            def class_allowed(j: int, c: int) -> bool:
                return True

        best1 = {c: INF for c in classes}
        best1_k = {c: -1 for c in classes}
        best2 = {c: INF for c in classes}
        admitted = 0

        def admit(i: int) -> None:
            if not math.isfinite(dist[i + 1]):
                return
            for c in admit_classes(i):
                v = r_value(i, c)
                if v < best1[c]:
                    best2[c] = best1[c]
                    best1[c] = v
                    best1_k[c] = i + 1
                elif v < best2[c]:
                    best2[c] = v

        for j in range(1, kk + 1):
            bound = ktimes[j - 1] - self.min_gap
            while admitted < kk and ktimes[admitted] <= bound:
                admit(admitted)
                admitted += 1

            src_ok = (not self.binary) or int(self.kidx[j - 1]) % 2 == 1
            cand_src = float(self.w_source[j - 1]) if src_ok else INF

            best_val, best_cls = INF, -1
            runner = INF
            for c in classes:
                if not class_allowed(j, c):
                    continue
                term = col_term(j, c)
                v1 = best1[c] + term
                if v1 < best_val:
                    runner = min(runner, best_val)
                    best_val, best_cls = v1, c
                else:
                    runner = min(runner, v1)
                v2 = best2[c] + term
                if v2 < runner:
                    runner = v2

            # Runner-up must also consider a different vertex winning via
            # another class with the same value.
            if best_cls >= 0:
                for c in classes:
                    if c != best_cls and class_allowed(j, c) and best1_k[c] != best1_k[best_cls]:
                        runner = min(runner, best1[c] + col_term(j, c))

            contenders = sorted(v for v in (best_val, cand_src, runner) if math.isfinite(v))
            if not contenders:
                continue
            scale = max(1.0, abs(contenders[0]))
            if len(contenders) > 1 and contenders[1] - contenders[0] <= margin * scale:
                fallback(j)
                continue
            if cand_src < best_val:
                dist[j] = cand_src
                parent[j] = 0
                njumps[j] = 1
            else:
                k = best1_k[best_cls]
                dist[j] = dist[k] + self._weight_single(j, k)
                parent[j] = k
                njumps[j] = njumps[k] + 1

        fallback(n_v - 1)
        if not math.isfinite(dist[n_v - 1]):
            raise RuntimeError("sink unreachable; the graph violates its construction invariants")

        path: list[int] = []
        v = n_v - 1
        while v >= 0:
            path.append(v)
            v = int(parent[v]) if v > 0 else -1
        return tuple(reversed(path)), float(dist[n_v - 1])

    def path_to_sequence(self, path: tuple[int, ...]) -> StateSequence:
        initial = self.arc_state(path[0], path[1])
        pairs = []
        for a, b in zip(path[1:-1], path[2:]):
            pairs.append((float(self.times[a]), self.arc_state(a, b)))
        return StateSequence.from_pairs(initial, pairs)


@dataclass(frozen=True)
class ProjectionGraph:
    """Weighted DAG over candidate jump times.

    ``times`` includes the -inf source and +inf sink sentinels.  ``weight``
    and ``seg_state`` are dense (n_vertices x n_vertices) matrices: absent
    arcs hold +inf / -1, and ``seg_state[k, l]`` is the state assigned to
    the interval between vertices k and l of any solution using that arc.
    """

    times: np.ndarray
    weight: np.ndarray
    seg_state: np.ndarray
    gamma: float
    binary: bool

    @property
    def n_vertices(self) -> int:
        return len(self.times)

    @property
    def arcs(self) -> tuple[tuple[float, float, float, int], ...]:
        """(from_time, to_time, weight, segment_state) for every arc."""
        out = []
        n = self.n_vertices
        for k in range(n):
            for l in range(k + 1, n):
                if math.isfinite(self.weight[k, l]):
                    out.append(
                        (
                            float(self.times[k]),
                            float(self.times[l]),
                            float(self.weight[k, l]),
                            int(self.seg_state[k, l]),
                        )
                    )
        return tuple(out)

    def arc_weight(self, from_time: float, to_time: float) -> float:
        k = int(np.searchsorted(self.times, from_time))
        l = int(np.searchsorted(self.times, to_time))
        return float(self.weight[k, l])


def _materialize(core: _Core) -> ProjectionGraph:
    size = core.n_vertices
    weight = np.full((size, size), INF)
    seg_state = np.full((size, size), -1, dtype=int)
    for j in range(1, size):
        col = core.column(j)
        weight[:j, j] = col
        for a in np.flatnonzero(np.isfinite(col)):
            seg_state[a, j] = core.arc_state(int(a), j)
    return ProjectionGraph(core.times, weight, seg_state, core.gamma, core.binary)


def build_graph(f: StateSequence, gamma: float, metric: StateMetric = DISCRETE) -> ProjectionGraph:
    """Candidate-jump DAG for a pre-split sequence (internal gaps < 2*gamma).

    Arc (t_k, t_l) exists iff t_l - t_k >= gamma; its weight is the distance
    contribution of labelling [t_k, t_l) with the most common state of f
    there, plus gamma whenever t_l is finite.  Arcs touching a sentinel are
    forced to the corresponding boundary state (anything else would weigh
    infinity and is omitted).
    """
    return _materialize(_Core(f, gamma, metric, binary=False))


def build_graph_binary(f: StateSequence, gamma: float) -> ProjectionGraph:
    """Two-state variant: arcs need t_l - t_k >= 2*gamma and odd index gaps.

    The parity constraint encodes that retained jumps keep their direction,
    which also pins each arc's segment state to the state of f right after
    the arc's start (for sentinel arcs this coincides with the forced
    boundary state).
    """
    return _materialize(_Core(f, gamma, DISCRETE, binary=True))


@dataclass(frozen=True)
class ShortestPath:
    vertices: tuple[float, ...]
    cost: float
    all_optimal: tuple[tuple[float, ...], ...] | None = None


def _tie_tol(value: float) -> float:
    return COST_TOL * max(1.0, abs(value))


def _dp(
    times: np.ndarray, column: Callable[[int], np.ndarray], all_optimal: bool
) -> tuple[tuple[int, ...], float, tuple[tuple[int, ...], ...] | None]:
    """Cost-minimal source-to-sink path over lazily provided weight columns.

    Ties (costs equal up to float noise) break deterministically: fewer
    jumps first, then lexicographically earliest jump times.  Returns vertex
    index paths; with ``all_optimal`` every cost-minimal path is enumerated.
    """
    n = len(times)
    dist = np.full(n, INF)
    dist[0] = 0.0
    parent = np.full(n, -1, dtype=int)
    njumps = np.zeros(n, dtype=int)
    columns: list[np.ndarray | None] = [None] * n

    def path_times(v: int) -> tuple[float, ...]:
        out: list[float] = []
        while v > 0:
            out.append(float(times[v]))
            v = int(parent[v])
        return tuple(reversed(out))

    for j in range(1, n):
        col = column(j)
        if all_optimal:
            columns[j] = col
        cand = dist[:j] + col
        best = cand.min()
        if not math.isfinite(best):
            continue
        ties = np.flatnonzero(cand <= best + _tie_tol(best))
        if len(ties) == 1:
            k = int(ties[0])
        else:
            k = int(min(ties, key=lambda i: (njumps[i], path_times(int(i)))))
        dist[j] = cand[k]
        parent[j] = k
        njumps[j] = njumps[k] + (1 if j < n - 1 else 0)

    if not math.isfinite(dist[n - 1]):
        raise RuntimeError("sink unreachable; the graph violates its construction invariants")

    primary: list[int] = []
    v = n - 1
    while v >= 0:
        primary.append(v)
        v = int(parent[v]) if v > 0 else -1
    primary_path = tuple(reversed(primary))

    enumerated: tuple[tuple[int, ...], ...] | None = None
    if all_optimal:
        dmin = np.full(n, INF)
        dmin[0] = 0.0
        for j in range(1, n):
            dmin[j] = (dmin[:j] + columns[j]).min()
        paths: list[tuple[int, ...]] = []

        def backtrack(v: int, suffix: tuple[int, ...]) -> None:
            if v == 0:
                paths.append((0,) + suffix)
                return
            cand = dmin[:v] + columns[v]
            target = dmin[v]
            for k in np.flatnonzero(cand <= target + _tie_tol(target)):
                backtrack(int(k), (v,) + suffix)

        backtrack(n - 1, ())
        paths.sort(key=lambda p: (len(p), tuple(float(times[v]) for v in p)))
        enumerated = tuple(paths)

    return primary_path, float(dist[n - 1]), enumerated


def shortest_path(graph: ProjectionGraph, all_optimal: bool = False) -> ShortestPath:
    """Cost-minimal source-to-sink path by DP in time order.

    Equal-cost ties resolve to fewer jumps, then lexicographically earliest
    jump times; ``all_optimal`` also enumerates every cost-minimal path.
    """
    path, cost, enumerated = _dp(
        graph.times, lambda j: graph.weight[:j, j], all_optimal=all_optimal
    )

    def to_times(p: tuple[int, ...]) -> tuple[float, ...]:
        return tuple(float(graph.times[v]) for v in p)

    all_paths = tuple(to_times(p) for p in enumerated) if enumerated is not None else None
    return ShortestPath(to_times(path), cost, all_paths)


@dataclass(frozen=True)
class ProjectionResult:
    """Outcome of a projection.

    ``cost`` is the summed shortest-path cost over the processed regions
    (distance inside the subproblem spans plus gamma per retained jump
    there); jumps preserved between two frozen events sit outside every
    span and are not included.  ``optima`` lists every optimal projection
    when requested, the primary ``projected`` among them.
    """

    projected: StateSequence
    cost: float
    subproblem_spans: tuple[tuple[float, float], ...]
    optima: tuple[StateSequence, ...] | None = None

    @property
    def n_subproblems(self) -> int:
        return len(self.subproblem_spans)


def _reassemble(f: StateSequence, subs: tuple[Subproblem, ...], solved: list[StateSequence]) -> StateSequence:
    pairs: list[tuple[float, int]] = []
    pos = 0
    for sub, sol in zip(subs, solved):
        pairs.extend(f.jumps[pos : sub.first_jump])
        pairs.extend(sol.jumps)
        pos = sub.last_jump + 1
    pairs.extend(f.jumps[pos:])
    return StateSequence.from_pairs(f.initial_state, pairs)


def _seq_sort_key(seq: StateSequence):
    return (seq.n_jumps, seq.jump_times, tuple(s for _, s in seq.jumps))


def project(
    f: StateSequence,
    gamma: float,
    metric: StateMetric = DISCRETE,
    *,
    binary: bool = False,
    all_optimal: bool = False,
) -> ProjectionResult:
    """Project f onto the sequences whose finite events last >= gamma.

    gamma = 0 returns f unchanged.  With ``binary`` (two-state input) the
    parity-restricted graph is used and the output minimum duration doubles
    to 2*gamma.  ``all_optimal`` additionally enumerates every optimal
    projection (combinations across independent subproblems included).
    """
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    if binary and len(f.states_used) > 2:
        raise ValueError("binary projection requires a two-state sequence")
    if gamma == 0 or f.n_jumps == 0:
        return ProjectionResult(f, 0.0, (), (f,) if all_optimal else None)

    subs = split_long_events(f, gamma, binary)
    if not subs:
        return ProjectionResult(f, 0.0, (), (f,) if all_optimal else None)

    solved: list[StateSequence] = []
    per_sub_optima: list[list[StateSequence]] = []
    total = 0.0
    for sub in subs:
        core = _Core(sub.sequence, gamma, metric, binary)
        if all_optimal:
            path, cost, enumerated = _dp(core.times, core.column, all_optimal=True)
        else:
            path, cost = core.solve_primary()
            enumerated = None
        solved.append(core.path_to_sequence(path))
        total += cost
        if all_optimal:
            seen: dict[tuple, StateSequence] = {}
            for p in enumerated or ():
                seq = core.path_to_sequence(p)
                seen.setdefault((seq.initial_state, seq.jumps), seq)
            per_sub_optima.append(sorted(seen.values(), key=_seq_sort_key))

    projected = _reassemble(f, subs, solved)
    spans = tuple(sub.span for sub in subs)

    optima: tuple[StateSequence, ...] | None = None
    if all_optimal:
        combos: dict[tuple, StateSequence] = {}
        for choice in itertools.product(*per_sub_optima):
            seq = _reassemble(f, subs, list(choice))
            combos.setdefault((seq.initial_state, seq.jumps), seq)
        optima = tuple(sorted(combos.values(), key=_seq_sort_key))

    return ProjectionResult(projected, total, spans, optima)


def project_labels(
    labels: Labels,
    gamma: float,
    metric: StateMetric = DISCRETE,
    *,
    binary: bool = False,
    all_optimal: bool = False,
) -> tuple[Labels, ProjectionResult]:
    """Project finite-horizon labels, keeping the recording edges anchored."""
    result = project(labels.to_anchored(), gamma, metric, binary=binary, all_optimal=all_optimal)
    out = Labels.from_anchored(result.projected, labels.horizon, labels.n_states)
    return out, result
