"""Exhaustive exact-cover search for ovoids and m-ovoids.

Columns are generators, rows are points.  The cover engine is Algorithm X on
bitsets with minimum-remaining-candidates column choice.  Since the isometry
group of a classical polar space is transitive on points, a nonempty solution
can be assumed to contain point 0; every run records that assumption.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .intriguing import WeightVector, classify
from .polar import PolarSpace, bits, cached, members

CHECKPOINT_VERSION = 1
SYMMETRY_NOTE = "point 0 forced into the solution (the isometry group is transitive on points)"


class SearchError(RuntimeError):
    pass


@dataclass
class CoverInstance:
    space: PolarSpace
    m: int
    columns: list  # generator point masks
    point_cols: list  # per point: bitmask of generator indices

    @classmethod
    def of(cls, space: PolarSpace, m: int = 1) -> "CoverInstance":
        cols = list(space.generators)
        ppg = space.points_per_generator
        if any(c.bit_count() != ppg for c in cols):
            raise SearchError("generator with wrong point count")
        pc = [0] * space.n
        for j, c in enumerate(cols):
            for x in members(c):
                pc[x] |= 1 << j
        return cls(space, m, cols, pc)

    @property
    def target(self) -> int:
        return self.m * self.space.ovoid_number

    def conflicts(self) -> list[int]:
        """Points sharing a generator with each point (including itself)."""
        out = []
        for x in range(self.space.n):
            c = 0
            for j in members(self.point_cols[x]):
                c |= self.columns[j]
            out.append(c)
        return out


@dataclass
class SearchResult:
    status: str  # witness | unsat | timeout
    nodes: int
    witness: list | None = None
    elapsed: float = 0.0
    assumption: str = SYMMETRY_NOTE
    verification: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "nodes": self.nodes,
            "witness": self.witness,
            "elapsed_s": round(self.elapsed, 3),
            "assumption": self.assumption,
            "verification": self.verification,
        }


class _Budget(Exception):
    pass


class _Engine:
    def __init__(self, inst: CoverInstance, max_nodes: int | None, deadline: float | None):
        self.inst = inst
        self.cols = inst.columns
        self.pc = inst.point_cols
        self.conf = inst.conflicts() if inst.m == 1 else None
        self.max_nodes = max_nodes
        self.deadline = deadline
        self.nodes = 0

    def _tick(self):
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _Budget
        if self.deadline is not None and self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise _Budget

    # -- exact cover (m = 1) -----------------------------------------------------
    def cover(self, open_cols: int, avail: int, chosen: list):
        self._tick()
        if not open_cols:
            return list(chosen)
        best, best_rows, best_n = -1, 0, None
        oc = open_cols
        while oc:
            low = oc & -oc
            j = low.bit_length() - 1
            oc ^= low
            rows = self.cols[j] & avail
            n = rows.bit_count()
            if best_n is None or n < best_n:
                best, best_rows, best_n = j, rows, n
                if n <= 1:
                    break
        if best_n == 0:
            return None
        r = best_rows
        while r:
            low = r & -r
            x = low.bit_length() - 1
            r ^= low
            chosen.append(x)
            got = self.cover(open_cols & ~self.pc[x], avail & ~self.conf[x], chosen)
            chosen.pop()
            if got is not None:
                return got
        return None

    # -- multiplicity m ----------------------------------------------------------
    def multi(self, need: list, avail: int, chosen: list):
        self._tick()
        best, best_slack = -1, None
        for j, nd in enumerate(need):
            if nd == 0:
                continue
            slack = (self.cols[j] & avail).bit_count() - nd
            if slack < 0:
                return None
            if best_slack is None or slack < best_slack:
                best, best_slack = j, slack
        if best < 0:
            return list(chosen)
        x = (self.cols[best] & avail & -(self.cols[best] & avail)).bit_length() - 1
        # include x
        new = list(need)
        ok = True
        kill = 0
        for j in members(self.pc[x]):
            new[j] -= 1
            if new[j] < 0:
                ok = False
                break
            if new[j] == 0:
                kill |= self.cols[j]
        if ok:
            chosen.append(x)
            got = self.multi(new, avail & ~kill & ~(1 << x), chosen)
            chosen.pop()
            if got is not None:
                return got
        return self.multi(need, avail & ~(1 << x), chosen)

    def start(self, forced: list[int], avail: int | None = None):
        n = self.inst.space.n
        avail = (1 << n) - 1 if avail is None else avail
        if self.inst.m == 1:
            open_cols = (1 << len(self.cols)) - 1
            for x in forced:
                if not avail >> x & 1:
                    return None
                open_cols &= ~self.pc[x]
                avail &= ~self.conf[x]
            return self.cover(open_cols, avail, list(forced))
        need = [self.inst.m] * len(self.cols)
        for x in forced:
            if not avail >> x & 1:
                return None
            avail &= ~(1 << x)
            for j in members(self.pc[x]):
                need[j] -= 1
                if need[j] < 0:
                    return None
                if need[j] == 0:
                    avail &= ~self.cols[j]
        return self.multi(need, avail, list(forced))


# -- independent verification -------------------------------------------------


def verify_movoid(space: PolarSpace, points, m: int = 1) -> dict:
    """Checks done directly on the incidence structure, not via the engine."""
    pts = sorted(set(points))
    mask = bits(pts)
    meets = {}
    for g in space.generators:
        k = (g & mask).bit_count()
        meets[k] = meets.get(k, 0) + 1
    w = WeightVector.indicator(space, mask)
    cls = classify(w)
    out = {
        "size": len(pts),
        "expected_size": m * space.ovoid_number,
        "generator_meets": {str(k): v for k, v in sorted(meets.items())},
        "classification": str(cls),
    }
    # the all-ones vector spans <j>, so the full point set classifies as trivial
    full = len(pts) == space.n
    cls_ok = (cls.is_ovoid and cls.value == m) or (full and cls.kind == "trivial")
    ok = set(meets) == {m} and len(pts) == m * space.ovoid_number and cls_ok
    if m == 1:
        coclique = not any(space.adj[x] & mask for x in pts)
        out["coclique"] = coclique
        ok = ok and coclique
    out["ok"] = ok
    return out


# -- drivers -------------------------------------------------------------------


def _run(inst: CoverInstance, forced, avail, max_nodes, timeout) -> SearchResult:
    t0 = time.monotonic()
    eng = _Engine(inst, max_nodes, None if timeout is None else t0 + timeout)
    try:
        sol = eng.start(forced, avail)
    except _Budget:
        return SearchResult("timeout", eng.nodes, elapsed=time.monotonic() - t0)
    el = time.monotonic() - t0
    if sol is None:
        return SearchResult("unsat", eng.nodes, elapsed=el)
    return SearchResult("witness", eng.nodes, sorted(sol), elapsed=el)


def find_movoid(
    space: PolarSpace,
    m: int,
    max_nodes: int | None = None,
    timeout: float | None = None,
    parallel: int = 1,
) -> SearchResult:
    if m < 1:
        raise SearchError("m must be at least 1")
    if m > space.points_per_generator:
        raise SearchError("m exceeds the number of points on a generator")
    inst = CoverInstance.of(space, m)
    if parallel > 1:
        res = _parallel(inst, parallel, max_nodes, timeout)
    else:
        res = _run(inst, [0], None, max_nodes, timeout)
    if res.status == "witness":
        res.verification = verify_movoid(space, res.witness, m)
        if not res.verification["ok"]:
            raise SearchError("engine returned an invalid witness")
    return res


def find_ovoid(space: PolarSpace, max_nodes: int | None = None, timeout: float | None = None, parallel: int = 1) -> SearchResult:
    return find_movoid(space, 1, max_nodes, timeout, parallel)


# -- branch splitting (parallel runs and checkpointed jobs) ------------------------


def first_branches(inst: CoverInstance) -> list[tuple[list[int], int]]:
    """Subproblems after forcing point 0: one per candidate for the most
    constrained open column, each excluding the earlier candidates."""
    if inst.m != 1:
        raise SearchError("branch splitting is implemented for m = 1")
    conf = inst.conflicts()
    n = inst.space.n
    avail = ((1 << n) - 1) & ~conf[0]
    open_cols = ((1 << len(inst.columns)) - 1) & ~inst.point_cols[0]
    if not open_cols:
        return [([0], 0)]
    j = min(members(open_cols), key=lambda c: ((inst.columns[c] & avail).bit_count(), c))
    out = []
    excluded = 0
    for x in members(inst.columns[j] & avail):
        out.append(([0, x], ((1 << n) - 1) & ~excluded))
        excluded |= 1 << x
    return out


def _branch_job(args):
    family, d, q, forced, avail, max_nodes, timeout = args
    inst = CoverInstance.of(cached(family, d, q), 1)
    r = _run(inst, forced, avail, max_nodes, timeout)
    return r.status, r.nodes, r.witness


def _parallel(inst: CoverInstance, workers: int, max_nodes, timeout) -> SearchResult:
    S = inst.space
    t0 = time.monotonic()
    jobs = [(S.family, S.d, S.info.q, f, a, max_nodes, timeout) for f, a in first_branches(inst)]
    total, timed_out = 0, False
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for status, nodes, wit in ex.map(_branch_job, jobs):
            total += nodes
            if status == "witness":
                return SearchResult("witness", total, wit, elapsed=time.monotonic() - t0)
            timed_out |= status == "timeout"
    return SearchResult("timeout" if timed_out else "unsat", total, elapsed=time.monotonic() - t0)


def checkpointed_search(family: str, d: int, q: int, path: str, max_nodes_per_branch: int | None = None) -> dict:
    """Long exhaustive job split into first-level branches; progress is stored
    after each branch in a versioned JSON file and resumed on restart."""
    space = cached(family, d, q)
    inst = CoverInstance.of(space, 1)
    branches = first_branches(inst)
    state = {
        "version": CHECKPOINT_VERSION,
        "space": space.name,
        "family": family,
        "d": d,
        "q": q,
        "assumption": SYMMETRY_NOTE,
        "branches": len(branches),
        "done": {},
        "witness": None,
    }
    if os.path.exists(path):
        with open(path) as fh:
            old = json.load(fh)
        if old.get("version") != CHECKPOINT_VERSION or old.get("space") != space.name:
            raise SearchError("checkpoint belongs to a different job")
        state = old
    for i, (forced, avail) in enumerate(branches):
        if str(i) in state["done"] or state["witness"]:
            continue
        r = _run(inst, forced, avail, max_nodes_per_branch, None)
        state["done"][str(i)] = {"status": r.status, "nodes": r.nodes}
        if r.status == "witness":
            state["witness"] = r.witness
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(state, fh, indent=1)
        os.replace(tmp, path)
    statuses = {v["status"] for v in state["done"].values()}
    if state["witness"]:
        state["result"] = "witness"
    elif len(state["done"]) == state["branches"] and statuses <= {"unsat"}:
        state["result"] = "unsat"
    else:
        state["result"] = "incomplete"
    state["nodes"] = sum(v["nodes"] for v in state["done"].values())
    return state


def witness_lines(space: PolarSpace, witness) -> list[str]:
    return [space.label(x) for x in witness]


def ovoid_weight(space: PolarSpace, witness) -> WeightVector:
    return WeightVector(space, [Fraction(int(x in set(witness))) for x in range(space.n)])
