import json

import pytest

from polarcert.polar import cached
from polarcert.search import (
    CoverInstance,
    SearchError,
    checkpointed_search,
    find_movoid,
    find_ovoid,
    first_branches,
    verify_movoid,
)

WITNESS = [(("W", 4, 2), 5), (("Q", 5, 2), 5), (("Qplus", 6, 2), 5), (("H", 4, 2), 9), (("Qplus", 8, 2), 9)]


@pytest.mark.parametrize("spec,size", WITNESS)
def test_witnesses(spec, size):
    S = cached(*spec)
    r = find_ovoid(S)
    assert r.status == "witness" and len(r.witness) == size
    assert 0 in r.witness
    assert r.verification["ok"] and r.verification["classification"] == "weighted-ovoid(1)"


def test_elliptic_unsat():
    r = find_ovoid(cached("Qminus", 6, 2))
    assert r.status == "unsat" and r.nodes > 0


def test_deterministic():
    S = cached("Qplus", 8, 2)
    a, b = find_ovoid(S), find_ovoid(S)
    assert (a.witness, a.nodes) == (b.witness, b.nodes)


def test_parallel_agrees():
    S = cached("Qminus", 6, 2)
    r = find_ovoid(S, parallel=2)
    assert r.status == "unsat"
    S = cached("H", 4, 2)
    r = find_ovoid(S, parallel=2)
    assert r.status == "witness" and r.verification["ok"]


def test_node_budget_times_out():
    r = find_ovoid(cached("H", 6, 2), max_nodes=50)
    assert r.status == "timeout"
    r = find_ovoid(cached("H", 6, 2), timeout=0.0)
    assert r.status == "timeout"


@pytest.mark.parametrize("spec,m", [(("H", 4, 2), 2), (("W", 4, 2), 2), (("W", 4, 2), 3)])
def test_m_ovoids(spec, m):
    S = cached(*spec)
    r = find_movoid(S, m)
    assert r.status == "witness"
    assert len(r.witness) == m * S.ovoid_number
    assert r.verification["ok"]


def test_m_out_of_range():
    with pytest.raises(SearchError):
        find_movoid(cached("W", 4, 2), 0)
    with pytest.raises(SearchError):
        find_movoid(cached("W", 4, 2), 4)


def test_verifier_rejects_non_ovoids():
    S = cached("W", 4, 2)
    assert not verify_movoid(S, [0, 1, 2, 3, 4])["ok"]
    assert not verify_movoid(S, [0])["ok"]


def test_branches_partition_search():
    inst = CoverInstance.of(cached("Qminus", 6, 2))
    br = first_branches(inst)
    assert br and all(f[0] == 0 for f, _ in br)


def test_checkpoint_resume(tmp_path):
    path = str(tmp_path / "job.json")
    st = checkpointed_search("Qminus", 6, 2, path)
    assert st["result"] == "unsat"
    saved = json.loads(open(path).read())
    assert len(saved["done"]) == saved["branches"]
    # drop one branch and resume: only that branch is recomputed
    k = next(iter(saved["done"]))
    del saved["done"][k]
    open(path, "w").write(json.dumps(saved))
    st2 = checkpointed_search("Qminus", 6, 2, path)
    assert st2["result"] == "unsat" and st2["nodes"] == st["nodes"]


def test_checkpoint_for_other_space_rejected(tmp_path):
    path = str(tmp_path / "job.json")
    checkpointed_search("Qminus", 6, 2, path)
    with pytest.raises(SearchError):
        checkpointed_search("W", 4, 2, path)


def test_checkpoint_budget_incomplete(tmp_path):
    st = checkpointed_search("H", 6, 2, str(tmp_path / "h.json"), max_nodes_per_branch=5)
    assert st["result"] == "incomplete"


def test_h54_has_no_ovoid():
    r = find_ovoid(cached("H", 6, 2))
    assert r.status == "unsat"
