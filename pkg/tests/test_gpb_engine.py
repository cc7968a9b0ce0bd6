import io
import itertools
import json

import pytest

from cvpk import gpb_engine, subspaces
from cvpk.gpb_engine import (GPB_Q4, Gpb, combination_set, combine, gpb, gpb_base, psi_of, slot_of,
                             transform_tables, write_gpb_json)
from cvpk.weight_enum import WeightEnum, sum_enums

from conftest import oracle_gpb, recursive_gpb


def literal_recursion(m: int) -> Gpb:
    """Level-by-level recursion through the 256-product combine."""
    tables = transform_tables()
    rows = list(GPB_Q4)
    size = 4
    while size < 1 << m:
        size *= 2
        rows = [combine(rows[psi_of(phi, size)], tables[slot_of(phi, size)]) for phi in range(size - 2)]
    return Gpb(size, tuple(tuple(r) for r in rows))


def test_base_entries():
    g = gpb_base()
    assert g.box(0, 0) == WeightEnum([0, 0, 0, 4, 1])
    assert g.box(1, 15) == WeightEnum([1, 4])
    assert g.box(0, 1).is_zero() and g.box(1, 2).is_zero()


def test_base_matches_oracle():
    assert gpb_base() == oracle_gpb("cvpk", 4)


def test_tables_examples():
    t = transform_tables()
    assert t[1][2][11] == 1
    assert t[0][15][15] == 15
    for k in range(4):
        assert t[k][0][0] == 0
        assert t[k][15][15] == 15


def test_example_listing():
    expected = {"00000", "01110", "11110", "10000", "00001", "01111", "11111", "10001"}
    assert set(combination_set(2, 11, 1)) == expected


def test_tables_are_monotone():
    t = transform_tables()
    le = [[subspaces.ALL[a] <= subspaces.ALL[b] for b in range(16)] for a in range(16)]
    for k in range(4):
        for i, i2, j, j2 in itertools.product(range(16), repeat=4):
            if le[i][i2] and le[j][j2]:
                assert le[t[k][i][j]][t[k][i2][j2]]


def test_combine_identity_row():
    row = [WeightEnum.one()] + [WeightEnum.zero()] * 15
    for k in range(4):
        out = combine(row, transform_tables()[k])
        assert out[0] == WeightEnum.one()
        assert all(p.is_zero() for p in out[1:])


@pytest.mark.parametrize("k", range(4))
def test_combine_conserves_total(k):
    row = GPB_Q4[1]
    total = sum_enums(row)
    assert sum_enums(combine(row, transform_tables()[k])) == total * total


def test_combine_phase0_matches_oracle():
    out = combine(GPB_Q4[0], transform_tables()[0])
    assert tuple(out) == oracle_gpb("cvpk", 8).phases[0]


def test_gpb_small_levels():
    assert gpb(2) == gpb_base()
    assert gpb(2).source == "table"
    assert recursive_gpb(3) == oracle_gpb("cvpk", 8)
    assert recursive_gpb(4) == oracle_gpb("cvpk", 16)
    with pytest.raises(ValueError):
        gpb(1)


@pytest.mark.parametrize("m", [4, 5])
def test_packed_engine_matches_literal_combine(m):
    assert recursive_gpb(m) == literal_recursion(m)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_box_conservation(m):
    n = 1 << m
    for row in recursive_gpb(m).phases:
        assert sum_enums(row) == WeightEnum.binomial(n)


def test_psi_mapping():
    assert [psi_of(phi, 16) for phi in range(14)] == [0, 0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 5]
    assert [psi_of(phi, 8) for phi in range(6)] == [0, 0, 0, 1, 1, 1]


@pytest.mark.parametrize("n", [8, 16, 32, 1024])
def test_phase_coverage(n):
    by_slot = {k: [phi for phi in range(n - 2) if slot_of(phi, n) == k] for k in range(4)}
    assert by_slot[0] == [0]
    assert by_slot[1] == list(range(1, n - 4, 2))
    assert by_slot[2] == list(range(2, n - 3, 2))
    assert by_slot[3] == [n - 3]
    assert (n - 3) % 2 == 1


def test_gpb_json_roundtrip():
    g = recursive_gpb(4)
    again = Gpb.from_json(g.to_json())
    assert again == g
    data = json.loads(g.to_json())
    assert set(data) == {"n", "source", "phases"}
    assert len(data["phases"]) == 14 and len(data["phases"][0]) == 16


def test_streamed_json_matches_in_memory():
    buf = io.StringIO()
    write_gpb_json(5, buf)
    assert Gpb.from_json(buf.getvalue()) == recursive_gpb(5)


def test_worker_count_does_not_change_output():
    one = gpb(7, workers=1)
    two = gpb(7, workers=2)
    assert one.to_json() == two.to_json()


def test_default_workers_env(monkeypatch):
    monkeypatch.setenv("CVPK_THREADS", "3")
    assert gpb_engine.default_workers() == 3
    monkeypatch.delenv("CVPK_THREADS")
    assert gpb_engine.default_workers() >= 1
