"""Tests for the Cartan component map, graded multiplication surjectivity,
degree-1 generation and Hilbert functions.

Frozen tables come from tests/dense_oracle.py (dense Kronecker realization
of the component map, literal monomial filtrations, rank-formula meets),
computed before this module's engine was written.
"""

import json

import numpy as np
import pytest

from pbwdeg import __version__
from pbwdeg.chevrep import chevalley_constants
from pbwdeg.degenring import (CartanComponentMap, GenReport, HilbertReport,
                              MultReport, cartan_component_map,
                              check_degree_one_generation,
                              check_mult_surjective, hilbert_function)
from pbwdeg.pbwgrade import SizeCeilingExceeded, pbw_filtration
from pbwdeg.rootsys import build_root_system, star_weight
from pbwdeg.weylmod import build_weyl_module_p, weyl_dim

from dense_oracle import dense_mult_verdict

RS = {n: build_root_system(n)
      for n in ["A1", "A2", "A3", "B2", "C2", "G2"]}


def sc(name):
    return chevalley_constants(RS[name])


# oracle-frozen: (type, lam, mu, p, per-degree table); all of these are
# injective and strict, so both columns agree row by row
MULT_FROZEN = [
    ("A1", (1,), (1,), 2, [(0, 1, 1), (1, 2, 2), (2, 3, 3)]),
    ("A2", (1, 0), (0, 1), 2, [(0, 1, 1), (1, 4, 4), (2, 8, 8)]),
    ("A2", (1, 0), (0, 1), 3, [(0, 1, 1), (1, 4, 4), (2, 8, 8)]),
    ("A2", (1, 0), (1, 0), 2, [(0, 1, 1), (1, 3, 3), (2, 6, 6)]),
    ("A2", (1, 0), (1, 0), 3, [(0, 1, 1), (1, 3, 3), (2, 6, 6)]),
    ("A2", (0, 1), (0, 1), 2, [(0, 1, 1), (1, 3, 3), (2, 6, 6)]),
    ("A2", (0, 1), (0, 1), 3, [(0, 1, 1), (1, 3, 3), (2, 6, 6)]),
    ("C2", (1, 0), (1, 0), 2, [(0, 1, 1), (1, 4, 4), (2, 10, 10)]),
    ("C2", (1, 0), (0, 1), 2, [(0, 1, 1), (1, 5, 5), (2, 13, 13),
                               (3, 16, 16)]),
    ("C2", (0, 1), (0, 1), 2, [(0, 1, 1), (1, 4, 4), (2, 10, 10),
                               (3, 13, 13), (4, 14, 14)]),
    ("G2", (1, 0), (1, 0), 2, [(0, 1, 1), (1, 6, 6), (2, 21, 21),
                               (3, 26, 26), (4, 27, 27)]),
    ("B2", (1, 0), (0, 1), 2, [(0, 1, 1), (1, 5, 5), (2, 13, 13),
                               (3, 16, 16)]),
]


@pytest.mark.parametrize("name,lam,mu,p,table", MULT_FROZEN)
def test_mult_frozen_tables(name, lam, mu, p, table):
    rep = check_mult_surjective(RS[name], sc(name), lam, mu, p)
    assert rep.injective_ungraded
    assert rep.strict
    assert rep.gr_injective
    assert rep.verdict_mult_surjective
    assert rep.table == table


@pytest.mark.parametrize("name,lam,mu,p", [
    ("A2", (1, 1), (1, 0), 2),
    ("B2", (1, 0), (1, 0), 2),
    ("A3", (1, 0, 0), (0, 0, 1), 2),
    ("A1", (2,), (3,), 2),
    ("C2", (1, 1), (1, 0), 2),
])
def test_mult_matches_dense_oracle(name, lam, mu, p):
    rep = check_mult_surjective(RS[name], sc(name), lam, mu, p)
    inj, strict, table = dense_mult_verdict(RS[name], lam, mu, p)
    assert rep.injective_ungraded == inj
    assert rep.strict == strict
    assert rep.table == table


def test_mult_symmetry():
    for name, lam, mu, p in [("A2", (1, 0), (0, 1), 2),
                             ("C2", (1, 0), (0, 1), 2)]:
        a = check_mult_surjective(RS[name], sc(name), lam, mu, p)
        b = check_mult_surjective(RS[name], sc(name), mu, lam, p)
        assert a.table == b.table
        assert a.gr_injective == b.gr_injective


def test_mult_table_shape_invariants():
    rep = check_mult_surjective(RS["C2"], sc("C2"), (0, 1), (0, 1), 2)
    ns = [r[0] for r in rep.table]
    assert ns == list(range(len(ns)))
    phis = [r[1] for r in rep.table]
    meets = [r[2] for r in rep.table]
    assert all(a <= b for a, b in zip(phis, phis[1:]))
    assert all(a <= b for a, b in zip(meets, meets[1:]))
    assert all(a <= b for a, b in zip(phis, meets))
    assert rep.table[0][1] == rep.table[0][2] == 1
    assert rep.table[-1][1] == rep.table[-1][2]


def test_mult_zero_weight_trivial():
    rs = RS["A2"]
    rep = check_mult_surjective(rs, sc("A2"), (0, 0), (1, 0), 2)
    assert rep.gr_injective
    assert rep.table[-1][1] == weyl_dim(rs, (1, 0))


def test_mult_report_serialization():
    rs = RS["A2"]
    rep = check_mult_surjective(rs, sc("A2"), (1, 0), (0, 1), 2)
    payload = json.loads(rep.to_json())
    assert payload["cartan"] == "A2"
    assert payload["lambda"] == [1, 0]
    assert payload["mu"] == [0, 1]
    assert payload["verdict_mult_surjective"] is True
    assert payload["tool_version"] == __version__
    # the ring-side translation is spelled out with starred weights
    lam_star = list(star_weight(rs, (1, 0)))
    assert str(lam_star) in payload["note"] or "0, 1" in payload["note"]
    lines = rep.to_csv().strip().splitlines()
    assert lines[0] == "n,phi_dim,meet_dim"
    assert len(lines) == 1 + len(rep.table)
    a = json.loads(check_mult_surjective(rs, sc("A2"), (1, 0), (0, 1), 2)
                   .to_json())
    b = dict(payload)
    a["elapsed_ms"] = b["elapsed_ms"] = 0
    assert a == b


def test_mult_size_ceiling():
    with pytest.raises(SizeCeilingExceeded):
        check_mult_surjective(RS["A2"], sc("A2"), (1, 1), (1, 1), 2,
                              size_ceiling=20)


# -- component map ----------------------------------------------------------


def test_component_map_a1_hand_values():
    # phi(v) = v x v, phi(F v2) = F v x v + v x F v,
    # phi(F^(2) v2) = F v x F v, in pair coordinates (i, j) -> 2 i + j
    cm = cartan_component_map(RS["A1"], sc("A1"), (1,), (1,), 2)
    phi = cm.phi_matrix().to_dense()
    assert phi.shape == (4, 3)
    assert list(phi[:, 0]) == [1, 0, 0, 0]
    assert list(phi[:, 1]) == [0, 1, 1, 0]
    assert list(phi[:, 2]) == [0, 0, 0, 1]


def test_component_map_shape_and_equivariance():
    rs = RS["A2"]
    cm = cartan_component_map(rs, sc("A2"), (1, 0), (0, 1), 2)
    phi = cm.phi_matrix().to_dense()
    assert phi.shape == (9, 8)
    source = build_weyl_module_p(rs, 2, (1, 1))
    for beta in rs.positive_roots:
        a = source.op("F", beta, 1).toarray()
        b = cm.space.op("F", beta, 1).toarray()
        assert np.array_equal((phi @ a) % 2, (b @ phi) % 2)
    # seed goes to the tensor of highest weight vectors
    src_hw = np.zeros(8, dtype=np.int64)
    src_hw[source.hw_index] = 1
    img = (phi @ src_hw) % 2
    assert np.array_equal(img, cm.seed % 2)


def test_component_map_exposes_filtrations():
    cm = cartan_component_map(RS["A1"], sc("A1"), (1,), (1,), 2)
    assert len(cm.factor_graded) == 2
    assert cm.factor_graded[0].graded_dims == (1, 1)
    assert cm.image_dims() == (1, 2, 3)
    assert cm.rank_phi == 3
    t1 = cm.t_rows_by_weight(1)
    assert sum(r.shape[0] for r in t1.values()) >= 3


# -- generation and Hilbert -------------------------------------------------


def test_generation_a2_adjoint():
    rep = check_degree_one_generation(RS["A2"], sc("A2"), (1, 1), 2, 3)
    assert isinstance(rep, GenReport)
    assert rep.generated
    assert [n for n, _ in rep.per_n] == [2, 3]
    assert all(v for _, v in rep.per_n)


def test_generation_a1():
    rep = check_degree_one_generation(RS["A1"], sc("A1"), (1,), 2, 3)
    assert rep.generated


def test_generation_zero_weight_vacuous():
    rep = check_degree_one_generation(RS["A2"], sc("A2"), (0, 0), 2, 2)
    assert rep.generated


def test_generation_requires_nmax():
    with pytest.raises(ValueError):
        check_degree_one_generation(RS["A1"], sc("A1"), (1,), 2, 1)


def test_generation_serialization():
    rep = check_degree_one_generation(RS["A1"], sc("A1"), (1,), 2, 2)
    payload = json.loads(rep.to_json())
    assert payload["generated"] is True
    assert payload["lambda"] == [1]
    lines = rep.to_csv().strip().splitlines()
    assert lines[0] == "n,gr_injective"


def test_hilbert_a2_adjoint_matches_weyl_dims():
    rs = RS["A2"]
    rep = hilbert_function(rs, sc("A2"), (1, 1), 2, 3)
    assert isinstance(rep, HilbertReport)
    assert rep.values == ((0, 1, 1), (1, 8, 8), (2, 27, 27), (3, 64, 64))
    assert rep.h(0) == 1
    assert rep.h(1) == weyl_dim(rs, (1, 1))
    # the degenerate profile of the 1-fold map is the module's own profile
    mod = build_weyl_module_p(rs, 2, (1, 1))
    assert tuple(rep.profiles[1]) == pbw_filtration(mod).graded_dims


def test_hilbert_a1_projective_line():
    rep = hilbert_function(RS["A1"], sc("A1"), (1,), 2, 3)
    assert [h for _, h, _ in rep.values] == [1, 2, 3, 4]
    assert [w for _, _, w in rep.values] == [1, 2, 3, 4]


def test_hilbert_bound_invariant():
    rep = hilbert_function(RS["B2"], sc("B2"), (1, 0), 2, 2)
    for n, h, w in rep.values:
        assert h <= w
        assert w == weyl_dim(RS["B2"], tuple(n * x for x in (1, 0)))


def test_hilbert_serialization():
    rep = hilbert_function(RS["A1"], sc("A1"), (1,), 2, 2)
    payload = json.loads(rep.to_json())
    assert payload["values"] == [[0, 1, 1], [1, 2, 2], [2, 3, 3]]
    lines = rep.to_csv().strip().splitlines()
    assert lines[0] == "n,h,weyl_dim"
    assert lines[1] == "0,1,1"
