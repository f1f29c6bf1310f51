import json

import numpy as np
import pytest

from conftest import fixture_path
from defring.inputs import (InputError, check_multiplicity_free, load_algebra,
                            load_document, load_group, load_problem,
                            load_representation)


def cyclic_table(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def test_load_cyclic_group_words():
    g = load_group({"order": 3, "table": cyclic_table(3), "generators": [1]})
    assert g.words == ((), (0,), (0, 0))


def test_load_s3_table():
    doc = load_document(fixture_path("s3_natural.json"))
    g = load_group(doc["group"])
    assert g.order == 6
    # every element's word reproduces it
    for x in range(6):
        acc = 0
        for gi in g.words[x]:
            acc = g.mul(acc, g.generators[gi])
        assert acc == x


def test_nonassociative_table_names_triple():
    table = cyclic_table(3)
    table[1][2] = 1  # break closure coherence
    with pytest.raises(InputError, match="triple"):
        load_group({"order": 3, "table": table, "generators": [1]})


def test_missing_identity():
    table = [[1, 0], [0, 1]]
    with pytest.raises(InputError, match="identity"):
        load_group({"order": 2, "table": table, "generators": [1]})


def test_non_generating_set():
    table = [[(a + b) % 4 for b in range(4)] for a in range(4)]
    with pytest.raises(InputError, match="generate"):
        load_group({"order": 4, "table": table, "generators": [2]})


def test_bad_words_rejected():
    with pytest.raises(InputError, match="word"):
        load_group({"order": 3, "table": cyclic_table(3), "generators": [1],
                    "words": [[], [0], [0]]})


def test_load_representation_trivial():
    g = load_group({"order": 3, "table": cyclic_table(3), "generators": [1]})
    rep = load_representation(g, [1], [[[1]]], 3)
    assert rep.total_dim == 1 and rep.matrices.shape == (3, 1, 1)


def test_homomorphism_failure_reports_pair():
    g = load_group({"order": 2, "table": cyclic_table(2), "generators": [1]})
    with pytest.raises(InputError, match="pair"):
        load_representation(g, [1], [[[0]]], 2)


def test_non_block_diagonal_rejected():
    g = load_group({"order": 2, "table": cyclic_table(2), "generators": [1]})
    with pytest.raises(InputError, match="block"):
        load_representation(g, [1, 1], [[[0, 1], [1, 0]]], 3)


def test_nonprime_field_rejected():
    g = load_group({"order": 3, "table": cyclic_table(3), "generators": [1]})
    with pytest.raises(InputError, match="prime"):
        load_representation(g, [1], [[[1]]], 4)


def test_size_mismatch():
    g = load_group({"order": 2, "table": cyclic_table(2), "generators": [1]})
    with pytest.raises(InputError):
        load_representation(g, [2], [[[1]]], 2)


def test_load_algebra_truncated_polynomials():
    doc = load_document(fixture_path("f3_t3_algebra.json"))
    alg = load_algebra(doc["algebra"], 3)
    assert alg.dim == 3
    rep = load_representation(alg, doc["representation"]["blocks"],
                              doc["representation"]["matrices"], 3)
    assert not rep.is_group


def test_load_algebra_matrix_units():
    # M_2(F_2) via matrix units e_11, e_12, e_21, e_22
    idx = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}
    c = np.zeros((4, 4, 4), dtype=int)
    for (a, b), s in idx.items():
        for (x, y), t in idx.items():
            if b == x:
                c[s, t, idx[(a, y)]] = 1
    alg = load_algebra({"dim": 4, "constants": c.tolist(), "unit": [1, 0, 0, 1]}, 2)
    assert alg.dim == 4


def test_algebra_associativity_error_names_triple():
    # basis (1, t, u): t.t = u, t.u = 1, u.t = 0 breaks (tt)t = t(tt)
    c = np.zeros((3, 3, 3), dtype=int)
    c[0] = np.eye(3)
    c[:, 0] = np.eye(3)
    c[1, 1, 2] = 1
    c[1, 2, 0] = 1
    with pytest.raises(InputError, match="triple \\(1, 1, 1\\)"):
        load_algebra({"dim": 3, "constants": c.tolist(), "unit": [1, 0, 0]}, 2)


def test_algebra_no_unit():
    c = np.zeros((1, 1, 1), dtype=int)
    with pytest.raises(InputError, match="unit|identity"):
        load_algebra({"dim": 1, "constants": c.tolist(), "unit": [1]}, 2)


def test_multiplicity_free_duplicate_summands():
    g = load_group({"order": 3, "table": cyclic_table(3), "generators": [1]})
    rep = load_representation(g, [1, 1], [[[1, 0], [0, 1]]], 3)
    table, verdict = check_multiplicity_free(rep)
    assert table.tolist() == [[1, 1], [1, 1]] and verdict is False


def test_multiplicity_free_s3_natural():
    rep = load_problem(load_document(fixture_path("s3_natural.json")))
    table, verdict = check_multiplicity_free(rep)
    assert table.tolist() == [[1]] and verdict is True


def test_multiplicity_free_two_characters():
    rep = load_problem(load_document(fixture_path("s3_two_chars.json")))
    table, verdict = check_multiplicity_free(rep)
    assert table.tolist() == [[1, 0], [0, 1]] and verdict is True


def test_homomorphism_checked_on_all_pairs(z3):
    rep = z3.rep
    g = rep.source
    for a in range(g.order):
        for b in range(g.order):
            lhs = rep.matrices[a] @ rep.matrices[b] % rep.p
            assert (lhs == rep.matrices[g.mul(a, b)]).all()


def test_load_problem_toml(tmp_path):
    doc = """
prime = 3
[group]
order = 3
table = [[0,1,2],[1,2,0],[2,0,1]]
generators = [1]
[representation]
blocks = [1]
matrices = [[[1]]]
"""
    path = tmp_path / "z3.toml"
    path.write_text(doc)
    rep = load_problem(load_document(str(path)))
    assert rep.p == 3 and rep.is_group


def test_load_problem_requires_source(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"prime": 3, "representation": {"blocks": [1], "matrices": [[[1]]]}}))
    with pytest.raises(InputError, match="group or algebra"):
        load_problem(load_document(str(path)))
