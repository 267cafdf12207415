import itertools
import json

import numpy as np
import pytest

from toposq import build_poset, context_from_atoms, contexts_from_rays, find_global_sections
from toposq.ks import poset_is_intersection_closed, section_is_compatible

from helpers import random_context


def e_atoms(dim, *groups):
    eye = np.eye(dim, dtype=complex)
    return [sum(np.outer(eye[i], eye[i]) for i in g) for g in groups]


def brute_force_sections(poset):
    keys = poset.keys()
    out = []
    for combo in itertools.product(*(range(poset[k].n_atoms) for k in keys)):
        section = dict(zip(keys, combo))
        if section_is_compatible(poset, section):
            out.append(section)
    return sorted(out, key=lambda sec: tuple(sec[k] for k in keys))


def test_single_context_counts_atoms(rng):
    ctx = random_context(rng, 4, blocks=3)
    result = find_global_sections(build_poset([ctx]))
    assert len(result.sections) == 3
    assert result.exhausted


def test_zx_control_has_four_sections(zx_poset):
    result = find_global_sections(zx_poset)
    assert len(result.sections) == 4
    assert result.exhausted and result.closed
    assert result.obstruction is None


def test_sections_satisfy_compatibility_independently(rng):
    for _ in range(10):
        ctxs = [random_context(rng, 4, blocks=rng.randint(2, 5))
                for _ in range(3)]
        poset = build_poset(ctxs)
        result = find_global_sections(poset, limit=200)
        for section in result.sections:
            assert section_is_compatible(poset, section)


def test_matches_brute_force(rng):
    for trial in range(12):
        dim = rng.randint(2, 5)
        ctxs = [random_context(rng, dim, blocks=rng.randint(2, dim + 1))
                for _ in range(rng.randint(1, 4))]
        poset = build_poset(ctxs)
        assert len(poset) <= 6 and all(poset[k].n_atoms <= 4
                                       for k in poset.keys())
        result = find_global_sections(poset, limit=10 ** 6)
        assert result.exhausted
        assert result.sections == brute_force_sections(poset)


def test_chain_forces_section_count():
    fine = context_from_atoms(e_atoms(3, [0], [1], [2]))
    coarse = context_from_atoms(e_atoms(3, [0], [1, 2]))
    poset = build_poset([fine, coarse])
    result = find_global_sections(poset)
    # one section per fine atom; the coarse choice is forced
    assert len(result.sections) == 3
    for section in result.sections:
        table = poset.restriction(coarse.key, fine.key)
        assert section[coarse.key] == table[section[fine.key]]


def test_determinism(zx_poset):
    a = find_global_sections(zx_poset)
    b = find_global_sections(zx_poset)
    assert a.sections == b.sections
    assert (a.nodes, a.backtracks) == (b.nodes, b.backtracks)


def test_limit_caps_output(zx_poset):
    result = find_global_sections(zx_poset, limit=2)
    assert len(result.sections) == 2
    assert not result.exhausted


def test_unclosed_poset_flagged(vz, vx):
    left = context_from_atoms(e_atoms(4, [0], [1], [2, 3]))
    right = context_from_atoms(e_atoms(4, [0, 1], [2], [3]))
    open_poset = build_poset([left, right], close_under_intersection=False)
    assert not poset_is_intersection_closed(open_poset)
    with pytest.warns(UserWarning, match="not closed under intersection"):
        result = find_global_sections(open_poset)
    assert not result.closed
    closed_poset = build_poset([left, right])
    assert poset_is_intersection_closed(closed_poset)
    assert find_global_sections(closed_poset).closed


def test_cabello_obstruction_smoke():
    from importlib import resources

    data = json.loads(resources.files("toposq").joinpath(
        "data", "cabello18.json").read_text())
    poset = build_poset(contexts_from_rays(data))
    assert len(poset) == 27
    result = find_global_sections(poset)
    assert result.sections == []
    assert result.exhausted and result.closed
    assert result.obstruction is not None


def test_triads3_dataset_has_sections():
    from importlib import resources

    data = json.loads(resources.files("toposq").joinpath(
        "data", "triads3.json").read_text())
    poset = build_poset(contexts_from_rays(data))
    result = find_global_sections(poset, limit=64)
    assert result.exhausted and len(result.sections) == 20
