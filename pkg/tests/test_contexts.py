import numpy as np
import pytest

from toposq import (
    InvalidInputError,
    NonCommutingError,
    build_poset,
    context_from_atoms,
    contexts_from_rays,
    generate_context,
    intersect,
    is_subalgebra,
    poset_to_dot,
    trivial_context,
)
from toposq.hermitian import max_abs

from helpers import atom_sums, random_context


def e_atoms(dim, *groups):
    eye = np.eye(dim, dtype=complex)
    return [sum(np.outer(eye[i], eye[i]) for i in g) for g in groups]


def test_generate_from_single_projection():
    ctx = generate_context([np.diag([1.0, 0.0]).astype(complex)])
    assert ctx.n_atoms == 2
    sums = {s for s, _ in atom_sums(ctx)}
    assert frozenset([0]) in sums and frozenset([1]) in sums
    mats = [np.round(a.real, 9).tolist() for a in ctx.atoms]
    assert [[0.0, 0.0], [0.0, 1.0]] in [[r for r in m] for m in mats]


def test_generate_empty_pool_is_trivial():
    ctx = generate_context([], dim=3)
    assert ctx.is_trivial
    assert np.allclose(ctx.atoms[0], np.eye(3))


def test_generate_from_sigma_x(sx):
    ctx = generate_context([sx])
    expected = {(0.5, 0.5), (0.5, -0.5)}
    got = {(round(a[0, 0].real, 9), round(a[0, 1].real, 9)) for a in ctx.atoms}
    assert got == expected


def test_generate_rejects_non_commuting(sz, sx):
    with pytest.raises(NonCommutingError) as err:
        generate_context([sz, sx])
    assert "0" in str(err.value) and "1" in str(err.value)


def test_generate_tolerates_large_norms(rng):
    # commutator noise grows with the product of the norms; genuinely
    # commuting large operators must still pass
    u = np.linalg.qr(rng.randn(4, 4) + 1j * rng.randn(4, 4))[0]
    a = u @ np.diag([1e7, 3e6, -2e6, 5e5]).astype(complex) @ u.conj().T
    b = u @ np.diag([2e6, 2e6, 9e5, -1e6]).astype(complex) @ u.conj().T
    assert generate_context([a, b]).n_atoms == 4


def test_generate_joint_refinement():
    a = np.diag([1.0, 1.0, 0.0]).astype(complex)
    b = np.diag([1.0, 0.0, 0.0]).astype(complex)
    ctx = generate_context([a, b])
    assert ctx.n_atoms == 3


def test_intersect_idempotent(vz):
    assert intersect(vz, vz) == vz


def test_intersect_unrelated_is_trivial(vz, vx):
    assert intersect(vz, vx).is_trivial


def test_intersect_nested_gives_smaller():
    fine = context_from_atoms(e_atoms(3, [0], [1], [2]))
    coarse = context_from_atoms(e_atoms(3, [0], [1, 2]))
    assert intersect(fine, coarse) == coarse


def test_intersect_partial_overlap():
    left = context_from_atoms(e_atoms(4, [0], [1], [2, 3]))
    right = context_from_atoms(e_atoms(4, [0, 1], [2], [3]))
    meet = intersect(left, right)
    assert meet.n_atoms == 2
    sums = {s for s, _ in atom_sums(meet)}
    assert len(sums) == 4


def test_inclusion_matches_brute_force(rng):
    # every atom-sum of the smaller algebra must be an atom-sum of the larger
    for _ in range(15):
        dim = rng.randint(2, 6)
        big = random_context(rng, dim)
        small = random_context(rng, dim)
        claimed = is_subalgebra(small, big)
        big_sums = [m for _, m in atom_sums(big)]
        truth = all(
            any(max_abs(ms - mb) <= 1e-9 for mb in big_sums)
            for _, ms in atom_sums(small)
        )
        assert claimed == truth


def test_poset_single_context(vz):
    poset = build_poset([vz])
    assert len(poset) == 1
    assert poset.leq(vz.key, vz.key)
    assert poset.pairs() == []


def test_poset_zx_incomparable(zx_poset):
    assert len(zx_poset) == 2
    assert zx_poset.pairs() == []


def test_poset_chain_dim3():
    fine = context_from_atoms(e_atoms(3, [0], [1], [2]))
    coarse = context_from_atoms(e_atoms(3, [0], [1, 2]))
    poset = build_poset([fine, coarse])
    assert poset.pairs() == [(coarse.key, fine.key)]
    assert poset.leq(coarse.key, fine.key)
    assert not poset.leq(fine.key, coarse.key)


def test_poset_laws(rng):
    ctxs = [random_context(rng, 4) for _ in range(6)]
    poset = build_poset(ctxs, close_under_intersection=True)
    keys = poset.keys()
    for k in keys:
        assert poset.leq(k, k)
    for k1 in keys:
        for k2 in keys:
            if k1 != k2 and poset.leq(k1, k2):
                assert not poset.leq(k2, k1)
            for k3 in keys:
                if poset.leq(k1, k2) and poset.leq(k2, k3):
                    assert poset.leq(k1, k3)


def test_closure_adds_shared_subcontext():
    left = context_from_atoms(e_atoms(4, [0], [1], [2, 3]))
    right = context_from_atoms(e_atoms(4, [0, 1], [2], [3]))
    poset = build_poset([left, right], close_under_intersection=True)
    assert len(poset) == 3
    meet = intersect(left, right)
    assert meet.key in poset
    # intersection is a lower bound, and the greatest one present
    assert poset.leq(meet.key, left.key) and poset.leq(meet.key, right.key)
    for k in poset.keys():
        if poset.leq(k, left.key) and poset.leq(k, right.key):
            assert poset.leq(k, meet.key)


def test_intersection_is_greatest_lower_bound(rng):
    for _ in range(8):
        dim = rng.randint(3, 6)
        ctxs = [random_context(rng, dim, blocks=rng.randint(2, dim + 1))
                for _ in range(3)]
        poset = build_poset(ctxs, close_under_intersection=True)
        keys = poset.keys()
        for k1 in keys:
            for k2 in keys:
                meet = intersect(poset[k1], poset[k2])
                assert is_subalgebra(meet, poset[k1])
                assert is_subalgebra(meet, poset[k2])
                for k in keys:
                    if poset.leq(k, k1) and poset.leq(k, k2):
                        assert is_subalgebra(poset[k], meet)


def test_trivial_context_excluded_by_default(vz, vx):
    poset = build_poset([vz, vx, trivial_context(2)])
    assert len(poset) == 2
    poset = build_poset([vz, vx], include_trivial=True)
    assert len(poset) == 3
    triv = trivial_context(2)
    assert all(poset.leq(triv.key, k) for k in poset.keys())


def test_mixed_dimension_rejected(vz):
    with pytest.raises(InvalidInputError):
        build_poset([vz, trivial_context(3)], include_trivial=True)


def test_only_trivial_contexts_rejected_unless_kept():
    with pytest.raises(InvalidInputError):
        build_poset([trivial_context(2)])
    poset = build_poset([trivial_context(2)], include_trivial=True)
    assert len(poset) == 1


def test_restriction_table():
    fine = context_from_atoms(e_atoms(3, [0], [1], [2]))
    coarse = context_from_atoms(e_atoms(3, [0], [1, 2]))
    poset = build_poset([fine, coarse])
    table = poset.restriction(coarse.key, fine.key)
    # each fine atom maps to the unique coarse atom above it
    for i, atom in enumerate(fine.atoms):
        above = coarse.atoms[table[i]]
        assert max_abs(above @ atom - atom) <= 1e-12


def test_canonical_key_unifies_float_paths(rng):
    u = np.linalg.qr(rng.randn(3, 3) + 1j * rng.randn(3, 3))[0]
    atoms = [np.outer(u[:, i], u[:, i].conj()) for i in range(3)]
    c1 = context_from_atoms(atoms)
    c2 = context_from_atoms(list(reversed([a.copy() for a in atoms])))
    assert c1 == c2 and c1.key == c2.key


def test_rays_ingestion_and_validation():
    data = {"dim": 2, "contexts": [[[1, 0], [0, 1]], [[1, 1], [1, -1]]]}
    ctxs = contexts_from_rays(data)
    assert len(ctxs) == 2 and all(c.n_atoms == 2 for c in ctxs)
    with pytest.raises(InvalidInputError):
        contexts_from_rays({"dim": 2, "contexts": [[[1, 0], [1, 1]]]})
    with pytest.raises(InvalidInputError):
        contexts_from_rays({"dim": 2, "contexts": [[[1, 0]]]})
    # complex entries as [re, im] pairs
    circular = {"dim": 2, "contexts": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
                                       [[[1, 0], [0, 1]], [[1, 0], [0, -1]]]]}
    ctxs = contexts_from_rays(circular)
    assert len(ctxs) == 2


def test_dot_export(zx_poset, vz, vx):
    fine = context_from_atoms(e_atoms(3, [0], [1], [2]))
    coarse = context_from_atoms(e_atoms(3, [0], [1, 2]))
    poset = build_poset([fine, coarse])
    dot = poset_to_dot(poset)
    assert dot.startswith("digraph")
    assert '"%s" -> "%s";' % (coarse.key, fine.key) in dot
    painted = poset_to_dot(zx_poset, selected={vz.key: {1}, vx.key: set()})
    assert "{1}" in painted and "fillcolor" in painted
