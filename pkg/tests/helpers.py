"""Shared generators and independent oracles for the test suite.

The oracles here deliberately avoid the library's own code paths: brute
force enumerates the full projection lattice, numpy.linalg supplies a
second eigensolver, and abstract posets are realized from scratch, so a bug
in the package cannot hide inside its own checker.
"""

import itertools

import numpy as np

from toposq import build_poset, context_from_atoms
from toposq.hermitian import max_abs, zeros
from toposq.spectral import projection_from_subset


def random_hermitian(rng, dim, scale=1.0):
    m = rng.randn(dim, dim) + 1j * rng.randn(dim, dim)
    return scale * (m + m.conj().T) / 2.0


def random_unitary(rng, dim):
    m = rng.randn(dim, dim) + 1j * rng.randn(dim, dim)
    q, r = np.linalg.qr(m)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_projection(rng, dim, rank=None):
    if rank is None:
        rank = rng.randint(0, dim + 1)
    if rank == 0:
        return zeros(dim)
    cols = random_unitary(rng, dim)[:, :rank]
    return cols @ cols.conj().T


def random_partition_sizes(rng, dim, blocks=None):
    if blocks is None:
        blocks = rng.randint(1, dim + 1)
    cuts = sorted(rng.choice(np.arange(1, dim), size=blocks - 1,
                             replace=False)) if blocks > 1 else []
    bounds = [0] + list(cuts) + [dim]
    return [hi - lo for lo, hi in zip(bounds, bounds[1:])]


def random_context(rng, dim, blocks=None):
    u = random_unitary(rng, dim)
    sizes = random_partition_sizes(rng, dim, blocks)
    atoms = []
    start = 0
    for size in sizes:
        cols = u[:, start:start + size]
        atoms.append(cols @ cols.conj().T)
        start += size
    return context_from_atoms(atoms)


def random_chain_contexts(rng, dim, length):
    """Nested contexts: a random fine partition, then successive merges."""
    u = random_unitary(rng, dim)
    blocks = [[i] for i in range(dim)]
    chain = []
    while True:
        atoms = []
        for block in blocks:
            cols = u[:, block]
            atoms.append(cols @ cols.conj().T)
        ctx = context_from_atoms(atoms)
        if not ctx.is_trivial:
            chain.append(ctx)
        if len(chain) >= length or len(blocks) <= 1:
            break
        i, j = sorted(rng.choice(len(blocks), size=2, replace=False))
        blocks[i] = blocks[i] + blocks[j]
        del blocks[j]
    return chain


def random_chain_poset(rng, dim, length):
    return build_poset(random_chain_contexts(rng, dim, length))


def random_subobject(rng, poset):
    """Uniform-ish random compatible sub-object.

    Contexts are filled from the most atoms downward; each part is the
    restriction image of everything already chosen above, plus random
    extras, which is exactly the compatibility constraint.
    """
    from toposq.spectral import subobject

    parts = {}
    for key in sorted(poset.keys(), key=lambda k: (-poset[k].n_atoms, k)):
        n = poset[key].n_atoms
        forced = set()
        for sup in poset.keys():
            if sup != key and poset.leq(key, sup) and sup in parts:
                table = poset.restriction(key, sup)
                forced |= {table[i] for i in parts[sup]}
        mask = rng.randint(0, 2 ** n)
        parts[key] = frozenset(forced | {i for i in range(n) if mask >> i & 1})
    return subobject(poset, parts)


def brute_daseinise(p, context, mode, eps=1e-9):
    """Lattice meet/join over all 2^k projections of the context."""
    k = context.n_atoms
    if mode == "outer":
        chosen = set(range(k))
        for mask in range(2 ** k):
            subset = frozenset(i for i in range(k) if mask >> i & 1)
            q = projection_from_subset(context, subset)
            if max_abs(q @ p - p) <= eps:  # q dominates p
                chosen &= subset
        return projection_from_subset(context, chosen)
    chosen = set()
    for mask in range(2 ** k):
        subset = frozenset(i for i in range(k) if mask >> i & 1)
        q = projection_from_subset(context, subset)
        if max_abs(p @ q - q) <= eps:  # q dominated by p
            chosen |= subset
    return projection_from_subset(context, chosen)


def atom_sums(context):
    """Every projection of the context, as (subset, matrix) pairs."""
    k = context.n_atoms
    out = []
    for mask in range(2 ** k):
        subset = frozenset(i for i in range(k) if mask >> i & 1)
        out.append((subset, projection_from_subset(context, subset)))
    return out


# ---------------------------------------------------------------------------
# Abstract posets and their realization as context posets.


def all_labeled_posets(n):
    """Every partial order on range(n), as a frozenset of (lo, hi) pairs.

    Pairs are strict relations; reflexivity is implicit.  Sizes: 1, 3, 19,
    219 for n = 1..4.
    """
    if n == 0:
        return [frozenset()]
    candidates = [(i, j) for i in range(n) for j in range(n) if i != j]
    posets = []
    for bits in itertools.product((0, 1), repeat=len(candidates)):
        rel = {pair for pair, bit in zip(candidates, bits) if bit}
        ok = True
        for (a, b) in rel:
            if (b, a) in rel:
                ok = False
                break
        if not ok:
            continue
        for (a, b) in rel:
            for (c, d) in rel:
                if b == c and (a, d) not in rel:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            posets.append(frozenset(rel))
    return posets


def realize_abstract_poset(n, strict_pairs, include_top=False):
    """Order-embed an abstract poset on range(n) into a context poset.

    Element x becomes the context whose singleton atoms are the standard
    basis vectors indexed by the down-set of x, with everything else lumped
    into one block (an extra dimension keeps that block non-empty).  Subset
    order of down-sets then coincides with algebra inclusion.  With
    ``include_top`` an extra element above everything is added first.

    Returns (poset, key_of) with key_of mapping abstract elements to context
    keys; the top, when requested, is element ``n``.
    """
    rel = set(strict_pairs)
    m = n
    if include_top:
        rel |= {(i, n) for i in range(n)}
        m = n + 1
    dim = m + 1
    eye = np.eye(dim, dtype=complex)
    contexts = {}
    for x in range(m):
        down = {x} | {a for (a, b) in rel if b == x}
        atoms = [np.outer(eye[i], eye[i]) for i in sorted(down)]
        rest = [i for i in range(m) if i not in down] + [m]
        block = sum(np.outer(eye[i], eye[i]) for i in rest)
        atoms.append(block)
        contexts[x] = context_from_atoms(atoms)
    poset = build_poset(contexts.values(), close_under_intersection=False,
                        include_trivial=True)
    key_of = {x: contexts[x].key for x in contexts}
    # sanity: realized order must match the abstract one exactly
    for x in range(m):
        for y in range(m):
            expected = x == y or (x, y) in rel
            assert poset.leq(key_of[x], key_of[y]) == expected, (x, y)
    return poset, key_of


def all_sieves(poset, base):
    """Every sieve at a base context, by direct down-set enumeration."""
    from toposq.logic import Sieve

    down = list(poset.down_set(base))
    sieves = []
    for mask in range(2 ** len(down)):
        members = {down[i] for i in range(len(down)) if mask >> i & 1}
        if all(set(poset.down_set(k)) <= members for k in members):
            sieves.append(Sieve(poset, base, members))
    return sieves
