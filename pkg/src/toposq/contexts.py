"""Contexts (finite abelian operator algebras) and their inclusion poset.

A context is encoded by its atoms: a partition of the identity into
orthogonal projections.  Two contexts are the same algebra exactly when they
induce the same partition, so identity is decided through a canonical key
derived from the atoms rounded to six decimals.

Inclusion runs the algebra way: ``V' <= V`` means V' is a subalgebra of V,
i.e. the partition of V' is a coarsening of the partition of V.  The poset
can be closed under pairwise intersection, which is what makes shared rays
of different measurement bases induce shared subcontexts.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, NonCommutingError
from .hermitian import (
    EPS_DEFAULT,
    as_matrix,
    eigendecompose,
    hermitize,
    identity,
    max_abs,
    projection_rank,
    require_hermitian,
)

KEY_DECIMALS = 6


def _canonical_entry(x):
    # integer micro-units; collapses -0.0 and 0.0
    return int(round(x * 10 ** KEY_DECIMALS))


def _atom_sort_key(atom):
    entries = []
    for row in atom:
        for z in row:
            entries.append(_canonical_entry(z.real))
            entries.append(_canonical_entry(z.imag))
    return (projection_rank(atom), tuple(entries))


@dataclass(frozen=True, eq=False)
class Context:
    """An abelian algebra given by its atoms, in canonical order."""

    dim: int
    atoms: tuple
    key: str = field(default="")

    def __eq__(self, other):
        return isinstance(other, Context) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return "Context(dim=%d, atoms=%d, key=%r)" % (
            self.dim, len(self.atoms), self.key)

    @property
    def n_atoms(self):
        return len(self.atoms)

    @property
    def is_trivial(self):
        return len(self.atoms) == 1


def context_from_atoms(atoms, eps=EPS_DEFAULT):
    """Build a context from a partition of the identity, canonicalizing order."""
    atoms = [hermitize(as_matrix(a)) for a in atoms]
    if not atoms:
        raise InvalidInputError("a context needs at least one atom")
    dim = atoms[0].shape[0]
    total = np.zeros((dim, dim), dtype=np.complex128)
    for a in atoms:
        if a.shape[0] != dim:
            raise InvalidInputError("atoms of mixed dimension")
        total = total + a
    for i in range(len(atoms)):
        if max_abs(atoms[i] @ atoms[i] - atoms[i]) > eps:
            raise InvalidInputError("atom is not a projection", index=i)
        for j in range(i + 1, len(atoms)):
            if max_abs(atoms[i] @ atoms[j]) > eps:
                raise InvalidInputError("atoms not pairwise orthogonal",
                                        i=i, j=j)
    if max_abs(total - identity(dim)) > eps:
        raise InvalidInputError("atoms do not sum to the identity")
    ordered = tuple(sorted(atoms, key=_atom_sort_key))
    digest = hashlib.sha1()
    digest.update(repr([_atom_sort_key(a) for a in ordered]).encode())
    return Context(dim=dim, atoms=ordered, key=digest.hexdigest()[:16])


def trivial_context(dim):
    return context_from_atoms([identity(dim)])


def generate_context(ops, dim=None, eps=EPS_DEFAULT):
    """Smallest context containing all given commuting Hermitian operators.

    The atoms are the joint eigenspace projections, obtained by refining the
    one-block partition with each operator's eigenprojections in turn.  An
    empty pool yields the trivial context (``dim`` is then required).
    """
    ops = [require_hermitian(op, eps) for op in ops]
    if not ops:
        if dim is None:
            raise InvalidInputError("empty operator pool needs an explicit dim")
        return trivial_context(dim)
    dim = ops[0].shape[0]
    for i, op in enumerate(ops):
        if op.shape[0] != dim:
            raise InvalidInputError("operators of mixed dimension", index=i)
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            comm = ops[i] @ ops[j] - ops[j] @ ops[i]
            scale = max(1.0, max_abs(ops[i]) * max_abs(ops[j]))
            if max_abs(comm) > eps * scale:
                raise NonCommutingError(
                    "operators %d and %d do not commute" % (i, j),
                    i=i, j=j, deviation=max_abs(comm),
                )
    atoms = [identity(dim)]
    for op in ops:
        dec = eigendecompose(op, eps)
        refined = []
        for a in atoms:
            for p in dec.projections:
                piece = hermitize(a @ p)
                if float(np.trace(piece).real) > 0.5:
                    refined.append(piece)
        atoms = refined
    return context_from_atoms(atoms, eps)


def intersect(v1, v2, eps=EPS_DEFAULT):
    """Largest context contained in both.

    Atoms of the intersection are the connected components of the bipartite
    non-orthogonality graph between the two atom sets: a projection lies in
    both algebras exactly when it is a union of whole components.
    """
    if v1.dim != v2.dim:
        raise InvalidInputError("contexts of different dimension")
    if v1.key == v2.key:
        return v1
    n1 = v1.n_atoms
    parent = list(range(n1 + v2.n_atoms))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for i, a in enumerate(v1.atoms):
        for j, b in enumerate(v2.atoms):
            if max_abs(a @ b) > eps:
                union(i, n1 + j)

    groups = {}
    for i, a in enumerate(v1.atoms):
        groups.setdefault(find(i), []).append(a)
    atoms = [hermitize(sum(blocks)) for _, blocks in sorted(groups.items())]
    return context_from_atoms(atoms, eps)


def dominating_atom(context, p, eps=EPS_DEFAULT):
    """Index of the unique atom above projection ``p``, or None."""
    hits = [i for i, a in enumerate(context.atoms)
            if max_abs(a @ p - p) <= eps]
    if len(hits) == 1:
        return hits[0]
    return None


def is_subalgebra(small, big, eps=EPS_DEFAULT):
    """True when ``small`` is a subalgebra of ``big`` (coarser partition)."""
    if small.dim != big.dim:
        return False
    if small.key == big.key:
        return True
    for b in big.atoms:
        if dominating_atom(small, b, eps) is None:
            return False
    return True


class ContextPoset:
    """Finite inclusion poset of contexts, with cached down-sets.

    Contexts are addressed by canonical key; all key listings are sorted so
    reports and searches come out deterministic.
    """

    def __init__(self, contexts, eps=EPS_DEFAULT, closure_applied=False):
        self.eps = eps
        self.closure_applied = closure_applied
        self.contexts = {c.key: c for c in sorted(contexts, key=lambda c: c.key)}
        if not self.contexts:
            raise InvalidInputError("poset needs at least one context")
        dims = {c.dim for c in self.contexts.values()}
        if len(dims) != 1:
            raise InvalidInputError("contexts of mixed dimension",
                                    dims=sorted(dims))
        self.dim = dims.pop()
        keys = list(self.contexts)
        below = {k: [] for k in keys}
        for k1 in keys:
            for k2 in keys:
                if is_subalgebra(self.contexts[k1], self.contexts[k2], eps):
                    below[k2].append(k1)
        self._down = {k: tuple(sorted(v)) for k, v in below.items()}
        self._restrictions = {}

    def keys(self):
        return list(self.contexts)

    def __len__(self):
        return len(self.contexts)

    def __contains__(self, key):
        return key in self.contexts

    def __getitem__(self, key):
        return self.contexts[key]

    def leq(self, sub_key, super_key):
        """sub <= super, i.e. sub is a subalgebra of super."""
        return sub_key in self._down[super_key]

    def down_set(self, key):
        """Keys of every context below ``key``, itself included; sorted."""
        return self._down[key]

    def strictly_below(self, key):
        return tuple(k for k in self._down[key] if k != key)

    def pairs(self):
        """All ordered pairs (sub, super) with sub < super; sorted."""
        out = []
        for sup in self.keys():
            for sub in self.strictly_below(sup):
                out.append((sub, sup))
        return out

    def maximal_keys(self):
        keys = self.keys()
        return [k for k in keys
                if not any(k != other and self.leq(k, other) for other in keys)]

    def covers(self):
        """Hasse edges (sub, super): inclusions with nothing strictly between."""
        edges = []
        for sub, sup in self.pairs():
            between = [w for w in self.strictly_below(sup)
                       if w != sub and self.leq(sub, w)]
            if not between:
                edges.append((sub, sup))
        return edges

    def restriction(self, sub_key, super_key):
        """Per-atom restriction table: atom i of super -> its atom in sub."""
        if not self.leq(sub_key, super_key):
            raise InvalidInputError("restriction needs sub <= super",
                                    sub=sub_key, sup=super_key)
        cached = self._restrictions.get((sub_key, super_key))
        if cached is not None:
            return cached
        small = self.contexts[sub_key]
        big = self.contexts[super_key]
        table = []
        for atom in big.atoms:
            idx = dominating_atom(small, atom, self.eps)
            if idx is None:
                raise InvalidInputError(
                    "inclusion without atom domination; poset is inconsistent",
                    sub=sub_key, sup=super_key)
            table.append(idx)
        table = tuple(table)
        self._restrictions[(sub_key, super_key)] = table
        return table


def build_poset(contexts, close_under_intersection=True, include_trivial=False,
                eps=EPS_DEFAULT):
    """Assemble a ContextPoset, optionally closing under intersections.

    Duplicate contexts (same canonical key) collapse.  The trivial context is
    dropped unless requested, both from the input and from closure products.
    """
    pool = {}
    dims = set()
    for c in contexts:
        dims.add(c.dim)
        if c.is_trivial and not include_trivial:
            continue
        pool[c.key] = c
    if len(dims) > 1:
        raise InvalidInputError("contexts of mixed dimension", dims=sorted(dims))
    if not pool:
        if not dims:
            raise InvalidInputError("no contexts supplied")
        raise InvalidInputError(
            "only trivial contexts supplied; pass include_trivial to keep them")

    if close_under_intersection:
        frontier = list(pool.values())
        while frontier:
            fresh = []
            existing = list(pool.values())
            for new in frontier:
                for old in existing:
                    if new.key == old.key:
                        continue
                    meet = intersect(new, old, eps)
                    if meet.is_trivial and not include_trivial:
                        continue
                    if meet.key not in pool:
                        pool[meet.key] = meet
                        fresh.append(meet)
            frontier = fresh

    return ContextPoset(pool.values(), eps=eps,
                        closure_applied=close_under_intersection)


# ---------------------------------------------------------------------------
# Ray-family ingestion and DOT export.


def _vector_from_json(entries, dim):
    if not isinstance(entries, list) or len(entries) != dim:
        raise InvalidInputError("ray must list one entry per dimension",
                                dim=dim)
    vec = np.zeros(dim, dtype=np.complex128)
    for i, item in enumerate(entries):
        if isinstance(item, (int, float)):
            vec[i] = float(item)
        elif isinstance(item, list) and len(item) == 2:
            vec[i] = float(item[0]) + 1j * float(item[1])
        else:
            raise InvalidInputError(
                "ray entry must be a number or an [re, im] pair", index=i)
    return vec


def contexts_from_rays(data, eps=EPS_DEFAULT):
    """Parse a ray-family object into one context per orthogonal basis.

    Each inner list must hold ``dim`` pairwise orthogonal nonzero vectors;
    they are normalized here, and each becomes a rank-1 atom.
    """
    try:
        dim = int(data["dim"])
        families = data["contexts"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError("malformed ray family: %s" % exc)
    if dim < 1 or not isinstance(families, list) or not families:
        raise InvalidInputError("ray family needs dim >= 1 and a context list")
    out = []
    for b_idx, basis in enumerate(families):
        if not isinstance(basis, list) or len(basis) != dim:
            raise InvalidInputError(
                "basis %d must hold exactly dim vectors" % b_idx, dim=dim)
        vecs = []
        for entries in basis:
            v = _vector_from_json(entries, dim)
            norm = float(np.linalg.norm(v))
            if norm <= eps:
                raise InvalidInputError("zero vector in basis %d" % b_idx)
            vecs.append(v / norm)
        for i in range(dim):
            for j in range(i + 1, dim):
                if abs(np.vdot(vecs[i], vecs[j])) > max(eps, 1e-12):
                    raise InvalidInputError(
                        "basis %d is not orthogonal" % b_idx, i=i, j=j)
        atoms = [np.outer(v, v.conj()) for v in vecs]
        out.append(context_from_atoms(atoms, eps))
    return out


def poset_to_dot(poset, selected=None):
    """Graphviz source for the Hasse diagram.

    Nodes are labeled with their atom count; when ``selected`` maps context
    keys to atom-index subsets, the chosen atoms are shown and non-empty
    nodes are filled.
    """
    lines = ["digraph contexts {", "  rankdir=BT;",
             "  node [shape=box, style=rounded];"]
    for key in poset.keys():
        ctx = poset[key]
        label = "%s\\n%d atoms" % (key, ctx.n_atoms)
        attrs = ""
        if selected is not None:
            chosen = sorted(selected.get(key, ()))
            label += "\\n{%s}" % ", ".join(str(i) for i in chosen)
            if chosen:
                attrs = ', style="rounded,filled", fillcolor=lightgray'
        lines.append('  "%s" [label="%s"%s];' % (key, label, attrs))
    for sub, sup in sorted(poset.covers()):
        lines.append('  "%s" -> "%s";' % (sub, sup))
    lines.append("}")
    return "\n".join(lines) + "\n"
