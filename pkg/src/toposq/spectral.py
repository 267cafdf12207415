"""The spectral presheaf over a context poset.

At finite dimension the Gel'fand spectrum of a context is a finite discrete
set: one multiplicative functional per atom.  We therefore identify spectrum
points with atoms, and a functional evaluates an algebra element to its
coefficient on the corresponding atom.  Every subset of such a spectrum is
clopen, so the classical "clopen subset" restriction is vacuous here; the
name is kept because the projection/subset dictionary below is exactly the
clopen correspondence.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidInputError,
    NotInAlgebraError,
    OrderError,
)
from .contexts import Context, is_subalgebra
from .hermitian import EPS_DEFAULT, as_matrix, max_abs, projection_rank, zeros


@dataclass(frozen=True)
class SpectralElement:
    """A point of the Gel'fand spectrum of a context: one of its atoms."""

    context: Context
    atom_index: int

    def __post_init__(self):
        if not 0 <= self.atom_index < self.context.n_atoms:
            raise InvalidInputError("atom index out of range",
                                    index=self.atom_index,
                                    atoms=self.context.n_atoms)

    @property
    def atom(self):
        return self.context.atoms[self.atom_index]


def spectrum(context):
    """All spectrum points of a context, in canonical atom order."""
    return [SpectralElement(context, i) for i in range(context.n_atoms)]


def algebra_coefficients(context, b, eps=EPS_DEFAULT):
    """Atom coefficients of ``b`` if it lies in the algebra, else None.

    Membership means ``b`` is recovered by its atomwise traces; the check is
    scaled by the magnitude of ``b`` so large operators are not rejected for
    harmless rounding noise.
    """
    b = as_matrix(b)
    if b.shape[0] != context.dim:
        raise InvalidInputError("dimension mismatch", dim=context.dim)
    coeffs = []
    recon = zeros(context.dim)
    for a in context.atoms:
        c = complex(np.trace(a @ b)) / projection_rank(a)
        coeffs.append(c)
        recon = recon + c * a
    if max_abs(recon - b) > eps * max(1.0, max_abs(b)):
        return None
    return coeffs


def evaluate(element, b, eps=EPS_DEFAULT):
    """Apply the multiplicative functional of a spectrum point to ``b``."""
    coeffs = algebra_coefficients(element.context, b, eps)
    if coeffs is None:
        raise NotInAlgebraError("operand does not lie in the context algebra",
                                context=element.context.key)
    return coeffs[element.atom_index]


def restrict_element(element, target, eps=EPS_DEFAULT):
    """Restrict a functional to a subcontext of its home context.

    The restriction of an atom functional is the functional of the unique
    target atom dominating that atom.
    """
    source = element.context
    if target.key == source.key:
        return element
    if not is_subalgebra(target, source, eps):
        raise OrderError("restriction target is not a subcontext",
                         source=source.key, target=target.key)
    a = element.atom
    for j, big in enumerate(target.atoms):
        if max_abs(big @ a - a) <= eps:
            return SpectralElement(target, j)
    raise OrderError("no dominating atom found; contexts are inconsistent",
                     source=source.key, target=target.key)


def subset_from_projection(p, context, eps=EPS_DEFAULT):
    """Atom-index set {i : functional_i(p) = 1} for a projection p in V."""
    coeffs = algebra_coefficients(context, p, eps)
    if coeffs is None:
        raise NotInAlgebraError("projection does not lie in the context",
                                context=context.key)
    subset = set()
    for i, c in enumerate(coeffs):
        if abs(c - 1.0) <= eps:
            subset.add(i)
        elif abs(c) > eps:
            raise NotInAlgebraError(
                "operand is not a projection of the context",
                context=context.key, coefficient=i)
    return frozenset(subset)


def projection_from_subset(context, subset):
    """Sum of the chosen atoms; inverse of :func:`subset_from_projection`."""
    out = zeros(context.dim)
    for i in subset:
        if not 0 <= i < context.n_atoms:
            raise InvalidInputError("atom index out of range", index=i)
        out = out + context.atoms[i]
    return out


class ClopenSubobject:
    """A sub-presheaf of the spectral presheaf: one atom subset per context.

    Compatibility under restriction (atoms above a picked atom stay picked
    in subcontexts) is the defining invariant; it is what
    :func:`validate_subobject` checks.
    """

    def __init__(self, poset, parts):
        self.poset = poset
        fixed = {}
        for key in poset.keys():
            if key not in parts:
                raise InvalidInputError("sub-object misses a context", key=key)
            sub = frozenset(int(i) for i in parts[key])
            n = poset[key].n_atoms
            if any(not 0 <= i < n for i in sub):
                raise InvalidInputError("atom index out of range", key=key)
            fixed[key] = sub
        if len(parts) != len(fixed):
            raise InvalidInputError("sub-object names unknown contexts")
        self.parts = fixed

    def __getitem__(self, key):
        return self.parts[key]

    def __eq__(self, other):
        return (isinstance(other, ClopenSubobject)
                and self.parts == other.parts
                and set(self.poset.keys()) == set(other.poset.keys()))

    def __hash__(self):
        return hash(tuple(sorted((k, tuple(sorted(v)))
                                 for k, v in self.parts.items())))

    def __repr__(self):
        return "ClopenSubobject(%r)" % (
            {k: sorted(v) for k, v in sorted(self.parts.items())},)

    def is_top(self):
        return all(len(self.parts[k]) == self.poset[k].n_atoms
                   for k in self.poset.keys())

    def is_bottom(self):
        return all(not self.parts[k] for k in self.poset.keys())

    def to_json(self):
        return {k: sorted(v) for k, v in self.parts.items()}


def subobject(poset, parts):
    return ClopenSubobject(poset, parts)


def subobject_top(poset):
    return ClopenSubobject(
        poset, {k: range(poset[k].n_atoms) for k in poset.keys()})


def subobject_bottom(poset):
    return ClopenSubobject(poset, {k: () for k in poset.keys()})


def validate_subobject(candidate):
    """Check restriction compatibility; returns violations, empty when ok.

    A violation triple ``(super_key, sub_key, atom)`` says the atom is picked
    at the larger context but its restriction is missing below.
    """
    poset = candidate.poset
    violations = []
    for sub_key, super_key in poset.pairs():
        table = poset.restriction(sub_key, super_key)
        chosen_below = candidate.parts[sub_key]
        for atom in sorted(candidate.parts[super_key]):
            if table[atom] not in chosen_below:
                violations.append((super_key, sub_key, atom))
    return violations
