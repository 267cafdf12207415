"""Sieve algebra, the sub-object classifier, truth objects and truth values.

Sieves at a context V are the downward-closed sets of subcontexts of V; they
form a Heyting algebra with intersection, union and the usual Kripke-Joyal
implication.  A compatible family of sieves (one per context, each the
pullback of the ones above it) is a global element of the classifier and
serves as a generalized truth value: maximal everywhere is plain truth,
empty everywhere plain falsity, and anything else is partial truth.

The truth object of a unit vector psi assigns to every context the family of
locally-true sub-objects; it is stored by its generator (the daseinised
support projection of psi), which determines the whole upward-closed family.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidInputError,
    InternalConsistencyError,
)
from .dasein import daseinise_projection
from .hermitian import EPS_DEFAULT, max_abs
from .spectral import (
    ClopenSubobject,
    projection_from_subset,
    subobject_bottom,
    subset_from_projection,
    validate_subobject,
)


class Sieve:
    """A downward-closed set of subcontexts at a base context."""

    __slots__ = ("poset", "base", "members")

    def __init__(self, poset, base, members):
        if base not in poset:
            raise InvalidInputError("unknown base context", base=base)
        members = frozenset(members)
        down = set(poset.down_set(base))
        if not members <= down:
            raise InvalidInputError("sieve members must lie below the base",
                                    base=base)
        for k in members:
            missing = [k2 for k2 in poset.down_set(k) if k2 not in members]
            if missing:
                raise InvalidInputError("sieve is not downward closed",
                                        member=k, missing=sorted(missing))
        self.poset = poset
        self.base = base
        self.members = members

    def __eq__(self, other):
        return (isinstance(other, Sieve) and self.base == other.base
                and self.members == other.members)

    def __hash__(self):
        return hash((self.base, self.members))

    def __repr__(self):
        return "Sieve(base=%r, members=%r)" % (self.base, sorted(self.members))

    def __contains__(self, key):
        return key in self.members

    @classmethod
    def maximal(cls, poset, base):
        return cls(poset, base, poset.down_set(base))

    @classmethod
    def empty(cls, poset, base):
        return cls(poset, base, ())

    def is_maximal(self):
        return self.members == frozenset(self.poset.down_set(self.base))

    def is_empty(self):
        return not self.members

    def _check_base(self, other):
        if self.base != other.base:
            raise InvalidInputError("sieves at different base contexts",
                                    left=self.base, right=other.base)

    def meet(self, other):
        self._check_base(other)
        return Sieve(self.poset, self.base, self.members & other.members)

    def join(self, other):
        self._check_base(other)
        return Sieve(self.poset, self.base, self.members | other.members)

    def implies(self, other):
        """Largest sieve whose meet with self lies inside other."""
        self._check_base(other)
        chosen = set()
        for k in self.poset.down_set(self.base):
            below = self.poset.down_set(k)
            if all(k2 in other.members for k2 in below if k2 in self.members):
                chosen.add(k)
        return Sieve(self.poset, self.base, chosen)

    def negate(self):
        return self.implies(Sieve.empty(self.poset, self.base))

    def pullback(self, target):
        """The sieve restricted to a smaller base: members below the target."""
        if not self.poset.leq(target, self.base):
            raise InvalidInputError("pullback target is not below the base",
                                    base=self.base, target=target)
        down = set(self.poset.down_set(target))
        return Sieve(self.poset, target, self.members & down)


class OmegaElement:
    """A global element of the sub-object classifier: compatible sieves."""

    def __init__(self, poset, sieves):
        self.poset = poset
        self.sieves = dict(sieves)
        if set(self.sieves) != set(poset.keys()):
            raise InvalidInputError("one sieve per context required")
        for key in poset.keys():
            if self.sieves[key].base != key:
                raise InvalidInputError("sieve based at the wrong context",
                                        key=key)
        for sub_key, super_key in poset.pairs():
            pulled = self.sieves[super_key].pullback(sub_key)
            if pulled != self.sieves[sub_key]:
                raise InternalConsistencyError(
                    "sieve family is not compatible under pullback",
                    sub=sub_key, sup=super_key)

    def __getitem__(self, key):
        return self.sieves[key]

    def __eq__(self, other):
        return isinstance(other, OmegaElement) and self.sieves == other.sieves

    def __hash__(self):
        return hash(tuple(sorted((k, s.members) for k, s in self.sieves.items())))


# ---------------------------------------------------------------------------
# Heyting operations on clopen sub-objects.


def _check_same_poset(s, t):
    if s.poset is not t.poset and set(s.poset.keys()) != set(t.poset.keys()):
        raise InvalidInputError("sub-objects over different posets")


def sub_meet(s, t):
    _check_same_poset(s, t)
    return ClopenSubobject(
        s.poset, {k: s.parts[k] & t.parts[k] for k in s.poset.keys()})


def sub_join(s, t):
    _check_same_poset(s, t)
    return ClopenSubobject(
        s.poset, {k: s.parts[k] | t.parts[k] for k in s.poset.keys()})


def sub_implies(s, t):
    """Kripke-Joyal implication on sub-objects.

    A spectrum point is kept at V when every restriction of it that lands in
    ``s`` also lands in ``t``.  This is the unique operation adjoint to the
    componentwise meet, which the test suite verifies.
    """
    _check_same_poset(s, t)
    poset = s.poset
    parts = {}
    for key in poset.keys():
        n = poset[key].n_atoms
        keep = set()
        for atom in range(n):
            ok = True
            for sub_key in poset.down_set(key):
                below = poset.restriction(sub_key, key)[
                    atom] if sub_key != key else atom
                if below in s.parts[sub_key] and below not in t.parts[sub_key]:
                    ok = False
                    break
            if ok:
                keep.add(atom)
        parts[key] = keep
    result = ClopenSubobject(poset, parts)
    if validate_subobject(result):
        raise InternalConsistencyError(
            "implication produced an incompatible sub-object")
    return result


def sub_neg(s):
    return sub_implies(s, subobject_bottom(s.poset))


# ---------------------------------------------------------------------------
# Truth objects.


class TruthObject:
    """State-dependent family of locally-true sub-objects, by generators.

    ``generators[V]`` is the spectrum subset of the daseinised support
    projection of psi at V; a local subset belongs to the truth object at V
    exactly when it contains the generator.
    """

    def __init__(self, poset, psi, generators):
        self.poset = poset
        self.psi = psi
        self.generators = dict(generators)

    def __getitem__(self, key):
        return self.generators[key]

    def member(self, key, subset, eps=EPS_DEFAULT):
        """Local membership test, cross-checked four equivalent ways.

        The characterizations (expectation one, projection above the
        support, projection above its daseinisation, subset containing the
        generator) must agree; disagreement indicates a tolerance bug.
        """
        ctx = self.poset[key]
        subset = frozenset(subset)
        p_s = projection_from_subset(ctx, subset)
        p_psi = np.outer(self.psi, self.psi.conj())
        by_expectation = abs(
            complex(self.psi.conj() @ (p_s @ self.psi)) - 1.0) <= 10 * eps
        by_support = max_abs(p_s @ p_psi - p_psi) <= 10 * eps
        dasein = daseinise_projection(p_psi, ctx, "outer", eps)
        by_dasein = max_abs(p_s @ dasein - dasein) <= 10 * eps
        by_generator = subset >= self.generators[key]
        votes = {by_expectation, by_support, by_dasein, by_generator}
        if len(votes) != 1:
            raise InternalConsistencyError(
                "truth-object membership characterizations disagree",
                context=key,
                expectation=by_expectation, support=by_support,
                dasein=by_dasein, generator=by_generator)
        return by_generator


def truth_object(psi, poset, eps=EPS_DEFAULT):
    """Truth object of a unit vector over the given poset."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if psi.shape[0] != poset.dim:
        raise InvalidInputError("state dimension mismatch",
                                got=psi.shape[0], expected=poset.dim)
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > eps:
        raise InvalidInputError("state vector must be normalized", norm=norm)
    p_psi = np.outer(psi, psi.conj())
    generators = {}
    for key in poset.keys():
        ctx = poset[key]
        generators[key] = subset_from_projection(
            daseinise_projection(p_psi, ctx, "outer", eps), ctx, eps)
    return TruthObject(poset, psi, generators)


def truth_value(s, t):
    """Sieve-valued truth of the proposition ``s`` in the state behind ``t``.

    At each context the sieve collects the subcontexts where the local part
    of the proposition contains the truth-object generator.  Downward
    closure and pullback compatibility hold by construction and are asserted
    before returning.
    """
    poset = s.poset
    sieves = {}
    for key in poset.keys():
        members = {
            sub for sub in poset.down_set(key)
            if s.parts[sub] >= t.generators[sub]
        }
        try:
            sieves[key] = Sieve(poset, key, members)
        except InvalidInputError as exc:
            raise InternalConsistencyError(
                "truth value is not a sieve: %s" % exc.message, context=key)
    return OmegaElement(poset, sieves)


@dataclass
class TruthReport:
    classification: str
    sieves: dict

    def to_json(self):
        return {
            "classification": self.classification,
            "sieves": {k: sorted(v) for k, v in self.sieves.items()},
        }


TOTALLY_TRUE = "totally-true"
TOTALLY_FALSE = "totally-false"
PARTIAL = "partial"


def classify_truth(omega):
    """Sort a generalized truth value into true / false / partial."""
    per_context = {k: omega[k].members for k in omega.poset.keys()}
    if all(omega[k].is_maximal() for k in omega.poset.keys()):
        label = TOTALLY_TRUE
    elif all(omega[k].is_empty() for k in omega.poset.keys()):
        label = TOTALLY_FALSE
    else:
        label = PARTIAL
    return TruthReport(label, per_context)
