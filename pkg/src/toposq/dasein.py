"""Daseinisation: best approximation of operators inside a context.

For a projection P and context V, the outer approximation is the smallest
projection of V above P and the inner one the largest below.  Both have a
closed form over the atoms: an atom contributes to the outer sum as soon as
it is not orthogonal to P, and to the inner sum only when it lies entirely
under P.  The exhaustive lattice meet/join over all ``2^k`` projections of V
is kept in the test suite as an oracle.

Self-adjoint operators are never approximated coefficient-wise; that breaks
orthogonality of the daseinised spectral projections.  Instead the spectral
family is approximated elementwise (inner for the outer operator, outer for
the inner one) and converted back, which keeps the family monotone and the
result inside V.
"""

from .errors import InvalidInputError, InternalConsistencyError
from .hermitian import (
    EPS_DEFAULT,
    SpectralFamily,
    as_matrix,
    max_abs,
    operator_from_family,
    require_hermitian,
    spectral_family,
    spectral_projection,
    zeros,
)
from .spectral import ClopenSubobject, subset_from_projection

MODES = ("outer", "inner")


def daseinise_projection(p, context, mode, eps=EPS_DEFAULT):
    """Outer or inner approximation of a projection inside a context."""
    if mode not in MODES:
        raise InvalidInputError("mode must be 'outer' or 'inner'", mode=mode)
    p = as_matrix(p)
    if p.shape[0] != context.dim:
        raise InvalidInputError("dimension mismatch",
                                got=p.shape[0], expected=context.dim)
    out = zeros(context.dim)
    for a in context.atoms:
        prod = a @ p
        if mode == "outer":
            if max_abs(prod) > eps:
                out = out + a
        else:
            if max_abs(prod - a) <= eps:
                out = out + a
    return out


def daseinise_subobject(p, poset, eps=EPS_DEFAULT):
    """Clopen sub-object collecting the outer approximations of ``p``."""
    parts = {}
    for key in poset.keys():
        ctx = poset[key]
        parts[key] = subset_from_projection(
            daseinise_projection(p, ctx, "outer", eps), ctx, eps)
    return ClopenSubobject(poset, parts)


class OuterPresheafElement:
    """A compatible family of projections, one per context.

    Compatibility means re-approximating the component at V inside any
    subcontext V' reproduces the component at V'; it is verified on
    construction.
    """

    def __init__(self, poset, components, eps=EPS_DEFAULT):
        self.poset = poset
        self.components = dict(components)
        for key in poset.keys():
            if key not in self.components:
                raise InvalidInputError("missing component", key=key)
        for sub_key, super_key in poset.pairs():
            again = daseinise_projection(
                self.components[super_key], poset[sub_key], "outer", eps)
            if max_abs(again - self.components[sub_key]) > eps:
                raise InternalConsistencyError(
                    "outer components incompatible under restriction",
                    sub=sub_key, sup=super_key,
                    deviation=max_abs(again - self.components[sub_key]))

    def __getitem__(self, key):
        return self.components[key]


def outer_global_element(p, poset, eps=EPS_DEFAULT):
    """Global element of the outer presheaf generated by a projection."""
    components = {
        key: daseinise_projection(p, poset[key], "outer", eps)
        for key in poset.keys()
    }
    return OuterPresheafElement(poset, components, eps)


def daseinise_operator(a, context, mode, eps=EPS_DEFAULT):
    """Approximate a Hermitian operator inside a context via its spectral family.

    Outer mode pushes every family member down (inner projection
    approximation) which pushes the operator up; inner mode is the mirror
    image.  Thresholds stay at the original eigenvalues; jumps that collapse
    contribute nothing on conversion.  If the operator already lies in the
    context both modes return it.
    """
    if mode not in MODES:
        raise InvalidInputError("mode must be 'outer' or 'inner'", mode=mode)
    a = require_hermitian(a, eps)
    family = spectral_family(a, eps)
    proj_mode = "inner" if mode == "outer" else "outer"
    approximated = tuple(
        daseinise_projection(e, context, proj_mode, eps)
        for e in family.projections
    )
    return operator_from_family(
        SpectralFamily(family.thresholds, approximated), eps)


def represent_proposition(a, delta, poset, eps=EPS_DEFAULT):
    """Sub-object representing the proposition "the value of a lies in delta"."""
    return daseinise_subobject(spectral_projection(a, delta, eps), poset, eps)
