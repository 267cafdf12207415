"""Quantity-value presheaves and the arrows representing physical quantities.

A physical quantity does not take plain real values over a context poset; it
assigns to each spectrum point a monotone real function on the down-set of
its context.  Outer approximation grows as contexts shrink, so the outer
arrow produces order-reversing functions; the inner arrow order-preserving
ones; the paired arrow both.

Order-reversing functions only add, so differences live in the Grothendieck
completion.  Pointwise real addition is cancellative, which makes the
canonical representative of a formal difference just the pointwise
difference; the general pair-with-witness equivalence is exercised in the
tests to confirm nothing is lost.
"""

from dataclasses import dataclass

from .errors import (
    InvalidInputError,
    InternalConsistencyError,
    PreconditionError,
)
from .dasein import daseinise_operator
from .hermitian import EPS_DEFAULT, eigendecompose, identity, require_hermitian
from .spectral import SpectralElement, evaluate, restrict_element

REVERSING = "reversing"
PRESERVING = "preserving"


class MonotoneFunction:
    """A real function on the down-set of a base context, monotone in it."""

    __slots__ = ("poset", "base", "values", "direction")

    def __init__(self, poset, base, values, direction):
        if direction not in (REVERSING, PRESERVING):
            raise InvalidInputError("unknown direction", direction=direction)
        down = poset.down_set(base)
        if set(values) != set(down):
            raise InvalidInputError("function must cover the whole down-set",
                                    base=base)
        values = {k: float(v) for k, v in values.items()}
        for sub in down:
            for sub2 in poset.down_set(sub):
                if sub2 == sub:
                    continue
                lo, hi = values[sub2], values[sub]
                # mathematically equal values may differ by rounding noise
                # proportional to their magnitude; never flag those
                slack = 1e-12 * max(1.0, abs(lo), abs(hi))
                if direction == REVERSING and lo < hi - slack:
                    raise InvalidInputError(
                        "values increase along an inclusion",
                        below=sub2, above=sub)
                if direction == PRESERVING and lo > hi + slack:
                    raise InvalidInputError(
                        "values decrease along an inclusion",
                        below=sub2, above=sub)
        self.poset = poset
        self.base = base
        self.values = values
        self.direction = direction

    def __eq__(self, other):
        return (isinstance(other, MonotoneFunction)
                and self.base == other.base
                and self.direction == other.direction
                and self.values == other.values)

    def __hash__(self):
        return hash((self.base, self.direction,
                     tuple(sorted(self.values.items()))))

    def __repr__(self):
        return "MonotoneFunction(base=%r, %s, %r)" % (
            self.base, self.direction, dict(sorted(self.values.items())))

    def __getitem__(self, key):
        return self.values[key]

    def restrict(self, target):
        """Restriction to the down-set of a smaller base."""
        if not self.poset.leq(target, self.base):
            raise InvalidInputError("restriction target not below base",
                                    base=self.base, target=target)
        keep = {k: self.values[k] for k in self.poset.down_set(target)}
        return MonotoneFunction(self.poset, target, keep, self.direction)

    def negate(self):
        flipped = PRESERVING if self.direction == REVERSING else REVERSING
        return MonotoneFunction(
            self.poset, self.base,
            {k: -v for k, v in self.values.items()}, flipped)

    def pointwise(self, other, op):
        if self.base != other.base:
            raise InvalidInputError("functions at different bases")
        return {k: op(self.values[k], other.values[k]) for k in self.values}


@dataclass(frozen=True, eq=False)
class PairedFunction:
    """An order-preserving / order-reversing pair on one down-set."""

    mu: MonotoneFunction
    nu: MonotoneFunction

    def __post_init__(self):
        if self.mu.direction != PRESERVING or self.nu.direction != REVERSING:
            raise InvalidInputError(
                "pair must be (preserving, reversing)")
        if self.mu.base != self.nu.base:
            raise InvalidInputError("pair components at different bases")

    @property
    def base(self):
        return self.mu.base

    def equivalent(self, other, eps=EPS_DEFAULT):
        """Pairs are identified when their componentwise sums agree."""
        if self.base != other.base:
            return False
        for k in self.mu.values:
            mine = self.mu.values[k] + self.nu.values[k]
            theirs = other.mu.values[k] + other.nu.values[k]
            if abs(mine - theirs) > eps:
                return False
        return True


class KElement:
    """Element of the group completion of order-reversing functions.

    Stored by the canonical representative: the pointwise difference of the
    formal pair.  The difference need not be monotone.
    """

    __slots__ = ("poset", "base", "values")

    def __init__(self, poset, base, values):
        if set(values) != set(poset.down_set(base)):
            raise InvalidInputError("element must cover the whole down-set",
                                    base=base)
        self.poset = poset
        self.base = base
        self.values = {k: float(v) for k, v in values.items()}

    def __repr__(self):
        return "KElement(base=%r, %r)" % (
            self.base, dict(sorted(self.values.items())))

    def _check_base(self, other):
        if self.base != other.base:
            raise InvalidInputError("elements at different bases",
                                    left=self.base, right=other.base)

    def add(self, other):
        self._check_base(other)
        return KElement(self.poset, self.base,
                        {k: self.values[k] + other.values[k]
                         for k in self.values})

    def negate(self):
        return KElement(self.poset, self.base,
                        {k: -v for k, v in self.values.items()})

    def subtract(self, other):
        return self.add(other.negate())

    def equal(self, other, eps=EPS_DEFAULT):
        self._check_base(other)
        return all(abs(self.values[k] - other.values[k]) <= eps
                   for k in self.values)

    def is_zero(self, eps=EPS_DEFAULT):
        return all(abs(v) <= eps for v in self.values.values())


def k_embed(func):
    """Monoid embedding of an order-reversing function into the completion."""
    if func.direction != REVERSING:
        raise InvalidInputError("only order-reversing functions embed")
    return KElement(func.poset, func.base, dict(func.values))


def k_from_pair(plus, minus):
    """Formal difference plus - minus of two order-reversing functions."""
    if (plus.direction, minus.direction) != (REVERSING, REVERSING):
        raise InvalidInputError("formal pairs take order-reversing functions")
    if plus.base != minus.base:
        raise InvalidInputError("pair at different bases")
    return KElement(plus.poset, plus.base,
                    plus.pointwise(minus, lambda a, b: a - b))


def pair_to_k(paired):
    """The isomorphism class of a (preserving, reversing) pair.

    Sends (mu, nu) to the formal difference [nu, -mu], whose canonical
    representative is the pointwise sum nu + mu.  Equivalent pairs (equal
    componentwise sums) land on the same element, and distinct classes stay
    distinct.
    """
    return k_from_pair(paired.nu, paired.mu.negate())


# ---------------------------------------------------------------------------
# Quantity arrows.


def arrow_value(a, poset, base_key, atom_index, at_key, mode,
                eps=EPS_DEFAULT, _cache=None):
    """Single arrow value: the daseinised operator seen by a restricted point."""
    element = SpectralElement(poset[base_key], atom_index)
    restricted = restrict_element(element, poset[at_key], eps)
    if _cache is not None and at_key in _cache:
        op = _cache[at_key]
    else:
        op = daseinise_operator(a, poset[at_key], mode, eps)
        if _cache is not None:
            _cache[at_key] = op
    return complex(evaluate(restricted, op, eps)).real


class QuantityArrow:
    """Natural transformation from the spectral presheaf to a value presheaf.

    ``components[V][i]`` is the monotone function assigned to atom ``i`` of
    context V (a PairedFunction in mode "paired").  Naturality, the
    compatibility of these functions with restriction of spectrum points, is
    asserted on construction.
    """

    def __init__(self, operator, poset, mode, components):
        self.operator = operator
        self.poset = poset
        self.mode = mode
        self.components = components
        self._assert_natural()

    def _assert_natural(self):
        for sub_key, super_key in self.poset.pairs():
            table = self.poset.restriction(sub_key, super_key)
            for i in range(self.poset[super_key].n_atoms):
                upstairs = self.components[super_key][i]
                downstairs = self.components[sub_key][table[i]]
                if self.mode == "paired":
                    ok = (upstairs.mu.restrict(sub_key).values
                          == downstairs.mu.values
                          and upstairs.nu.restrict(sub_key).values
                          == downstairs.nu.values)
                else:
                    ok = upstairs.restrict(sub_key).values == downstairs.values
                if not ok:
                    raise InternalConsistencyError(
                        "arrow components break naturality",
                        sub=sub_key, sup=super_key, atom=i)

    def __getitem__(self, key):
        return self.components[key]

    def to_json(self):
        from .hermitian import matrix_to_json

        def func_json(f):
            return {k: f.values[k] for k in sorted(f.values)}

        comp = {}
        for key in self.poset.keys():
            comp[key] = {}
            for i, f in enumerate(self.components[key]):
                if self.mode == "paired":
                    comp[key][str(i)] = {"inner": func_json(f.mu),
                                         "outer": func_json(f.nu)}
                else:
                    comp[key][str(i)] = func_json(f)
        return {"operator": matrix_to_json(self.operator),
                "mode": self.mode,
                "components": comp}


def quantity_arrow(a, poset, mode="outer", eps=EPS_DEFAULT):
    """Build the arrow of a Hermitian operator over a context poset."""
    if mode not in ("outer", "inner", "paired"):
        raise InvalidInputError("mode must be outer, inner or paired",
                                mode=mode)
    a = require_hermitian(a, eps)
    caches = {"outer": {}, "inner": {}}
    directions = {"outer": REVERSING, "inner": PRESERVING}

    def build(base_key, atom_index, op_mode):
        values = {
            at_key: arrow_value(a, poset, base_key, atom_index, at_key,
                                op_mode, eps, _cache=caches[op_mode])
            for at_key in poset.down_set(base_key)
        }
        return MonotoneFunction(poset, base_key, values, directions[op_mode])

    components = {}
    for key in poset.keys():
        funcs = []
        for i in range(poset[key].n_atoms):
            if mode == "paired":
                funcs.append(PairedFunction(mu=build(key, i, "inner"),
                                            nu=build(key, i, "outer")))
            else:
                funcs.append(build(key, i, mode))
        components[key] = tuple(funcs)
    return QuantityArrow(a, poset, mode, components)


# ---------------------------------------------------------------------------
# Intrinsic dispersion.


def shift_nonnegative(a, eps=EPS_DEFAULT):
    """Return (a - min_eig * 1, min_eig): a positive shift helper.

    Never applied implicitly by :func:`dispersion`; callers decide whether a
    shifted operator still answers their question.
    """
    a = require_hermitian(a, eps)
    low = min(eigendecompose(a, eps).eigenvalues)
    return a - low * identity(a.shape[0]), low


def dispersion(a, poset, eps=EPS_DEFAULT):
    """Per-(context, spectrum point) dispersion of a positive operator.

    Defined as the completion-group difference of the outer arrow of the
    square and the pointwise square of the outer arrow.  Squaring an
    order-reversing nonnegative function is again order-reversing, which is
    why positivity is demanded; for genuinely positive input the difference
    turns out to vanish identically, since outer approximation via spectral
    families commutes with monotone spectral calculus (see the tests).
    """
    a = require_hermitian(a, eps)
    low = min(eigendecompose(a, eps).eigenvalues)
    if low < -eps:
        raise PreconditionError(
            "dispersion needs a positive operator: squaring value functions "
            "of an indefinite operator does not preserve order-reversal",
            min_eigenvalue=low)
    arrow_sq = quantity_arrow(a @ a, poset, "outer", eps)
    arrow = quantity_arrow(a, poset, "outer", eps)
    out = {}
    for key in poset.keys():
        for i in range(poset[key].n_atoms):
            f_sq = arrow_sq[key][i]
            f = arrow[key][i]
            squared = MonotoneFunction(
                poset, key, {k: v * v for k, v in f.values.items()}, REVERSING)
            out[(key, i)] = k_embed(f_sq).subtract(k_embed(squared))
    return out
