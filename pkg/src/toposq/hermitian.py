"""Dense complex Hermitian linear algebra at small dimension.

Everything downstream (contexts, daseinisation, quantity arrows) is built on
the handful of primitives here: eigendecomposition with eigenvalue
clustering, spectral projections for finite unions of real intervals, and
right-continuous finite spectral families.

Matrices are plain ``numpy.ndarray`` of ``complex128``.  All functions are
pure; returned arrays are freshly allocated and never aliased to inputs.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from ._kernel import jacobi_eigh

EPS_DEFAULT = 1e-9


def as_matrix(obj):
    """Coerce to a square complex128 matrix; raises on wrong shape."""
    a = np.asarray(obj, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInputError(
            "expected a square matrix, got shape %r" % (a.shape,)
        )
    return a


def max_abs(a):
    """Entrywise max-norm."""
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def is_hermitian(a, eps=EPS_DEFAULT):
    # tolerance scales with the matrix so large operators are not rejected
    # for rounding noise proportional to their magnitude
    return max_abs(a - a.conj().T) <= eps * max(1.0, max_abs(a))


def require_hermitian(a, eps=EPS_DEFAULT):
    a = as_matrix(a)
    if not is_hermitian(a, eps):
        raise InvalidInputError(
            "matrix is not Hermitian within tolerance",
            deviation=max_abs(a - a.conj().T),
        )
    return a


def hermitize(a):
    """Average away the anti-Hermitian rounding noise of a near-Hermitian matrix."""
    return (a + a.conj().T) / 2.0


def is_projection(p, eps=EPS_DEFAULT):
    p = as_matrix(p)
    return is_hermitian(p, eps) and max_abs(p @ p - p) <= eps


def require_projection(p, eps=EPS_DEFAULT):
    p = require_hermitian(p, eps)
    if max_abs(p @ p - p) > eps:
        raise InvalidInputError(
            "matrix is not idempotent within tolerance",
            deviation=max_abs(p @ p - p),
        )
    return p


def identity(dim):
    return np.eye(dim, dtype=np.complex128)


def zeros(dim):
    return np.zeros((dim, dim), dtype=np.complex128)


def projection_rank(p):
    """Rank of a projection, read off its trace."""
    return int(round(float(np.trace(p).real)))


def matrix_to_json(a):
    a = as_matrix(a)
    return {
        "dim": a.shape[0],
        "re": [[float(x) for x in row] for row in a.real],
        "im": [[float(x) for x in row] for row in a.imag],
    }


def matrix_from_json(obj):
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError("malformed matrix object: %s" % exc)
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise InvalidInputError(
            "matrix parts do not match declared dim",
            dim=dim, re_shape=list(re.shape), im_shape=list(im.shape),
        )
    return re + 1j * im


# ---------------------------------------------------------------------------
# Borel sets: finite unions of disjoint real intervals.


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidInputError("interval endpoints out of order",
                                    lo=self.lo, hi=self.hi)
        if self.lo == self.hi and (self.lo_open or self.hi_open):
            raise InvalidInputError("degenerate interval must be closed",
                                    lo=self.lo)

    def contains(self, x):
        if self.lo_open:
            if x <= self.lo:
                return False
        elif x < self.lo:
            return False
        if self.hi_open:
            return x < self.hi
        return x <= self.hi

    def precedes(self, other):
        """True when self lies entirely to the left of other (disjoint)."""
        if self.hi < other.lo:
            return True
        return self.hi == other.lo and (self.hi_open or other.lo_open)


@dataclass(frozen=True)
class BorelSet:
    """Sorted, pairwise disjoint intervals."""

    intervals: tuple = field(default=())

    def __post_init__(self):
        ivs = tuple(self.intervals)
        object.__setattr__(self, "intervals", ivs)
        for a, b in zip(ivs, ivs[1:]):
            if not a.precedes(b):
                raise InvalidInputError(
                    "intervals must be sorted and pairwise disjoint",
                    left=[a.lo, a.hi], right=[b.lo, b.hi],
                )

    @classmethod
    def empty(cls):
        return cls(())

    @classmethod
    def closed(cls, lo, hi):
        return cls((Interval(float(lo), float(hi)),))

    @classmethod
    def point(cls, x):
        return cls.closed(x, x)

    def contains(self, x):
        return any(iv.contains(x) for iv in self.intervals)

    def union(self, other):
        """Union with a set known to be disjoint from this one."""
        return BorelSet(tuple(sorted(self.intervals + other.intervals,
                                     key=lambda iv: (iv.lo, iv.hi))))

    def to_json(self):
        return [
            {"lo": iv.lo, "lo_open": iv.lo_open, "hi": iv.hi, "hi_open": iv.hi_open}
            for iv in self.intervals
        ]

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, list):
            raise InvalidInputError("Borel set must be a list of intervals")
        ivs = []
        for item in obj:
            try:
                ivs.append(Interval(float(item["lo"]), float(item["hi"]),
                                    bool(item.get("lo_open", False)),
                                    bool(item.get("hi_open", False))))
            except (KeyError, TypeError, ValueError) as exc:
                raise InvalidInputError("malformed interval: %s" % exc)
        return cls(tuple(sorted(ivs, key=lambda iv: (iv.lo, iv.hi))))


# ---------------------------------------------------------------------------
# Eigendecomposition with clustering.


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Strictly increasing eigenvalues with their eigenprojections."""

    eigenvalues: tuple
    projections: tuple

    @property
    def dim(self):
        return self.projections[0].shape[0]

    def validate(self, eps=EPS_DEFAULT):
        """Check orthogonality, completeness and strict eigenvalue order."""
        ps = self.projections
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                if max_abs(ps[i] @ ps[j]) > eps:
                    raise InvalidInputError("eigenprojections not orthogonal",
                                            i=i, j=j)
        if max_abs(sum(ps) - identity(self.dim)) > eps:
            raise InvalidInputError("eigenprojections do not resolve identity")
        if any(a >= b for a, b in zip(self.eigenvalues, self.eigenvalues[1:])):
            raise InvalidInputError("eigenvalues not strictly increasing")

    def reconstruct(self):
        out = zeros(self.dim)
        for lam, p in zip(self.eigenvalues, self.projections):
            out = out + lam * p
        return out


def eigendecompose(a, eps=EPS_DEFAULT):
    """Eigendecompose a Hermitian matrix, merging near-degenerate eigenvalues.

    Numerical eigenvalues closer than ``eps * max(1, |a|_max)`` are merged
    into a single eigenprojection, so exactly degenerate spectra produce one
    projection per eigenspace instead of an arbitrary split.
    """
    a = require_hermitian(a, eps)
    scale = max(1.0, max_abs(a))
    w, v = jacobi_eigh(a, tol=eps * eps * scale)
    gap = eps * scale

    clusters = []  # list of (index range) pairs into the sorted spectrum
    start = 0
    for i in range(1, len(w)):
        if w[i] - w[i - 1] > gap:
            clusters.append((start, i))
            start = i
    clusters.append((start, len(w)))

    eigenvalues = []
    projections = []
    for lo, hi in clusters:
        cols = v[:, lo:hi]
        p = hermitize(cols @ cols.conj().T)
        eigenvalues.append(float(np.mean(w[lo:hi])))
        projections.append(p)
    return SpectralDecomposition(tuple(eigenvalues), tuple(projections))


def spectral_projection(a, delta, eps=EPS_DEFAULT):
    """Projection onto the eigenspaces of ``a`` with eigenvalue in ``delta``.

    Returns the zero projection when no eigenvalue lies in the set.
    """
    dec = eigendecompose(a, eps)
    out = zeros(dec.dim)
    for lam, p in zip(dec.eigenvalues, dec.projections):
        if delta.contains(lam):
            out = out + p
    return out


# ---------------------------------------------------------------------------
# Spectral families.


@dataclass(frozen=True, eq=False)
class SpectralFamily:
    """Finite right-continuous increasing family of projections.

    ``projections[j]`` is the value of the family on
    ``[thresholds[j], thresholds[j+1])``; the family is zero below the first
    threshold and the last projection is the identity.
    """

    thresholds: tuple
    projections: tuple

    @property
    def dim(self):
        return self.projections[0].shape[0]

    def validate(self, eps=EPS_DEFAULT):
        if not self.thresholds:
            raise InvalidInputError("spectral family must be non-empty")
        if any(a >= b for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise InvalidInputError("thresholds not strictly increasing")
        for j, (e, f) in enumerate(zip(self.projections, self.projections[1:])):
            if max_abs(e @ f - e) > eps:
                raise InvalidInputError("spectral family not monotone", index=j)
        if max_abs(self.projections[-1] - identity(self.dim)) > eps:
            raise InvalidInputError("spectral family does not reach identity")

    def at(self, lam):
        """Family value at a real parameter (zero below the first threshold)."""
        out = zeros(self.dim)
        for t, p in zip(self.thresholds, self.projections):
            if t <= lam:
                out = p
            else:
                break
        return out.copy()


def spectral_family(a, eps=EPS_DEFAULT):
    """Spectral family of a Hermitian matrix: cumulative eigenprojections."""
    dec = eigendecompose(a, eps)
    running = zeros(dec.dim)
    cumulative = []
    for p in dec.projections:
        running = running + p
        cumulative.append(hermitize(running))
    return SpectralFamily(tuple(dec.eigenvalues), tuple(cumulative))


def operator_from_family(family, eps=EPS_DEFAULT):
    """Reconstruct the Hermitian matrix a spectral family encodes.

    Inverse of :func:`spectral_family` up to rounding noise.  Jumps whose
    projection difference vanishes contribute nothing, so families obtained
    by manipulating projections at fixed thresholds stay well-defined.
    """
    family.validate(eps)
    prev = zeros(family.dim)
    out = zeros(family.dim)
    for lam, p in zip(family.thresholds, family.projections):
        out = out + lam * (p - prev)
        prev = p
    return hermitize(out)
