"""Global-section search over a context poset.

A global section picks one spectrum point per context so that every
inclusion restricts the choice upstairs to the choice downstairs.  Over a
family of measurement bases closed under intersection, the nonexistence of
such a section is the finite, poset-relative form of the Kochen-Specker
obstruction: the emptiness is computed by exhaustive backtracking, never
assumed.

Contexts are assigned from the most atoms downward, so each assignment of a
maximal context immediately pins every context below it; conflicts between
overlapping bases therefore surface as early as possible.
"""

import time
import warnings
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .contexts import intersect


@dataclass
class SectionSearchResult:
    """Sections found plus the statistics needed to interpret them.

    ``exhausted`` distinguishes a certified empty result from a search cut
    short by ``limit``.  ``obstruction`` names the first (context,
    subcontext) pair whose constraints became unsatisfiable, as a hint for
    reading failed datasets; it is None when the search never backtracked.
    """

    sections: List[dict]
    exhausted: bool
    nodes: int = 0
    backtracks: int = 0
    elapsed: float = 0.0
    closed: bool = True
    obstruction: Optional[Tuple[str, str]] = None

    def to_json(self):
        return {
            "sections": [
                {k: section[k] for k in sorted(section)}
                for section in self.sections
            ],
            "exhausted": self.exhausted,
            "nodes": self.nodes,
            "backtracks": self.backtracks,
            "closed": self.closed,
            "obstruction": list(self.obstruction) if self.obstruction else None,
        }


def poset_is_intersection_closed(poset):
    """Verify that every pairwise intersection is present or trivial."""
    keys = poset.keys()
    for i, k1 in enumerate(keys):
        for k2 in keys[i + 1:]:
            meet = intersect(poset[k1], poset[k2], poset.eps)
            if meet.is_trivial and meet.key not in poset:
                continue
            if meet.key not in poset:
                return False
    return True


def section_is_compatible(poset, section):
    """Independent re-check of the defining invariant of a section."""
    for sub_key, super_key in poset.pairs():
        table = poset.restriction(sub_key, super_key)
        if table[section[super_key]] != section[sub_key]:
            return False
    return True


def find_global_sections(poset, limit=16):
    """Backtracking search for global sections, up to ``limit`` of them.

    Returns every section when fewer than ``limit`` exist, with
    ``exhausted=True`` certifying completeness; an unclosed poset is
    searched anyway but flagged, since missing intersections can make an
    obstruction vacuously absent.
    """
    start = time.monotonic()
    closed = poset_is_intersection_closed(poset)
    if not closed:
        warnings.warn(
            "poset is not closed under intersection: overlapping contexts "
            "share no subcontext, so an obstruction may be vacuously absent",
            stacklevel=2)

    order = sorted(poset.keys(),
                   key=lambda k: (-poset[k].n_atoms, k))
    position = {k: i for i, k in enumerate(order)}
    # per context: the strictly smaller contexts it pins, with tables
    pins = {
        k: [(sub, poset.restriction(sub, k)) for sub in poset.strictly_below(k)]
        for k in order
    }

    forced = {}
    assignment = {}
    found = []
    stats = {"nodes": 0, "backtracks": 0}
    obstruction = [None]
    limit = max(0, int(limit))
    hit_limit = [False]

    def propagate(key, atom, touched):
        for sub, table in pins[key]:
            want = table[atom]
            have = forced.get(sub)
            if have is None:
                forced[sub] = want
                touched.append(sub)
            elif have != want:
                if obstruction[0] is None:
                    obstruction[0] = (key, sub)
                return False
        return True

    def descend(depth):
        if depth == len(order):
            found.append(dict(assignment))
            if len(found) >= limit:
                hit_limit[0] = True
            return
        key = order[depth]
        pinned = forced.get(key)
        domain = (pinned,) if pinned is not None else range(poset[key].n_atoms)
        for atom in domain:
            stats["nodes"] += 1
            touched = []
            assignment[key] = atom
            if propagate(key, atom, touched):
                descend(depth + 1)
            else:
                stats["backtracks"] += 1
            for sub in touched:
                del forced[sub]
            del assignment[key]
            if hit_limit[0]:
                return

    if limit > 0:
        descend(0)
    else:
        hit_limit[0] = True

    canonical = sorted(
        found, key=lambda sec: tuple(sec[k] for k in poset.keys()))
    return SectionSearchResult(
        sections=canonical,
        exhausted=not hit_limit[0],
        nodes=stats["nodes"],
        backtracks=stats["backtracks"],
        elapsed=time.monotonic() - start,
        closed=closed,
        obstruction=obstruction[0],
    )
