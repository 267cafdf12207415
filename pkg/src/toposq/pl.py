"""Propositional language: parser, classical and sieve-valued semantics.

Surface syntax is ASCII: atoms ``p0, p1, ...``, negation ``~``, conjunction
``&``, disjunction ``|``, implication ``->``.  Binding strength is
``~ > & > | > ->`` with right-associative implication; the printer emits
fully parenthesized text, and ``parse(print(s)) == s``.

Classical evaluation lifts a {0,1} atom valuation through the usual truth
functions.  Heyting evaluation interprets atoms as sieves at one base
context and the connectives as the sieve algebra operations, so over a
one-context poset it collapses to the classical case.
"""

import re
from dataclasses import dataclass
from itertools import product

from .errors import InvalidInputError, PLSyntaxError


@dataclass(frozen=True)
class Atom:
    index: int


@dataclass(frozen=True)
class Not:
    operand: "Sentence"


@dataclass(frozen=True)
class And:
    left: "Sentence"
    right: "Sentence"


@dataclass(frozen=True)
class Or:
    left: "Sentence"
    right: "Sentence"


@dataclass(frozen=True)
class Implies:
    left: "Sentence"
    right: "Sentence"


Sentence = (Atom, Not, And, Or, Implies)

_TOKEN = re.compile(r"\s*(p\d+|->|[~&|()])")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise PLSyntaxError("unknown token %r" % stripped[0],
                                position=len(text) - len(stripped))
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, length):
        self.tokens = tokens
        self.pos = 0
        self.length = length

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][0]
        return None

    def here(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return self.length

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def implication(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        node = self.conjunction()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.conjunction())
        return node

    def conjunction(self):
        node = self.negation()
        while self.peek() == "&":
            self.take()
            node = And(node, self.negation())
        return node

    def negation(self):
        if self.peek() == "~":
            self.take()
            return Not(self.negation())
        return self.primary()

    def primary(self):
        tok = self.peek()
        if tok is None:
            raise PLSyntaxError("unexpected end of sentence",
                                position=self.length)
        if tok == "(":
            self.take()
            node = self.implication()
            if self.peek() != ")":
                raise PLSyntaxError("unbalanced parentheses",
                                    position=self.here())
            self.take()
            return node
        if tok.startswith("p"):
            text, _ = self.take()
            return Atom(int(text[1:]))
        raise PLSyntaxError("unexpected token %r" % tok, position=self.here())


def parse(text):
    """Parse surface text into a sentence tree."""
    parser = _Parser(_tokenize(text), len(text))
    node = parser.implication()
    if parser.pos != len(parser.tokens):
        raise PLSyntaxError("unexpected token %r" % parser.peek(),
                            position=parser.here())
    return node


def pretty(sentence):
    """Fully parenthesized rendering; inverse of :func:`parse`."""
    if isinstance(sentence, Atom):
        return "p%d" % sentence.index
    if isinstance(sentence, Not):
        return "~" + pretty(sentence.operand)
    ops = {And: "&", Or: "|", Implies: "->"}
    op = ops[type(sentence)]
    return "(%s %s %s)" % (pretty(sentence.left), op, pretty(sentence.right))


def atoms_of(sentence):
    """Indices of the atoms occurring in a sentence, sorted."""
    if isinstance(sentence, Atom):
        return {sentence.index}
    if isinstance(sentence, Not):
        return atoms_of(sentence.operand)
    return atoms_of(sentence.left) | atoms_of(sentence.right)


# ---------------------------------------------------------------------------
# Classical semantics.


def eval_classical(sentence, valuation):
    """Evaluate under a {0,1} atom valuation."""
    if isinstance(sentence, Atom):
        if sentence.index not in valuation:
            raise InvalidInputError("unbound atom", atom=sentence.index)
        return 1 if valuation[sentence.index] else 0
    if isinstance(sentence, Not):
        return 1 - eval_classical(sentence.operand, valuation)
    left = eval_classical(sentence.left, valuation)
    right = eval_classical(sentence.right, valuation)
    if isinstance(sentence, And):
        return left & right
    if isinstance(sentence, Or):
        return left | right
    return 0 if (left and not right) else 1


def is_tautology(sentence):
    """True when every atom valuation satisfies the sentence."""
    names = sorted(atoms_of(sentence))
    for bits in product((0, 1), repeat=len(names)):
        if not eval_classical(sentence, dict(zip(names, bits))):
            return False
    return True


# ---------------------------------------------------------------------------
# Heyting semantics.


def eval_heyting(sentence, valuation, poset):
    """Evaluate with atoms valued as sieves at one shared base context."""
    bases = {s.base for s in valuation.values()}
    if len(bases) > 1:
        raise InvalidInputError("valuation sieves at mixed bases",
                                bases=sorted(bases))

    def rec(node):
        if isinstance(node, Atom):
            if node.index not in valuation:
                raise InvalidInputError("unbound atom", atom=node.index)
            return valuation[node.index]
        if isinstance(node, Not):
            return rec(node.operand).negate()
        left = rec(node.left)
        right = rec(node.right)
        if isinstance(node, And):
            return left.meet(right)
        if isinstance(node, Or):
            return left.join(right)
        return left.implies(right)

    return rec(sentence)


# The twelve sentence forms whose instances axiomatize classical logic;
# dropping the last (excluded middle) leaves the intuitionistic system.
CL_AXIOM_FORMS = (
    lambda a, b, c: Implies(a, And(a, a)),
    lambda a, b, c: Implies(And(a, b), And(b, a)),
    lambda a, b, c: Implies(Implies(a, b), Implies(And(a, c), And(b, c))),
    lambda a, b, c: Implies(And(Implies(a, b), Implies(b, c)), Implies(a, c)),
    lambda a, b, c: Implies(b, Implies(a, b)),
    lambda a, b, c: Implies(And(a, Implies(a, b)), b),
    lambda a, b, c: Implies(a, Or(a, b)),
    lambda a, b, c: Implies(Or(a, b), Or(b, a)),
    lambda a, b, c: Implies(And(Implies(a, c), Implies(b, c)),
                            Implies(Or(a, b), c)),
    lambda a, b, c: Implies(Not(a), Implies(a, b)),
    lambda a, b, c: Implies(And(Implies(a, b), Implies(a, Not(b))), Not(a)),
    lambda a, b, c: Or(a, Not(a)),
)


# ---------------------------------------------------------------------------
# Classical representation over a finite state space.


@dataclass(frozen=True)
class ClassicalModel:
    """A finite state set with one real-valued quantity."""

    states: tuple
    quantity: dict

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        missing = [s for s in self.states if s not in self.quantity]
        if missing:
            raise InvalidInputError("quantity must cover every state",
                                    missing=missing)


def classical_representation(model, delta):
    """States whose quantity value falls in the Borel set; the preimage."""
    return tuple(s for s in model.states
                 if delta.contains(model.quantity[s]))


def classical_truth(model, subset, state):
    """Two-valued truth of membership of a state in a represented subset."""
    if state not in model.states:
        raise InvalidInputError("unknown state", state=state)
    return 1 if state in subset else 0
