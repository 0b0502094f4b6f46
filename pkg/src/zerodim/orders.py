"""Term orders on exponent tuples.

An order is exposed as a sort key: ``order.key(exp)`` returns a value that
compares the way the power products do, so ``max(exps, key=order.key)`` picks
the head term.  Every order here is total, multiplicative and has 1 as its
minimum, which makes it admissible for Buchberger's algorithm.

Variable priority is positional: the leftmost entry of the exponent tuple is
the most significant variable of its block.
"""

from __future__ import annotations

from dataclasses import dataclass


class TermOrder:
    def key(self, exp):
        raise NotImplementedError

    def compare(self, a, b):
        """-1, 0 or 1 as a precedes, equals or follows b."""
        ka, kb = self.key(a), self.key(b)
        if ka < kb:
            return -1
        return 1 if ka > kb else 0


@dataclass(frozen=True)
class Lex(TermOrder):
    def key(self, exp):
        return exp

    def __str__(self):
        return "lex"


@dataclass(frozen=True)
class GrLex(TermOrder):
    def key(self, exp):
        return (sum(exp), exp)

    def __str__(self):
        return "grlex"


@dataclass(frozen=True)
class GrevLex(TermOrder):
    def key(self, exp):
        # Ties in total degree break on the rightmost variable in which the
        # monomials differ, with the *smaller* exponent winning.
        return (sum(exp), tuple(-e for e in reversed(exp)))

    def __str__(self):
        return "grevlex"


@dataclass(frozen=True)
class Block(TermOrder):
    """Compare exp[:split] by ``first``; break ties by ``rest`` on exp[split:].

    ``Block(1, Lex(), inner)`` is the classical x0 >> x order used for
    homogenized ideals; nesting blocks builds elimination orders.
    """

    split: int
    first: TermOrder
    rest: TermOrder

    def key(self, exp):
        return (self.first.key(exp[: self.split]), self.rest.key(exp[self.split :]))

    def __str__(self):
        return f"block({self.split}; {self.first}, {self.rest})"


@dataclass(frozen=True)
class ModuleOrder:
    """Position-over-term order on rank-2 module elements, e1 above e2.

    Any term in the first component precedes any term in the second; within a
    component, terms compare by ``inner``.
    """

    inner: TermOrder

    def __str__(self):
        return f"pot(e1>e2; {self.inner})"


ORDERS_BY_NAME = {"lex": Lex(), "grlex": GrLex(), "grevlex": GrevLex()}
