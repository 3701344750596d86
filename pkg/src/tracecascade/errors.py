"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` used by the command line
front end when it prints ``error: <code>: <detail>``.
"""

from __future__ import annotations


class TraceCascadeError(Exception):
    code = "error"


class AlphabetError(TraceCascadeError):
    code = "bad-alphabet"


class UnknownLetter(TraceCascadeError):
    code = "unknown-letter"

    def __init__(self, letter):
        super().__init__(f"letter {letter!r} is not in the alphabet")
        self.letter = letter


class UnknownEvent(TraceCascadeError):
    code = "unknown-event"

    def __init__(self, event):
        super().__init__(f"no event with id {event!r}")
        self.event = event


class AlphabetMismatch(TraceCascadeError):
    code = "alphabet-mismatch"


class NoAcceptingSet(TraceCascadeError):
    code = "no-accepting-set"


class NotAMap(TraceCascadeError):
    code = "not-a-map"

    def __init__(self, letter):
        super().__init__(f"image of {letter!r} is not a loc({letter!r})-map")
        self.letter = letter


class CommutationViolation(TraceCascadeError):
    code = "commutation-violation"

    def __init__(self, a, b, x):
        super().__init__(f"psi({b!r}, phi({a!r})({x!r})) != psi({b!r}, {x!r})")
        self.a, self.b, self.x = a, b, x


class HypothesisViolation(TraceCascadeError):
    code = "hypothesis-violation"

    def __init__(self, a, s, s2):
        super().__init__(f"letter {a!r}: states {s!r} and {s2!r} agree on loc but phi2 differs")
        self.a, self.s, self.s2 = a, s, s2


class SearchBudgetExceeded(TraceCascadeError):
    code = "search-budget"


class NotAcyclic(TraceCascadeError):
    code = "not-acyclic"


class WrongFragment(TraceCascadeError):
    code = "wrong-fragment"


class NotResetChain(TraceCascadeError):
    code = "not-reset-chain"


class FormulaSyntaxError(TraceCascadeError):
    code = "syntax"

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class InputError(TraceCascadeError):
    code = "input"
