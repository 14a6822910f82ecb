"""Exception hierarchy shared by every bracketforge module.

All domain errors derive from :class:`BracketForgeError`, which is a
``ValueError`` so callers that only care about "bad input" can catch that.
The CLI maps these to exit code 1.
"""


class BracketForgeError(ValueError):
    pass


# signatures

class InvalidSignature(BracketForgeError):
    pass


class ParityError(InvalidSignature):
    def __init__(self, round_index, alive, entrants):
        self.round_index = round_index
        super().__init__(
            f"round {round_index}: {alive} survivors + {entrants} entrants is odd"
        )


class NoChampion(InvalidSignature):
    pass


class TooFewTeams(InvalidSignature):
    pass


class EmptyRound(InvalidSignature):
    pass


class GuardExceeded(BracketForgeError):
    pass


class NotPowerOfTwo(BracketForgeError):
    pass


# builder / flowchart

class NotABracket(BracketForgeError):
    pass


class DepthExceedsRounds(BracketForgeError):
    pass


class LengthMismatch(BracketForgeError):
    pass


class PlaceOverlap(BracketForgeError):
    pass


class DanglingSource(BracketForgeError):
    pass


class OddTeamCount(BracketForgeError):
    pass


class UnknownMatch(BracketForgeError):
    pass


class InvalidFormat(BracketForgeError):
    """A multibracket failed flowchart validation."""

    def __init__(self, report, message=None):
        self.report = report
        super().__init__(message or f"invalid format: {report.summary()}")


# dsl

class FormatSyntaxError(BracketForgeError):
    def __init__(self, line, col, expected, found=None):
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        self.found = found
        exp = ", ".join(self.expected) if self.expected else "?"
        got = f", found {found}" if found is not None else ""
        super().__init__(f"{line}:{col}: expected {exp}{got}")


class DuplicateIdentifier(BracketForgeError):
    pass


class UnknownReference(BracketForgeError):
    pass


class ValidationFailed(InvalidFormat):
    pass


class MixedKind(BracketForgeError):
    pass


# engine

class BadMatrix(BracketForgeError):
    pass


class NonPositiveStrength(BracketForgeError):
    pass


class StateCapExceeded(BracketForgeError):
    pass


class ZeroReps(BracketForgeError):
    pass


# metrics

class ShapeMismatch(BracketForgeError):
    pass


class MixedSizes(BracketForgeError):
    pass
