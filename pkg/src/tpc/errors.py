"""Exception hierarchy.

Every error carries a short ``rule`` naming the judgement or construction
condition that failed, and optionally a source position.
"""

from __future__ import annotations


class TpcError(Exception):
    """Base class for all user-facing errors."""

    rule = "error"

    def __init__(self, message: str, *, line: int | None = None, col: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def at(self, line: int | None, col: int | None) -> "TpcError":
        """Attach a position unless one is already present."""
        if self.line is None and line is not None:
            self.line, self.col = line, col
        return self

    @property
    def kind(self) -> str:
        return type(self).__name__

    def __str__(self) -> str:
        return self.message


# kernel judgements
class UnboundName(TpcError):
    rule = "scope"


class TypeMismatch(TpcError):
    rule = "typing"


class KindMismatch(TpcError):
    rule = "kinding"


class IllTyped(TpcError):
    rule = "convertibility precondition"


# presentations
class DuplicateName(TpcError):
    rule = "context formation (fresh name)"


class IllFormedClassifier(TpcError):
    rule = "context formation (classifier)"


# morphisms
class MissingAssignment(TpcError):
    rule = "morphism formation (missing symbol)"


class ExtraAssignment(TpcError):
    rule = "morphism formation (extra symbol)"


class SourceTargetMismatch(TpcError):
    rule = "composition (source/target)"


class NotAnEmbedding(TpcError):
    rule = "embedding conditions"


# constructions
class NotInjective(TpcError):
    rule = "renaming injectivity"


class NameCollision(TpcError):
    rule = "renaming freshness"


class SharedBaseMismatch(TpcError):
    rule = "shared base"


class RenamingConditionViolated(TpcError):
    rule = "renaming condition"

    def __init__(self, message: str, left: str = "", right: str = "", **kw):
        super().__init__(message, **kw)
        self.left = left
        self.right = right


class RenamingOutOfScope(TpcError):
    """A mixin's right renaming touches a symbol outside the extension."""

    rule = "renaming support"


class NotDisjoint(TpcError):
    rule = "mixin disjointness"


class SquareDoesNotCommute(TpcError):
    rule = "mediating view precondition"


# frontend
class LexError(TpcError):
    rule = "lexical syntax"


class ParseError(TpcError):
    rule = "grammar"


class DuplicateDefinition(TpcError):
    rule = "definition names distinct"


class UnknownReference(TpcError):
    rule = "references to earlier definitions"


# elaborator
class SpecificationError(TpcError):
    rule = "undefined semantics"


class TpcTypeError(TpcError):
    """Raised by the combinator type system; ``rule`` is set per instance."""

    def __init__(self, rule: str, message: str, **kw):
        super().__init__(message, **kw)
        self.rule = rule


class UnknownDefinition(TpcError):
    rule = "known definition"
