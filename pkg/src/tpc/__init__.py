"""Theory presentation combinators: a small elaborator for modular theory graphs."""

__version__ = "0.1.0"
