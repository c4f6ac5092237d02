"""lexvote: word sense disambiguation with bagged decision tree ensembles over lexical features."""

__version__ = "1.0.0"
