"""corrcalc: finite-category correspondence calculus with an exact
six-functor instance over finite sets."""

__version__ = "0.1.0"
