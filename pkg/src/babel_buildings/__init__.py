"""Exact geometry of lex-ordered hyper-real apartments and SL2 over F_q((t1))((t2))."""

__version__ = "0.1.0"
