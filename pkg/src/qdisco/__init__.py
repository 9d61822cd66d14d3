"""Few-shot DisCoCat QNLP: parse, compile, simulate, train, diagnose."""

__version__ = "0.1.0"
