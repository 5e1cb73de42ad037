"""Census of abelian varieties over finite fields: exact counts and bounds."""

__version__ = "0.1.0"
