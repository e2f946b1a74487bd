"""Algebra, combinatorics and verification services for the ParQSym toolkit."""
