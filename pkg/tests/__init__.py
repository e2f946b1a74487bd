"""Tests for the ParQSym toolkit."""
