"""Tests of the tails package, shared requirements live in tests/requirements."""
