"""Tests for the swarm deployment solvers."""
