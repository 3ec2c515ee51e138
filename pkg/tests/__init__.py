"""Tests for pkpres."""
