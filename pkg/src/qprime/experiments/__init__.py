"""Counting harness, Type I scans, sieve functionals and report output."""
