"""Prime values of binary quadratic forms: forms, densities, class groups,
character sums and desk-scale counting experiments."""

__version__ = "0.1.0"
