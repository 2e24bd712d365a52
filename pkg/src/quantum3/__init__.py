"""State-sum and surgery invariants of closed 3-manifolds from fusion category data."""

__version__ = "0.1.0"
