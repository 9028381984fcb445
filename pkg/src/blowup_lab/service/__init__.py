"""HTTP service exposing every operation of the package."""
