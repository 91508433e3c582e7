"""Principal-value master theorems: closed forms, kernels and a numerical oracle."""

__version__ = "0.1.0"
