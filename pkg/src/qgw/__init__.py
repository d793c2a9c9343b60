"""Finite and presented quantum groups: Hopf checks, Haar states, duality, Kac quotients and almost-periodicity tests."""
__version__ = "0.1.0"
