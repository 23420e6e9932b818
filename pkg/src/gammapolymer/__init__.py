"""Strict-weak gamma polymer: exact finite-n identities and Tracy-Widom asymptotics."""

__version__ = "0.1.0"
