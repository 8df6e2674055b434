#!/usr/bin/env python3
"""
This module defines the exceptions raised by locpriv.

Classes:
    LocPrivError: Base class of all locpriv errors.
    DomainError: An argument lies outside the domain of an operation.
    ConstructionError: A transition matrix cannot be built from the given weights.
    ZeroProbabilityObservationError: An observation has (numerically) zero probability.
    SizeGuardError: An exact enumeration would exceed the table size guard.
    ShapeError: Array dimensions do not chain.
    UsageError: An object is used outside its contract (e.g. a stale forward cache).
    NumericError: A computation produced non-finite or inconsistent values.
    ConfigError: A configuration is invalid.
    EmptySelectionError: A result selection is empty.
"""


class LocPrivError(Exception):
    """Base class of all locpriv errors"""


class DomainError(LocPrivError, ValueError):
    """Raised when an argument lies outside the domain of an operation"""


class ConstructionError(DomainError):
    """Raised when a transition matrix row has no positive weight"""


class ZeroProbabilityObservationError(DomainError):
    """Raised when the belief-update denominator vanishes"""


class SizeGuardError(DomainError):
    """Raised when an exact enumeration exceeds the table size guard"""


class ShapeError(DomainError):
    """Raised when array dimensions do not match"""


class UsageError(LocPrivError, RuntimeError):
    """Raised when an object is used outside its contract"""


class NumericError(LocPrivError, ArithmeticError):
    """Raised when a computation produces non-finite or inconsistent values"""


class ConfigError(LocPrivError, ValueError):
    """Raised for invalid training or experiment configurations"""


class EmptySelectionError(ConfigError):
    """Raised when a result filter selects nothing"""
