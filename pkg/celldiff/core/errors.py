#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Exception hierarchy for celldiff
"""

from typing import Any, Dict, Optional


class CelldiffError(Exception):
    """Base class for every error raised by celldiff"""


class DomainError(CelldiffError, ValueError):
    """An operation was called outside its mathematical domain"""


class ConfigurationError(CelldiffError):
    """A parameter set or configuration file is invalid"""


class NumericalError(CelldiffError):
    """A numerical procedure failed to produce a trustworthy answer"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class StepError(NumericalError):
    """Fatal transport step (NaN or negative densities)"""

    def __init__(self, message: str, last_state: Any = None,
                 diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message, diagnostics)
        self.last_state = last_state


class CertificateUnavailable(CelldiffError):
    """A priori bounds cannot be certified for the given initial data"""
