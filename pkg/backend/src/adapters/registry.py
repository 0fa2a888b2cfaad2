#!/usr/bin/env python3
"""
Scheme registry for looking up detection-scheme adapters by key.
"""

from typing import Dict, List, Type, Union

from adapters.base_scheme import DetectionScheme
from adapters.eightport_scheme import EightPortScheme
from adapters.heterodyne_scheme import HeterodyneScheme
from adapters.sixport_scheme import SixPortScheme
from schemas.scheme_config import SchemeKind


_REGISTRY: Dict[str, Type[DetectionScheme]] = {}


def register_scheme(key: str, cls: Type[DetectionScheme]) -> None:
    """Register a scheme class under a lookup key."""
    _REGISTRY[key] = cls


def get_scheme(key: Union[str, SchemeKind]) -> DetectionScheme:
    """Instantiate and return a scheme by key."""
    if isinstance(key, SchemeKind):
        key = key.value
    if key not in _REGISTRY:
        available = ", ".join(sorted(_REGISTRY.keys()))
        raise KeyError(f"Unknown detection scheme '{key}'. Available: {available}")
    return _REGISTRY[key]()


def list_available_schemes() -> List[str]:
    """Return list of registered scheme keys."""
    return sorted(_REGISTRY.keys())


# Auto-register built-in schemes
register_scheme(SchemeKind.EIGHT_PORT.value, EightPortScheme)
register_scheme(SchemeKind.SIX_PORT.value, SixPortScheme)
register_scheme(SchemeKind.HETERODYNE.value, HeterodyneScheme)

# Aliases for convenience
register_scheme("double-homodyne", EightPortScheme)
register_scheme("triple-homodyne", SixPortScheme)
