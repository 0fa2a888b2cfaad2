"""
Detection-scheme adapter package.

Usage:
    from adapters import get_scheme, list_available_schemes

    scheme = get_scheme("six-port")
    z1, z2 = scheme.photocurrents(counts, cfg)
"""

from adapters.base_scheme import (
    DetectionScheme,
    PortRole,
    SchemeTopology,
)
from adapters.registry import get_scheme, list_available_schemes
