"""Finite sites and presheaves of groupoids."""
from .presheaf import *  # noqa: F401,F403
from .site import *  # noqa: F401,F403
