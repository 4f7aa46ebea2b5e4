"""Gauge stacks over graph sites and cubical spacetime lattices."""
from .classifying import FLAVORS, SiteCalculus, classifying_presheaf
from .lattice import SAMPLE_LATTICES, Chart, LatticeInstance, path2, path3, square, strip
from .stacks import *
