"""qfoundry: finite checkable computations from quantum foundations.

Exact uncolorability of the embedded ray sets, the dense rational-sphere
coloring, hidden-variable statistics over incompatible basis families,
CHSH and logical Bell inequalities, imprecision and free-will bounds, and
the subspace / context-function lattices, behind one batch CLI.
"""

__version__ = "0.1.0"

DEFAULT_SEED = 0xC0FFEE
