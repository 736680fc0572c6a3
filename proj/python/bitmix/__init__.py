"""Cover-stego pair mixing toolkit.

Patch-swap augmentation with embedding-adaptive soft labels, baseline
augmentations (area-labeled patch swap, interpolation, rotations/flips), a
simulated +-1 embedder, batch serialization, and detection metrics.
"""

from bitmix._core import *  # noqa: F401,F403
from bitmix._core import __version__  # noqa: F401
