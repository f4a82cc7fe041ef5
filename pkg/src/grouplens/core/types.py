"""
Shared type aliases for GroupLens.
"""
from typing import Sequence

import numpy as np
import numpy.typing as npt

# Elements are dense indices with the identity pinned to 0.
Element = int
IDENTITY: Element = 0

Table = npt.NDArray[np.int64]
Permutation = tuple[int, ...]
Values = tuple[Element, ...]
ElementSequence = Sequence[Element]
