"""Published 12-way confusion chart used by the arithmetic-reproduction
tests: integer counts, the printed per-class true-positive rates, and
the printed total (macro) accuracy."""

import numpy as np

CLASS_NAMES = [
    "HIP-Post-Morphine", "HIP-Post-Food", "HIP-Post-Saline",
    "HIP-Pre-Morphine", "HIP-Pre-Food", "HIP-Pre-Saline",
    "NAc-Post-Morphine", "NAc-Post-Food", "NAc-Post-Saline",
    "NAc-Pre-Morphine", "NAc-Pre-Food", "NAc-Pre-Saline",
]

COUNTS = np.array([
    [1773, 2, 209, 143, 115, 99, 1, 1, 1, 1, 1, 0],
    [0, 2354, 0, 0, 0, 1, 1, 0, 1, 2, 1, 0],
    [158, 2, 2091, 150, 231, 95, 2, 1, 2, 0, 3, 2],
    [143, 1, 96, 1805, 135, 160, 1, 0, 1, 1, 1, 2],
    [99, 2, 139, 162, 1697, 141, 0, 1, 2, 1, 1, 1],
    [124, 8, 106, 118, 318, 2106, 1, 2, 3, 2, 1, 0],
    [1, 0, 0, 0, 1, 2, 2343, 1, 2, 2, 0, 1],
    [0, 2, 3, 2, 1, 2, 6, 1765, 182, 40, 283, 60],
    [1, 4, 1, 1, 2, 2, 5, 180, 2113, 68, 70, 290],
    [1, 2, 0, 2, 3, 2, 3, 114, 142, 1768, 136, 173],
    [2, 3, 3, 1, 1, 2, 1, 180, 80, 114, 1827, 132],
    [1, 1, 0, 2, 1, 1, 2, 105, 220, 167, 182, 2055],
], dtype=np.int64)

PRINTED_TPR = np.array([
    75.57544757, 99.74576271, 76.39751553, 76.93947144, 75.55654497,
    75.51093582, 99.57501062, 75.2344416, 77.20131531, 75.36231884,
    77.87723785, 75.0822068,
])

PRINTED_MACRO = 80.00485076
