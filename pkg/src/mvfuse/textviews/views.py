from dataclasses import dataclass

import numpy as np

from ..errors import IntegrityError


@dataclass
class ViewMatrix:
    """One feature view: a dense ``documents x features`` matrix."""

    name: str
    matrix: np.ndarray
    provenance: str = "fitted"

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        if self.matrix.ndim != 2:
            raise IntegrityError(f"view {self.name!r} must be 2-D, got {self.matrix.shape}")
        if not np.all(np.isfinite(self.matrix)):
            raise IntegrityError(f"view {self.name!r} contains non-finite values")
        if self.provenance not in ("fitted", "loaded"):
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def n_rows(self):
        return self.matrix.shape[0]

    @property
    def feature_dim(self):
        return self.matrix.shape[1]

    def take(self, rows):
        return ViewMatrix(self.name, self.matrix[np.asarray(rows, dtype=np.int64)],
                          self.provenance)
