import math

import numpy as np

from ..errors import ContractError, StratificationError
from ..numcore import make_rng


def stratified_split(labels, ratio=0.7, seed=0):
    """Per-class shuffled train/test partition.

    Each class contributes ``floor(ratio * count)`` rows to the training
    part; the shuffle of each class is seeded from ``seed`` and the class
    value, so it does not depend on the other classes.

    Returns
    -------
    train_idx, test_idx : ndarray of int
        Sorted, disjoint and together covering ``range(len(labels))``.

    Examples
    --------
    >>> tr, te = stratified_split([0] * 402 + [1] * 402)
    >>> len(tr), len(te)
    (562, 242)
    """
    if not 0.0 < ratio < 1.0:
        raise ContractError(f"split ratio must lie strictly between 0 and 1, got {ratio}")
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.size == 0:
        raise ContractError("labels must be a non-empty 1-D sequence")
    classes, counts = np.unique(labels, return_counts=True)
    small = [c.item() if hasattr(c, "item") else c for c, n in zip(classes, counts) if n < 2]
    if small:
        raise StratificationError(f"class(es) {small} have fewer than 2 samples")
    train = []
    for c in classes:
        idx = np.flatnonzero(labels == c)
        perm = make_rng(seed, "split", str(c)).permutation(idx)
        # the small offset absorbs products like 0.29 * 100 = 28.999...
        train.append(perm[:math.floor(ratio * len(idx) + 1e-9)])
    train_idx = np.sort(np.concatenate(train))
    mask = np.ones(len(labels), dtype=bool)
    mask[train_idx] = False
    return train_idx, np.flatnonzero(mask)
