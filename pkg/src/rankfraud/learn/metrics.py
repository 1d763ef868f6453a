from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike
from sklearn.metrics import confusion_matrix

from rankfraud.types.evaluation import ConfusionMatrix


def confusion(y_true: ArrayLike, y_pred: ArrayLike) -> ConfusionMatrix:
    """Binary confusion counts with 1 as the positive class."""
    yt = np.asarray(y_true, dtype=int)
    yp = np.asarray(y_pred, dtype=int)
    if yt.size == 0:
        return ConfusionMatrix()
    (tn, fp), (fn, tp) = confusion_matrix(yt, yp, labels=[0, 1])
    return ConfusionMatrix(tp=int(tp), fp=int(fp), tn=int(tn), fn=int(fn))
