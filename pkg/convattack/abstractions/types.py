import numpy as np
import numpy.typing as npt

Vector = npt.NDArray[np.float64]
Matrix = npt.NDArray[np.float64]

# (p_false, p_true)
Probabilities = tuple[float, float]
