"""Reference values for the N=8 two-level Haar example."""
import numpy as np

EXAMPLE1_X = np.array([2, 1, 9, 0, 3, -10, 2, 4], dtype=float)

EXAMPLE1_Y = np.array([0.165567, 0.09934, 0.629153, 0.033113, 0.231793, -0.629153, 0.165567, 0.29802])

# rows eps = 0..3, columns s21 s22 | w21 w22 | w11 w12 w13 w14
PER_SHIFT_REF = np.array([
    [0.736842, 0.052632, -0.315789, -0.684211, 0.074432, 0.669891, 0.967620, -0.148865],
    [0.947368, -0.157895, -0.210526, 0.578947, 0.148865, -0.595458, -0.223297, -0.893188],
    [0.578947, 0.210526, 0.157895, 0.842105, -0.148865, 0.074432, 0.669891, 0.967620],
    [0.000000, 0.789474, -0.736842, 0.368421, -0.893188, 0.148865, -0.595458, -0.223297],
])

# rows d1, d2, a2
STATIONARY_REF = np.array([
    [0.074432, -0.595458, 0.669891, -0.223297, 0.967620, -0.893188, -0.148865, 0.148865],
    [-0.315789, 0.368421, 0.842105, 0.578947, -0.684211, -0.736842, 0.157895, -0.210526],
    [0.736842, 0.789474, 0.210526, -0.157895, 0.052632, 0.000000, 0.578947, 0.947368],
])

TABLE_TOL = 1e-5
