"""Coverage and expected length of 95% intervals for the triangular-mode parameter.

Published reference values for four interval methods over ten sample sizes and
eight true parameter values. Keyed by ``(method, n, theta)``; each value is
``(coverage, expected_length)``.
"""

METHODS = ("GF", "ModGF", "FlatBayes", "JeffreysBayes")
N_VALUES = (1, 2, 5, 10, 20, 50, 100, 200, 500, 1000)
THETA_VALUES = (0.01, 0.03, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5)

# one row per n, one (coverage, length) pair per theta in THETA_VALUES
_ROWS = {
    "GF": {
        1: ((0.298, 0.781), (0.603, 0.793), (0.753, 0.802), (0.895, 0.82), (0.966, 0.841), (0.983, 0.852), (0.990, 0.858), (0.992, 0.86)),
        2: ((0.389, 0.75), (0.710, 0.758), (0.826, 0.766), (0.925, 0.783), (0.973, 0.81), (0.989, 0.828), (0.992, 0.839), (0.992, 0.843)),
        5: ((0.557, 0.589), (0.802, 0.605), (0.875, 0.619), (0.936, 0.65), (0.970, 0.698), (0.980, 0.731), (0.984, 0.75), (0.986, 0.757)),
        10: ((0.689, 0.394), (0.864, 0.417), (0.908, 0.438), (0.946, 0.483), (0.963, 0.553), (0.969, 0.6), (0.969, 0.628), (0.969, 0.636)),
        20: ((0.808, 0.229), (0.911, 0.256), (0.935, 0.28), (0.955, 0.33), (0.956, 0.404), (0.957, 0.453), (0.957, 0.482), (0.957, 0.491)),
        50: ((0.902, 0.107), (0.946, 0.133), (0.953, 0.155), (0.954, 0.198), (0.953, 0.254), (0.954, 0.287), (0.954, 0.304), (0.955, 0.31)),
        100: ((0.928, 0.0611), (0.951, 0.0843), (0.955, 0.102), (0.954, 0.136), (0.953, 0.175), (0.951, 0.197), (0.949, 0.209), (0.951, 0.214)),
        200: ((0.949, 0.0373), (0.952, 0.0563), (0.950, 0.0699), (0.952, 0.0932), (0.950, 0.121), (0.950, 0.137), (0.953, 0.145), (0.949, 0.148)),
        500: ((0.955, 0.0213), (0.954, 0.0341), (0.951, 0.0424), (0.950, 0.0565), (0.953, 0.0742), (0.950, 0.0841), (0.952, 0.0897), (0.953, 0.0916)),
        1000: ((0.950, 0.0144), (0.951, 0.0233), (0.951, 0.0291), (0.950, 0.0392), (0.952, 0.0516), (0.949, 0.0588), (0.950, 0.0626), (0.949, 0.0639)),
    },
    "ModGF": {
        1: ((0.950, 0.798), (0.950, 0.814), (0.950, 0.83), (0.950, 0.87), (0.950, 0.922), (0.950, 0.941), (0.950, 0.948), (0.950, 0.951)),
        2: ((0.968, 0.816), (0.977, 0.83), (0.980, 0.844), (0.983, 0.88), (0.986, 0.935), (0.986, 0.958), (0.986, 0.968), (0.986, 0.971)),
        5: ((0.955, 0.656), (0.973, 0.682), (0.980, 0.706), (0.986, 0.764), (0.989, 0.862), (0.989, 0.91), (0.989, 0.933), (0.989, 0.939)),
        10: ((0.946, 0.426), (0.973, 0.457), (0.980, 0.487), (0.986, 0.562), (0.986, 0.709), (0.984, 0.804), (0.982, 0.85), (0.981, 0.865)),
        20: ((0.944, 0.237), (0.974, 0.268), (0.980, 0.296), (0.983, 0.364), (0.976, 0.499), (0.974, 0.612), (0.972, 0.679), (0.972, 0.702)),
        50: ((0.953, 0.109), (0.973, 0.138), (0.974, 0.163), (0.972, 0.215), (0.966, 0.29), (0.966, 0.342), (0.963, 0.376), (0.964, 0.388)),
        100: ((0.951, 0.062), (0.965, 0.0866), (0.966, 0.106), (0.963, 0.143), (0.961, 0.188), (0.959, 0.212), (0.957, 0.225), (0.957, 0.229)),
        200: ((0.959, 0.0377), (0.959, 0.0574), (0.956, 0.0715), (0.957, 0.0956), (0.955, 0.124), (0.954, 0.14), (0.957, 0.149), (0.954, 0.151)),
        500: ((0.957, 0.0214), (0.956, 0.0344), (0.954, 0.0427), (0.952, 0.057), (0.955, 0.0748), (0.952, 0.0849), (0.953, 0.0905), (0.954, 0.0924)),
        1000: ((0.952, 0.0144), (0.952, 0.0233), (0.952, 0.0292), (0.951, 0.0393), (0.953, 0.0518), (0.950, 0.059), (0.951, 0.0629), (0.949, 0.0641)),
    },
    "FlatBayes": {
        1: ((0.208, 0.921), (0.672, 0.922), (0.909, 0.923), (0.999, 0.924), (1.000, 0.926), (1.000, 0.927), (1.000, 0.928), (1.000, 0.928)),
        2: ((0.347, 0.851), (0.736, 0.858), (0.879, 0.863), (0.975, 0.872), (0.998, 0.885), (1.000, 0.892), (1.000, 0.896), (1.000, 0.897)),
        5: ((0.552, 0.627), (0.817, 0.644), (0.894, 0.659), (0.952, 0.691), (0.981, 0.738), (0.989, 0.77), (0.991, 0.788), (0.992, 0.794)),
        10: ((0.694, 0.408), (0.873, 0.432), (0.915, 0.454), (0.954, 0.5), (0.971, 0.572), (0.975, 0.621), (0.976, 0.65), (0.976, 0.659)),
        20: ((0.813, 0.233), (0.915, 0.26), (0.940, 0.284), (0.959, 0.336), (0.961, 0.412), (0.960, 0.463), (0.962, 0.492), (0.961, 0.502)),
        50: ((0.904, 0.108), (0.947, 0.134), (0.954, 0.156), (0.956, 0.2), (0.955, 0.257), (0.956, 0.289), (0.956, 0.307), (0.956, 0.313)),
        100: ((0.929, 0.0613), (0.952, 0.0846), (0.955, 0.103), (0.955, 0.136), (0.954, 0.176), (0.952, 0.198), (0.950, 0.21), (0.951, 0.215)),
        200: ((0.950, 0.0374), (0.953, 0.0564), (0.951, 0.0701), (0.952, 0.0934), (0.951, 0.121), (0.951, 0.137), (0.953, 0.145), (0.950, 0.148)),
        500: ((0.955, 0.0213), (0.954, 0.0342), (0.951, 0.0424), (0.950, 0.0566), (0.953, 0.0742), (0.951, 0.0842), (0.952, 0.0898), (0.953, 0.0917)),
        1000: ((0.950, 0.0144), (0.951, 0.0233), (0.951, 0.0291), (0.950, 0.0392), (0.953, 0.0516), (0.949, 0.0588), (0.950, 0.0626), (0.949, 0.0639)),
    },
    "JeffreysBayes": {
        1: ((0.961, 0.98), (0.994, 0.983), (0.998, 0.985), (0.999, 0.988), (1.000, 0.99), (1.000, 0.991), (1.000, 0.991), (1.000, 0.991)),
        2: ((0.939, 0.89), (0.981, 0.904), (0.989, 0.915), (0.995, 0.935), (0.998, 0.958), (0.998, 0.969), (0.999, 0.974), (0.998, 0.976)),
        5: ((0.942, 0.606), (0.971, 0.634), (0.979, 0.658), (0.984, 0.71), (0.985, 0.788), (0.984, 0.843), (0.983, 0.877), (0.983, 0.888)),
        10: ((0.960, 0.365), (0.977, 0.398), (0.981, 0.427), (0.980, 0.492), (0.972, 0.598), (0.966, 0.675), (0.963, 0.721), (0.961, 0.737)),
        20: ((0.971, 0.199), (0.979, 0.232), (0.978, 0.262), (0.970, 0.326), (0.959, 0.427), (0.954, 0.491), (0.952, 0.528), (0.951, 0.54)),
        50: ((0.979, 0.0924), (0.973, 0.123), (0.965, 0.15), (0.955, 0.203), (0.952, 0.264), (0.953, 0.297), (0.952, 0.314), (0.953, 0.319)),
        100: ((0.979, 0.0544), (0.964, 0.0818), (0.956, 0.103), (0.952, 0.139), (0.952, 0.178), (0.950, 0.2), (0.949, 0.212), (0.950, 0.216)),
        200: ((0.971, 0.0348), (0.951, 0.0569), (0.946, 0.0713), (0.951, 0.0943), (0.950, 0.121), (0.950, 0.138), (0.953, 0.146), (0.949, 0.148)),
        500: ((0.956, 0.0212), (0.951, 0.0346), (0.950, 0.0427), (0.951, 0.0567), (0.954, 0.0743), (0.950, 0.0843), (0.952, 0.0899), (0.953, 0.0918)),
        1000: ((0.948, 0.0146), (0.950, 0.0233), (0.951, 0.0291), (0.950, 0.0392), (0.951, 0.0517), (0.950, 0.0588), (0.950, 0.0627), (0.949, 0.0639)),
    },
}

REFERENCE = {
    (method, n, theta): cell
    for method, by_n in _ROWS.items()
    for n, row in by_n.items()
    for theta, cell in zip(THETA_VALUES, row)
}


def lookup(method: str, n: int, theta: float):
    """Reference ``(coverage, length)`` for a cell, matching theta to 1e-9."""
    for t in THETA_VALUES:
        if abs(t - theta) < 1e-9:
            return REFERENCE.get((method, int(n), t))
    return None
