"""Published benchmark values the package reproduces, kept in one catalog.

Keys identify the originating table of the benchmark set; coupling columns
are labeled by the strings in U_KEYS.  Values are transcribed at full
printed precision so table commands can report deviations.
"""

import numpy as np

SQRT3 = np.sqrt(3.0)

U_KEYS = {
    "5": 5.0,
    "4.5": 4.5,
    "4": 4.0,
    "3": 3.0,
    "2": 2.0,
    "1": 1.0,
    "0": 0.0,
    "2sqrt3": 2.0 * SQRT3,
    "sqrt2": float(np.sqrt(2.0)),
}

# reality thresholds U(L): full spectrum real for U >= U(L)
TABLE1_REALITY = {4: 2.99684, 5: 3.1637, 6: 3.25492, 7: 3.3101, 8: 3.34601, 9: 3.3707}

# ground-state energy per site, rows by L plus the bulk row
TABLE2_ENERGY = {
    "5": {
        8: -0.204464228606, 12: -0.201265737835, 16: -0.200824061600,
        24: -0.200736514467, 64: -0.200733056600, 128: -0.200733056598,
        256: -0.200733056598, 516: -0.200733056598, 1024: -0.200733056598,
        "bulk": -0.200733056598,
    },
    "4.5": {
        8: -0.230043511273, 12: -0.224899936711, 16: -0.223871059808,
        24: -0.223551325431, 64: -0.223522488844, 128: -0.223522488276,
        256: -0.223522488276, 516: -0.223522488276, 1024: -0.223522488276,
        "bulk": -0.223522488276,
    },
    "4": {
        8: -0.263610698228, 12: -0.256045117699, 16: -0.253897420183,
        24: -0.252805699816, 64: -0.252540167269, 128: -0.252539797503,
        256: -0.252539797464, 516: -0.252539797464, 1024: -0.252539797464,
        "bulk": -0.252539797464,
    },
    "2sqrt3": {
        8: -0.311812256414, 12: -0.302490835111, 16: -0.299262410687,
        24: -0.296968723330, 64: -0.295399099678, 128: -0.295207053381,
        256: -0.295159081267, 516: -0.295147031065, 1024: -0.295144096192,
        "bulk": -0.29514306683,
    },
}

# lowest gap E1 - E0, rows by L plus the closed-form value U/2 - sqrt(3)
TABLE3_GAP = {
    "5": {
        4: 1.036319644464, 6: 0.873340177602, 8: 0.813638377809,
        10: 0.788669441708, 12: 0.777591808258, 24: 0.768073689898,
        64: 0.767949192567, 128: 0.767949192431, "conjecture": 0.767949192431,
    },
    "4.5": {
        4: 0.854580071405, 6: 0.674868966228, 8: 0.599631771038,
        10: 0.562704180977, 12: 0.543184602057, 24: 0.518988521734,
        64: 0.517949246894, 128: 0.517949192431, "conjecture": 0.517949192431,
    },
    "4": {
        4: 0.692174524898, 6: 0.5023065411977, 8: 0.414421220768,
        10: 0.365280462750, 12: 0.334987129854, 24: 0.277657812737,
        64: 0.267984697157, 128: 0.267949199834, "conjecture": 0.267949192431,
    },
    "2sqrt3": {
        4: 0.543994295694, 6: 0.355628987118, 8: 0.264851275979,
        10: 0.211154293739, 12: 0.1756150067247, 24: 0.087470097673,
        64: 0.032747755751, 128: 0.0163677361663, "conjecture": 0.0,
    },
}

# exact-diagonalization gap in the massless window, rows by L
TABLE4_GAP = {
    "3": {
        4: 0.440016510622, 5: 0.333186293755, 6: 0.265000196383,
        7: 0.217792628767, 8: 0.183337767402, 9: 0.157215293302,
        10: 0.136833560153, 11: 0.120569414216, 12: 0.107353489189,
    },
    "2": {
        4: 0.293535290332, 5: 0.214779553874, 6: 0.168525003057,
        7: 0.138648062734, 8: 0.118081090063, 9: 0.103171134329,
        10: 0.091892773383, 11: 0.083053591425, 12: 0.075918682286,
    },
    "1": {
        4: 0.229561056843, 5: 0.173951249866, 6: 0.142312830329,
        7: 0.121134573771, 8: 0.105864402313, 9: 0.094193460366,
        10: 0.084922463102, 11: 0.077348725737, 12: 0.071030847203,
    },
    "0": {
        4: 0.206715266807, 5: 0.156608375958, 6: 0.130973778878,
        7: 0.111778109994, 8: 0.097864658974, 9: 0.086998399570,
        10: 0.078337725112, 11: 0.071248015197, 12: 0.065340141516,
    },
}

# published extrapolations of TABLE4_GAP, (value, uncertainty in last digit)
TABLE4_EXTRAPOLATED = {
    "3": (0.0125, 2e-4),
    "2": (0.00095, 1e-5),
    "1": (0.00072, 2e-5),
    "0": (0.00057, 1e-5),
}

# per-site reflection defect [E0(U) - E0(-U) - U L / 2] / L, rows by L
TABLE5_F0 = {
    "4": {
        4: -0.002502617524, 6: -0.000298578032, 8: 0.000474348326,
        10: 0.000725330998, 12: 0.000781269945,
    },
    "2sqrt3": {
        4: -0.004821830368, 6: -0.002636774463, 8: -0.001575278327,
        10: -0.001033436575, 12: -0.000726318473,
    },
    "sqrt2": {
        4: -0.006940286179, 6: -0.004525863690, 8: -0.002920250485,
        10: -0.001996396571, 12: -0.001440030532,
    },
    "1": {
        4: -0.005363922112, 6: -0.003369496877, 8: -0.002125566789,
        10: -0.001436878350, 12: -0.001030466004,
    },
}


def u_value(key: str) -> float:
    return U_KEYS[key]
