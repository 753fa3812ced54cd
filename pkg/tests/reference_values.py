"""Published reference values used as golden expectations.

Evidence values are stored exactly as printed in the reference tables
(reciprocal convention, "<1/100" floor) so tests can compare at the
displayed precision.  Operating characteristics are Monte Carlo summaries
at 10^4 trials per cell, so comparisons carry a noise tolerance.
"""

# Single-dose evidence grid: (n, x) -> {target rate: printed value}.
GLR_TABLE = {
    (3, 0): {0.2: "1.95", 0.25: "2.37", 0.3: "2.92"},
    (3, 1): {0.2: "1/1.16", 0.25: "1/1.05", 0.3: "1/1.01"},
    (3, 2): {0.2: "1/4.63", 0.25: "1/3.16", 0.3: "1/2.35"},
    (3, 3): {0.2: "<1/100", 0.25: "1/64.0", 0.3: "1/37.0"},
    (4, 0): {0.2: "2.44", 0.25: "3.16", 0.3: "4.16"},
    (4, 1): {0.2: "1/1.03", 0.25: "1.00", 0.3: "1.02"},
    (4, 2): {0.2: "1/2.44", 0.25: "1/1.78", 0.3: "1/1.42"},
    (4, 3): {0.2: "1/16.5", 0.25: "1/9.0", 0.3: "1/5.58"},
    (4, 4): {0.2: "<1/100", 0.25: "<1/100", 0.3: "<1/100"},
    (5, 0): {0.2: "3.05", 0.25: "4.21", 0.3: "5.95"},
    (5, 1): {0.2: "1.00", 0.25: "1.04", 0.3: "1.14"},
    (5, 2): {0.2: "1/1.69", 0.25: "1/1.31", 0.3: "1/1.12"},
    (5, 3): {0.2: "1/6.75", 0.25: "1/3.93", 0.3: "1/2.61"},
    (5, 4): {0.2: "1/64.0", 0.25: "1/28.0", 0.3: "1/14.4"},
    (5, 5): {0.2: "<1/100", 0.25: "<1/100", 0.3: "<1/100"},
    (6, 0): {0.2: "3.81", 0.25: "5.62", 0.3: "8.50"},
    (6, 1): {0.2: "1.02", 0.25: "1.13", 0.3: "1.33"},
    (6, 2): {0.2: "1/1.34", 0.25: "1/1.11", 0.3: "1/1.02"},
    (6, 3): {0.2: "1/3.81", 0.25: "1/2.37", 0.3: "1/1.69"},
    (6, 4): {0.2: "1/21.4", 0.25: "1/9.99", 0.3: "1/5.53"},
    (6, 5): {0.2: "<1/100", 0.25: "1/91.4", 0.3: "1/39.4"},
    (6, 6): {0.2: "<1/100", 0.25: "<1/100", 0.3: "<1/100"},
}

# Effective evidence cut-points: design -> {(n, target): (k1, k2)}.
EFFECTIVE_K = {
    "boin": {
        (3, 0.2): (1.02, 1.01), (3, 0.25): (1.02, 1.02), (3, 0.3): (1.03, 1.02),
        (4, 0.2): (1.02, 1.02), (4, 0.25): (1.03, 1.02), (4, 0.3): (1.04, 1.03),
        (5, 0.2): (1.03, 1.02), (5, 0.25): (1.04, 1.03), (5, 0.3): (1.05, 1.04),
        (6, 0.2): (1.04, 1.03), (6, 0.25): (1.05, 1.04), (6, 0.3): (1.06, 1.05),
    },
    "teqr": {
        (3, 0.2): (1.03, 1.02), (3, 0.25): (1.02, 1.02), (3, 0.3): (1.02, 1.02),
        (4, 0.2): (1.03, 1.03), (4, 0.25): (1.03, 1.03), (4, 0.3): (1.02, 1.02),
        (5, 0.2): (1.04, 1.04), (5, 0.25): (1.04, 1.03), (5, 0.3): (1.03, 1.03),
        (6, 0.2): (1.05, 1.05), (6, 0.25): (1.04, 1.04), (6, 0.3): (1.04, 1.04),
    },
    "mtpi": {
        (3, 0.2): (1.10, 1.54), (3, 0.25): (1.13, 1.47), (3, 0.3): (1.15, 1.42),
        (4, 0.2): (1.13, 1.68), (4, 0.25): (1.16, 1.61), (4, 0.3): (1.20, 1.54),
        (5, 0.2): (1.16, 1.82), (5, 0.25): (1.20, 1.73), (5, 0.3): (1.24, 1.65),
        (6, 0.2): (1.19, 1.95), (6, 0.25): (1.24, 1.84), (6, 0.3): (1.28, 1.75),
    },
    "i3plus3": {
        (3, 0.2): (1.03, 1.83), (3, 0.25): (1.02, 1.73), (3, 0.3): (1.02, 1.67),
        (4, 0.2): (1.03, 1.52), (4, 0.25): (1.03, 1.46), (4, 0.3): (1.02, 1.42),
        (5, 0.2): (1.04, 1.36), (5, 0.25): (1.04, 1.31), (5, 0.3): (1.03, 1.28),
        (6, 0.2): (1.05, 1.25), (6, 0.25): (1.04, 1.22), (6, 0.3): (1.04, 1.20),
    },
}

# Classical 3+3 rule: target -> ((k1 low, k1 high), (k2 low, k2 high)).
THREE_PLUS_THREE_RANGES = {
    0.2: ((1.00, 1.02), (1.16, 1.34)),
    0.25: ((1.00, 1.13), (1.05, 1.11)),
    0.3: ((1.00, 1.33), (1.01, 1.02)),
}

# Operating characteristics at 10^4 trials per cell:
# (D, design key, target) -> (%MTD, %OT, N_ave).
OPERATING_CHARACTERISTICS = {
    (4, "boin", 0.2): (48.1, 33.5, 23.1),
    (4, "boin", 0.25): (51.8, 34.3, 23.7),
    (4, "boin", 0.3): (55.3, 38.0, 23.4),
    (4, "teqr", 0.2): (47.6, 34.4, 23.1),
    (4, "teqr", 0.25): (50.7, 34.4, 23.6),
    (4, "teqr", 0.3): (55.3, 37.6, 23.5),
    (4, "mtpi", 0.2): (48.3, 40.6, 23.1),
    (4, "mtpi", 0.25): (52.2, 37.2, 23.7),
    (4, "mtpi", 0.3): (56.1, 38.4, 23.5),
    (4, "i3plus3", 0.2): (48.1, 38.0, 23.1),
    (4, "i3plus3", 0.25): (51.1, 41.1, 23.6),
    (4, "i3plus3", 0.3): (55.7, 37.3, 23.5),
    (4, "glr-sd-1.05", 0.2): (46.6, 31.4, 23.3),
    (4, "glr-sd-1.05", 0.25): (51.5, 29.0, 23.6),
    (4, "glr-sd-1.05", 0.3): (56.5, 31.2, 23.6),
    (4, "glr-sd-1.1", 0.2): (47.8, 31.2, 23.2),
    (4, "glr-sd-1.1", 0.25): (52.6, 32.7, 23.6),
    (4, "glr-sd-1.1", 0.3): (56.1, 31.4, 23.6),
    (4, "glr-iso-1.05", 0.2): (46.8, 30.5, 23.2),
    (4, "glr-iso-1.05", 0.25): (51.8, 28.9, 23.7),
    (4, "glr-iso-1.05", 0.3): (56.4, 31.1, 23.6),
    (4, "glr-iso-1.1", 0.2): (47.7, 31.0, 23.2),
    (4, "glr-iso-1.1", 0.25): (52.5, 32.2, 23.7),
    (4, "glr-iso-1.1", 0.3): (56.3, 30.9, 23.6),
    (6, "boin", 0.2): (38.8, 28.1, 35.3),
    (6, "boin", 0.25): (43.5, 28.4, 35.8),
    (6, "boin", 0.3): (47.3, 32.2, 35.6),
    (6, "teqr", 0.2): (39.0, 28.7, 35.3),
    (6, "teqr", 0.25): (42.5, 28.4, 35.7),
    (6, "teqr", 0.3): (48.1, 32.9, 35.6),
    (6, "mtpi", 0.2): (38.5, 35.2, 35.2),
    (6, "mtpi", 0.25): (43.9, 31.3, 35.8),
    (6, "mtpi", 0.3): (47.0, 32.8, 35.6),
    (6, "i3plus3", 0.2): (39.1, 33.0, 35.3),
    (6, "i3plus3", 0.25): (44.2, 35.3, 35.8),
    (6, "i3plus3", 0.3): (47.9, 32.9, 35.6),
    (6, "glr-sd-1.05", 0.2): (39.4, 24.9, 35.4),
    (6, "glr-sd-1.05", 0.25): (42.8, 22.8, 35.8),
    (6, "glr-sd-1.05", 0.3): (48.6, 25.2, 35.7),
    (6, "glr-sd-1.1", 0.2): (39.0, 25.2, 35.4),
    (6, "glr-sd-1.1", 0.25): (44.4, 25.8, 35.8),
    (6, "glr-sd-1.1", 0.3): (47.9, 25.2, 35.7),
    (6, "glr-iso-1.05", 0.2): (39.9, 24.3, 35.4),
    (6, "glr-iso-1.05", 0.25): (43.4, 22.9, 35.7),
    (6, "glr-iso-1.05", 0.3): (46.7, 25.0, 35.7),
    (6, "glr-iso-1.1", 0.2): (39.3, 24.9, 35.4),
    (6, "glr-iso-1.1", 0.25): (43.7, 26.4, 35.8),
    (6, "glr-iso-1.1", 0.3): (48.3, 25.4, 35.7),
    (8, "boin", 0.2): (33.2, 24.2, 47.3),
    (8, "boin", 0.25): (36.9, 25.6, 47.8),
    (8, "boin", 0.3): (40.6, 28.5, 47.8),
    (8, "teqr", 0.2): (33.7, 25.2, 47.3),
    (8, "teqr", 0.25): (36.1, 25.5, 47.8),
    (8, "teqr", 0.3): (40.9, 29.4, 47.7),
    (8, "mtpi", 0.2): (33.5, 31.1, 47.4),
    (8, "mtpi", 0.25): (37.1, 26.7, 47.9),
    (8, "mtpi", 0.3): (41.3, 28.1, 47.8),
    (8, "i3plus3", 0.2): (33.4, 28.9, 47.5),
    (8, "i3plus3", 0.25): (36.6, 31.7, 47.8),
    (8, "i3plus3", 0.3): (41.2, 29.0, 47.8),
    (8, "glr-sd-1.05", 0.2): (32.8, 20.8, 47.4),
    (8, "glr-sd-1.05", 0.25): (35.3, 18.4, 47.8),
    (8, "glr-sd-1.05", 0.3): (39.7, 21.1, 47.8),
    (8, "glr-sd-1.1", 0.2): (32.7, 21.1, 47.4),
    (8, "glr-sd-1.1", 0.25): (36.6, 22.0, 47.8),
    (8, "glr-sd-1.1", 0.3): (40.7, 21.0, 47.8),
    (8, "glr-iso-1.05", 0.2): (33.9, 20.2, 47.5),
    (8, "glr-iso-1.05", 0.25): (36.8, 18.5, 47.8),
    (8, "glr-iso-1.05", 0.3): (40.4, 20.1, 47.8),
    (8, "glr-iso-1.1", 0.2): (33.9, 21.0, 47.5),
    (8, "glr-iso-1.1", 0.25): (39.0, 22.1, 47.9),
    (8, "glr-iso-1.1", 0.3): (41.5, 21.1, 47.8),
}


def check_displayed(value: float, printed: str) -> bool:
    """Compare a computed ratio against a printed table entry at its own
    displayed precision (reciprocal convention, "<1/100" floor)."""
    if printed.startswith("<"):
        return value < 0.01
    if printed.startswith("1/"):
        target = printed[2:]
        decimals = len(target.split(".")[1]) if "." in target else 0
        return abs(round(1.0 / value, decimals) - float(target)) < 1e-9
    decimals = len(printed.split(".")[1]) if "." in printed else 0
    return abs(round(value, decimals) - float(printed)) < 1e-9
