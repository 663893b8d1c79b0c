"""Published reference tables for the two-phase actuator builds.

Values are transcribed verbatim and used only for side-by-side comparison
with computed results; nothing in the models reads them.
"""

# n_strings: (twist_zone_mm, separator_mm, bundle_diameter_mm after 5 turns)
SYSTEM_DIMENSIONS = {
    2: (23.20, 5.0, 0.47),
    4: (23.42, 5.0, 0.70),
    6: (22.85, 5.0, 0.86),
    8: (23.30, 5.0, 0.99),
}

# n_strings: (twist_zone_mm, contraction_mm, total_length_mm, percent)
ACHIEVED_CONTRACTION = {
    2: (23.20, 58.40, 81.60, 72),
    4: (23.42, 92.02, 115.44, 80),
    6: (22.85, 95.67, 118.52, 81),
    8: (23.30, 84.09, 107.39, 78),
}

# n_strings: (diameter_mm, contraction_percent, overtwist_turns)
OVERTWIST_ONSET = {
    2: (0.47, 19, 20),
    4: (0.70, 9, 11),
    6: (0.86, 10, 10),
    8: (0.99, 10, 8),
}

SINGLE_STRING_DIAMETER = 0.24

# n_strings: (measured_mm, std_mm, proposed_error_mm, ring_error_mm)
BUNDLE_DIAMETER = {
    1: (0.24, 0.02, 0.00, 0.00),
    2: (0.47, 0.03, 0.01, 0.01),
    3: (0.61, 0.03, -0.09, -0.09),
    4: (0.70, 0.02, -0.04, -0.12),
    5: (0.84, 0.05, -0.12, -0.19),
    6: (0.86, 0.02, 0.01, -0.14),
    7: (0.93, 0.02, -0.06, -0.14),
    8: (0.99, 0.03, -0.12, -0.13),
}

# n_strings: (rmse_constant_mm, rmse_variable_mm)
MODEL_RMSE = {
    2: (2.73, 79.29),
    4: (5.86, 155.88),
    6: (4.42, 219.63),
    8: (3.23, 142.78),
}

# (load_kgf, turns_per_cycle, cycles_endured, contraction_per_cycle_mm, total_mm)
LIFE_CYCLE = (
    (2, 20, 1512, 16.06, 24283),
    (2, 30, 936, 27.76, 25983),
    (2, 40, 550, 40.22, 22121),
    (2, 55, 411, 59.02, 24257),
    (3, 20, 581, 15.43, 8965),
    (3, 30, 396, 26.79, 10609),
    (3, 40, 240, 37.64, 9132),
    (3, 55, 170, 56.36, 9581),
    (5, 20, 130, 14.60, 1898),
    (5, 30, 50, 25.44, 1272),
    (5, 40, 28, 36.08, 1010),
    (5, 55, 13, 54.97, 751),
)

# untwisting stays reversible up to this many turns on the 2-string build
MAX_SAFE_TURNS_2_STRINGS = 55
