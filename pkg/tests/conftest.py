from hypothesis import HealthCheck, settings

settings.register_profile(
    "fadzeta",
    deadline=None,
    max_examples=15,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("fadzeta")

# matrices reused across modules
TORUS_P2 = ((0, 0, -1), (1, 0, -1), (0, 1, 1))
F_A = ((5, 0, 0, 0), (0, 5, 0, 0), (0, 0, 5, 0), (0, 0, 0, 5))
F_B = ((1, 0, 3, 4), (0, 1, 2, 0), (3, 0, 1, 4), (2, 1, 0, 4))
F_C = ((0, 0, 0, -1), (1, 0, 0, 3), (0, 1, 0, -3), (0, 0, 1, 3))
SIGMA_F5 = (((1,), (0, 1)), ((2,), (0, 1)))
