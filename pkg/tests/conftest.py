import os

from hypothesis import settings

# numba-jitted kernels compile on first call; keep hypothesis from timing that
settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))
