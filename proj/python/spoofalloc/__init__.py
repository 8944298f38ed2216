from spoofalloc._core import *  # noqa: F401,F403
from spoofalloc._core import curves, envelope, montecarlo  # noqa: F401
