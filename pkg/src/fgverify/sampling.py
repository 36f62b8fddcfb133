"""Seeded random sampling of complex arguments."""
import numpy as np

POLE_EPS = 1e-3


class Sampler:
    """Draws complex scalars with modulus in [lo, hi] and uniform phase."""

    def __init__(self, seed=0, lo=0.2, hi=2.0):
        self.seed = int(seed)
        self.rng = np.random.default_rng(self.seed)
        self.lo = lo
        self.hi = hi

    def scalar(self, lo=None, hi=None):
        lo = self.lo if lo is None else lo
        hi = self.hi if hi is None else hi
        r = self.rng.uniform(lo, hi)
        phi = self.rng.uniform(0.0, 2.0 * np.pi)
        return complex(r * np.cos(phi), r * np.sin(phi))

    def scalars(self, n, lo=None, hi=None):
        return [self.scalar(lo, hi) for _ in range(n)]

    def base(self, lo=0.1, hi=0.5):
        """A nome q with lo <= |q| <= hi."""
        return self.scalar(lo, hi)

    def real(self, lo, hi):
        return float(self.rng.uniform(lo, hi))


class EnvSampler(Sampler):
    """A sampler bound to a fixed parameter environment (used by check_pair)."""

    def __init__(self, env, seed=0, lo=0.2, hi=2.0):
        super().__init__(seed, lo, hi)
        self.env = env


def near(z, w, eps=POLE_EPS):
    return abs(complex(z) - complex(w)) < eps
