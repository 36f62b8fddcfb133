"""Orthogonal function pairs (f, g) and their pointwise checks."""
from dataclasses import dataclass, field, replace
import time
from typing import Callable

from .errors import ConfigError, PoleError
from .qseries import DEFAULT_TRUNCATION, Truncation, theta
from .report import Tracker, VerificationReport, status_for
from .sampling import POLE_EPS, EnvSampler, near


@dataclass(frozen=True)
class ParamEnv:
    bindings: dict = field(default_factory=dict)
    truncation: Truncation = DEFAULT_TRUNCATION

    def __getitem__(self, name):
        try:
            return self.bindings[name]
        except KeyError:
            raise ConfigError(f"parameter {name!r} is not bound") from None

    def get(self, name, default=None):
        return self.bindings.get(name, default)

    def with_(self, **kw):
        b = dict(self.bindings)
        b.update(kw)
        return replace(self, bindings=b)

    def with_truncation(self, tr):
        return replace(self, truncation=tr)


@dataclass(frozen=True)
class FunctionPair:
    name: str
    f: Callable
    g: Callable
    param_names: tuple = ()
    pole_predicate: Callable = None
    claims_g_antisymmetric: bool = True
    claims_f_self_orthogonal: bool = False
    truncation_limited: bool = False
    defaults: dict = field(default_factory=dict)
    description: str = ""
    anchor: str = ""

    def env(self, truncation=DEFAULT_TRUNCATION, **overrides):
        b = dict(self.defaults)
        b.update(overrides)
        return ParamEnv(b, truncation)

    def is_pole(self, x, y, env):
        if self.pole_predicate is None:
            return False
        return bool(self.pole_predicate(x, y, env))

    def check_bound(self, env):
        missing = [p for p in self.param_names if p not in env.bindings]
        if missing:
            raise ConfigError(f"pair {self.name}: unbound parameters {missing}")

    def tolerance(self, tol, env):
        """Tolerance actually applied; theta-based pairs use the truncation budget."""
        if self.truncation_limited:
            return min(tol, 100.0 * env.truncation.tail_tol)
        return tol


def _axes_pole(x, y, env):
    return near(x, 0) or near(y, 0)


def _prod_pole(x, y, env):
    return near(x * y, 0)


# -- the built-in pairs -------------------------------------------------------

def _xmy(x, y, env):
    return x - y


def _s2(x, y, env):
    return (y - x) * (1 - x * y / env["d"])


def _s3(x, y, env):
    return (x - y) * (1 - env["b"] / (env["a"] * x * y))


def _s4(x, y, env):
    q = env["q"]
    tr = env.truncation
    return y * theta(x * y, q, tr) * theta(x / y, q, tr)


def _c1_f(x, y, env):
    P = env["P"]
    Q = env["Q"]
    px = sum(c * x ** i for i, c in enumerate(P))
    qx = sum(c * x ** i for i, c in enumerate(Q))
    return px + y * qx


def _c2_f(x, y, env):
    return (1 - env["a"] * x * y) * (1 - env["b"] * x / y)


def _c3_f(x, y, env):
    return (x + y) * (x + env["b"] / (env["a"] * y))


def _one(x, y, env):
    return 1.0


def _broken_f(x, y, env):
    return x * y * y


def builtin_pairs():
    """The seven built-in orthogonal pairs S1-S4 and C1-C3."""
    return [
        FunctionPair("S1", _xmy, _xmy, (), None, True, True,
                     description="f = g = x - y",
                     anchor="self-orthogonal difference pair"),
        FunctionPair("S2", _s2, _s2, ("d",), None, True, True,
                     defaults={"d": 2.0},
                     description="f = g = (y - x)(1 - xy/d)",
                     anchor="self-orthogonal quadratic pair"),
        FunctionPair("S3", _s3, _s3, ("a", "b"), _prod_pole, True, True,
                     defaults={"a": 0.5, "b": 0.25},
                     description="f = g = (x - y)(1 - b/(a x y))",
                     anchor="self-orthogonal pair with a Laurent factor"),
        FunctionPair("S4", _s4, _s4, ("q",), _axes_pole, True, True,
                     truncation_limited=True, defaults={"q": 0.3},
                     description="f = g = y theta(xy) theta(x/y)",
                     anchor="theta addition formula"),
        FunctionPair("C1", _c1_f, _xmy, ("P", "Q"), None, True, False,
                     defaults={"P": (1.0, 2.0), "Q": (3.0, -1.0)},
                     description="f = P(x) + y Q(x), g = x - y",
                     anchor="linear-in-y partner of x - y"),
        FunctionPair("C2", _c2_f, _s3, ("a", "b"), _axes_pole, True, False,
                     defaults={"a": 0.5, "b": 0.25},
                     description="f = (1 - axy)(1 - bx/y), g = (x - y)(1 - b/(axy))",
                     anchor="bibasic pair of Gasper-Rahman type"),
        FunctionPair("C3", _c3_f, _s3, ("a", "b"), _axes_pole, True, False,
                     defaults={"a": 0.5, "b": 0.25},
                     description="f = (x + y)(x + b/(ay)), g = (x - y)(1 - b/(axy))",
                     anchor="sum-type partner of (x - y)(1 - b/(axy))"),
    ]


def one_xy_pair():
    """f = 1 against g = x - y (orthogonal because the g-terms telescope)."""
    return FunctionPair("one_xy", _one, _xmy, (), None, True, False,
                        description="f = 1, g = x - y")


def broken_pair():
    """Negative control: f = x y^2 is not orthogonal to g = x - y."""
    return FunctionPair("BROKEN", _broken_f, _xmy, (), None, True, False,
                        description="f = x y^2, g = x - y (not orthogonal)",
                        anchor="negative control")


def pair_by_name(name, adversarial=False):
    for p in builtin_pairs():
        if p.name == name:
            return p
    if name == "BROKEN" and adversarial:
        return broken_pair()
    from .errors import UnknownTarget
    raise UnknownTarget(name)


# -- pointwise residuals -------------------------------------------------------

def _guard(pair, env, *arg_pairs):
    for x, y in arg_pairs:
        if pair.is_pole(x, y, env):
            raise PoleError(f"{pair.name}: ({x}, {y}) is within {POLE_EPS} of a pole")


def orthogonality_terms(pair, env, a, b, c, x, f=None):
    """The three terms g(a,b)f(x,c), -g(a,c)f(x,b), g(b,c)f(x,a)."""
    f = pair.f if f is None else f
    g = pair.g
    _guard(pair, env, (a, b), (a, c), (b, c), (x, c), (x, b), (x, a))
    return (g(a, b, env) * f(x, c, env),
            -g(a, c, env) * f(x, b, env),
            g(b, c, env) * f(x, a, env))


def orthogonality_residual(pair, env, a, b, c, x):
    """g(a,b)f(x,c) - g(a,c)f(x,b) + g(b,c)f(x,a)."""
    return complex(sum(orthogonality_terms(pair, env, a, b, c, x)))


def cross_terms(pair, env, a, b, c, d):
    f, g = pair.f, pair.g
    _guard(pair, env, (a, c), (b, d), (b, c), (a, d), (a, b), (c, d))
    return (f(a, c, env) * g(b, d, env),
            -g(b, c, env) * f(a, d, env),
            -f(a, b, env) * g(c, d, env))


def cross_factorization_residual(pair, env, a, b, c, d):
    """f(a,c)g(b,d) - g(b,c)f(a,d) - f(a,b)g(c,d)."""
    return complex(sum(cross_terms(pair, env, a, b, c, d)))


def antisymmetry_residual(pair, env, x, y):
    _guard(pair, env, (x, y), (y, x))
    return complex(pair.g(x, y, env) + pair.g(y, x, env))


def _rel(terms):
    s = complex(sum(terms))
    scale = max(abs(t) for t in terms)
    return abs(s), (abs(s) / scale if scale > 1e-14 else abs(s))


def check_pair(pair, env_sampler, samples, tol):
    """Sample orthogonality, cross-factorization and antisymmetry residuals.

    Pole hits are resampled and counted; the check fails if more than 90% of
    the draws had to be rejected.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    env = env_sampler.env
    pair.check_bound(env)
    t0 = time.perf_counter()
    tol_eff = pair.tolerance(tol, env)
    tr = Tracker()
    done = rejected = 0
    max_attempts = 10 * samples + 100
    while done < samples and done + rejected < max_attempts:
        a, b, c, x, d = env_sampler.scalars(5)
        try:
            checks = [("orthogonality", orthogonality_terms(pair, env, a, b, c, x)),
                      ("cross", cross_terms(pair, env, a, b, c, d))]
            if pair.claims_f_self_orthogonal:
                checks.append(("self", orthogonality_terms(
                    replace(pair, g=pair.f), env, a, b, c, x)))
            if pair.claims_g_antisymmetric:
                gxy = pair.g(a, b, env)
                checks.append(("antisymmetry", (gxy, pair.g(b, a, env))))
        except PoleError:
            rejected += 1
            continue
        done += 1
        for label, terms in checks:
            ar, rr = _rel(terms)
            tr.add(ar, rr, {"check": label, "args": {
                "a": [a.real, a.imag], "b": [b.real, b.imag], "c": [c.real, c.imag],
                "x": [x.real, x.imag], "d": [d.real, d.imag]}})
    status = status_for(tr.max_rel, tol_eff)
    total = done + rejected
    if total == 0 or rejected / total > 0.9 or done < samples:
        status = "fail"
    detail = dict(tr.worst)
    detail["tolerance"] = tol_eff
    return VerificationReport(
        name=pair.name, status=status, max_abs_residual=tr.max_abs,
        max_rel_residual=tr.max_rel, samples_run=done, rejections=rejected,
        seed=env_sampler.seed,
        elapsed_ms=int(1000 * (time.perf_counter() - t0)), detail=detail)


def default_sampler(pair, seed=0, truncation=DEFAULT_TRUNCATION, **overrides):
    return EnvSampler(pair.env(truncation, **overrides), seed)
