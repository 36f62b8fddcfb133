"""Verification reports and residual helpers."""
from dataclasses import asdict, dataclass, field
import json
import math

SCHEMA_VERSION = 1
# Below this magnitude on both sides a comparison is made absolutely.
ABS_FLOOR = 1e-14


def rel_residual(lhs, rhs):
    """(absolute, relative) residual between two scalars.

    The relative residual divides by the larger magnitude of the two sides,
    except when both are below ABS_FLOOR where the absolute value is used.
    """
    d = abs(complex(lhs) - complex(rhs))
    scale = max(abs(lhs), abs(rhs))
    if scale < ABS_FLOOR:
        return d, d
    return d, d / scale


def terms_residual(terms):
    """Residual of a sum that should vanish, relative to its largest term."""
    total = sum(complex(t) for t in terms)
    scale = max((abs(t) for t in terms), default=0.0)
    d = abs(total)
    if scale < ABS_FLOOR:
        return d, d
    return d, d / scale


def cnum(z):
    """JSON-friendly [re, im] pair."""
    z = complex(z)
    return [z.real, z.imag]


@dataclass
class VerificationReport:
    name: str
    status: str
    max_abs_residual: float
    max_rel_residual: float
    samples_run: int = 0
    rejections: int = 0
    seed: int = 0
    elapsed_ms: int = 0
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == "pass"

    def to_dict(self):
        d = asdict(self)
        for key in ("max_abs_residual", "max_rel_residual"):
            v = d[key]
            if not math.isfinite(v):
                d[key] = str(v)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def status_for(rel, tol):
    return "pass" if (math.isfinite(rel) and rel <= tol) else "fail"


class Tracker:
    """Accumulates worst-case residuals while a check runs."""

    def __init__(self):
        self.max_abs = 0.0
        self.max_rel = 0.0
        self.worst = {}

    def add(self, abs_res, rel_res, record=None):
        if not math.isfinite(rel_res):
            rel_res = math.inf
        if not math.isfinite(abs_res):
            abs_res = math.inf
        self.max_abs = max(self.max_abs, abs_res)
        if rel_res > self.max_rel or (rel_res == self.max_rel and not self.worst):
            self.max_rel = rel_res
            if record is not None:
                self.worst = record
