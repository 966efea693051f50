"""Structured pass/fail records for the verification suite."""

from __future__ import annotations

import json
import math
import numbers
from dataclasses import asdict, dataclass, field

FLOAT_DIGITS = 17


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {_encode(obj[k], indent, level + 1)}"
            for k in sorted(obj)
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, numbers.Integral):
        return str(int(obj))
    if isinstance(obj, numbers.Real):
        obj = float(obj)
        if not math.isfinite(obj):
            return "null"
        text = format(obj, f".{FLOAT_DIGITS}g")
        # keep floats recognisable as floats after a round trip
        return text if any(c in text for c in ".e") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj, indent: int = 2) -> str:
    """Sorted-key JSON with every float written to 17 significant digits.

    17 digits always round-trip an IEEE double, and fixing the digit count
    (rather than using the shortest repr) keeps the layout uniform.
    """
    return _encode(obj, indent, 0) + "\n"


@dataclass
class Check:
    """One identity check.

    ``passed`` is the raw outcome; ``expect_pass`` says whether the check
    should hold for these parameters (positivity outside its regime is
    expected to fail).  ``ok`` is true when the two agree.
    """

    name: str
    anchor: str
    computed: float
    expected: float
    tolerance: float
    passed: bool
    expect_pass: bool = True
    abs_err: float = field(init=False)
    rel_err: float = field(init=False)
    seconds: float = 0.0

    def __post_init__(self):
        self.computed = float(self.computed)
        self.expected = float(self.expected)
        self.passed = bool(self.passed)
        self.abs_err = abs(self.computed - self.expected)
        denom = abs(self.expected)
        self.rel_err = self.abs_err / denom if denom else self.abs_err

    @property
    def ok(self) -> bool:
        return self.passed == self.expect_pass

    def status(self) -> str:
        if self.ok:
            return "pass" if self.expect_pass else "expected-fail"
        return "FAIL"

    def to_dict(self, timings: bool = False) -> dict:
        d = asdict(self)
        d["pass"] = self.ok
        d["status"] = self.status()
        if not timings:
            d.pop("seconds")
        for key, val in d.items():
            if isinstance(val, float) and not math.isfinite(val):
                d[key] = None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Check":
        keys = ("name", "anchor", "computed", "expected", "tolerance", "passed", "expect_pass")
        out = cls(**{k: d[k] for k in keys})
        out.seconds = d.get("seconds", 0.0)
        return out


@dataclass
class VerifyReport:
    params: dict
    seed: int
    checks: list = field(default_factory=list)
    settings: dict = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "params": self.params,
            "seed": self.seed,
            "settings": self.settings,
            "ok": self.ok,
            "checks": [c.to_dict(timings) for c in self.checks],
        }

    def to_json(self, timings: bool = False) -> str:
        return canonical_json(self.to_dict(timings))

    @classmethod
    def from_json(cls, text: str) -> "VerifyReport":
        d = json.loads(text)
        rep = cls(d["params"], d["seed"], settings=d.get("settings", {}))
        rep.checks = [Check.from_dict(c) for c in d["checks"]]
        return rep

    def summary_lines(self) -> list:
        width = max((len(c.name) for c in self.checks), default=0)
        return [
            f"{c.status():13s} {c.name:<{width}}  computed={c.computed:.3e} tol={c.tolerance:.1e}"
            for c in self.checks
        ]
