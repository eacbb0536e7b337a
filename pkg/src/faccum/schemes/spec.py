from __future__ import annotations

import json
from dataclasses import dataclass, field


from ..exact import DomainError, Rational, to_rational

BINOMIAL = "binomial"
NEG_BINOMIAL = "neg-binomial"
HYPERGEOMETRIC = "hypergeometric"
NEG_HYPERGEOMETRIC = "neg-hypergeometric"
GAS_INDISTINCT = "gas-indistinct"
GAS_DISTINCT = "gas-distinct"
GAS_COLOURED = "gas-coloured"
GAS_FOREST = "gas-forest"
GIAS_NEGMULTI = "gias-negmulti"
GIAS_DIRICHLET = "gias-dirichlet"

CLASSICAL = (BINOMIAL, NEG_BINOMIAL, HYPERGEOMETRIC, NEG_HYPERGEOMETRIC)
GAS = (GAS_INDISTINCT, GAS_DISTINCT, GAS_COLOURED, GAS_FOREST)
GIAS = (GIAS_NEGMULTI, GIAS_DIRICHLET)
FAMILIES = CLASSICAL + GAS + GIAS

# parameter name -> "int" (positive integer), "nonneg" (integer >= 0),
# "prob" (rational in (0,1)) or "pos" (positive rational)
_SCHEMA = {
    BINOMIAL: {"n": "int", "p": "prob"},
    NEG_BINOMIAL: {"n": "int", "p": "prob"},
    HYPERGEOMETRIC: {"N": "int", "M": "int", "n": "int"},
    NEG_HYPERGEOMETRIC: {"n": "int", "alpha": "pos", "beta": "pos"},
    GAS_INDISTINCT: {"n": "int", "N": "int", "r": "nonneg"},
    GAS_DISTINCT: {"n": "int", "N": "int", "r": "nonneg"},
    GAS_FOREST: {"n": "int", "N": "int", "r": "nonneg"},
    GAS_COLOURED: {"n": "int", "N": "int", "M": "int", "r": "nonneg"},
    GIAS_NEGMULTI: {"n": "int", "N": "int", "p": "prob", "r": "nonneg"},
    GIAS_DIRICHLET: {"n": "int", "N": "int", "a": "pos", "b": "pos", "r": "nonneg"},
}


def _as_int(name, value, minimum):
    if isinstance(value, bool):
        raise DomainError(f"{name} must be an integer")
    if isinstance(value, float):
        if not value.is_integer():
            raise DomainError(f"{name} must be an integer, got {value}")
        value = int(value)
    try:
        q = to_rational(value)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name}: {exc}") from None
    if q.denominator != 1:
        raise DomainError(f"{name} must be an integer, got {value}")
    v = int(q)
    if v < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {v}")
    return v


def _as_rational(name, value, kind):
    try:
        q = to_rational(value)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name}: {exc}") from None
    if kind == "prob" and not 0 < q < 1:
        raise DomainError(f"{name} must lie in (0, 1), got {q}")
    if kind == "pos" and not q > 0:
        raise DomainError(f"{name} must be positive, got {q}")
    return q


@dataclass(frozen=True)
class SchemeSpec:
    """One distribution scheme and its parameters.

    Counts are Python ints; probabilities and real parameters are exact
    rationals (floats are read through their decimal repr).
    """

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in _SCHEMA:
            raise DomainError(f"unknown family {self.family!r}")
        schema = _SCHEMA[self.family]
        extra = set(self.params) - set(schema)
        missing = set(schema) - set(self.params)
        if extra:
            raise DomainError(f"{self.family}: unexpected parameters {sorted(extra)}")
        if missing:
            raise DomainError(f"{self.family}: missing parameters {sorted(missing)}")
        clean = {}
        for name, kind in schema.items():
            v = self.params[name]
            if kind in ("int", "nonneg"):
                clean[name] = _as_int(name, v, 1 if kind == "int" else 0)
            else:
                clean[name] = _as_rational(name, v, kind)
        object.__setattr__(self, "params", clean)
        self._check_constraints()

    def _check_constraints(self):
        p = self.params
        if self.family == HYPERGEOMETRIC and p["n"] > min(p["N"], p["M"]):
            raise DomainError("hypergeometric scheme needs n <= min(N, M)")
        if self.family == GAS_COLOURED and p["M"] < p["n"]:
            raise DomainError("coloured scheme needs M >= n")
        if self.family == GIAS_NEGMULTI and not p["N"] * p["p"] < 1:
            raise DomainError("negative multinomial scheme needs N * p < 1")

    def __getattr__(self, name):
        params = self.__dict__.get("params", {})
        if name in params:
            return params[name]
        raise AttributeError(name)

    def __hash__(self):
        return hash((self.family, tuple(sorted(self.params.items()))))

    @property
    def n(self) -> int:
        return self.params["n"]

    @property
    def r(self) -> int:
        return self.params.get("r", 0)

    def replace(self, **changes) -> "SchemeSpec":
        return SchemeSpec(self.family, {**self.params, **changes})

    @property
    def is_exact(self) -> bool:
        """Whether factorial moments are finite products of rationals."""
        if self.family == GIAS_DIRICHLET:
            return self.params["a"].denominator == 1
        return True

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        out = {}
        for k, v in self.params.items():
            if isinstance(v, Rational):
                out[k] = int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
            else:
                out[k] = v
        return {"family": self.family, "params": out}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "SchemeSpec":
        if "family" not in d:
            raise DomainError("scheme spec needs a 'family' field")
        return cls(d["family"], dict(d.get("params", {})))

    @classmethod
    def from_json(cls, text: str) -> "SchemeSpec":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid scheme JSON: {exc}") from None
        return cls.from_dict(d)


def family_params(family: str) -> tuple[str, ...]:
    return tuple(_SCHEMA[family])


__all__ = [
    "SchemeSpec",
    "FAMILIES",
    "CLASSICAL",
    "GAS",
    "GIAS",
    "family_params",
]
