"""Catalog of formulation variants and their labels."""

from __future__ import annotations

import re
from dataclasses import dataclass

from salbp.errors import IncompatibleConfig

IMPULSE = "impulse"
STEP = "step"

IMPULSE_FAMILIES = ("PA", "BW", "TS", "RC1", "RC2")
STEP_FAMILIES = ("SC",)
LEVELS = (1, 2, 3, 4)


@dataclass(frozen=True)
class FormulationConfig:
    variable_kind: str
    precedence_family: str
    limit_level: int

    def __post_init__(self):
        if self.limit_level not in LEVELS:
            raise IncompatibleConfig(f"limit level must be one of {LEVELS}, got {self.limit_level}")
        if self.variable_kind == IMPULSE:
            ok = self.precedence_family in IMPULSE_FAMILIES
        elif self.variable_kind == STEP:
            ok = self.precedence_family in STEP_FAMILIES
        else:
            raise IncompatibleConfig(f"unknown variable kind {self.variable_kind!r}")
        if not ok:
            raise IncompatibleConfig(
                f"precedence family {self.precedence_family} cannot be used with "
                f"{self.variable_kind} variables"
            )

    @property
    def label(self) -> str:
        return f"{self.precedence_family}-{self.limit_level}"

    def __str__(self):
        return self.label


def impulse(family: str, level: int) -> FormulationConfig:
    return FormulationConfig(IMPULSE, family, level)


def step(level: int) -> FormulationConfig:
    return FormulationConfig(STEP, "SC", level)


# In compact labels "RC" is the rc1 family and "RC'" the rc2 family.
_TABLE_NAMES = {"PA": "PA", "BW": "BW", "TS": "TS", "RC": "RC1", "RC'": "RC2", "SC": "SC"}
_HYPHEN = re.compile(r"^(PA|BW|TS|RC1|RC2|RC'|RC|SC)-([1-4])$")
_COMPACT = re.compile(r"^(PA|BW|TS|RC'|RC|SC)([1-4])$")


def parse_config(label: str) -> FormulationConfig:
    """Parse ``RC2-4``/``SC-3`` style labels or compact names such as ``PA1``, ``RC'4``.

    In the compact table form the digit is the limit level, so ``RC2`` is
    the rc1 family at level 2; use the hyphenated form ``RC2-2`` for rc2.
    """
    text = label.strip().upper().replace("’", "'")
    m = _HYPHEN.match(text)
    if m:
        fam = {"RC": "RC1", "RC'": "RC2"}.get(m.group(1), m.group(1))
    else:
        m = _COMPACT.match(text)
        if not m:
            raise IncompatibleConfig(f"cannot parse formulation label {label!r}")
        fam = _TABLE_NAMES[m.group(1)]
    level = int(m.group(2))
    kind = STEP if fam == "SC" else IMPULSE
    return FormulationConfig(kind, fam, level)


def all_configs(include_step: bool = True) -> list[FormulationConfig]:
    out = [impulse(f, k) for f in IMPULSE_FAMILIES for k in LEVELS]
    if include_step:
        out += [step(k) for k in LEVELS]
    return out
