"""Map check selectors (family names, tags, configs) to rows."""

from __future__ import annotations

from collections import defaultdict

from salbp.errors import IncompatibleConfig
from salbp.formulations.config import IMPULSE, STEP, FormulationConfig
from salbp.formulations import rows as R

_FAMILIES = ("PA", "BW", "TS", "RC1", "RC2", "SC")

# limit tags and the level whose rows contain them
_LIMIT_LEVEL = {
    "lim.EL": 2,
    "lim.PF1": 3,
    "lim.SPF1": 4,
    "lim.RT": 3,
    "lim.PF2e": 3,
    "lim.PF2l": 3,
    "lim.SPF2e": 4,
    "lim.SPF2l": 4,
    "lim.ST": 4,
}


def _group(rows) -> dict[str, list]:
    out: dict[str, list] = defaultdict(list)
    for row in rows:
        out[row.tag].append(row)
    return dict(out)


def rows_for(selector, kind: str, ctx) -> dict[str, list]:
    if isinstance(selector, FormulationConfig):
        return _group(R.model_rows(selector, ctx))
    sel = str(selector)
    if sel in _FAMILIES:
        return {sel: R.precedence_rows(sel, ctx)}
    if sel.startswith("prec.") and sel[5:] in _FAMILIES:
        return {sel: R.precedence_rows(sel[5:], ctx)}
    if sel == "occ":
        return {sel: R.occurrence_rows(kind, ctx)}
    if sel == "cap":
        return {sel: R.capacity_rows(kind, ctx)}
    if sel == "cont":
        return {sel: R.continuity_rows(ctx)}
    if sel.startswith("level") and sel[5:].isdigit():
        return _group(R.limit_rows(int(sel[5:]), kind, ctx))
    if sel in _LIMIT_LEVEL:
        limit_kind = STEP if sel == "lim.ST" else (IMPULSE if sel != "lim.RT" else kind)
        rows = R.limit_rows(_LIMIT_LEVEL[sel], limit_kind, ctx)
        return {sel: [r for r in rows if r.tag == sel]}
    raise IncompatibleConfig(f"unknown check selector {selector!r}")
