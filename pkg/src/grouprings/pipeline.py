"""Orchestration: group ingestion, run configuration and JSON-ready reports."""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import AlgebraElement
from .component import (
    DEFAULT_CANDIDATE_CAP,
    DEFAULT_HEIGHT_BUDGET,
    build_component,
    component_structure,
    wedderburn_summary,
)
from .errors import GroupRingError, InputError, ParameterInvalid, SchurIndexNotOne
from .groups import DEFAULT_CLOSURE_CAP, DEFAULT_SUBGROUP_CAP, all_subgroups, commutator_subgroup, parse_group_text
from .idempotents import matrix_units, primitive_idempotent_set
from .shoda import (
    DEFAULT_CHAIN_BUDGET,
    all_shoda_pairs,
    classify_declared,
    complete_irredundant_set,
    is_strong_shoda_pair,
)
from .units import exceptional_screen, unit_report

log = logging.getLogger(__name__)


@dataclass
class RunConfig:
    subgroup_cap: int = DEFAULT_SUBGROUP_CAP
    closure_cap: int = DEFAULT_CLOSURE_CAP
    trivialization_height_budget: int = DEFAULT_HEIGHT_BUDGET
    candidate_cap: int = DEFAULT_CANDIDATE_CAP
    chain_search_budget: int = DEFAULT_CHAIN_BUDGET
    output: str = "json"
    declared_pairs: list = None
    structure_only: bool = False

    def __post_init__(self):
        for name in ("subgroup_cap", "closure_cap", "trivialization_height_budget", "candidate_cap", "chain_search_budget"):
            if int(getattr(self, name)) <= 0:
                raise ParameterInvalid(f"{name} must be positive")
        if self.output not in ("json", "text"):
            raise ParameterInvalid("output must be json or text")


# -- ingestion -------------------------------------------------------------

def load_group_text(text, config=None, name=None):
    """Permutation generators, a JSON Cayley table, or ``extraspecial:<p>``."""
    config = config or RunConfig()
    first = text.strip().replace(":", " ").split()
    if first and first[0] == "extraspecial":
        from .extraspecial import heisenberg_dihedral

        try:
            p = int(first[1]) if len(first) > 1 else 5
        except ValueError as exc:
            raise InputError("extraspecial needs an integer prime") from exc
        G = heisenberg_dihedral(p)
        if G.order > config.closure_cap:
            from .errors import OrderBoundExceeded

            raise OrderBoundExceeded("group order exceeds cap", cap=config.closure_cap)
        return G
    return parse_group_text(text, cap=config.closure_cap, name=name)


def load_group(path, config=None):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read group file: {exc}") from exc
    return load_group_text(text, config, name=path.stem)


def parse_declared(G, data):
    """[(H, K, tower-or-None)] from {"pairs": [{"H": words, "K": words, "tower": [words...]}]}."""
    pairs = data["pairs"] if isinstance(data, dict) else data
    out = []
    for entry in pairs:
        try:
            H = G.subgroup(entry["H"])
            K = G.subgroup(entry["K"])
        except KeyError as exc:
            raise InputError("each declared pair needs H and K") from exc
        tower = [G.subgroup(w) for w in entry["tower"]] if entry.get("tower") else None
        out.append((H, K, tower))
    return out


def load_declared(G, path):
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read pairs file: {exc}") from exc
    return parse_declared(G, data)


# -- stages ------------------------------------------------------------------

def _subgroup_words(S):
    return list(S.members)


def group_info(G, config=None):
    orders = Counter(int(o) for o in G.element_orders)
    return {
        "name": G.name,
        "order": G.order,
        "generators": dict(zip(G.generator_labels, (int(g) for g in G.generators))),
        "abelian": G.is_abelian(),
        "classes": len(G.class_reps),
        "element_orders": {str(k): v for k, v in sorted(orders.items())},
        "derived_subgroup_order": commutator_subgroup(G).order,
    }


def classify(G, config):
    if config.declared_pairs is not None:
        return classify_declared(G, config.declared_pairs)
    return complete_irredundant_set(G, budget=config.chain_search_budget, cap=config.subgroup_cap)


def shoda_list(G, config):
    pairs = all_shoda_pairs(G, cap=config.subgroup_cap)
    classes = {}
    rows = []
    for p in pairs:
        key = p.idempotent.key()
        cls = classes.setdefault(key, len(classes))
        rows.append({
            "H": _subgroup_words(p.H),
            "K": _subgroup_words(p.K),
            "H_order": p.H.order,
            "K_order": p.K.order,
            "strong": is_strong_shoda_pair(G, p.H, p.K) is not None,
            "class": cls,
        })
    report = classify(G, config)
    return {
        "pairs": rows,
        "classes": len(classes),
        "verdict": report.verdict,
        "all_strong": report.all_strong,
        "chosen": [_classified_json(c) for c in report.pairs],
    }


def _classified_json(c):
    return {"pair": c.pair.describe(), "chain": c.chain.describe(), "strong": c.strong}


@dataclass
class PipelineResult:
    group: object
    report: object
    components: list
    structure_only: bool
    idempotent_sets: dict = field(default_factory=dict)
    unit_tables: dict = field(default_factory=dict)
    statuses: dict = field(default_factory=dict)


def run(G, config, stage="wedderburn"):
    """Classification, components and (depending on ``stage``) idempotents and matrix units."""
    report = classify(G, config)
    if config.structure_only:
        comps = [component_structure(c) for c in report.pairs]
        return PipelineResult(G, report, comps, True)
    comps = [
        build_component(c, config.trivialization_height_budget, config.candidate_cap)
        for c in report.pairs
    ]
    result = PipelineResult(G, report, comps, False)
    if stage in ("idempotents", "matrix-units", "units"):
        for i, comp in enumerate(comps):
            if not comp.trivialized:
                result.statuses[i] = {"status": SchurIndexNotOne.__name__, **(comp.failure or {})}
                continue
            pis = primitive_idempotent_set(comp)
            result.idempotent_sets[i] = pis
            if stage in ("matrix-units", "units"):
                result.unit_tables[i] = matrix_units(comp, pis)
            result.statuses[i] = {"status": "ok"}
    return result


def wedderburn_json(result):
    return wedderburn_summary(result.report, result.components)


def _label(comp, lab):
    a, s = lab
    return {"t": int(comp.T[a]), "sigma": int(s)}


def idempotents_json(result):
    out = []
    for i, comp in enumerate(result.components):
        row = {"pair": comp.pair.describe(), "e": comp.e.to_json(), **result.statuses.get(i, {})}
        pis = result.idempotent_sets.get(i)
        if pis is not None:
            row["normal_element"] = pis.normal_element.to_json()
            row["idempotents"] = [
                {"label": _label(comp, lab), "value": f.to_json()} for lab, f in pis.members.items()
            ]
        out.append(row)
    return {"group_order": result.group.order, "verdict": result.report.verdict, "components": out}


def matrix_units_json(result):
    out = []
    for i, comp in enumerate(result.components):
        row = {"pair": comp.pair.describe(), "e": comp.e.to_json(), **result.statuses.get(i, {})}
        mu = result.unit_tables.get(i)
        if mu is not None:
            row["matrix_units"] = [
                {"row": _label(comp, a), "col": _label(comp, b), "value": x.to_json()}
                for (a, b), x in mu.items()
            ]
        out.append(row)
    return {"group_order": result.group.order, "verdict": result.report.verdict, "components": out}


def units_json(result, fallback_pairs=None, config=None):
    G = result.group
    subs = all_subgroups(G, config.subgroup_cap) if config else None
    rep = unit_report(G, result.components, result.unit_tables, fallback_pairs, subs)
    return {
        "group_order": G.order,
        "generators": [u.to_json() for u in rep["generators"]],
        "exceptional": rep["exceptional"],
        "notes": rep["notes"],
    }


def bundle_json(result, units=None):
    """Everything ``verify`` can re-check: central idempotents, idempotents, matrix units, units."""
    G = result.group
    comps = []
    for i, comp in enumerate(result.components):
        row = {"e": comp.e.to_json()}
        pis = result.idempotent_sets.get(i)
        if pis is not None:
            row["idempotents"] = [f.to_json() for f in pis.members.values()]
        mu = result.unit_tables.get(i)
        if mu is not None:
            labels = list(pis.members)
            pos = {lab: n for n, lab in enumerate(labels)}
            row["matrix_units"] = [
                {"row": pos[a], "col": pos[b], "value": x.to_json()} for (a, b), x in mu.items()
            ]
        comps.append(row)
    out = {
        "group": {
            "order": G.order,
            "generators": dict(zip(G.generator_labels, (int(g) for g in G.generators))),
        },
        "complete": result.report.covered,
        "components": comps,
    }
    if units is not None:
        out["units"] = units["generators"]
    return out


# -- verification --------------------------------------------------------------

def verify_bundle(G, bundle):
    """Re-check every ring identity in a bundle; returns a list of failure strings."""
    failures = []
    one = AlgebraElement.one(G)
    zero = AlgebraElement.zero(G)
    if "group" in bundle and int(bundle["group"].get("order", G.order)) != G.order:
        return ["bundle group order differs from the supplied group"]

    def el(data):
        return AlgebraElement.from_json(G, data)

    total_e = zero
    es = []
    for n, comp in enumerate(bundle.get("components", [])):
        e = el(comp["e"])
        es.append(e)
        total_e = total_e + e
        if e * e != e:
            failures.append(f"component {n}: e is not idempotent")
        if any(e.conjugate_by(g) != e for g in G.generators):
            failures.append(f"component {n}: e is not central")
        ids = [el(x) for x in comp.get("idempotents", [])]
        if ids:
            s = zero
            for a, f in enumerate(ids):
                s = s + f
                if f * f != f:
                    failures.append(f"component {n}: idempotent {a} is not idempotent")
                for b in range(a + 1, len(ids)):
                    g = ids[b]
                    if not (f * g).is_zero() or not (g * f).is_zero():
                        failures.append(f"component {n}: idempotents {a} and {b} are not orthogonal")
            if s != e:
                failures.append(f"component {n}: idempotents do not add up to e")
        mus = comp.get("matrix_units")
        if mus:
            table = {(int(u["row"]), int(u["col"])): el(u["value"]) for u in mus}
            size = max(r for r, _ in table) + 1
            for (a, b), x in table.items():
                for (c, d), y in table.items():
                    want = table.get((a, d), zero) if b == c else zero
                    if x * y != want:
                        failures.append(f"component {n}: E{a}{b} E{c}{d} relation fails")
            diag = zero
            for a in range(size):
                diag = diag + table.get((a, a), zero)
            if diag != e:
                failures.append(f"component {n}: diagonal matrix units do not add up to e")
    for a in range(len(es)):
        for b in range(a + 1, len(es)):
            if not (es[a] * es[b]).is_zero():
                failures.append(f"components {a} and {b} are not orthogonal")
    if bundle.get("complete") and es and total_e != one:
        failures.append("central idempotents do not add up to 1")
    for n, u in enumerate(bundle.get("units", [])):
        v, w = el(u["value"]), el(u["inverse"])
        if not (v.is_integral() and w.is_integral()):
            failures.append(f"unit {n}: non-integral coefficients")
        if v * w != one or w * v != one:
            failures.append(f"unit {n}: value * inverse != 1")
        kind = u.get("provenance", {}).get("kind", "")
        if kind in ("VPlus", "VMinus"):
            nil = v - one
            if not (nil * nil).is_zero():
                failures.append(f"unit {n}: off-diagonal part does not square to zero")
    return failures


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def error_payload(err):
    if isinstance(err, GroupRingError):
        return {"error": {"kind": err.kind, "reason": err.reason, "message": str(err), "details": _jsonable(err.details)}}
    return {"error": {"kind": "invariant", "reason": type(err).__name__, "message": str(err), "details": {}}}


def _jsonable(obj):
    try:
        json.dumps(obj)
        return obj
    except TypeError:
        return {k: str(v) for k, v in obj.items()} if isinstance(obj, dict) else str(obj)
