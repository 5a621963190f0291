"""Golden regression corpus.

Each entry runs the full pipeline, re-verifies its own bundle and reduces the
result to a deterministic summary plus a SHA-256 digest of the bundle.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass
from importlib import resources

from .errors import VerificationFailed
from .pipeline import (
    RunConfig,
    bundle_json,
    dumps,
    load_group_text,
    parse_declared,
    run,
    units_json,
    verify_bundle,
    wedderburn_json,
)
from .units import NONE, bicyclic_fallback, screen_through_quotient

GOLDEN_FILE = "corpus_golden.json"


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    group_file: str
    pairs_file: str = None
    slow: bool = False
    fallback: tuple = ()


# bicyclic units used for the exceptional part of the order-1000 group
P5_FALLBACK = (("a", "a^2*b"), ("a", "b"), ("b", "a*b"), ("a", "a^3*b"))

CORPUS = (
    CorpusEntry("S3", "s3.txt"),
    CorpusEntry("D8", "d8.txt"),
    CorpusEntry("D16", "d16.txt"),
    CorpusEntry("Q8", "q8.txt"),
    CorpusEntry("C7:C3", "c7c3.txt"),
    CorpusEntry("C5:C4", "c5c4.txt"),
    CorpusEntry("P5:D8", "p5.txt", "p5_pairs.json", slow=True, fallback=P5_FALLBACK),
)


def data_text(name):
    return resources.files("grouprings").joinpath(f"data/{name}").read_text()


def digest(obj):
    return hashlib.sha256(dumps(obj).encode()).hexdigest()


def _check(G, bundle, name):
    failures = verify_bundle(G, bundle)
    if failures:
        raise VerificationFailed(f"{name}: bundle does not verify", failures=failures)


def _unit_counts(units):
    return dict(sorted(Counter(u["provenance"]["kind"] for u in units["generators"]).items()))


def run_entry(entry, config=None):
    config = config or RunConfig()
    G = load_group_text(data_text(entry.group_file), config, name=entry.name)
    if entry.pairs_file:
        declared = parse_declared(G, json.loads(data_text(entry.pairs_file)))
        cfg = RunConfig(
            subgroup_cap=config.subgroup_cap,
            closure_cap=config.closure_cap,
            trivialization_height_budget=config.trivialization_height_budget,
            candidate_cap=config.candidate_cap,
            chain_search_budget=config.chain_search_budget,
            declared_pairs=declared,
            structure_only=True,
        )
        result = run(G, cfg)
        pairs = [(G.element_from_word(g), G.element_from_word(h)) for g, h in entry.fallback]
        exceptional = []
        for c in result.components:
            kind = screen_through_quotient(c.classified)
            if kind != NONE:
                exceptional.append({"component": c.classified.pair.describe(), "kind": kind})
        units = {
            "generators": [u.to_json() for u in bicyclic_fallback(G, pairs)],
            "exceptional": exceptional,
            "notes": ["structure-only run; generators are the declared bicyclic units"],
        }
        bundle = {"group": {"order": G.order}, "units": units["generators"]}
        components = [c.describe() for c in result.components]
    else:
        result = run(G, config, "units")
        units = units_json(result, config=config)
        bundle = bundle_json(result, units)
        components = []
        for i, comp in enumerate(result.components):
            row = comp.describe()
            row["status"] = result.statuses.get(i, {}).get("status", "ok")
            pis = result.idempotent_sets.get(i)
            row["idempotents"] = len(pis.members) if pis is not None else 0
            row["matrix_units"] = len(result.unit_tables.get(i, {}))
            components.append(row)
    _check(G, bundle, entry.name)
    w = wedderburn_json(result)
    return {
        "name": entry.name,
        "order": G.order,
        "verdict": w["verdict"],
        "all_strong": w["all_strong"],
        "contributions": [c["contribution"] for c in w["components"]],
        "total_dimension": w["total_dimension"],
        "components": components,
        "units": _unit_counts(units),
        "exceptional": units["exceptional"],
        "bundle_sha256": digest(bundle),
    }


def load_golden():
    try:
        return json.loads(data_text(GOLDEN_FILE))
    except FileNotFoundError:
        return None


def corpus_run(config=None, skip_slow=False, golden=None):
    """Run every entry; compare digests with the golden file when one is available."""
    entries = [e for e in CORPUS if not (skip_slow and e.slow)]
    results = [run_entry(e, config) for e in entries]
    golden = load_golden() if golden is None else golden
    mismatches = []
    if golden:
        for r in results:
            want = golden.get(r["name"])
            if want is not None and want != r["bundle_sha256"]:
                mismatches.append(r["name"])
    return {
        "entries": results,
        "golden": "absent" if not golden else ("mismatch" if mismatches else "match"),
        "mismatches": mismatches,
    }


def golden_digests(report):
    return {r["name"]: r["bundle_sha256"] for r in report["entries"]}
