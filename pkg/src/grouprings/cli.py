"""``grouprings`` command-line interface."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import corpus
from .errors import EXIT_CODES, GroupRingError, InputError, VerificationFailed
from .pipeline import (
    RunConfig,
    bundle_json,
    dumps,
    error_payload,
    group_info,
    idempotents_json,
    load_declared,
    load_group,
    matrix_units_json,
    run,
    shoda_list,
    units_json,
    verify_bundle,
    wedderburn_json,
)

COMMANDS = ("group info", "shoda list", "wedderburn", "idempotents", "matrix-units", "units", "verify", "corpus run")


def _add_common(p, group_required=True):
    p.add_argument("--group", required=group_required, help="group file (permutations, JSON table or extraspecial:<p>)")
    p.add_argument("--pairs", help="declared Shoda pairs (JSON)")
    p.add_argument("--cap", type=int, default=200, help="subgroup enumeration cap")
    p.add_argument("--closure-cap", type=int, default=5000, help="group closure cap")
    p.add_argument("--budget", type=int, default=64, help="trivialization height budget")
    p.add_argument("--candidate-cap", type=int, default=20000, help="norm-search candidate cap")
    p.add_argument("--chain-budget", type=int, default=20000, help="chain search node budget")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", help="write the report into this directory instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="grouprings", description="Wedderburn components, idempotents and units of QG and ZG.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    group = sub.add_parser("group").add_subparsers(dest="action", required=True)
    _add_common(group.add_parser("info", help="basic group data"))
    shoda = sub.add_parser("shoda").add_subparsers(dest="action", required=True)
    _add_common(shoda.add_parser("list", help="Shoda pairs with strong flags and equivalence classes"))

    for name, text in (
        ("wedderburn", "simple components and their dimensions"),
        ("idempotents", "primitive idempotents of every split component"),
        ("matrix-units", "matrix units of every split component"),
        ("units", "unit generators with provenance"),
    ):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        if name == "matrix-units" or name == "units":
            p.add_argument("--bundle", action="store_true", help="emit a bundle that `verify` accepts")

    v = sub.add_parser("verify", help="re-check a JSON bundle against all ring identities")
    _add_common(v)
    v.add_argument("bundle", help="bundle file")

    c = sub.add_parser("corpus").add_subparsers(dest="action", required=True)
    cr = c.add_parser("run", help="run the golden regression corpus")
    _add_common(cr, group_required=False)
    cr.add_argument("--skip-slow", action="store_true", help="leave out the order-1000 entry")
    cr.add_argument("--write-golden", help="write the digests to this file")
    return parser


def _config(args, declared=None, structure_only=False):
    return RunConfig(
        subgroup_cap=args.cap,
        closure_cap=args.closure_cap,
        trivialization_height_budget=args.budget,
        candidate_cap=args.candidate_cap,
        chain_search_budget=args.chain_budget,
        output=args.format,
        declared_pairs=declared,
        structure_only=structure_only,
    )


def _load(args, stage):
    config = _config(args)
    G = load_group(args.group, config)
    if args.pairs:
        declared = load_declared(G, args.pairs)
        # declared-pair mode skips matrix units for the wedderburn stage only
        config = _config(args, declared, structure_only=(stage == "wedderburn"))
    return G, config


def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def render(obj, fmt):
    if fmt == "text":
        return "\n".join(_text(json.loads(json.dumps(obj, sort_keys=True)))) + "\n"
    return dumps(obj)


def execute(args):
    """Run a parsed command; returns (payload, exit code)."""
    cmd = args.command
    if cmd == "group":
        G, _ = _load(args, cmd)
        return group_info(G), 0
    if cmd == "shoda":
        G, config = _load(args, cmd)
        return shoda_list(G, config), 0
    if cmd == "corpus":
        config = _config(args)
        report = corpus.corpus_run(config, skip_slow=args.skip_slow)
        if args.write_golden:
            Path(args.write_golden).write_text(dumps(corpus.golden_digests(report)))
        elif report["mismatches"]:
            raise VerificationFailed("corpus output differs from the golden digests", entries=report["mismatches"])
        return report, 0
    if cmd == "verify":
        G, _ = _load(args, cmd)
        try:
            bundle = json.loads(Path(args.bundle).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read bundle: {exc}") from exc
        failures = verify_bundle(G, bundle)
        if failures:
            raise VerificationFailed("bundle does not verify", failures=failures)
        return {"verified": True, "components": len(bundle.get("components", [])), "units": len(bundle.get("units", []))}, 0
    G, config = _load(args, cmd)
    result = run(G, config, cmd)
    if cmd == "wedderburn":
        return wedderburn_json(result), 0
    if cmd == "idempotents":
        return idempotents_json(result), 0
    if cmd == "matrix-units":
        return (bundle_json(result) if args.bundle else matrix_units_json(result)), 0
    units = units_json(result, config=config)
    return (bundle_json(result, units) if args.bundle else units), 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    fmt = getattr(args, "format", "json")
    try:
        payload, code = execute(args)
    except GroupRingError as err:
        payload, code = error_payload(err), EXIT_CODES[err.kind]
    text = render(payload, fmt)
    out = getattr(args, "out", None)
    if out and code == 0:
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        name = args.command + (f"-{args.action}" if getattr(args, "action", None) else "")
        (path / f"{name}.{'json' if fmt == 'json' else 'txt'}").write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
