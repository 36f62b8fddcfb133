"""Command-line front end: ``fgverify list | verify NAME | suite``.

Exit codes: 0 when every report passes, 1 when any fails, 2 on a
configuration error or an unknown target.
"""
import argparse
import json
import os
import sys

from .errors import ConfigError, FGError, UnknownTarget
from .qseries import DEFAULT_TRUNCATION, Truncation
from .registry import RunConfig, check_overrides, get_target, parse_value, run_target, targets
from .report import SCHEMA_VERSION

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _common(p):
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: $FG_SEED or 0)")
    p.add_argument("--samples", type=int, default=None, help="samples per pair check")
    p.add_argument("--tol", type=float, default=None,
                   help="relative tolerance applied to every target")
    p.add_argument("--trunc-products", type=int, default=None, help="infinite-product factors")
    p.add_argument("--trunc-series", type=int, default=None, help="series terms per side")
    p.add_argument("--tail-tol", type=float, default=None, help="truncation tail tolerance")
    p.add_argument("--window", type=int, default=None, help="matrix / series window")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="parameter override, e.g. pair.S2.d=2.5 or catalog.gosper.x=1.4")
    p.add_argument("--config", help="file of key=value lines mirroring the flags")
    p.add_argument("--adversarial", action="store_true",
                   help="also register the broken negative-control pair")
    p.add_argument("--out", help="write the report here instead of stdout")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")


def build_parser():
    parser = argparse.ArgumentParser(prog="fgverify",
                                     description="Numerical verification of (f,g) identities.")
    sub = parser.add_subparsers(dest="command", required=True)
    lp = sub.add_parser("list", help="list every verification target")
    lp.add_argument("--adversarial", action="store_true")
    vp = sub.add_parser("verify", help="run one named target")
    vp.add_argument("target")
    _common(vp)
    sp = sub.add_parser("suite", help="run every target")
    _common(sp)
    return parser


def _split(item):
    if "=" not in item:
        raise ConfigError(f"expected key=value, got {item!r}")
    k, v = item.split("=", 1)
    return k.strip(), v.strip()


def read_config_file(path):
    """key=value lines; '#' starts a comment; 'set' may repeat."""
    values, sets = {}, []
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        k, v = _split(line)
        k = k.replace("-", "_")
        if k == "set":
            sets.append(v)
        else:
            values[k] = v
    return values, sets


_INT_KEYS = ("seed", "samples", "trunc_products", "trunc_series", "window")
_FLOAT_KEYS = ("tol", "tail_tol")


def make_config(args, environ=None):
    """Merge defaults, FG_SEED, the config file and the flags (flags win)."""
    environ = os.environ if environ is None else environ
    values, sets = {}, []
    if getattr(args, "config", None):
        values, sets = read_config_file(args.config)
    unknown = set(values) - set(_INT_KEYS) - set(_FLOAT_KEYS) - {"adversarial"}
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    merged = {}
    try:
        for k in _INT_KEYS:
            if k in values:
                merged[k] = int(values[k])
        for k in _FLOAT_KEYS:
            if k in values:
                merged[k] = float(values[k])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if "seed" not in merged and environ.get("FG_SEED"):
        try:
            merged["seed"] = int(environ["FG_SEED"])
        except ValueError:
            raise ConfigError("FG_SEED must be an integer") from None
    for k in _INT_KEYS + _FLOAT_KEYS:
        v = getattr(args, k, None)
        if v is not None:
            merged[k] = v
    overrides = {}
    for item in sets + list(args.set):
        k, v = _split(item)
        overrides[k] = parse_value(v)
    try:
        tr = Truncation(merged.get("trunc_products", DEFAULT_TRUNCATION.product_terms),
                        merged.get("trunc_series", DEFAULT_TRUNCATION.series_terms),
                        merged.get("tail_tol", DEFAULT_TRUNCATION.tail_tol))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    adversarial = args.adversarial or values.get("adversarial", "").lower() in ("1", "true", "yes")
    cfg = RunConfig(seed=merged.get("seed", 0), samples=merged.get("samples", 1000),
                    tol=merged.get("tol"), truncation=tr, window=merged.get("window", 12),
                    overrides=overrides, adversarial=adversarial)
    check_overrides(cfg)
    return cfg


def render_json(reports):
    return json.dumps({"schema": SCHEMA_VERSION, "reports": [r.to_dict() for r in reports]},
                      sort_keys=True, indent=2)


def render_text(reports):
    lines = []
    for r in reports:
        lines.append(f"{r.status.upper():7s} {r.name:30s} rel={r.max_rel_residual:.3e} "
                     f"abs={r.max_abs_residual:.3e} samples={r.samples_run}")
    n_pass = sum(r.status == "pass" for r in reports)
    n_fail = sum(r.status == "fail" for r in reports)
    lines.append(f"{n_pass} passed, {n_fail} failed, {len(reports) - n_pass - n_fail} skipped")
    return "\n".join(lines)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_list(adversarial=False):
    lines = []
    for kind, title in (("pair", "pairs"), ("inversion", "inversion scenarios"),
                        ("summation", "catalog instances"), ("series", "series checks"),
                        ("property", "catalog properties"), ("theta", "theta checks"),
                        ("bilateral", "bilateral checks")):
        group = [t for t in targets(adversarial) if t.kind == kind]
        lines.append(f"{title} ({len(group)}):")
        for t in group:
            lines.append(f"  {t.name:30s} {t.description}  [{t.anchor}]")
    return "\n".join(lines)


def cmd_verify(name, cfg):
    return [run_target(get_target(name, cfg.adversarial), cfg)]


def cmd_suite(cfg):
    return [run_target(t, cfg) for t in targets(cfg.adversarial)]


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    if args.command == "list":
        print(cmd_list(args.adversarial))
        return EXIT_PASS
    try:
        cfg = make_config(args)
        if args.command == "verify":
            reports = cmd_verify(args.target, cfg)
        else:
            reports = cmd_suite(cfg)
    except UnknownTarget as exc:
        print(f"error: unknown target {exc.args[0]!r}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, FGError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = render_text(reports) if args.fmt == "text" else render_json(reports)
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_PASS if all(r.status != "fail" for r in reports) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
