"""Command-line entry point: ``iatomic {check,measure,oracle,gen,stats}``.

Reports go to stdout as ``key=value`` lines, or as one JSON document with
``--json``. Diagnostics go to stderr.

Exit status: 0 success (``check``: satisfied), 1 ``check`` unsatisfied,
2 parse/validation/config error, 3 input too large for the oracle.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__
from .checker import check_i_atomicity, find_min_i
from .generator import GenConfig, generate, parse_config_text, stats
from .history import (
    History, HistoryParseError, InvalidHistoryError, build_clusters, parse_history, validate,
)
from .inversion import cluster_order_to_permutation
from .oracle import DEFAULT_CLUSTER_LIMIT, OracleLimitError, oracle_min

EXIT_OK, EXIT_UNSAT, EXIT_BAD_INPUT, EXIT_TOO_LARGE = 0, 1, 2, 3


class _BadInput(Exception):
    pass


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _load(args) -> tuple[History, str]:
    try:
        data = Path(args.file).read_bytes()
    except OSError as exc:
        raise _BadInput(f"cannot read {args.file}: {exc.strerror}") from None
    try:
        h = parse_history(data.decode("utf-8"))
    except UnicodeDecodeError:
        raise _BadInput(f"{args.file}: not valid UTF-8") from None
    except (HistoryParseError, ValueError) as exc:
        raise _BadInput(f"{args.file}: {exc}") from None
    if getattr(args, "key", None) is not None:
        h = h.restrict_to_key(args.key)
    return h, _digest(data)


def _validated(args) -> tuple[History, str]:
    h, digest = _load(args)
    report = validate(h)
    if not report.valid:
        lines = [f"[{v.rule}] {v.message}" for v in report.violations]
        raise _BadInput(f"{args.file}: invalid history\n  " + "\n  ".join(lines))
    return h, digest


def _emit(report: dict, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        json.dump(report, out, indent=2, sort_keys=False)
        out.write("\n")
        return
    for k, v in report.items():
        if isinstance(v, (list, tuple)):
            v = " ".join(str(x) for x in v)
        elif isinstance(v, bool):
            v = str(v).lower()
        elif v is None:
            v = "none"
        out.write(f"{k}={v}\n")


def _header(command: str, digest: str | None) -> dict:
    rep = {"command": command, "version": __version__}
    if digest is not None:
        rep["input_digest"] = digest
    return rep


def cmd_check(args) -> int:
    h, digest = _validated(args)
    t0 = time.perf_counter()
    v = check_i_atomicity(
        h, args.i,
        prune_lemma1=not args.no_prune_lemma1,
        prune_lemma2=not args.no_prune_lemma2,
        memoize=not args.no_memo,
    )
    rep = _header("check", digest)
    rep.update(
        i=args.i, satisfied=v.satisfied, achieved_inv=v.achieved_inv,
        n=h.n, n_w=h.n_w, w=h.w,
    )
    rep.update(v.stats.as_dict())
    rep["wall_time_s"] = round(time.perf_counter() - t0, 6)
    if args.certificate and v.satisfied:
        rep["certificate"] = list(v.certificate.order)
    _emit(rep, args.json)
    return EXIT_OK if v.satisfied else EXIT_UNSAT


def cmd_measure(args) -> int:
    h, digest = _validated(args)
    t0 = time.perf_counter()
    m = find_min_i(h, args.cap)
    rep = _header("measure", digest)
    rep.update(cap=args.cap, min_i=m if m is not None else "exceeds cap", n=h.n, n_w=h.n_w, w=h.w)
    rep["wall_time_s"] = round(time.perf_counter() - t0, 6)
    _emit(rep, args.json)
    return EXIT_OK


def cmd_oracle(args) -> int:
    h, digest = _validated(args)
    t0 = time.perf_counter()
    try:
        res = oracle_min(h, limit=args.limit)
    except OracleLimitError as exc:
        print(f"iatomic oracle: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    clusters = build_clusters(h)
    rep = _header("oracle", digest)
    rep.update(
        n=h.n, n_w=h.n_w,
        min_imax=res.min_imax, min_isum=res.min_isum,
        witness_imax=list(cluster_order_to_permutation(res.witness_imax, clusters).order),
        witness_isum=list(cluster_order_to_permutation(res.witness_isum, clusters).order),
        orders_enumerated=res.orders_enumerated,
    )
    if args.i is not None:
        rep["i"] = args.i
        rep["satisfied"] = res.min_imax <= args.i
    rep["wall_time_s"] = round(time.perf_counter() - t0, 6)
    _emit(rep, args.json)
    return EXIT_OK


_GEN_FLAGS = {
    "seed": "seed", "ops": "n_ops", "write_ratio": "write_ratio", "clients": "n_clients",
    "interval": "op_interval", "duration": "op_duration", "delay": "propagation_delay",
    "replicas": "replicas", "key": "key",
}


def cmd_gen(args) -> int:
    values: dict = {}
    try:
        if args.config:
            values.update(parse_config_text(Path(args.config).read_text(encoding="utf-8")))
        cfg = GenConfig.from_mapping(values)
        overrides = {
            field: getattr(args, flag) for flag, field in _GEN_FLAGS.items()
            if getattr(args, flag) is not None
        }
        cfg = GenConfig(**{**cfg.__dict__, **overrides})
    except (OSError, ValueError, TypeError) as exc:
        raise _BadInput(f"bad generator config: {exc}") from None
    h = generate(cfg)
    text = h.to_text().encode("utf-8")
    if args.out:
        Path(args.out).write_bytes(text)
        report_out = sys.stdout
    else:
        sys.stdout.buffer.write(text)
        sys.stdout.flush()
        report_out = sys.stderr
    s = stats(h)
    rep = _header("gen", _digest(text))
    rep.update(cfg.__dict__)
    rep.update(n=s.n, n_w=s.n_w, w=s.w, reads=s.reads, duration=s.duration)
    if args.out:
        rep["out"] = args.out
    _emit(rep, args.json, report_out)
    return EXIT_OK


def cmd_stats(args) -> int:
    h, digest = _load(args)
    s = stats(h)
    rep = _header("stats", digest)
    rep.update(n=s.n, n_w=s.n_w, w=s.w, reads=s.reads, duration=s.duration)
    _emit(rep, args.json)
    return EXIT_OK


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iatomic", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def history_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file")
        sp.add_argument("--key", help="keep only operations on this key (per-key result)")
        sp.add_argument("--json", action="store_true", help="emit one JSON document")
        return sp

    sp = history_cmd("check", "decide whether a history is i-atomic")
    sp.add_argument("--i", type=_non_negative, required=True)
    sp.add_argument("--certificate", action="store_true", help="include the witness permutation")
    sp.add_argument("--no-prune-lemma1", action="store_true", help="disable the buffer-size bound")
    sp.add_argument("--no-prune-lemma2", action="store_true", help="disable the buffer-window bound")
    sp.add_argument("--no-memo", action="store_true", help="disable per-node memoization")
    sp.set_defaults(func=cmd_check)

    sp = history_cmd("measure", "find the smallest i for which the history is i-atomic")
    sp.add_argument("--cap", type=_non_negative, default=10)
    sp.set_defaults(func=cmd_measure)

    sp = history_cmd("oracle", "brute-force minimum I_max / I_sum over all cluster orders")
    sp.add_argument("--i", type=_non_negative)
    sp.add_argument("--limit", type=_non_negative, default=DEFAULT_CLUSTER_LIMIT)
    sp.set_defaults(func=cmd_oracle)

    sp = history_cmd("stats", "print n, n_w, w, reads and duration")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("gen", help="generate a synthetic history")
    sp.add_argument("--config", help="key=value file with GenConfig fields")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--ops", type=int)
    sp.add_argument("--write-ratio", type=float)
    sp.add_argument("--clients", type=int)
    sp.add_argument("--interval", type=float)
    sp.add_argument("--duration", type=float)
    sp.add_argument("--delay", type=float)
    sp.add_argument("--replicas", type=int)
    sp.add_argument("--key")
    sp.add_argument("--out")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, matching the bad-input status
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _BadInput as exc:
        print(f"iatomic {args.command}: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except InvalidHistoryError as exc:
        print(f"iatomic {args.command}: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
