"""JSON command-line frontend.

Subcommands:

- ``shift``: companion weights, marked index sets and exponent tables for a
  given weight.
- ``match``: forward construction of companion carrier sets, or backward
  reconstruction from them.
- ``verify``: named exhaustive verification suites with an on-disk result
  cache.
- ``enumerate``: stream every (weight, carrier set) unit at a given size as
  JSON lines, with optional disjoint sharding.

All output is deterministic for a fixed configuration (the only varying
field is ``wall_time_ms``).  Integers with absolute value >= 2^53 are
serialized as decimal strings so documents survive double-precision JSON
parsers; the reader side undoes this.

Exit codes: 0 success / suite passed; 1 verification failure or a dichotomy
violation; 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import itertools
import json
import os
import platform
import sys
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, Optional, Sequence

from . import __version__
from .field import Context
from .matching import (
    DichotomyError,
    SubspaceDescriptor,
    appendix_alpha_audit,
    backward_from_mus,
    backward_from_theta,
    check_congruence,
    exceptional_audit,
    forward_sets,
    param_count,
    semisimple_equivalence_audit,
    subspace_dim,
    subspace_transport_audit,
)
from .quadratic import irr_equivalence_audit
from .rankone import (
    RankOneKisin,
    alpha,
    decompose_cyclic,
    hom_exists,
    necessary_map_conditions,
    tS_iso,
    weighted_sum,
)
from .weights import (
    HTWeightTable,
    Weight,
    blocks,
    bmu_table,
    bprime_table,
    btheta_table,
    ht_table,
    set_J0,
    set_M,
    set_Mtilde,
    set_Mtilde2,
    st_sequences,
    validate_irregular,
    weight_kmu,
    weight_kprime,
    weight_ktheta,
)

JSON_INT_LIMIT = 2**53

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


# ---------------------------------------------------------------------------
# JSON encoding / decoding
# ---------------------------------------------------------------------------


def jsonable(x: Any) -> Any:
    """Convert a value into deterministic JSON-safe data.

    Big integers become decimal strings, sets become sorted lists, exact
    rationals become "a/b" strings, dataclasses become dicts.
    """
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x) if abs(x) >= JSON_INT_LIMIT else x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (frozenset, set)):
        return [jsonable(v) for v in sorted(x)]
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {fld.name: jsonable(getattr(x, fld.name)) for fld in dataclasses.fields(x)}
    raise TypeError(f"cannot serialize {type(x).__name__}")


def decode_int(x: Any) -> int:
    """Inverse of the big-integer encoding."""
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return int(x)
    raise TypeError(f"not an encoded integer: {x!r}")


def dumps(doc: Any) -> str:
    return json.dumps(jsonable(doc), sort_keys=True, indent=2) + "\n"


def _write_out(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# config and argument parsing
# ---------------------------------------------------------------------------


def _csv_ints(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(part) for part in text.split(","))


def _parse_shard(text: str) -> tuple[int, int]:
    idx, _, total = text.partition("/")
    i, n = int(idx), int(total)
    if n < 1 or not 0 <= i < n:
        raise argparse.ArgumentTypeError("shard must be i/n with 0 <= i < n")
    return i, n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kisinweights",
        description="Exact weight-shift, matching and verification queries.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp: argparse.ArgumentParser, need_k: bool = False) -> None:
        sp.add_argument("--p", type=int, required=True, help="odd prime")
        sp.add_argument("--f", type=int, required=True, help="number of embedding indices")
        sp.add_argument("--d", type=int, default=1, help="coefficient field degree")
        if need_k:
            sp.add_argument("--k", type=_csv_ints, required=True, help="weight, comma-separated")
        sp.add_argument("--out", default=None, help="write the document here instead of stdout")

    sp = sub.add_parser("shift", help="companion weights and tables")
    common(sp, need_k=True)
    sp.add_argument("--l", type=_csv_ints, default=None, help="twist part, comma-separated")
    sp.add_argument("--allow-alt", action="store_true", help="emit the alternative fully-marked weight even when the weight is refused")

    sp = sub.add_parser("match", help="carrier-set matching")
    common(sp, need_k=True)
    sp.add_argument("--j", type=_csv_ints, default=None, help="carrier set for the forward direction")
    sp.add_argument("--jprime", type=_csv_ints, default=None, help="base carrier set (backward direction)")
    sp.add_argument("--jtheta", type=_csv_ints, default=None, help="fully-marked carrier set (backward)")
    sp.add_argument("--jmu", action="append", default=[], metavar="MU:IDXS", help="marked carrier set, e.g. 0:0,1 (repeatable)")

    sp = sub.add_parser("verify", help="run a named verification suite")
    common(sp)
    sp.add_argument("--suite", required=True, choices=sorted(SUITES), help="suite name")
    sp.add_argument("--k", type=_csv_ints, default=None, help="weight for weight-specific suites")
    sp.add_argument("--cache", default=None, help="result cache directory")
    sp.add_argument("--force", action="store_true", help="recompute and compare against any cached record")

    sp = sub.add_parser("enumerate", help="stream (weight, carrier set) units as JSON lines")
    common(sp)
    sp.add_argument("--shard", type=_parse_shard, default=(0, 1), metavar="I/N", help="emit only shard I of N")

    return parser


# ---------------------------------------------------------------------------
# shift
# ---------------------------------------------------------------------------


def _weight_doc(w: Weight) -> dict:
    return {"k": w.k, "l": w.l, "table": ht_table(w).rows}


def cmd_shift(args: argparse.Namespace) -> int:
    w = Weight(args.p, args.k, args.l or ())
    doc: dict[str, Any] = {"p": args.p, "f": args.f, "k": w.k, "l": w.l}
    if len(w.k) != args.f:
        doc["valid"] = False
        doc["reason"] = f"expected {args.f} weight entries, got {len(w.k)}"
        _write_out(dumps(doc), args.out)
        return EXIT_USAGE
    try:
        validate_irregular(w)
    except ValueError as err:
        doc["valid"] = False
        doc["reason"] = str(err)
        if args.allow_alt:
            try:
                doc["ktheta_alt"] = _weight_doc(weight_ktheta(w, alternative=True))
            except ValueError as alt_err:
                doc["ktheta_alt_error"] = str(alt_err)
        _write_out(dumps(doc), args.out)
        return EXIT_OK if args.allow_alt and "ktheta_alt" in doc else EXIT_USAGE
    doc["valid"] = True
    doc["table"] = ht_table(w).rows
    doc["J0"] = set_J0(w)
    doc["M"] = set_M(w)
    doc["Mtilde"] = set_Mtilde(w)
    doc["Mtilde2"] = set_Mtilde2(w)
    doc["blocks"] = [
        {"indices": blk.indices, "head": blk.head, "tail": blk.tail, "marked": blk.nu}
        for blk in blocks(w).blocks
    ]
    doc["kprime"] = _weight_doc(weight_kprime(w))
    doc["kmu"] = {mu: _weight_doc(weight_kmu(w, mu)) for mu in sorted(set_Mtilde(w))}
    doc["ktheta"] = _weight_doc(weight_ktheta(w))
    doc["ktheta_alt"] = _weight_doc(weight_ktheta(w, alternative=True))
    _write_out(dumps(doc), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# match
# ---------------------------------------------------------------------------


def _congruence_doc(ctx: Context, w: Weight, J, fs) -> dict:
    s, t = st_sequences(ht_table(w), J)
    out = {}
    sides = [("base", bprime_table(w), fs.Jprime), ("full", btheta_table(w), fs.Jtheta)]
    sides += [(f"marked{mu}", bmu_table(w, mu), fs.Jmu[mu]) for mu in sorted(fs.Jmu)]
    for name, table, Jside in sides:
        ss, ts = st_sequences(table, Jside)
        out[name] = {
            "upper": check_congruence(ctx.p, s, ss, ctx.m1),
            "lower": check_congruence(ctx.p, t, ts, ctx.m1),
        }
    return out


def cmd_match(args: argparse.Namespace) -> int:
    ctx = Context(args.p, args.f, args.d)
    w = Weight(args.p, args.k)
    doc: dict[str, Any] = {"p": args.p, "f": args.f, "k": w.k}
    forward = args.j is not None
    backward = args.jprime is not None
    if forward == backward:
        raise ValueError("give exactly one of --j (forward) or --jprime (backward)")
    if forward:
        fs = forward_sets(ctx, w, args.j)
        doc["direction"] = "forward"
        doc["J"] = fs.J
        doc["Jprime"] = fs.Jprime
        doc["Jtheta"] = fs.Jtheta
        doc["Jmu"] = dict(fs.Jmu)
        doc["congruences"] = _congruence_doc(ctx, w, fs.J, fs)
        _write_out(dumps(doc), args.out)
        return EXIT_OK
    doc["direction"] = "backward"
    mus = {}
    for item in args.jmu:
        mu_text, _, idxs = item.partition(":")
        mus[int(mu_text)] = _csv_ints(idxs)
    if mus and args.jtheta is not None:
        raise ValueError("give either --jmu entries or --jtheta, not both")
    if mus:
        J = backward_from_mus(ctx, w, args.jprime, mus)
    elif args.jtheta is not None:
        J = backward_from_theta(ctx, w, args.jprime, args.jtheta)
    else:
        raise ValueError("backward direction needs --jtheta or --jmu entries")
    doc["J"] = J
    _write_out(dumps(doc), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------


def _valid_weights(p: int, f: int) -> Iterator[Weight]:
    for k in itertools.product(range(1, p + 1), repeat=f):
        w = Weight(p, k)
        try:
            validate_irregular(w)
        except ValueError:
            continue
        yield w


def _subsets(f: int) -> Iterator[frozenset[int]]:
    for mask in range(1 << f):
        yield frozenset(i for i in range(f) if mask >> i & 1)


def suite_lemma71(ctx: Context, k: Optional[tuple[int, ...]]) -> dict:
    p, f = ctx.p, ctx.f
    scanned = congruent = 0
    for r in itertools.product(range(-p, p + 1), repeat=f):
        scanned += 1
        if weighted_sum(p, r) % ctx.m1 != 0:
            continue
        congruent += 1
        dec = decompose_cyclic(p, r)
        if dec.recompose() != r:
            return {"outcome": "fail", "counterexample": {"r": r}}
    return {"outcome": "pass", "scanned": scanned, "congruent": congruent}


def suite_pprime(ctx: Context, k: Optional[tuple[int, ...]]) -> dict:
    p, f = ctx.p, ctx.f
    one = ctx.coefficient_field().one
    checked = 0
    for r in itertools.product(range(p + 1), repeat=f):
        for J in _subsets(f):
            h = tuple(ri if i in J else 0 for i, ri in enumerate(r))
            rem = tuple(ri - hi for ri, hi in zip(r, h))
            if hom_exists(RankOneKisin(p, h, one), RankOneKisin(p, rem, one)):
                checked += 1
                if not necessary_map_conditions(p, r, J):
                    return {"outcome": "fail", "counterexample": {"r": r, "J": J}}
    return {"outcome": "pass", "maps_checked": checked}


def suite_alpha_id(ctx: Context, k: Optional[tuple[int, ...]]) -> dict:
    p, f = ctx.p, ctx.f
    one = ctx.coefficient_field().one
    checked = 0
    for r in itertools.product(range(p + 1), repeat=f):
        N = RankOneKisin(p, r, one)
        for i in range(f):
            checked += 1
            if alpha(N, i) + r[i % f] != p * alpha(N, i - 1):
                return {"outcome": "fail", "counterexample": {"r": r, "i": i}}
    return {"outcome": "pass", "identities_checked": checked}


def suite_alpha_tables(ctx: Context, k: Optional[tuple[int, ...]]) -> dict:
    checked = 0
    for w in _valid_weights(ctx.p, ctx.f):
        for J in _subsets(ctx.f):
            appendix_alpha_audit(ctx, w, J)
            checked += 1
    return {"outcome": "pass", "configurations": checked}


def suite_exceptional(ctx: Context, k: Optional[tuple[int, ...]]) -> dict:
    checked = 0
    unconstrained = 0
    for w in _valid_weights(ctx.p, ctx.f):
        report = exceptional_audit(ctx, w)
        checked += 1
        unconstrained += len(report.unconstrained_hits)
        if not report.ok:
            return {
                "outcome": "fail",
                "counterexample": {
                    "k": w.k,
                    "irregular_hits": report.irregular_hits,
                    "constrained_hits": report.constrained_hits,
                },
            }
    return {"outcome": "pass", "weights": checked, "unconstrained_hits": unconstrained}


def suite_semisimple_equiv(ctx: Context, k: Optional[tuple[int, ...]]) -> dict:
    if k is None:
        raise ValueError("suite needs --k")
    report = semisimple_equivalence_audit(ctx, Weight(ctx.p, k))
    if report.ok:
        return {"outcome": "pass", "pairs": report.total}
    return {"outcome": "fail", "counterexample": report.counterexamples[:5]}


def suite_transport(ctx: Context, k: Optional[tuple[int, ...]]) -> dict:
    if k is None:
        raise ValueError("suite needs --k")
    w = Weight(ctx.p, k)
    F = ctx.coefficient_field()
    families = 0
    for J in _subsets(ctx.f):
        for a in F.units():
            for b in F.units():
                report = subspace_transport_audit(ctx, w, J, a, b)
                families += len(report.sides)
    return {"outcome": "pass", "families_transported": families}


def suite_irr_equiv(ctx: Context, k: Optional[tuple[int, ...]]) -> dict:
    weights = [Weight(ctx.p, k)] if k is not None else list(_valid_weights(ctx.p, ctx.f))
    if not weights:
        return {"outcome": "refused", "reason": "no valid irregular weight at this size"}
    total = 0
    for w in weights:
        report = irr_equivalence_audit(w)
        total += report.checked
        if not report.ok:
            return {
                "outcome": "fail",
                "counterexample": {"k": w.k, "exponents": report.counterexamples[:5]},
            }
    return {"outcome": "pass", "weights": len(weights), "exponents_checked": total}


def suite_dims(ctx: Context, k: Optional[tuple[int, ...]]) -> dict:
    F = ctx.coefficient_field()
    checked = 0
    for w in _valid_weights(ctx.p, ctx.f):
        J0 = set_J0(w)
        for J in _subsets(ctx.f):
            s, t = st_sequences(ht_table(w), J)
            for a in F.units():
                for b in F.units():
                    N = RankOneKisin(ctx.p, s, a)
                    P = RankOneKisin(ctx.p, t, b)
                    desc = SubspaceDescriptor(J, J0, same_character=tS_iso(ctx, N, P))
                    dim = subspace_dim(desc)
                    expected = len(J - J0) + (1 if tS_iso(ctx, N, P) else 0)
                    if dim != expected or param_count(desc, F) != F.order**dim:
                        return {
                            "outcome": "fail",
                            "counterexample": {"k": w.k, "J": J, "dim": dim},
                        }
                    checked += 1
    return {"outcome": "pass", "descriptors": checked}


SUITES = {
    "lemma71": suite_lemma71,
    "pprime": suite_pprime,
    "alpha-id": suite_alpha_id,
    "alpha-tables": suite_alpha_tables,
    "exceptional": suite_exceptional,
    "semisimple-equiv": suite_semisimple_equiv,
    "transport": suite_transport,
    "irr-equiv": suite_irr_equiv,
    "dims": suite_dims,
}


@dataclass(frozen=True)
class VerificationRecord:
    """Serializable outcome of one verification suite run."""

    suite: str
    params: dict
    outcome: str  # pass | fail | refused
    detail: dict
    wall_time_ms: int
    fingerprint: str


def _fingerprint() -> str:
    return f"kisinweights {__version__} / python {platform.python_version()}"


def _record_key(suite: str, params: dict) -> str:
    payload = json.dumps(
        jsonable({"suite": suite, "params": params, "version": __version__}),
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _stable_view(record_doc: dict) -> dict:
    view = dict(record_doc)
    view.pop("wall_time_ms", None)
    return view


def run_suite(suite: str, ctx: Context, k: Optional[tuple[int, ...]]) -> VerificationRecord:
    params = {"p": ctx.p, "f": ctx.f, "d": ctx.d, "k": list(k) if k else None}
    start = time.monotonic()
    try:
        result = SUITES[suite](ctx, k)
    except ValueError as err:
        result = {"outcome": "refused", "reason": str(err)}
    elapsed = int((time.monotonic() - start) * 1000)
    outcome = result.pop("outcome")
    return VerificationRecord(suite, params, outcome, result, elapsed, _fingerprint())


def cmd_verify(args: argparse.Namespace) -> int:
    ctx = Context(args.p, args.f, args.d)
    params = {"p": ctx.p, "f": ctx.f, "d": ctx.d, "k": list(args.k) if args.k else None}
    cache_path = None
    cached_doc = None
    if args.cache is not None:
        os.makedirs(args.cache, exist_ok=True)
        cache_path = os.path.join(args.cache, _record_key(args.suite, params) + ".json")
        if os.path.exists(cache_path):
            with open(cache_path, encoding="utf-8") as fh:
                cached_doc = json.load(fh)

    if cached_doc is not None and not args.force:
        doc = cached_doc
        doc["cache"] = "hit"
    else:
        record = run_suite(args.suite, ctx, args.k)
        doc = jsonable(record)
        if cached_doc is not None and args.force:
            doc["cache"] = (
                "recomputed-match"
                if _stable_view(cached_doc) == _stable_view(doc)
                else "recomputed-mismatch"
            )
        else:
            doc["cache"] = "miss" if cache_path else "off"
        if cache_path is not None:
            stored = dict(doc)
            stored.pop("cache", None)
            _atomic_write(cache_path, json.dumps(stored, sort_keys=True, indent=2) + "\n")

    _write_out(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    outcome = doc["outcome"]
    if outcome == "pass":
        return EXIT_OK
    if outcome == "fail":
        return EXIT_FAIL
    return EXIT_USAGE


# ---------------------------------------------------------------------------
# enumerate
# ---------------------------------------------------------------------------


def cmd_enumerate(args: argparse.Namespace) -> int:
    ctx = Context(args.p, args.f, args.d)
    shard_i, shard_n = args.shard
    lines = []
    unit = 0
    for w in sorted(_valid_weights(ctx.p, ctx.f), key=lambda w: w.k):
        for mask in range(1 << ctx.f):
            J = frozenset(i for i in range(ctx.f) if mask >> i & 1)
            if unit % shard_n == shard_i:
                fs = forward_sets(ctx, w, J)
                record = {
                    "unit": unit,
                    "k": w.k,
                    "J": J,
                    "Jprime": fs.Jprime,
                    "Jtheta": fs.Jtheta,
                    "Jmu": dict(fs.Jmu),
                }
                lines.append(json.dumps(jsonable(record), sort_keys=True))
            unit += 1
    text = "".join(line + "\n" for line in lines)
    _write_out(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "shift": cmd_shift,
        "match": cmd_match,
        "verify": cmd_verify,
        "enumerate": cmd_enumerate,
    }
    try:
        return handlers[args.subcommand](args)
    except DichotomyError as err:
        _write_out(dumps({"error": "dichotomy", "reason": str(err)}), getattr(args, "out", None))
        return EXIT_FAIL
    except ValueError as err:
        _write_out(dumps({"error": "invalid", "reason": str(err)}), getattr(args, "out", None))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
