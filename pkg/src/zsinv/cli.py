"""Batch command-line front end.

Subcommands: compute (invariants), verify (named theorem/lemma suites),
witness (extremal constructions), extract (constructive procedures),
check-free and find-subseq (product-engine queries).  Reports are JSON
(default) or CSV with a fixed column order; exit codes are 0 success,
1 usage error, 2 undetermined-at-cap, 3 mismatch.

Reports are byte-stable for fixed inputs: thread count and wall time never
appear unless --timing is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys

from .groups import (
    FiniteGroup,
    GroupConstructionError,
    make_abelian,
    make_cyclic,
    make_dihedral,
    make_metacyclic,
)
from .products import find_subsequence
from .sequences import OrderedTuple, Sequence, SequenceFormatError
from .extract import (
    block_zero_sum_select,
    dihedral_equal_pairs,
    dihedral_even_extract,
    dpm_extract,
    greedy_decompose,
    odd_pm_extract,
    signed_to_product,
    signed_zero_mod,
)
from .products import Certificate
from .search import (
    classify_free,
    compute_davenport,
    compute_dpm,
    compute_s_exact,
    compute_s_leq,
    compute_sdn,
    predicted_s_exact,
    predicted_s_leq,
    predicted_sdn,
    verify_formula,
)
from .witnesses import (
    WitnessValidationError,
    dihedral_coprime_witness,
    dihedral_main_witness,
    dihedral_nn_witness,
    generic_identity_pad,
    inverse_family,
    metacyclic_witness,
)

SCHEMA_VERSION = "1.0"
DEFAULT_SEED = 12345

CSV_COLUMNS = [
    "command",
    "suite",
    "group",
    "instance",
    "predicted",
    "computed",
    "witness",
    "match",
    "provenance",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); suites need exit 1
        raise UsageError(message)


def parse_group_spec(text: str) -> FiniteGroup:
    """C:n | A:n1,n2,... | D:n (order 2n) | M:p,q,s."""
    try:
        tag, _, rest = text.partition(":")
        if not rest:
            raise ValueError("missing parameters")
        nums = [int(v) for v in rest.split(",")]
        if tag == "C":
            (n,) = nums
            return make_cyclic(n)
        if tag == "A":
            return make_abelian(nums)
        if tag == "D":
            (n,) = nums
            return make_dihedral(n)
        if tag == "M":
            p, q, s = nums
            return make_metacyclic(p, q, s)
        raise ValueError(f"unknown family tag {tag!r}")
    except (ValueError, GroupConstructionError) as exc:
        raise UsageError(f"bad group spec {text!r}: {exc}") from exc


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(","):
        a, _, b = part.partition(":")
        out.append((int(a), int(b)))
    return out


def _int_env_threads(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("ZSINV_THREADS")
    return int(env) if env else 1


# ---------------------------------------------------------------------------
# compute


def _result_row(res, include_timing: bool) -> dict:
    row = res.to_dict(include_timing=include_timing)
    row["provenance"] = "computed-exhaustive" if res.determined else "undetermined-at-cap"
    if res.stats.shortcut:
        row["provenance"] = "witness-only"
    return row


def cmd_compute(args) -> tuple[dict, int]:
    group = parse_group_spec(args.group)
    threads = _int_env_threads(args.threads)
    kw = dict(
        cap=args.cap, prune_orbits=not args.no_orbit_pruning, threads=threads
    )
    if args.invariant == "sdn":
        if args.d is None:
            raise UsageError("--d is required for sdn")
        res = compute_sdn(group, args.d, **kw)
        predicted = predicted_sdn(group, args.d)
    elif args.invariant == "davenport":
        res = compute_davenport(group, **kw)
        predicted = predicted_sdn(group, 1)
    elif args.invariant == "dpm":
        res = compute_dpm(group, **kw)
        predicted = None
    elif args.invariant == "s-exact":
        if args.k is None:
            raise UsageError("--k is required for s-exact")
        res = compute_s_exact(group, args.k, **kw)
        p = predicted_s_exact(group, args.k)
        predicted = None if p is None or p == math.inf else int(p)
    elif args.invariant == "s-leq":
        if args.k is None:
            raise UsageError("--k is required for s-leq")
        res = compute_s_leq(group, args.k, **kw)
        predicted = predicted_s_leq(group, args.k)
    else:
        raise UsageError(f"unknown invariant {args.invariant!r}")
    row = _result_row(res, args.timing)
    if predicted is not None:
        row["predicted"] = predicted
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "compute",
        "group": group.describe(),
        "params": {"invariant": args.invariant, "d": args.d, "k": args.k, "cap": res.cap},
        "results": [row],
    }
    return report, 0 if res.determined else 2


# ---------------------------------------------------------------------------
# verify suites


def _match_row(item: str, instance: str, predicted, computed, provenance="computed-exhaustive", **extra) -> dict:
    row = {
        "item": item,
        "instance": instance,
        "predicted": predicted,
        "computed": computed,
        "match": computed == predicted,
        "provenance": provenance,
    }
    row.update(extra)
    return row


def _suite_lemma21(args, threads: int) -> list[dict]:
    rows = []
    max_n = args.max_n or 5
    for n in range(2, max_n + 1):
        res = compute_davenport(make_cyclic(n), threads=threads)
        rows.append(_match_row("a", f"D(C_{n})", n, res.value))
    for m, n in [(2, 2), (2, 4), (3, 3)]:
        res = compute_davenport(make_abelian((m, n)), threads=threads)
        rows.append(_match_row("c", f"D(C_{m}+C_{n})", m + n - 1, res.value))
    for n in range(3, max_n + 1):
        res = compute_davenport(make_dihedral(n), threads=threads)
        rows.append(_match_row("f", f"D(D_{2 * n})", n + 1, res.value))
    for d, n in [(1, 3), (1, 4), (2, 3)]:
        res = compute_s_exact(make_cyclic(n), d * n, threads=threads)
        rows.append(_match_row("b", f"s_{d * n}(C_{n})", (d + 1) * n - 1, res.value))
    res = compute_s_exact(make_dihedral(3), 6, threads=threads)
    rows.append(_match_row("g", "s_6(D_6)", 9, res.value))
    return rows


def _family_pattern_ok(group: FiniteGroup, seq: Sequence) -> bool:
    # rotation^[n-1] plus a single reflection, rotation exponent coprime to n
    n = group.family_params[0]
    rot = [(g, v) for g, v in enumerate(seq.counts) if v and g < n]
    refl = [(g, v) for g, v in enumerate(seq.counts) if v and g >= n]
    return (
        len(rot) == 1
        and len(refl) == 1
        and rot[0][1] == n - 1
        and refl[0][1] == 1
        and math.gcd(rot[0][0], n) == 1
    )


def _suite_lemma22(args, threads: int) -> list[dict]:
    rows = []
    max_n = args.max_n or 5
    for n in range(3, max_n + 1):
        group = make_dihedral(n)
        reps = classify_free(group, n, threads=threads)
        if n == 3:
            texts = sorted(seq.to_text() for seq, _ in reps)
            pair_family = Sequence.from_elements(group, [2, 2, 5])  # (y^2, y^2, xy^2) rep
            refl_family = Sequence.from_elements(group, [3, 4, 5])  # (x, xy, xy^2)
            expected = sorted([pair_family.to_text(), refl_family.to_text()])
            rows.append(
                {
                    "item": "n=3",
                    "instance": "free length-3 sequences over D_6",
                    "predicted": expected,
                    "computed": texts,
                    "match": texts == expected,
                    "provenance": "computed-exhaustive",
                    "flags": [
                        "printed constant t=3 yields identity elements; that family is not product-free",
                        "t=1 family is product-free but absent from the printed constants",
                    ],
                }
            )
        else:
            ok = len(reps) == 1 and all(
                _family_pattern_ok(group, seq) for seq, _ in reps
            )
            orbit_total = sum(size for _, size in reps)
            expected_total = n * _euler_phi(n)
            rows.append(
                {
                    "item": f"n={n}",
                    "instance": f"free length-{n} sequences over D_{2 * n}",
                    "predicted": {"orbits": 1, "sequences": expected_total},
                    "computed": {"orbits": len(reps), "sequences": orbit_total},
                    "match": ok and orbit_total == expected_total,
                    "provenance": "computed-exhaustive",
                }
            )
    return rows


def _euler_phi(n: int) -> int:
    return sum(1 for t in range(1, n + 1) if math.gcd(t, n) == 1)


def _suite_lemma23(args, threads: int) -> list[dict]:
    rows = []
    max_n = args.max_n or 5
    for n in range(3, max_n + 1):
        res = compute_s_leq(make_dihedral(n), n, threads=threads)
        rows.append(_match_row(f"n={n}", f"s_<={n}(D_{2 * n})", n + 1, res.value))
    return rows


def _formula_rows(family: str, instances, mode: str, threads: int) -> list[dict]:
    rows = []
    for fr in verify_formula(family, instances, mode=mode, threads=threads):
        d = fr.to_dict()
        d["item"] = family
        d["instance"] = f"{fr.group_text} {fr.params}"
        d["computed"] = fr.computed if fr.computed is not None else fr.witness_length
        rows.append(d)
    return rows


def _suite_theorem12_odd(args, threads: int) -> list[dict]:
    pairs = _parse_pairs(args.pairs) if args.pairs else [(3, 3), (5, 5)]
    return _formula_rows("dihedral-odd", pairs, args.mode, threads)


def _suite_theorem12_coprime(args, threads: int) -> list[dict]:
    pairs = _parse_pairs(args.pairs) if args.pairs else [(3, 1), (3, 2), (4, 3)]
    return _formula_rows("dihedral-coprime", pairs, args.mode, threads)


def _suite_theorem33(args, threads: int) -> list[dict]:
    ns = [int(v) for v in args.ns.split(",")] if args.ns else [3, 5]
    rows = []
    for n in ns:
        w = dihedral_nn_witness(n)
        rows.append(
            {
                "item": f"n={n}",
                "instance": f"witness over D_{2 * n}",
                "predicted": 2 * n + (n.bit_length() - 1) - 1,
                "computed": w.length,
                "match": w.length == 2 * n + (n.bit_length() - 1) - 1,
                "witness": w.to_text(),
                "provenance": "witness-only",
            }
        )
        rows.extend(_formula_rows("dihedral-odd", [(n, n)], args.mode, threads))
    return rows


def _suite_theorem13_witness(args, threads: int) -> list[dict]:
    p, q, s, k = args.p or 3, args.q or 7, args.s or 2, args.k or 1
    group = make_metacyclic(p, q, s)
    d = k * p
    predicted = predicted_sdn(group, d)
    w = metacyclic_witness(p, q, s, k, group=group)
    rows = [
        {
            "item": "witness",
            "instance": f"{group.describe_short()} d={d}",
            "predicted": predicted - 1,
            "computed": w.length,
            "match": w.length == predicted - 1 and find_subsequence(w, modulus=d) is None,
            "witness": w.to_text(),
            "provenance": "witness-only",
        }
    ]
    samples = args.samples or 0
    if samples:
        rng = random.Random(args.seed)
        failures = 0
        for _ in range(samples):
            elems = [rng.randrange(group.order) for _ in range(predicted)]
            seq = Sequence.from_elements(group, elems)
            if find_subsequence(seq, modulus=d) is None:
                failures += 1
        rows.append(
            {
                "item": "random-upper",
                "instance": f"{samples} sequences of length {predicted}",
                "predicted": 0,
                "computed": failures,
                "match": failures == 0,
                "provenance": "property-sample",
            }
        )
    return rows


def _suite_bounds(args, threads: int) -> list[dict]:
    rows = []
    instances = [
        (make_cyclic(3), 2),
        (make_cyclic(3), 3),
        (make_cyclic(3), 6),
        (make_cyclic(4), 2),
        (make_dihedral(3), 1),
        (make_dihedral(3), 2),
        (make_dihedral(3), 3),
        (make_dihedral(3), 6),
    ]
    dav: dict[str, int] = {}
    for group, d in instances:
        key = group.describe_short()
        if key not in dav:
            dav[key] = compute_davenport(group, threads=threads).value
        res = compute_sdn(group, d, threads=threads)
        lower = dav[key] + d - 1
        rows.append(
            {
                "item": "lower-bound",
                "instance": f"s_{d}N({key}) >= D + d - 1",
                "predicted": f">={lower}",
                "computed": res.value,
                "match": res.value is not None and res.value >= lower,
                "provenance": "computed-exhaustive",
            }
        )
        exp = group.exponent
        if d % exp == 0:
            pe = predicted_s_exact(group, d)
            if pe != math.inf:
                se = compute_s_exact(group, d, threads=threads)
                if se.value is not None:
                    rows.append(
                        {
                            "item": "upper-bound",
                            "instance": f"s_{d}N({key}) <= s_{d}({key})",
                            "predicted": f"<={se.value}",
                            "computed": res.value,
                            "match": res.value is not None and res.value <= se.value,
                            "provenance": "computed-exhaustive",
                        }
                    )
    return rows


_SUITES = {
    "lemma2.1": _suite_lemma21,
    "lemma2.2": _suite_lemma22,
    "lemma2.3": _suite_lemma23,
    "theorem1.2-odd": _suite_theorem12_odd,
    "theorem1.2-coprime": _suite_theorem12_coprime,
    "theorem3.3": _suite_theorem33,
    "theorem1.3-witness": _suite_theorem13_witness,
    "bounds": _suite_bounds,
}


def cmd_verify(args) -> tuple[dict, int]:
    if args.suite not in _SUITES:
        raise UsageError(
            f"unknown suite {args.suite!r}; available: {', '.join(sorted(_SUITES))}"
        )
    threads = _int_env_threads(args.threads)
    rows = _SUITES[args.suite](args, threads)
    mismatches = sum(1 for r in rows if not r.get("match", False))
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "suite": args.suite,
        "params": {"seed": args.seed},
        "results": rows,
        "summary": {"rows": len(rows), "mismatches": mismatches},
    }
    return report, 3 if mismatches else 0


# ---------------------------------------------------------------------------
# witness / extract / check-free / find-subseq


def cmd_witness(args) -> tuple[dict, int]:
    name = args.name
    try:
        if name == "dihedral-main":
            seq = dihedral_main_witness(_req(args.n, "--n"), _req(args.d, "--d"))
            query = {"modulus": args.d}
        elif name == "dihedral-coprime":
            seq = dihedral_coprime_witness(_req(args.n, "--n"), _req(args.d, "--d"))
            query = {"modulus": args.d}
        elif name == "dihedral-nn":
            seq = dihedral_nn_witness(_req(args.n, "--n"))
            query = {"modulus": args.n}
        elif name == "metacyclic":
            seq = metacyclic_witness(
                _req(args.p, "--p"), _req(args.q, "--q"), _req(args.s, "--s"), args.k or 1
            )
            query = {"modulus": (args.k or 1) * args.p}
        elif name == "generic-identity-pad":
            group = parse_group_spec(_req(args.group, "--group"))
            s1 = Sequence.parse(group, _req(args.s1, "--s1"))
            seq = generic_identity_pad(group, _req(args.d, "--d"), s1)
            query = {"modulus": args.d}
        elif name == "inverse-family":
            seq = inverse_family(
                _req(args.n, "--n"), args.variant or 1, t=args.t, s=args.s, nu=args.nu
            )
            query = {}
        else:
            raise UsageError(f"unknown witness name {name!r}")
    except (ValueError, WitnessValidationError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(str(exc)) from exc
    row = {
        "name": name,
        "sequence": seq.to_text(),
        "length": seq.length,
        "provenance": "witness-only",
    }
    if args.check:
        row["free"] = find_subsequence(seq, **query) is None
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "witness",
        "group": seq.group.describe(),
        "params": {"name": name},
        "results": [row],
    }
    return report, 0


def _req(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _parse_signs(text: str) -> tuple[int, ...]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if part in ("+", "+1", "1"):
            out.append(1)
        elif part in ("-", "-1"):
            out.append(-1)
        else:
            raise UsageError(f"bad sign {part!r}")
    return tuple(out)


def cmd_extract(args) -> tuple[dict, int]:
    lemma = args.lemma
    results: list[dict] = []
    if lemma == "2.5":
        ints = [int(v) for v in _req(args.ints, "--ints").split(",")]
        ss = signed_zero_mod(ints, _req(args.n, "--n"))
        results.append({"kind": "signed-subset", **ss.to_dict(), "provenance": "computed-exhaustive"})
        group_desc = None
    else:
        group = parse_group_spec(_req(args.group, "--group"))
        group_desc = group.describe()
        seq = Sequence.parse(group, _req(args.seq, "--seq"))
        if lemma == "2.6i":
            cert = dihedral_even_extract(seq)
            results.append({"kind": "certificate", **cert.to_dict(), "provenance": "computed-exhaustive"})
        elif lemma == "2.6ii":
            w1, w2 = dihedral_equal_pairs(seq)
            prod = w1.elements_list()
            acc = group.identity
            for g in prod:
                acc = group.op(acc, g)
            results.append(
                {
                    "kind": "equal-pairs",
                    "w1": w1.to_text(),
                    "w2": w2.to_text(),
                    "product": group.label(acc),
                    "provenance": "computed-exhaustive",
                }
            )
        elif lemma == "2.7":
            elems = tuple(
                group.element(t.strip()) for t in _req(args.tuple, "--tuple").split(",")
            )
            signs = _parse_signs(_req(args.signs, "--signs"))
            cert = Certificate(
                group, OrderedTuple(elems, signs), group.identity, "signed-product"
            )
            if not cert.verify():
                raise UsageError("input tuple is not a signed product-one certificate")
            out = signed_to_product(cert)
            results.append({"kind": "certificate", **out.to_dict(), "provenance": "computed-exhaustive"})
        elif lemma == "2.10":
            cert = odd_pm_extract(seq)
            results.append({"kind": "certificate", **cert.to_dict(), "provenance": "computed-exhaustive"})
        elif lemma == "decompose":
            block_len = _req(args.block_len, "--block-len")
            threshold = _req(args.threshold, "--threshold")
            dec = greedy_decompose(seq, block_len, threshold)
            results.append(
                {
                    "kind": "decomposition",
                    "blocks": [c.to_dict() for c in dec.blocks],
                    "remainder": dec.remainder.to_text(),
                    "provenance": "computed-exhaustive",
                }
            )
        else:
            raise UsageError(f"unknown lemma tag {lemma!r}")
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "extract",
        "group": group_desc,
        "params": {"lemma": lemma},
        "results": results,
    }
    return report, 0


def cmd_check_free(args) -> tuple[dict, int]:
    group = parse_group_spec(_req(args.group, "--group"))
    seq = Sequence.parse(group, _req(args.seq, "--seq"))
    query: dict = {}
    kind = "product-free"
    if args.d is not None:
        query["modulus"] = args.d
        kind = f"dN-free(d={args.d})"
    elif args.k is not None:
        query["length"] = args.k
        kind = f"exact-free(k={args.k})"
    elif args.leq is not None:
        query["max_length"] = args.leq
        kind = f"leq-free(k={args.leq})"
    if args.pm:
        query["signed"] = True
        kind = "pm-" + kind
    cert = find_subsequence(seq, **query)
    row = {
        "kind": kind,
        "sequence": seq.to_text(),
        "free": cert is None,
        "certificate": cert.to_dict() if cert else None,
        "provenance": "computed-exhaustive",
    }
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "check-free",
        "group": group.describe(),
        "params": {"d": args.d, "k": args.k, "leq": args.leq, "pm": args.pm},
        "results": [row],
    }
    return report, 0


def cmd_find_subseq(args) -> tuple[dict, int]:
    group = parse_group_spec(_req(args.group, "--group"))
    seq = Sequence.parse(group, _req(args.seq, "--seq"))
    target = group.element(args.target) if args.target else None
    cert = find_subsequence(
        seq,
        target=target,
        length=args.length,
        max_length=args.max_length,
        modulus=args.modulus,
        parity=args.parity,
        signed=args.signed,
    )
    row = {
        "sequence": seq.to_text(),
        "found": cert is not None,
        "certificate": cert.to_dict() if cert else None,
        "provenance": "computed-exhaustive",
    }
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "find-subseq",
        "group": group.describe(),
        "params": {
            "length": args.length,
            "max_length": args.max_length,
            "modulus": args.modulus,
            "parity": args.parity,
            "signed": args.signed,
            "target": args.target,
        },
        "results": [row],
    }
    return report, 0


# ---------------------------------------------------------------------------
# emission and entry point


def _emit_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    group = report.get("group")
    group_text = ""
    if isinstance(group, dict):
        group_text = f"{group['family']}({','.join(str(p) for p in group['params'])})"
    for row in report.get("results", []):
        writer.writerow(
            [
                report.get("command", ""),
                report.get("suite", ""),
                row.get("group", group_text),
                row.get("instance", row.get("name", row.get("kind", ""))),
                _csv_cell(row.get("predicted", "")),
                _csv_cell(row.get("computed", row.get("value", ""))),
                row.get("witness", row.get("sequence", "")) or "",
                _csv_cell(row.get("match", row.get("free", row.get("found", "")))),
                row.get("provenance", ""),
            ]
        )
    return buf.getvalue()


def _csv_cell(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else str(v)


def _emit(report: dict, args) -> None:
    if args.emit == "csv":
        text = _emit_csv(report)
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> _Parser:
    parser = _Parser(prog="zsinv", description=__doc__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--emit", choices=["json", "csv"], default="json")
        p.add_argument("--output", default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--timing", action="store_true")

    p = sub.add_parser("compute", help="compute an invariant exhaustively")
    p.add_argument("--group", required=True)
    p.add_argument(
        "--invariant", required=True, choices=["sdn", "davenport", "dpm", "s-exact", "s-leq"]
    )
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--no-orbit-pruning", action="store_true")
    common(p)
    p.set_defaults(handler=cmd_compute)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--pairs", default=None, help="n:d pairs, comma separated")
    p.add_argument("--ns", default=None, help="n values, comma separated")
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--mode", choices=["auto", "exhaustive", "witness"], default="auto")
    common(p)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("witness", help="build and check an extremal sequence")
    p.add_argument("--name", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--nu", type=int, default=None)
    p.add_argument("--variant", type=int, default=None)
    p.add_argument("--group", default=None)
    p.add_argument("--s1", default=None)
    p.add_argument("--check", action="store_true")
    common(p)
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("extract", help="run a constructive extraction")
    p.add_argument("--lemma", required=True)
    p.add_argument("--ints", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--group", default=None)
    p.add_argument("--seq", default=None)
    p.add_argument("--tuple", default=None)
    p.add_argument("--signs", default=None)
    p.add_argument("--block-len", type=int, default=None)
    p.add_argument("--threshold", type=int, default=None)
    common(p)
    p.set_defaults(handler=cmd_extract)

    p = sub.add_parser("check-free", help="freeness predicates with certificates")
    p.add_argument("--group", required=True)
    p.add_argument("--seq", required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--leq", type=int, default=None)
    p.add_argument("--pm", action="store_true")
    common(p)
    p.set_defaults(handler=cmd_check_free)

    p = sub.add_parser("find-subseq", help="find a constrained product subsequence")
    p.add_argument("--group", required=True)
    p.add_argument("--seq", required=True)
    p.add_argument("--length", type=int, default=None)
    p.add_argument("--max-length", type=int, default=None)
    p.add_argument("--modulus", type=int, default=None)
    p.add_argument("--parity", choices=["odd", "even"], default=None)
    p.add_argument("--signed", action="store_true")
    p.add_argument("--target", default=None)
    common(p)
    p.set_defaults(handler=cmd_find_subseq)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        report, code = args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SequenceFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
