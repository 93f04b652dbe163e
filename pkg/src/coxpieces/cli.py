"""Command-line interface: coxpieces <subcommand> ...

Exit codes: 0 all checks pass, 1 some check fails, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

from .coxcore import CoxeterSystem, build_system
from .errors import CoxeterError, UnknownCheck
from .verdict import Verdict


# ---------------------------------------------------------------------------
# argument helpers


def parse_labels(text: str | None) -> list[int]:
    """ "1,2" -> [0, 1] """
    if text is None or text.strip() in ("", "-"):
        return []
    try:
        return [int(t) - 1 for t in text.split(",")]
    except ValueError as exc:
        raise CoxeterError(f"cannot parse generator list {text!r}") from exc


def parse_delta(text: str | None, J: list[int] | None, W: CoxeterSystem) -> dict[int, int]:
    """ "1:2,2:3" or "id" -> 0-based dict.  "id" needs --J (default: all generators)."""
    if text is None or text == "id":
        dom = J if J is not None else list(range(W.rank))
        return {j: j for j in dom}
    out = {}
    try:
        for item in text.split(","):
            a, b = item.split(":")
            out[int(a) - 1] = int(b) - 1
    except ValueError as exc:
        raise CoxeterError(f"cannot parse delta {text!r}") from exc
    if J is not None and sorted(out) != sorted(J):
        raise CoxeterError("the domain of --delta differs from --J")
    return out


def action_mapping(args, W: CoxeterSystem) -> dict[int, int]:
    J = parse_labels(args.J) if args.J is not None else None
    mapping = parse_delta(args.delta, J, W)
    if args.Jp is not None and sorted(mapping.values()) != sorted(parse_labels(args.Jp)):
        raise CoxeterError("the image of --delta differs from --Jp")
    return mapping


def emit(args, payload, rows: list[list] | None = None, header: list[str] | None = None) -> None:
    if args.format == "tsv" and rows is not None:
        if header:
            print("\t".join(header))
        for r in rows:
            print("\t".join(str(x) for x in r))
    else:
        print(json.dumps(payload, indent=2, sort_keys=False))


def labels1(K) -> list[int]:
    return sorted(i + 1 for i in K)


# ---------------------------------------------------------------------------
# subcommands


def cmd_info(args) -> int:
    W = build_system(args.group)
    w0 = W.longest_element()
    payload = {
        "type": args.group, "rank": W.rank, "order": W.order,
        "roots": 2 * W.n_pos,
        "longest_length": W.length(w0), "longest_word": W.format(w0),
        "twist": [W.twist(i) + 1 for i in range(W.rank)], "twist_order": W.twist.order,
        "generator_classes": [labels1(c) for c in W.generator_classes],
    }
    emit(args, payload, [[k, json.dumps(v)] for k, v in payload.items()])
    return 0


def cmd_classes(args) -> int:
    from .cuspidal import classify_cuspidal, representatives, twisted_classes
    from .errors import UnsupportedType
    W = build_system(args.group)
    if args.cuspidal:
        report = classify_cuspidal(args.group, match=False)
        classes = report.cuspidal
        try:
            labels = {W.from_word(word): lab for lab, word, _ in representatives(args.group)}
        except UnsupportedType:
            labels = {}
    else:
        classes = twisted_classes(W, W.twist)
        labels = {}
    rows = []
    payload = []
    for cl in classes:
        lab = next((labels[x] for x in labels if x in set(cl.members)), "")
        item = {"rep": W.format(cl.rep), "size": len(cl.members), "min_length": cl.min_length,
                "n_min": len(cl.mins), "cuspidal": cl.cuspidal, "charpoly": str(cl.charpoly)}
        if args.cuspidal:
            item["label"] = lab
        payload.append(item)
        rows.append(list(item.values()))
    emit(args, payload, rows, list(payload[0]) if payload else None)
    return 0


def cmd_pieces(args) -> int:
    from .pieces import wj_orbit_decomposition, wj_report
    W = build_system(args.group)
    mapping = action_mapping(args, W)
    pieces = wj_orbit_decomposition(W, mapping)
    rep = wj_report(W, mapping, pieces)
    rows = [[p["w2"], p["I"], p["size"], len(p["orbits"])] for p in rep["pieces"]]
    emit(args, rep, rows, ["w", "I", "size", "orbits"])
    return 0


def cmd_reduce(args) -> int:
    from .minlen import TwistedAction, chain_json, reduce_to_min
    W = build_system(args.group)
    mapping = action_mapping(args, W)
    action = TwistedAction(W, mapping)
    w = W.parse_word(args.word)
    end, chain = reduce_to_min(action, w)
    payload = {"start": W.format(w), "end": W.format(end), "start_length": W.length(w),
               "end_length": W.length(end), "steps": chain_json(action, chain)}
    rows = [[s["gen"], s["word"]] for s in payload["steps"]]
    emit(args, payload, rows, ["gen", "word"])
    return 0


def cmd_good_elements(args) -> int:
    from .braid import verify_good_elements
    W = build_system(args.group)
    v, rows = verify_good_elements(W, scope=args.group)
    emit(args, rows, [[r["rep"], r.get("d", ""), r.get("chain", r.get("good"))] for r in rows],
         ["rep", "d", "chain"])
    return 0 if v.passed else 1


def cmd_zeta(args) -> int:
    from .hecke import HeckeAlgebra, verify_zeta_constancy
    W = build_system(args.group)
    mapping = action_mapping(args, W)
    H = HeckeAlgebra(W, [int(x) for x in args.L.split(",")] if args.L else None)
    rep = verify_zeta_constancy(H, mapping, args.group)
    payload = {"dimension": rep.dimension, "orbits": rep.rows, "verdict": rep.verdict.to_json()}
    if args.format == "tsv":
        print(f"# dimension\t{rep.dimension}")
    emit(args, payload, [[r["orbit"], r["size"], len(r["min"]), r["constant"]] for r in rep.rows],
         ["orbit", "size", "n_min", "constant"])
    return 0 if rep.verdict.passed else 1


# ---------------------------------------------------------------------------
# verify


def _check_min_length(spec: str, opts: dict) -> list[Verdict]:
    from .cuspidal import verify_shift_reduction
    from .minlen import TwistedAction, verify_min_length_suite
    W = build_system(spec)
    mapping = opts.get("mapping")
    action = TwistedAction(W, mapping if mapping is not None else W.twist)
    out = verify_min_length_suite(action, spec)
    if mapping is None:
        out += verify_shift_reduction(W, W.twist, spec)
    return out


def _check_cuspidal(spec: str, opts: dict) -> list[Verdict]:
    from .cuspidal import classify_cuspidal
    return classify_cuspidal(spec).verdicts


def _check_invariants(spec: str, opts: dict) -> list[Verdict]:
    from .cuspidal import (verify_charpoly_invariance, verify_inverse_twist,
                           verify_profile_invariance, verify_support_equivalence)
    from .minlen import verify_parabolic_conjugation, verify_support_monotone
    W = build_system(spec)
    out = [verify_charpoly_invariance(W, W.twist, spec), verify_profile_invariance(W, W.twist, spec),
           verify_support_equivalence(W, W.twist, spec), verify_support_monotone(W, W.twist, spec),
           verify_parabolic_conjugation(W, W.twist, spec)]
    if W.twist.order <= 2:
        out.append(verify_inverse_twist(W, W.twist, spec))
    return out


def _check_longest(spec: str, opts: dict) -> list[Verdict]:
    from .braid import verify_longest_element_identities
    return verify_longest_element_identities(spec)


def _check_power(spec: str, opts: dict) -> list[Verdict]:
    from .braid import power_identity_partitions, verify_power_identity
    return [verify_power_identity(spec, a) for a in power_identity_partitions(spec)]


def _check_good(spec: str, opts: dict) -> list[Verdict]:
    from .braid import verify_good_elements
    W = build_system(spec)
    return [verify_good_elements(W, scope=spec)[0]]


def _check_zeta(spec: str, opts: dict) -> list[Verdict]:
    from .hecke import HeckeAlgebra, verify_zeta_constancy
    W = build_system(spec)
    H = HeckeAlgebra(W, opts.get("L"))
    mapping = opts.get("mapping")
    if mapping is None:
        mapping = {i: W.twist(i) for i in range(W.rank)}
    return [verify_zeta_constancy(H, mapping, spec).verdict]


def _pair_settings(spec: str, opts: dict):
    from .pieces import PairSetting, admissible_triples, product_setting
    W1 = build_system(spec)
    if opts.get("second") is None and opts.get("mapping") is not None:
        yield spec, product_setting(W1, opts["mapping"])
        return
    W2 = build_system(opts.get("second") or spec)
    triples = admissible_triples(W1, W2)
    for c in triples:
        for cp in triples:
            yield f"{spec}x{opts.get('second') or spec} {c.to_json()} {cp.to_json()}", PairSetting(W1, W2, c, cp)


def _check_sequences(spec: str, opts: dict) -> list[Verdict]:
    from .pieces import verify_sequences
    return [v for scope, S in _pair_settings(spec, opts) for v in verify_sequences(S, scope)]


def _check_pieces(spec: str, opts: dict) -> list[Verdict]:
    from .pieces import verify_orbit_pieces, verify_pieces
    if opts.get("second") is None and opts.get("mapping") is not None:
        return verify_orbit_pieces(build_system(spec), opts["mapping"], spec)
    return [v for scope, S in _pair_settings(spec, opts) for v in verify_pieces(S, scope)]


def _check_distinguished(spec: str, opts: dict) -> list[Verdict]:
    from .pieces import distinguished_analysis
    return [v for scope, S in _pair_settings(spec, opts)
            for v in distinguished_analysis(S, scope).verdicts]


def _check_e6_words(spec: str, opts: dict) -> list[Verdict]:
    from .cuspidal import verify_2e6_words
    return verify_2e6_words()


CHECKS: dict[str, Callable[[str, dict], list[Verdict]]] = {
    "min-length": _check_min_length,
    "cuspidal": _check_cuspidal,
    "class-invariants": _check_invariants,
    "longest-element": _check_longest,
    "power-identity": _check_power,
    "good-elements": _check_good,
    "zeta": _check_zeta,
    "sequences": _check_sequences,
    "pieces": _check_pieces,
    "distinguished": _check_distinguished,
    "2e6-words": _check_e6_words,
}


def run_check(check: str, spec: str, opts: dict) -> list[dict]:
    if check not in CHECKS:
        raise UnknownCheck(f"unknown check {check!r}; known: {', '.join(CHECKS)}")
    t0 = time.perf_counter()
    verdicts = CHECKS[check](spec, opts)
    out = [v.to_json() for v in verdicts]
    if opts.get("timing"):
        for item in out:
            item["seconds"] = round(time.perf_counter() - t0, 3)
    return out


def cmd_verify(args) -> int:
    if args.check not in CHECKS:
        raise UnknownCheck(f"unknown check {args.check!r}; known: {', '.join(CHECKS)}")
    opts: dict = {"timing": args.timing, "second": args.second}
    if args.L:
        opts["L"] = [int(x) for x in args.L.split(",")]
    if args.J is not None or args.delta is not None:
        if len(args.groups) != 1:
            raise CoxeterError("--J/--delta need exactly one group")
        opts["mapping"] = action_mapping(args, build_system(args.groups[0]))
    if args.jobs > 1 and len(args.groups) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run_check, [args.check] * len(args.groups), args.groups,
                                    [opts] * len(args.groups)))
    else:
        results = [run_check(args.check, g, opts) for g in args.groups]
    flat = [v for res in results for v in res]
    ok = all(v["pass"] for v in flat)
    emit(args, {"pass": ok, "verdicts": flat},
         [[v["check"], v["scope"], "PASS" if v["pass"] else "FAIL",
           json.dumps(v.get("counterexample")) if not v["pass"] else ""] for v in flat],
         ["check", "scope", "result", "counterexample"])
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coxpieces", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=["json", "tsv"], default="json")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for multi-group runs")
    sub = p.add_subparsers(dest="cmd", required=True)

    def action_opts(q):
        q.add_argument("--J", help="domain of delta, 1-based, e.g. 1,2")
        q.add_argument("--Jp", help="image of delta (checked against --delta)")
        q.add_argument("--delta", help='"id" or pairs like 1:2,2:3')

    q = sub.add_parser("info", help="order, roots, longest element, generator classes")
    q.add_argument("group")
    q = sub.add_parser("classes", help="twisted conjugacy classes")
    q.add_argument("group")
    q.add_argument("--cuspidal", action="store_true")
    q = sub.add_parser("pieces", help="pieces of W under x.y = x y delta(x)^-1")
    q.add_argument("group")
    action_opts(q)
    q = sub.add_parser("reduce", help="non-increasing chain to a minimal length element")
    q.add_argument("group")
    q.add_argument("word", help='1-based word like 1,2,1 or "e"')
    action_opts(q)
    q = sub.add_parser("good-elements", help="good element per twisted class")
    q.add_argument("group")
    q = sub.add_parser("zeta", help="functionals zeta(h' h) = zeta(h D(h')) and orbit constancy")
    q.add_argument("group")
    action_opts(q)
    q.add_argument("--L", help="weights, e.g. 1,2")
    q = sub.add_parser("verify", help="run a named check; exit 0 iff it passes")
    q.add_argument("check", help=", ".join(CHECKS))
    q.add_argument("groups", nargs="+")
    action_opts(q)
    q.add_argument("--L", help="weights for the zeta check")
    q.add_argument("--second", help="second group for pair checks")
    q.add_argument("--timing", action="store_true", help="add wall-clock seconds to verdicts")
    return p


COMMANDS = {"info": cmd_info, "classes": cmd_classes, "pieces": cmd_pieces, "reduce": cmd_reduce,
            "good-elements": cmd_good_elements, "zeta": cmd_zeta, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return COMMANDS[args.cmd](args)
    except CoxeterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
