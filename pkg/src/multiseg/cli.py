"""Command-line front end.

Exit codes: 0 success, 1 parse/usage error, 2 domain error, 3 resource
bound exceeded, 4 invariant violation (a theorem-level assertion failed;
a reproduction file is dumped so the case can be replayed).

Every verb accepts --json and --batch FILE; batch files hold one input
per line, '#' comments and blank lines ignored, with per-line errors
reported inline and a trailing summary.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import shlex
import sys

from .errors import (
    DomainError,
    InvariantViolation,
    MultisegError,
    ResourceBoundError,
    UsageError,
)
from .jacquet import jacquet_ladder
from .multiplicity import (
    composition_candidates,
    conjecture_scan,
    mult_in_jacquet,
)
from .segments import Multisegment, parse_multisegment, support
from .width import (
    is_ladder,
    min_ladder_cover,
    width_bruteforce,
    width_chain,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_RESOURCE = 3
EXIT_INVARIANT = 4


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so exit codes stay ours."""

    def error(self, message):
        raise UsageError(message)


def _parse_perm(text: str) -> tuple[int, ...]:
    try:
        perm = tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad permutation {text!r}: {exc}") from exc
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise UsageError(f"not a permutation of 1..n: {text!r}")
    return perm


def _emit(payload: dict, text_lines: list[str], as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        for line in text_lines:
            out.write(line + "\n")


# ---------------------------------------------------------------------------
# one handler per verb: args -> (payload dict, text lines)


def _do_width(args, tokens):
    m = parse_multisegment(tokens[0])
    w = width_chain(m)
    return {"multisegment": str(m), "width": w}, [str(w)]


def _do_cover(args, tokens):
    m = parse_multisegment(tokens[0])
    cover = min_ladder_cover(m)
    parts = [str(p) for p in cover.parts]
    return {"multisegment": str(m), "parts": parts}, parts or ["0"]


def _do_ladder_check(args, tokens):
    m = parse_multisegment(tokens[0])
    ok = is_ladder(m)
    return {"multisegment": str(m), "ladder": ok}, ["true" if ok else "false"]


def _do_jacquet(args, tokens):
    m = parse_multisegment(tokens[0])
    terms = jacquet_ladder(m, args.cut)
    lines = [f"{t.left} ⊗ {t.right}" for t in terms]
    payload = {
        "multisegment": str(m),
        "cut": args.cut,
        "terms": [
            {"left": str(t.left), "right": str(t.right), "multiplicity": t.multiplicity}
            for t in terms
        ],
    }
    return payload, lines or ["(no terms)"]


def _do_multjacquet(args, tokens):
    n = parse_multisegment(tokens[0])
    m1 = parse_multisegment(tokens[1])
    m2 = parse_multisegment(tokens[2])
    value = mult_in_jacquet(n, m1, m2)
    return (
        {"n": str(n), "m1": str(m1), "m2": str(m2), "multiplicity": value},
        [str(value)],
    )


def _do_candidates(args, tokens):
    m1 = parse_multisegment(tokens[0])
    m2 = parse_multisegment(tokens[1])
    cands = composition_candidates(m1, m2, width_cap=args.width_cap)
    if args.exact:
        from . import kl

        oracle = kl.KLOracle(
            cache_dir=args.cache_dir, support_bound=args.max_support
        )
        product = oracle.multiply_irreducibles(m1, m2)
        oracle.flush_cache()
        kept = {m for m, c in product.terms if c != 0}
        cands = [n for n in cands if n in kept]
    lines = [str(n) for n in cands]
    payload = {
        "m1": str(m1),
        "m2": str(m2),
        "width_cap": args.width_cap,
        "exact": bool(args.exact),
        "candidates": lines,
    }
    return payload, lines or ["(none)"]


def _do_decompose(args, tokens):
    from . import kl

    m1 = parse_multisegment(tokens[0])
    m2 = parse_multisegment(tokens[1])
    oracle = kl.KLOracle(cache_dir=args.cache_dir, support_bound=args.max_support)
    product = oracle.multiply_irreducibles(m1, m2)
    oracle.flush_cache()
    lines = [f"{c} * {m}" for m, c in product.terms]
    return product.to_dict() | {"m1": str(m1), "m2": str(m2)}, lines or ["0"]


def _do_conjecture(args, tokens):
    a = [int(t) for t in args.a.split(",")]
    b = [int(t) for t in args.b.split(",")]
    report = conjecture_scan(
        a,
        b,
        exact=args.exact,
        support_bound=args.max_support,
        cache_dir=args.cache_dir,
    )
    lines = [
        f"pi = {report['pi']}",
        f"pi' = {report['pi_prime']}",
        f"lambda = {report['lambda']}",
        "candidates: " + (", ".join(report["candidates"]) or "(none)"),
        f"verdict: {report['verdict']}",
    ]
    return report, lines


def _do_kl(args, tokens):
    from . import kl

    u = _parse_perm(tokens[0])
    v = _parse_perm(tokens[1])
    if len(u) != len(v):
        raise UsageError("permutations must have the same degree")
    oracle = kl.KLOracle(cache_dir=args.cache_dir)
    poly = oracle.kl_polynomial(u, v)
    oracle.flush_cache()
    payload = {
        "u": list(u),
        "v": list(v),
        "coefficients": list(poly.coefficients),
        "value_at_1": poly(1),
    }
    return payload, [str(poly)]


def _do_selftest(args, tokens):
    rng = random.Random(args.seed)
    checks = 0
    for _ in range(200):
        m = _random_multisegment(rng, max_segments=4, max_point=4)
        w = width_chain(m)
        if w != len(min_ladder_cover(m).parts) or w != width_bruteforce(m):
            raise InvariantViolation(
                "width routes disagree", repro={"multisegment": str(m)}
            )
        if is_ladder(m) != (w <= 1):
            raise InvariantViolation(
                "ladder test disagrees with width", repro={"multisegment": str(m)}
            )
        checks += 1
    for _ in range(50):
        m = _random_ladder(rng, max_segments=3, max_point=6)
        for d in range(m.total_size() + 1):
            for t in jacquet_ladder(m, d):
                if support(t.left) + support(t.right) != support(m):
                    raise InvariantViolation(
                        "Jacquet term loses support",
                        repro={"multisegment": str(m), "cut": d},
                    )
                if not (is_ladder(t.left) and is_ladder(t.right)):
                    raise InvariantViolation(
                        "Jacquet factor is not a ladder",
                        repro={"multisegment": str(m), "cut": d},
                    )
        checks += 1
    payload = {"seed": args.seed, "checks": checks, "status": "ok"}
    return payload, [f"selftest ok ({checks} checks, seed {args.seed})"]


def _random_multisegment(rng, max_segments, max_point) -> Multisegment:
    segs = []
    for _ in range(rng.randint(0, max_segments)):
        b = rng.randint(0, max_point)
        e = rng.randint(b, max_point)
        segs.append((b, e))
    return Multisegment.of(*segs)


def _random_ladder(rng, max_segments, max_point) -> Multisegment:
    while True:
        m = _random_multisegment(rng, max_segments, max_point)
        if is_ladder(m):
            return m


_HANDLERS = {
    "width": (_do_width, 1),
    "cover": (_do_cover, 1),
    "ladder-check": (_do_ladder_check, 1),
    "jacquet": (_do_jacquet, 1),
    "multjacquet": (_do_multjacquet, 3),
    "candidates": (_do_candidates, 2),
    "decompose": (_do_decompose, 2),
    "conjecture": (_do_conjecture, 0),
    "kl": (_do_kl, 2),
    "selftest": (_do_selftest, 0),
}


def build_parser() -> _Parser:
    parser = _Parser(prog="multiseg", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(verb, *, positionals=(), extra=()):
        p = sub.add_parser(verb)
        for name in positionals:
            p.add_argument(name)
        p.add_argument("--json", action="store_true")
        p.add_argument("--batch", metavar="FILE")
        for fn in extra:
            fn(p)
        return p

    add("width", positionals=["multisegment"])
    add("cover", positionals=["multisegment"])
    add("ladder-check", positionals=["multisegment"])
    add(
        "jacquet",
        positionals=["multisegment"],
        extra=[lambda p: p.add_argument("--cut", type=int, required=True)],
    )
    add("multjacquet", positionals=["n", "m1", "m2"])
    add(
        "candidates",
        positionals=["m1", "m2"],
        extra=[
            lambda p: p.add_argument("--width-cap", type=int, default=2),
            lambda p: p.add_argument("--exact", action="store_true"),
            lambda p: p.add_argument("--cache-dir"),
            lambda p: p.add_argument("--max-support", type=int, default=None),
        ],
    )
    add(
        "decompose",
        positionals=["m1", "m2"],
        extra=[
            lambda p: p.add_argument("--exact", action="store_true"),
            lambda p: p.add_argument("--cache-dir"),
            lambda p: p.add_argument("--max-support", type=int, default=None),
        ],
    )
    add(
        "conjecture",
        extra=[
            lambda p: p.add_argument("--a", required=True),
            lambda p: p.add_argument("--b", required=True),
            lambda p: p.add_argument("--exact", action="store_true"),
            lambda p: p.add_argument("--cache-dir"),
            lambda p: p.add_argument("--max-support", type=int, default=None),
        ],
    )
    add(
        "kl",
        positionals=["u", "v"],
        extra=[lambda p: p.add_argument("--cache-dir")],
    )
    add(
        "selftest",
        extra=[lambda p: p.add_argument("--seed", type=int, default=0)],
    )
    return parser


_POSITIONAL_NAMES = {
    "width": ["multisegment"],
    "cover": ["multisegment"],
    "ladder-check": ["multisegment"],
    "jacquet": ["multisegment"],
    "multjacquet": ["n", "m1", "m2"],
    "candidates": ["m1", "m2"],
    "decompose": ["m1", "m2"],
    "kl": ["u", "v"],
    "conjecture": [],
    "selftest": [],
}


def _tokens_for(args) -> list[str]:
    return [getattr(args, name) for name in _POSITIONAL_NAMES[args.verb]]


def _run_batch(args, handler, arity, out) -> int:
    try:
        with open(args.batch, "r", encoding="utf-8") as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise DomainError(f"cannot read batch file: {exc}") from exc
    ok = errors = 0
    results: list[str] = []
    for lineno, raw in enumerate(raw_lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = shlex.split(line)
        try:
            if len(tokens) != arity:
                raise UsageError(f"expected {arity} field(s), got {len(tokens)}")
            payload, text_lines = handler(args, tokens)
            if args.json:
                results.append(json.dumps(payload, sort_keys=True))
            else:
                results.append(f"line {lineno}: " + "; ".join(text_lines))
            ok += 1
        except MultisegError as exc:
            if isinstance(exc, InvariantViolation):
                raise
            results.append(f"line {lineno}: error: {exc}")
            errors += 1
    for r in results:
        out.write(r + "\n")
    out.write(f"batch summary: {ok} ok, {errors} error(s)\n")
    return EXIT_OK


def _dump_repro(exc: InvariantViolation) -> str:
    path = os.path.abspath(f"multiseg-repro-{os.getpid()}.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(
            {"message": str(exc), "repro": getattr(exc, "repro", None)},
            fh,
            sort_keys=True,
            indent=2,
        )
    return path


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        handler, arity = _HANDLERS[args.verb]
        if getattr(args, "batch", None):
            if not _POSITIONAL_NAMES[args.verb]:
                raise UsageError(f"verb {args.verb} does not support --batch")
            return _run_batch(args, handler, arity, out)
        payload, text_lines = handler(args, _tokens_for(args))
        _emit(payload, text_lines, args.json, out)
        return EXIT_OK
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        err.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except ResourceBoundError as exc:
        err.write(f"resource bound: {exc}\n")
        return EXIT_RESOURCE
    except InvariantViolation as exc:
        path = _dump_repro(exc)
        err.write(f"invariant violation: {exc}\nreproduction dumped to {path}\n")
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
