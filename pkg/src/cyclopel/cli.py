"""Command line front end: run the full pipeline on one monodromy datum,
or verify a fixture corpus.

Exit codes: 0 success, 2 usage, 3 no admissible degeneration (non-compact
type), 4 unsupported modulus, 5 non-maximal order at a join, 6 no unit
solves the sign pattern, 7 other datum validation failure, 1 anything else
(including corpus failures)."""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from decimal import Decimal, getcontext
from fractions import Fraction
from typing import Optional, Sequence

from .cyclotomic import Cyclo, element_str
from .embeddings import DEFAULT_PRECISION, embed
from .errors import (
    CyclopelError,
    DisconnectedCover,
    NonCompactType,
    NonMaximalOrder,
    UnbalancedInertia,
    Unsatisfiable,
    UnsupportedModulus,
    ZeroInertia,
)
from .monodromy import degenerate, validate
from .peldatum import (
    ASSEMBLE_MODULI,
    FamilyResult,
    assemble,
    default_corpus_path,
    load_corpus,
    verify_fixture,
)

__all__ = ["main", "build_report", "report_json", "run_corpus"]

EXIT_OK = 0
EXIT_GENERIC = 1
EXIT_USAGE = 2
EXIT_NONCOMPACT = 3
EXIT_UNSUPPORTED_MODULUS = 4
EXIT_NONMAXIMAL_ORDER = 5
EXIT_UNSATISFIABLE = 6
EXIT_INVALID_DATUM = 7

_DECIMAL_DIGITS = 20


def _decimal_str(q: Fraction) -> str:
    getcontext().prec = _DECIMAL_DIGITS
    return str(Decimal(int(q.numerator)) / Decimal(int(q.denominator)))


def _element_json(x: Cyclo, precision: int) -> dict:
    """Exact string plus a decimal rendering of the identity embedding;
    only the exact string is meaningful for comparison."""
    box = embed(x, 1, precision)
    return {
        "exact": element_str(x),
        "re": _decimal_str((box.re_lo + box.re_hi) / 2),
        "im": _decimal_str((box.im_lo + box.im_hi) / 2),
    }


def build_report(result: FamilyResult, precision: int, elapsed_ms: int) -> dict:
    components = []
    for c in result.components:
        simp = c.simplicity
        witness: dict = {}
        if simp.simple:
            witness["separating_cosets"] = [
                {"subgroup": list(h), "coset": list(coset)}
                for h, coset in simp.separating_cosets
            ]
        else:
            witness["inducing_subgroup"] = list(simp.inducing_subgroup)
        components.append(
            {
                "triple": list(c.triple.a),
                "cm_type": list(c.phi.sorted_members()),
                "simple": simp.simple,
                "simplicity_witness": witness,
                "beta": _element_json(c.point.beta, precision),
                "u0": element_str(c.point.u0),
            }
        )
    entries = [
        _element_json(x, precision)
        for block in result.hermitian.blocks
        for x in block.entries
    ]
    return {
        "input": {
            "m": result.datum.m,
            "N": result.datum.N,
            "a": list(result.datum.a),
        },
        "genus": result.genus,
        "signature": list(result.signature.values),
        "degeneration": {
            "triples": [list(t.a) for t in result.tree.triples],
            "merge_pairs": [list(p) for p in result.tree.merge_pairs],
            "merged_values": list(result.tree.merged_values),
        },
        "components": components,
        "matrix_entries": entries,
        "gram": [list(row) for row in result.gram],
        "determinant": result.gram_det,
        "form_signature": list(result.form_sig.values),
        "signature_match": result.form_sig == result.signature,
        "certainty": result.certainty,
        "precision_bits": precision,
        "timing_ms": elapsed_ms,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def _print_text_report(report: dict) -> None:
    inp = report["input"]
    print(f"monodromy datum: m={inp['m']} N={inp['N']} a={tuple(inp['a'])}")
    print(f"genus: {report['genus']}")
    print(f"signature: {tuple(report['signature'])}")
    print("degeneration triples:", " + ".join(str(tuple(t)) for t in report["degeneration"]["triples"]))
    for k, comp in enumerate(report["components"]):
        tag = "simple" if comp["simple"] else "not simple"
        print(f"component {k}: triple {tuple(comp['triple'])}  CM-type {set(comp['cm_type'])}  ({tag})")
        print(f"  beta = {comp['beta']['exact']}")
        print(f"       ~ {comp['beta']['re']} + {comp['beta']['im']}*I")
        print(f"  u0 = {comp['u0']}")
    print("matrix entries (diagonal):")
    for e in report["matrix_entries"]:
        print(f"  {e['exact']}  ~ {e['re']} + {e['im']}*I")
    print("gram matrix:")
    for row in report["gram"]:
        print("  [" + " ".join(f"{v:3d}" for v in row) + "]")
    print(f"determinant: {report['determinant']}")
    match = "matches" if report["signature_match"] else "MISMATCH"
    print(f"signature cross-check: {tuple(report['form_signature'])} ({match})")
    print(f"certainty: {report['certainty']}")
    print(f"elapsed: {report['timing_ms']} ms")


def _exit_code_for(exc: CyclopelError) -> int:
    if isinstance(exc, NonCompactType):
        return EXIT_NONCOMPACT
    if isinstance(exc, UnsupportedModulus):
        return EXIT_UNSUPPORTED_MODULUS
    if isinstance(exc, NonMaximalOrder):
        return EXIT_NONMAXIMAL_ORDER
    if isinstance(exc, Unsatisfiable):
        return EXIT_UNSATISFIABLE
    if isinstance(exc, (ZeroInertia, UnbalancedInertia, DisconnectedCover)):
        return EXIT_INVALID_DATUM
    return EXIT_GENERIC


def run_family(m: int, inertia: Sequence[int], precision: int, as_json: bool) -> int:
    t0 = time.monotonic()
    try:
        datum = validate(m, inertia)
        degenerate(datum)
        if m not in ASSEMBLE_MODULI:
            raise UnsupportedModulus(
                f"assembly supports odd prime m in {sorted(ASSEMBLE_MODULI)}; "
                f"m = {m} families ship as corpus fixtures only"
            )
        result = assemble(datum, precision)
    except CyclopelError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_code_for(exc)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_DATUM
    elapsed_ms = int((time.monotonic() - t0) * 1000)
    report = build_report(result, precision, elapsed_ms)
    if as_json:
        print(report_json(report))
    else:
        _print_text_report(report)
    return EXIT_OK


def run_corpus(path: str, precision: int, allow_galois: bool) -> int:
    try:
        fixtures = load_corpus(path)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: cannot read corpus: {exc}", file=sys.stderr)
        return EXIT_GENERIC
    with ThreadPoolExecutor() as pool:
        outcomes = list(
            pool.map(lambda f: verify_fixture(f, precision, allow_galois), fixtures)
        )
    failed = 0
    for out in outcomes:
        print(f"{'PASS' if out.passed else 'FAIL'} {out.name}")
        for msg in out.failures:
            failed_line = f"     {msg}"
            print(failed_line)
        if not out.passed:
            failed += 1
    print(f"{len(outcomes) - failed} passed, {failed} failed, {len(outcomes)} total")
    return EXIT_OK if failed == 0 else EXIT_GENERIC


def _parse_inertia(raw: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"inertia must be comma-separated integers, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cyclopel",
        description="Integral PEL datum of the Shimura variety attached to a "
        "family of cyclic covers of the projective line.",
    )
    p.add_argument("--m", type=int, help="cover degree (modulus)")
    p.add_argument(
        "--inertia",
        type=_parse_inertia,
        help="comma-separated inertia values, e.g. 1,3,3,3",
    )
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument(
        "--precision",
        type=int,
        default=DEFAULT_PRECISION,
        metavar="BITS",
        help="starting interval precision in bits (default %(default)s)",
    )
    p.add_argument(
        "--allow-galois-compare",
        action="store_true",
        help="corpus mode: accept fixtures equivalent up to a Galois twist",
    )
    p.add_argument(
        "--corpus",
        nargs="?",
        const=str(default_corpus_path()),
        metavar="PATH",
        help="verify a fixture corpus instead of one datum "
        "(defaults to the shipped corpus when PATH is omitted)",
    )
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision < 8:
        parser.error("--precision must be at least 8 bits")
    if args.corpus is not None:
        if args.m is not None or args.inertia is not None:
            parser.error("--corpus cannot be combined with --m/--inertia")
        return run_corpus(args.corpus, args.precision, args.allow_galois_compare)
    if args.m is None or args.inertia is None:
        parser.error("either --corpus or both --m and --inertia are required")
    return run_family(args.m, args.inertia, args.precision, args.json)


if __name__ == "__main__":
    sys.exit(main())
