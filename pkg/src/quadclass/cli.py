"""Command-line driver.

Subcommands
    classgroup          exact structure of one field, or a sweep
    rank2               scan the rank-2 torsion family over an (a, b, n) box
    tworank             search and verify the two-rank congruence family
    density             exact local densities and Euler-product partials
    census              count small fields absorbing a target subgroup
    squarefree-witness  random-line square-freeness witness for the family
                        polynomial

Conventions
    * Every integer in a data file is a decimal string; fractions are
      "num/den"; tuples are "x"-separated.  No floats and no timestamps
      appear in data files, so identical invocations produce identical
      bytes.
    * CSV files open with a `# schema quadclass/<command>/1` comment line;
      JSON carries the same tag in a "schema" field.
    * With --out, files are written atomically and a run manifest
      `<out>.manifest.json` records argv, parameters, budgets, and SHA-256
      hashes of every artifact; `replay_manifest` re-executes a manifest
      and byte-compares the outputs.
    * Exit codes: 0 success, 1 usage, 2 budget refusal, 3 violated
      mathematical contract (including a family instance that fails its
      promised verification — outputs are still written first).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Callable, Sequence

from . import __version__
from .arith import is_squarefree
from .classgroup import (
    DEFAULT_ENUM_BOUND,
    fundamental_discriminant,
    group_structure,
    is_fundamental_discriminant,
    sweep_structures,
)
from .density import (
    DEFAULT_POINT_BUDGET,
    census_embeddings,
    empirical_slope,
    euler_product_partials,
    rank2_moments,
    squarefree_value_count,
)
from .errors import BudgetError, ContractViolation, UsageError
from .families import (
    congruence_spec,
    poly_squarefree_witness,
    rank2_polynomial,
    scan_rank2,
    search_tworank,
    verify_tworank,
)


@dataclass
class CommandResult:
    schema: str
    columns: list[str]
    rows: list[dict]
    summary: list[str] = field(default_factory=list)
    exit_code: int = 0
    plot_key: str | None = None


# ---------------------------------------------------------------------------
# serialization and file plumbing


def _ser(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (tuple, list)):
        return "x".join(str(int(x)) for x in value)
    return str(value)


def _render_csv(result: CommandResult) -> str:
    buf = io.StringIO()
    buf.write(f"# schema {result.schema}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_ser(row.get(c)) for c in result.columns])
    return buf.getvalue()


def _render_json(result: CommandResult) -> str:
    doc = {
        "schema": result.schema,
        "columns": result.columns,
        "rows": [
            {c: _ser(row.get(c)) for c in result.columns} for row in result.rows
        ],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".quadclass-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sha256(path: str) -> tuple[str, int]:
    h = hashlib.sha256()
    size = 0
    with open(path, "rb") as fh:
        while chunk := fh.read(1 << 16):
            h.update(chunk)
            size += len(chunk)
    return h.hexdigest(), size


def _param_value(v):
    if v is None or isinstance(v, bool):
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, range):
        return f"{v.start}:{v.stop - 1}"
    if isinstance(v, (list, tuple)):
        return [str(x) for x in v]
    return str(v)


def _write_manifest(args, argv: list[str], written: list[str]) -> str:
    out = args.out
    params = {
        k: _param_value(v)
        for k, v in sorted(vars(args).items())
        if k not in ("handler",) and not callable(v)
    }
    budgets = {
        name.removeprefix("budget_"): str(value)
        for name, value in vars(args).items()
        if name.startswith("budget_")
    }
    base = os.path.dirname(os.path.abspath(out))
    outputs = []
    for path in written:
        digest, size = _sha256(path)
        outputs.append(
            {
                "path": os.path.relpath(os.path.abspath(path), base),
                "sha256": digest,
                "bytes": size,
            }
        )
    manifest = {
        "format": "quadclass/manifest/1",
        "version": __version__,
        "command": args.command,
        "argv": list(argv),
        "parameters": params,
        "seed": str(getattr(args, "seed", "")),
        "budgets": budgets,
        "outputs": outputs,
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }
    path = out + ".manifest.json"
    _atomic_write_text(path, json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return path


def _emit(args, argv: list[str], result: CommandResult) -> None:
    text = _render_csv(result) if args.format == "csv" else _render_json(result)
    if not args.out:
        if args.plot:
            raise UsageError("--plot requires --out")
        sys.stdout.write(text)
        return
    _atomic_write_text(args.out, text)
    written = [args.out]
    if args.plot:
        if result.plot_key is None:
            raise UsageError(f"{args.command} has no figure panel")
        if result.rows:
            from . import figures

            render = getattr(figures, f"render_{result.plot_key}")
            png = os.path.splitext(args.out)[0] + ".png"
            render(result.rows, png)
            written.append(png)
        else:
            result.summary.append("no rows; skipped figure")
    manifest_path = _write_manifest(args, argv, written)
    result.summary.append(
        f"wrote {', '.join(written)} and {manifest_path}"
    )


@dataclass
class ReplayResult:
    ok: bool
    mismatches: list[str]
    out_dir: str


def replay_manifest(manifest_path: str, work_dir: str | None = None) -> ReplayResult:
    """Re-run a manifest's argv into a scratch directory and byte-compare.

    The recorded --out is redirected; every artifact listed in the manifest
    must reappear with an identical SHA-256.
    """
    with open(manifest_path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    argv = [str(tok) for tok in manifest["argv"]]
    out_index = None
    inline = False
    old_out = None
    for i, tok in enumerate(argv):
        if tok == "--out" and i + 1 < len(argv):
            out_index, old_out = i + 1, argv[i + 1]
            break
        if tok.startswith("--out="):
            out_index, old_out, inline = i, tok[len("--out=") :], True
            break
    if old_out is None:
        raise UsageError(f"manifest {manifest_path} has no --out in argv")
    if work_dir is None:
        work_dir = tempfile.mkdtemp(prefix="quadclass-replay-")
    new_out = os.path.join(work_dir, os.path.basename(old_out))
    argv[out_index] = f"--out={new_out}" if inline else new_out
    code = main(argv)
    mismatches = []
    if code not in (0, 3):
        mismatches.append(f"replay exited with code {code}")
    for entry in manifest["outputs"]:
        path = os.path.join(work_dir, entry["path"])
        if not os.path.exists(path):
            mismatches.append(f"missing artifact {entry['path']}")
            continue
        digest, _ = _sha256(path)
        if digest != entry["sha256"]:
            mismatches.append(
                f"hash mismatch for {entry['path']}: "
                f"{digest} != {entry['sha256']}"
            )
    return ReplayResult(not mismatches, mismatches, work_dir)


# ---------------------------------------------------------------------------
# argument helpers


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise UsageError(message)


def _range_arg(text: str) -> range:
    try:
        lo_text, hi_text = text.split(":")
        lo, hi = int(lo_text), int(hi_text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"range {text!r} is empty")
    return range(lo, hi + 1)


def _int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _box_arg(text: str) -> tuple[range, ...]:
    return tuple(_range_arg(part) for part in text.split(","))


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_classgroup(args) -> CommandResult:
    chosen = [
        args.radicand is not None,
        args.delta is not None,
        args.sweep_max is not None,
    ]
    if sum(chosen) != 1:
        raise UsageError("give exactly one of --radicand, --delta, --sweep-max")
    columns = ["radicand", "delta", "class_number", "invariant_factors", "two_rank"]
    rows = []
    if args.sweep_max is not None:
        for row in sweep_structures(args.sweep_max):
            rows.append(
                dict(
                    radicand=row.radicand,
                    delta=row.delta,
                    class_number=row.order,
                    invariant_factors=row.invariant_factors,
                    two_rank=sum(1 for f in row.invariant_factors if f % 2 == 0),
                )
            )
    else:
        if args.radicand is not None:
            disc = fundamental_discriminant(args.radicand)
            radicand, delta = disc.radicand, disc.delta
        else:
            delta = args.delta
            if not is_fundamental_discriminant(delta):
                raise UsageError(f"{delta} is not a fundamental discriminant")
            radicand = -delta if delta % 4 == 1 else -delta // 4
        grp = group_structure(delta, enum_bound=args.budget_enum)
        rows.append(
            dict(
                radicand=radicand,
                delta=delta,
                class_number=grp.order,
                invariant_factors=grp.invariant_factors,
                two_rank=grp.two_rank,
            )
        )
    summary = [
        f"{len(rows)} field(s); largest class number "
        f"{max(r['class_number'] for r in rows)}"
    ]
    return CommandResult(
        "quadclass/classgroup/1", columns, rows, summary, 0, "classgroup"
    )


def _cmd_rank2(args) -> CommandResult:
    columns = [
        "g", "a", "b", "n", "disc", "admissible", "reason",
        "verified", "class_number", "invariant_factors", "error",
    ]
    rows = []
    for r in scan_rank2(
        args.g,
        args.a_range,
        args.b_range,
        args.n_range,
        verify=not args.no_verify,
        deep=args.deep,
        enum_bound=args.budget_enum,
    ):
        rows.append(
            dict(
                g=r.g, a=r.a, b=r.b, n=r.n, disc=r.disc,
                admissible=r.admissible, reason=r.reason,
                verified=r.verified, class_number=r.class_number,
                invariant_factors=r.invariant_factors, error=r.error,
            )
        )
    admissible = [r for r in rows if r["admissible"]]
    failures = [r for r in admissible if r["verified"] is False]
    moments = rank2_moments(r["disc"] for r in rows)
    summary = [
        f"{len(rows)} tuples scanned; {len(admissible)} admissible; "
        f"{sum(1 for r in admissible if r['verified'])} verified",
        f"distinct square-free D: {moments.support} "
        f"(moment bound s1^2/s2 = {moments.lower_bound} "
        f"with s1={moments.s1}, s2={moments.s2})",
    ]
    for r in failures[:10]:
        summary.append(
            f"VERIFICATION FAILED at (a={r['a']}, b={r['b']}, n={r['n']}): "
            f"D={r['disc']}"
        )
    return CommandResult(
        "quadclass/rank2/1", columns, rows, summary,
        3 if failures else 0, "rank2",
    )


def _cmd_tworank(args) -> CommandResult:
    spec = congruence_spec(
        args.l, args.g1, args.primes, args.offsets_a, args.offsets_b
    )
    columns = [
        "m", "n", "t", "d", "squarefree", "embedded", "verified",
        "class_number", "invariant_factors", "error",
    ]
    rows = []
    cache: dict[int, object] = {}
    for triple in search_tworank(
        spec,
        args.m_range,
        args.n_range,
        args.t_range,
        strict=not args.relaxed,
        limit=args.limit,
    ):
        row = dict(
            m=triple.m, n=triple.n, t=triple.t, d=triple.d,
            squarefree=None, embedded=None, verified=None,
            class_number=None, invariant_factors=None, error="",
        )
        sf = is_squarefree(triple.d)
        row["squarefree"] = sf
        if sf and not args.no_verify:
            if triple.d not in cache:
                try:
                    cache[triple.d] = verify_tworank(
                        triple.d, args.l, args.g1,
                        primes=args.primes, enum_bound=args.budget_enum,
                    )
                except BudgetError as exc:
                    cache[triple.d] = str(exc)
            v = cache[triple.d]
            if isinstance(v, str):
                row["error"] = v
            else:
                row["embedded"] = v.embedded
                row["verified"] = v.verified
                row["class_number"] = v.class_number
                row["invariant_factors"] = v.invariant_factors
        rows.append(row)
    verified_d = {r["d"] for r in rows if r["verified"]}
    failures = [r for r in rows if r["squarefree"] and r["verified"] is False]
    summary = [
        f"classes: n = {spec.n0}, m = {spec.m0} (mod {spec.modulus})",
        f"{len(rows)} triples; {len({r['d'] for r in rows})} distinct d; "
        f"{len(verified_d)} distinct d verified",
    ]
    for r in failures[:10]:
        summary.append(
            f"VERIFICATION FAILED at d={r['d']} "
            f"(m={r['m']}, n={r['n']}, t={r['t']})"
        )
    return CommandResult(
        "quadclass/tworank/1", columns, rows, summary,
        3 if failures else 0, "tworank",
    )


def _cmd_density(args) -> CommandResult:
    poly = rank2_polynomial(args.g)
    report = euler_product_partials(
        poly, args.p_max, method=args.method, point_budget=args.budget_points
    )
    columns = ["p", "zeros", "factor", "partial"]
    rows = [
        dict(p=data.p, zeros=data.zeros, factor=data.factor, partial=partial)
        for data, partial in zip(report.per_prime, report.partial_products)
    ]
    summary = [
        f"final partial product {report.final} ~= {float(report.final):.6f}",
        report.tail_note,
    ]
    if args.box is not None:
        count = squarefree_value_count(
            poly, args.box, point_budget=args.budget_points
        )
        volume = 1
        for r in args.box:
            volume *= len(r)
        summary.append(
            f"nonzero square-free values on the box: {count} of {volume} points"
        )
    return CommandResult(
        "quadclass/density/1", columns, rows, summary, 0, "density"
    )


def _cmd_census(args) -> CommandResult:
    result = census_embeddings(args.x, args.target)
    columns = ["bound", "count"]
    rows = [dict(bound=b, count=c) for b, c in result.checkpoints]
    summary = [
        f"{result.count} square-free d <= {args.x} whose class group "
        f"contains {list(result.target) or 'the trivial group'}"
    ]
    slope = empirical_slope(result.checkpoints)
    if slope is not None:
        summary.append(
            f"empirical log-log slope {slope:.3f} across checkpoints "
            f"(descriptive only, not an exponent claim)"
        )
    return CommandResult("quadclass/census/1", columns, rows, summary, 0, "census")


def _cmd_witness(args) -> CommandResult:
    report = poly_squarefree_witness(args.g, args.trials, args.seed)
    columns = [
        "trial", "alpha_x", "beta_x", "alpha_y", "beta_y",
        "alpha_z", "beta_z", "degree", "gcd_degree", "ok",
    ]
    rows = []
    for i, trial in enumerate(report.results):
        (ax_, bx), (ay, by), (az, bz) = trial.lines
        rows.append(
            dict(
                trial=i, alpha_x=ax_, beta_x=bx, alpha_y=ay, beta_y=by,
                alpha_z=az, beta_z=bz, degree=trial.degree,
                gcd_degree=trial.gcd_degree, ok=trial.ok,
            )
        )
    bad = sum(1 for t in report.results if not t.ok)
    summary = [
        f"{report.trials} line specializations (seed {report.seed}, "
        f"{report.redraws} degenerate redraws); {bad} with nonconstant gcd"
    ]
    if bad:
        summary.append(
            "nonconstant gcd(u, u') observed: square factor suspected"
        )
    return CommandResult(
        "quadclass/squarefree-witness/1", columns, rows, summary,
        3 if bad else 0, "witness",
    )


# ---------------------------------------------------------------------------
# parser assembly


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="quadclass",
        description="class groups of imaginary quadratic fields, exactly",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--out", help="output path; a run manifest is written alongside"
    )
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument(
        "--plot", action="store_true",
        help="render a PNG panel next to --out",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser(
        "classgroup", parents=[common],
        help="exact class-group structure of one field or a sweep",
    )
    p.add_argument("--radicand", type=int, help="square-free d >= 1")
    p.add_argument("--delta", type=int, help="fundamental discriminant < 0")
    p.add_argument(
        "--sweep-max", type=int,
        help="tabulate every square-free radicand up to this bound",
    )
    p.add_argument("--budget-enum", type=int, default=DEFAULT_ENUM_BOUND)
    p.set_defaults(handler=_cmd_classgroup)

    p = sub.add_parser(
        "rank2", parents=[common],
        help="scan the rank-2 torsion family over an (a, b, n) box",
    )
    p.add_argument("--g", type=int, required=True, help="odd torsion order >= 3")
    p.add_argument("--a-range", type=_range_arg, required=True, metavar="LO:HI")
    p.add_argument("--b-range", type=_range_arg, required=True, metavar="LO:HI")
    p.add_argument("--n-range", type=_range_arg, required=True, metavar="LO:HI")
    p.add_argument(
        "--deep", action="store_true",
        help="also compute the full ambient class group per admissible row",
    )
    p.add_argument(
        "--no-verify", action="store_true",
        help="skip subgroup verification; admissibility only",
    )
    p.add_argument("--budget-enum", type=int, default=DEFAULT_ENUM_BOUND)
    p.set_defaults(handler=_cmd_rank2)

    p = sub.add_parser(
        "tworank", parents=[common],
        help="search the two-rank congruence family and verify its fields",
    )
    p.add_argument("--l", type=int, required=True, help="target 2-rank >= 1")
    p.add_argument("--g1", type=int, required=True, help="odd order >= 3")
    p.add_argument(
        "--primes", type=_int_list, required=True, metavar="P1,P2,...",
        help="l distinct primes > 3",
    )
    p.add_argument(
        "--offsets-a", type=_int_list, required=True, metavar="A1,A2,...",
    )
    p.add_argument(
        "--offsets-b", type=_int_list, required=True, metavar="B1,B2,...",
    )
    p.add_argument("--m-range", type=_range_arg, required=True, metavar="LO:HI")
    p.add_argument("--n-range", type=_range_arg, required=True, metavar="LO:HI")
    p.add_argument("--t-range", type=_range_arg, required=True, metavar="LO:HI")
    p.add_argument(
        "--relaxed", action="store_true",
        help="admit t = 1 triples (strict mode requires t not dividing m)",
    )
    p.add_argument("--limit", type=int, help="stop after this many triples")
    p.add_argument(
        "--no-verify", action="store_true",
        help="emit triples without computing class groups",
    )
    p.add_argument("--budget-enum", type=int, default=DEFAULT_ENUM_BOUND)
    p.set_defaults(handler=_cmd_tworank)

    p = sub.add_parser(
        "density", parents=[common],
        help="local zero counts and Euler-product partials for the family polynomial",
    )
    p.add_argument("--g", type=int, required=True, help="odd torsion order >= 3")
    p.add_argument("--p-max", type=int, default=13)
    p.add_argument(
        "--method", choices=("auto", "brute", "hensel"), default="auto"
    )
    p.add_argument(
        "--box", type=_box_arg, metavar="LO:HI,LO:HI,LO:HI",
        help="also count square-free polynomial values on this box",
    )
    p.add_argument("--budget-points", type=int, default=DEFAULT_POINT_BUDGET)
    p.set_defaults(handler=_cmd_density)

    p = sub.add_parser(
        "census", parents=[common],
        help="count small fields whose class group contains a target subgroup",
    )
    p.add_argument("--x", type=int, required=True, help="radicand bound")
    p.add_argument(
        "--target", type=_int_list, default=(), metavar="D1,D2,...",
        help="invariant factors of the target subgroup (empty = trivial)",
    )
    p.set_defaults(handler=_cmd_census)

    p = sub.add_parser(
        "squarefree-witness", parents=[common],
        help="random-line square-freeness witness for the family polynomial",
    )
    p.add_argument("--g", type=int, required=True, help="odd torsion order >= 3")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_witness)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else [str(a) for a in argv]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        result = args.handler(args)
        _emit(args, argv, result)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except ContractViolation as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return 3
    for line in result.summary:
        print(line, file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
