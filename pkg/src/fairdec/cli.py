"""Command-line interface.

Five subcommands: ``solve`` (run a rule), ``decompose`` (matrix to
lottery), ``check`` (decide a property, with certificate), ``envy``
(print the envy matrix of a lottery), and ``search`` (batch sweeps).

Exit codes are a stable contract: 0 success or "true"; 1 a checked
property is false or a sweep found failures; 2 usage, parse, or
resource-cap errors; 3 a named precondition failed; 4 certified
infeasibility (a decomposition within the envy bound provably does not
exist).
"""

import argparse
import sys
from pathlib import Path

from .core import (
    AssignmentMatrix,
    Instance,
    envy_matrix,
    is_dec_ef,
    validate_matrix,
)
from .decomposers import (
    birkhoff,
    decompose_three_agent,
    decompose_two_type,
    uniform_decomposition,
)
from .errors import ParseError, PreconditionError, ResourceLimitError
from .formats import (
    format_lottery,
    format_matrix,
    parse_instance,
    parse_lottery,
    parse_matrix,
)
from .oracles import (
    ef_decomposable,
    minimax_envy,
    reversal_symmetric_implementable,
)
from .properties import (
    equal_treatment_of_equals,
    is_ex_post_efficient,
    is_pareto_optimal,
    is_sd_ef,
    is_weak_sd_ef,
    sd_dominates,
    sd_improvement,
)
from .rules import probabilistic_serial, random_priority
from .search import verify_ps_ef_decomposable, verify_rp_dec_ef

MATRIX_PROPERTIES = (
    "sd-ef",
    "weak-sd-ef",
    "etoe",
    "sd-efficient",
    "ef-decomposable",
    "reversal-symmetric",
)
LOTTERY_PROPERTIES = ("dec-ef", "ex-post-efficient")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_instance(path: str) -> tuple[Instance, tuple[str, ...]]:
    return parse_instance(_read(path))


def _matrix_lines(m: AssignmentMatrix, structured: bool) -> list[str]:
    rows = [" ".join(str(x) for x in row) for row in m.rows]
    if structured:
        return [f"row: {row}" for row in rows]
    return rows


def _lottery_lines(lot, names, structured: bool) -> list[str]:
    rendered = format_lottery(lot, names).splitlines()
    if structured:
        return [f"entry: {line}" for line in rendered]
    return rendered


def cmd_solve(args) -> int:
    instance, names = _load_instance(args.instance)
    structured = args.format == "structured"
    if args.rule == "ps":
        lines = _matrix_lines(probabilistic_serial(instance), structured)
    else:
        lines = _lottery_lines(random_priority(instance), names, structured)
    print("\n".join(lines))
    return 0


def cmd_decompose(args) -> int:
    instance, names = _load_instance(args.instance)
    m = parse_matrix(_read(args.matrix))
    check = validate_matrix(m)
    if not check:
        raise PreconditionError(
            "bistochastic", f"matrix is not bistochastic: {check.reason}"
        )
    if m.n != instance.n:
        raise ValueError(
            f"matrix is {m.n}x{m.n} but the instance has {instance.n} agents"
        )
    structured = args.format == "structured"
    if args.method == "birkhoff":
        lot = birkhoff(m)
    elif args.method == "three-agent":
        if instance.n != 3:
            raise PreconditionError(
                "three-agent", "this method handles exactly three agents"
            )
        lot = decompose_three_agent(instance, m)
    elif args.method == "two-type":
        lot = decompose_two_type(instance, m)
    elif args.method == "uniform":
        if m.rows != AssignmentMatrix.uniform(m.n).rows:
            raise PreconditionError(
                "uniform-matrix", "matrix entries must all equal 1/n"
            )
        lot = uniform_decomposition(m.n)
    else:  # lp-dec-ef
        ok, lot = ef_decomposable(instance, m)
        if not ok:
            print(
                "infeasible: no decomposition keeps every envy probability"
                " within 1/2"
            )
            return 4
    print("\n".join(_lottery_lines(lot, names, structured)))
    return 0


def _first_sd_violation(instance, m, weak: bool):
    for i in range(instance.n):
        for k in range(instance.n):
            if i == k:
                continue
            if weak:
                if m[i] != m[k] and sd_dominates(
                    m[k], m[i], instance.preferences[i]
                ):
                    return i, k
            elif not sd_dominates(m[i], m[k], instance.preferences[i]):
                return i, k
    return None


def _first_unequal_treatment(instance, m):
    for i in range(instance.n):
        for k in range(i + 1, instance.n):
            if (
                instance.preferences[i] == instance.preferences[k]
                and m[i] != m[k]
            ):
                return i, k
    return None


def _check_matrix_property(args, instance, names, out):
    m = parse_matrix(_read(args.target))
    structured = args.format == "structured"
    prop = args.property
    if prop == "sd-ef":
        verdict = is_sd_ef(instance, m)
        if not verdict:
            i, k = _first_sd_violation(instance, m, weak=False)
            out.append(f"violating-pair: {i} {k}")
    elif prop == "weak-sd-ef":
        verdict = is_weak_sd_ef(instance, m)
        if not verdict:
            i, k = _first_sd_violation(instance, m, weak=True)
            out.append(f"violating-pair: {i} {k}")
    elif prop == "etoe":
        verdict = equal_treatment_of_equals(instance, m)
        if not verdict:
            i, k = _first_unequal_treatment(instance, m)
            out.append(f"violating-pair: {i} {k}")
    elif prop == "sd-efficient":
        improvement = sd_improvement(instance, m)
        verdict = improvement is None
        if not verdict:
            out.append("dominating-matrix:")
            out.extend(_matrix_lines(improvement, structured))
    elif prop == "ef-decomposable":
        verdict, witness = ef_decomposable(instance, m)
        if verdict:
            out.append("witness:")
            out.extend(_lottery_lines(witness, names, structured))
        else:
            value, _ = minimax_envy(instance, m)
            out.append(f"minimax-envy: {value}")
    else:  # reversal-symmetric
        verdict, weights = reversal_symmetric_implementable(instance, m)
        if verdict:
            for order, weight in weights:
                rendered = " ".join(str(agent) for agent in order)
                out.append(f"order: {rendered} : {weight}")
        else:
            out.append(
                "infeasible: no reversal-symmetric order distribution"
                " reproduces the matrix"
            )
    return verdict


def _check_lottery_property(args, instance, names, out):
    lot = parse_lottery(_read(args.target), names)
    prop = args.property
    if prop == "dec-ef":
        verdict = is_dec_ef(instance, lot)
        value, i, k = envy_matrix(instance, lot).max_entry()
        if verdict:
            out.append(f"max-envy: {value}")
        else:
            out.append(f"envy: {i} {k} {value}")
    else:  # ex-post-efficient
        verdict = is_ex_post_efficient(instance, lot)
        if not verdict:
            sigma, weight = next(
                entry
                for entry in lot
                if not is_pareto_optimal(instance, entry[0])
            )
            objects = " ".join(names[sigma[i]] for i in range(lot.n))
            out.append(f"violating-entry: {weight} : {objects}")
    return verdict


def cmd_check(args) -> int:
    instance, names = _load_instance(args.instance)
    out: list[str] = []
    if args.property in MATRIX_PROPERTIES:
        verdict = _check_matrix_property(args, instance, names, out)
    else:
        verdict = _check_lottery_property(args, instance, names, out)
    lead = str(verdict).lower()
    if args.format == "structured":
        lead = f"verdict: {lead}"
    print("\n".join([lead, *out]))
    return 0 if verdict else 1


def cmd_envy(args) -> int:
    instance, names = _load_instance(args.instance)
    lot = parse_lottery(_read(args.lottery), names)
    e = envy_matrix(instance, lot)
    lines = [" ".join(str(x) for x in row) for row in e.entries]
    if args.format == "structured":
        lines = [f"row: {line}" for line in lines]
    print("\n".join(lines))
    return 0


def _search_lines(report) -> list[str]:
    lines = [
        f"check: {report.check}",
        f"profiles: {report.profiles_examined}",
    ]
    if report.canonical_classes is not None:
        lines.append(f"classes: {report.canonical_classes}")
    lines.append(
        f"failures: {len(report.failures)} / {report.profiles_examined}"
    )
    lines.append(f"wall-time: {report.wall_time:.2f}s")
    for value, count in report.minimax_summary:
        lines.append(f"max-envy {value}: {count}")
    for failure in report.failures:
        profile = " / ".join(
            " ".join(str(o) for o in pref)
            for pref in failure.instance.preferences
        )
        lines.append(
            f"failure: property={failure.property_name}"
            f" certificate={failure.certificate} profile=[{profile}]"
        )
    return lines


def cmd_search(args) -> int:
    if args.sample is None and args.n > 4:
        raise ResourceLimitError(
            "exhaustive sweeps support n <= 4; pass --sample for larger n"
        )
    verify = (
        verify_ps_ef_decomposable
        if args.check == "ps-ef-decomposable"
        else verify_rp_dec_ef
    )
    report = verify(
        args.n,
        canonicalize=args.canonical,
        sample=args.sample,
        seed=args.seed,
        jobs=args.jobs,
    )
    lines = _search_lines(report)
    if args.out_dir:
        from .figures import write_search_outputs

        csv_path, png_path = write_search_outputs(report, args.out_dir)
        lines.append(f"csv: {csv_path}")
        lines.append(f"figure: {png_path}")
    print("\n".join(lines))
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairdec",
        description="Exact random-assignment rules, decompositions, and checks.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def add_format(sub):
        sub.add_argument(
            "--format",
            choices=("text", "structured"),
            default="text",
            help="structured emits stable key/value lines",
        )

    solve = commands.add_parser("solve", help="run an assignment rule")
    solve.add_argument("instance", help="instance file")
    solve.add_argument("--rule", choices=("ps", "rp"), required=True)
    add_format(solve)
    solve.set_defaults(handler=cmd_solve)

    decompose = commands.add_parser(
        "decompose", help="write a matrix as a lottery"
    )
    decompose.add_argument("instance", help="instance file")
    decompose.add_argument("matrix", help="matrix file")
    decompose.add_argument(
        "--method",
        choices=("birkhoff", "three-agent", "two-type", "lp-dec-ef", "uniform"),
        required=True,
    )
    add_format(decompose)
    decompose.set_defaults(handler=cmd_decompose)

    check = commands.add_parser("check", help="decide a fairness property")
    check.add_argument("instance", help="instance file")
    check.add_argument(
        "target", help="matrix or lottery file, depending on the property"
    )
    check.add_argument(
        "--property",
        choices=MATRIX_PROPERTIES + LOTTERY_PROPERTIES,
        required=True,
    )
    add_format(check)
    check.set_defaults(handler=cmd_check)

    envy = commands.add_parser("envy", help="print a lottery's envy matrix")
    envy.add_argument("instance", help="instance file")
    envy.add_argument("lottery", help="lottery file")
    add_format(envy)
    envy.set_defaults(handler=cmd_envy)

    search = commands.add_parser("search", help="sweep a profile space")
    search.add_argument("n", type=int, help="number of agents and objects")
    search.add_argument(
        "--check",
        choices=("ps-ef-decomposable", "rp-dec-ef"),
        required=True,
    )
    search.add_argument("--canonical", action="store_true")
    search.add_argument("--jobs", type=int, default=1)
    search.add_argument("--sample", type=int)
    search.add_argument("--seed", type=int)
    search.add_argument("--out-dir", help="write CSV and figure here")
    add_format(search)
    search.set_defaults(handler=cmd_search)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    except ResourceLimitError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    except PreconditionError as error:
        print(f"precondition failed: {error.name}: {error}", file=sys.stderr)
        return 3
    except OSError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    except ValueError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
