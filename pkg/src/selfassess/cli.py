"""Operator command line.

Exit codes: 0 success, 1 domain or validation failure, 2 environment or I/O
failure. Validation failures print one problem per line on stderr; reports
print as JSON on stdout.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import secrets
import sys
from pathlib import Path

from .analytics import sus_mean, sus_score, t_test_two_sample
from .auth import Role, hash_password
from .bankio import export_bank, import_bank
from .errors import AssessmentError, ParseError, ValidationError
from .profiles import LearnerProfile
from .selection import criteria_from_document
from .simulate import policy_from_document, report_to_json, scores_to_csv, simulate
from .store import DocumentStore
from .types import validate_education_rank

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _print_json(doc) -> None:
    print(json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True))


def _fail(*lines: str) -> int:
    for line in lines:
        print(line, file=sys.stderr)
    return EXIT_DOMAIN


def _load_bank_file(path: str):
    return import_bank(_read_text(path))


def cmd_bank_validate(args) -> int:
    bank = _load_bank_file(args.file)
    print(f"ok: {len(bank.topics)} topics, {len(bank.questions)} questions")
    return EXIT_OK


def cmd_bank_import(args) -> int:
    bank = _load_bank_file(args.file)
    store = DocumentStore(args.data_dir)
    store.save_bank(bank)
    print(f"imported {len(bank.questions)} questions into {store.bank_path}")
    return EXIT_OK


def cmd_bank_export(args) -> int:
    store = DocumentStore(args.data_dir)
    text = export_bank(store.load_bank())
    if args.file == "-":
        sys.stdout.write(text)
    else:
        Path(args.file).write_text(text, encoding="utf-8")
        print(f"exported to {args.file}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import create_app, run_server

    secret = args.secret or os.environ.get("ASSESS_SECRET") or secrets.token_hex(32)
    app = create_app(args.data_dir, secret=secret)
    run_server(app, host=args.host, port=args.port)
    return EXIT_OK


def cmd_user_add(args) -> int:
    role = Role(args.role)
    education = validate_education_rank(args.education)
    store = DocumentStore(args.data_dir)
    users = store.load_users()
    if args.username in users:
        return _fail(f"user {args.username!r} already exists")
    users[args.username] = {"role": role.value, "credentials": hash_password(args.password)}
    store.save_users(users)
    if role is Role.STUDENT and store.load_profile(args.username) is None:
        store.save_profile(LearnerProfile(learner_id=args.username, education_level=education))
    print(f"added {role.value} {args.username!r}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    bank = _load_bank_file(args.bank)
    criteria = criteria_from_document(json.loads(_read_text(args.criteria)))
    policy = policy_from_document(json.loads(_read_text(args.policy)))
    report = simulate(bank, criteria, args.students, policy, seed=args.seed)
    if args.scores_csv:
        Path(args.scores_csv).write_text(scores_to_csv(report), encoding="utf-8")
    sys.stdout.write(report_to_json(report))
    return EXIT_OK


def _read_sus_csv(path: str) -> list[list[int]]:
    responses = []
    problems = []
    with open(path, encoding="utf-8", newline="") as handle:
        for row_number, row in enumerate(csv.reader(handle), start=1):
            cells = [c.strip() for c in row if c.strip()]
            if not cells:
                continue
            try:
                values = [int(c) for c in cells]
            except ValueError:
                problems.append(f"row {row_number}: items must be integers")
                continue
            if len(values) != 10:
                problems.append(f"row {row_number}: expected 10 items, got {len(values)}")
                continue
            responses.append(values)
    if problems:
        raise ValidationError(problems)
    return responses


def cmd_sus(args) -> int:
    responses = _read_sus_csv(args.file)
    scores = [sus_score(r) for r in responses]
    _print_json(
        {
            "respondents": len(responses),
            "scores": scores,
            "mean": sus_mean(responses),
        }
    )
    return EXIT_OK


def _read_sample_csv(path: str) -> list[float]:
    values = []
    problems = []
    with open(path, encoding="utf-8", newline="") as handle:
        for line_number, line in enumerate(handle, start=1):
            cell = line.strip()
            if not cell:
                continue
            try:
                values.append(float(cell))
            except ValueError:
                problems.append(f"{path}:{line_number}: not a number: {cell!r}")
    if problems:
        raise ValidationError(problems)
    return values


def cmd_ttest(args) -> int:
    a = _read_sample_csv(args.a)
    b = _read_sample_csv(args.b)
    result = t_test_two_sample(a, b, variant="welch" if args.welch else "pooled")
    t = result.t_statistic if math.isfinite(result.t_statistic) else str(result.t_statistic)
    _print_json(
        {
            "variant": result.variant,
            "t_statistic": t,
            "degrees_of_freedom": result.degrees_of_freedom,
            "p_value": result.p_value,
            "significant_at_0.05": result.p_value < 0.05,
        }
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="assess", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    bank = sub.add_parser("bank", help="validate, import, or export bank files")
    bank_sub = bank.add_subparsers(dest="bank_command", required=True)

    validate = bank_sub.add_parser("validate", help="check a bank file")
    validate.add_argument("file")
    validate.set_defaults(func=cmd_bank_validate)

    imp = bank_sub.add_parser("import", help="install a bank file into a data directory")
    imp.add_argument("file")
    imp.add_argument("--data-dir", default="data")
    imp.set_defaults(func=cmd_bank_import)

    exp = bank_sub.add_parser("export", help="write the stored bank to a file ('-' = stdout)")
    exp.add_argument("file")
    exp.add_argument("--data-dir", default="data")
    exp.set_defaults(func=cmd_bank_export)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--data-dir", default="data")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--secret", default=None, help="token secret (or ASSESS_SECRET)")
    serve.set_defaults(func=cmd_serve)

    user = sub.add_parser("user", help="manage credentials")
    user_sub = user.add_subparsers(dest="user_command", required=True)
    add = user_sub.add_parser("add")
    add.add_argument("username")
    add.add_argument("--role", choices=[r.value for r in Role if r is not Role.GUEST], required=True)
    add.add_argument("--password", required=True)
    add.add_argument("--education", type=int, default=3, help="education rank 1..5 (students)")
    add.add_argument("--data-dir", default="data")
    add.set_defaults(func=cmd_user_add)

    sim = sub.add_parser("simulate", help="run scripted cohorts through the pipeline")
    sim.add_argument("--bank", required=True)
    sim.add_argument("--criteria", required=True, help="criteria JSON file")
    sim.add_argument("--students", type=int, required=True)
    sim.add_argument("--policy", required=True, help="policy JSON file")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--scores-csv", default=None, help="also write per-student scores as CSV")
    sim.set_defaults(func=cmd_simulate)

    sus = sub.add_parser("sus", help="score a CSV of SUS responses (10 columns per row)")
    sus.add_argument("file")
    sus.set_defaults(func=cmd_sus)

    ttest = sub.add_parser("ttest", help="two-sample t-test over two single-column CSVs")
    ttest.add_argument("a")
    ttest.add_argument("b")
    ttest.add_argument("--welch", action="store_true", help="unequal-variance variant")
    ttest.set_defaults(func=cmd_ttest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        return _fail(str(exc))
    except ValidationError as exc:
        return _fail(*exc.problems)
    except AssessmentError as exc:
        return _fail(str(exc))
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
