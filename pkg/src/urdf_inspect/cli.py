"""Command-line front end.

Subcommands:
    validate <file|dir>   per-file diagnostics with the A-F taxonomy
    inspect <file>        model information for one URDF
    scan <root>           every corpus table
    compare <root>        multiply-defined-robot discrepancies
    dupes <root>          duplicate-file groups
    stats <root>          model/name/contact/license tables

Exit codes: 0 success, 1 validation errors found, 2 usage error,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import bundles, compare, dedup, report
from .bundles import BundleRecord
from .model import RobotModel
from .validator import Diagnostic, kinematic_sanity, validate

__all__ = ["run_cli", "main"]

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="urdf-inspect",
        description="URDF parsing, validation and corpus analysis",
    )
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="table output format (default: csv)")
    parser.add_argument("--out", type=Path, default=None, metavar="DIR",
                        help="write one file per table into DIR instead of stdout")
    parser.add_argument("--fk-samples", type=int, default=16, metavar="N",
                        help="joint configurations sampled per FK comparison")
    parser.add_argument("--fk-tol", type=float, default=1e-6, metavar="X",
                        help="FK equality tolerance in meters/radians")
    parser.add_argument("--seed", type=int, default=0, metavar="S",
                        help="seed for FK configuration sampling")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", help="validate URDF files").add_argument("path", type=Path)
    sub.add_parser("inspect", help="show model information").add_argument("path", type=Path)
    for name, help_text in (
        ("scan", "run every corpus analysis"),
        ("compare", "compare multiply defined robots"),
        ("dupes", "find duplicate files"),
        ("stats", "model/name/contact/license statistics"),
    ):
        sub.add_parser(name, help=help_text).add_argument("root", type=Path)
    return parser


def run_cli(argv: list[str]) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "inspect":
            return _cmd_inspect(args)
        if args.command == "scan":
            return _emit_and_exit(args, _corpus_tables(args, _load_corpus(args.root)))
        if args.command == "compare":
            return _emit_and_exit(args, [_discrepancies(args, _load_corpus(args.root))])
        if args.command == "dupes":
            return _emit_and_exit(args, _dupes_tables(_load_corpus(args.root)))
        if args.command == "stats":
            corpus = _load_corpus(args.root)
            return _emit_and_exit(args, [
                report.model_stats_table(_model_stats(corpus)),
                report.name_stats_table(_name_stats(corpus)),
                report.contact_table([bundles.contact_markers(e.text)
                                      for e in corpus.entries if e.text is not None]),
                report.licenses_table([(e.record.source_name,
                                        bundles.detect_license(e.record.root_dir))
                                       for e in corpus.entries]),
            ])
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


# --------------------------------------------------------------------------
# Corpus loading.
# --------------------------------------------------------------------------


@dataclass
class _Entry:
    record: BundleRecord
    text: str | None  # None when the URDF file could not be read
    model: RobotModel | None
    diagnostics: list[Diagnostic]

    @property
    def rel_file(self) -> str:
        return f"{self.record.source_name}/{self.record.id or self.record.urdf_path.as_posix()}"


@dataclass
class _Corpus:
    root: Path
    entries: list[_Entry] = field(default_factory=list)


def _load_corpus(root: Path) -> _Corpus:
    records = bundles.scan_corpus(root)
    corpus = _Corpus(root=root if not (root / "urdf_files").is_dir() else root / "urdf_files")
    for record in records:
        text = None
        model = None
        diags: list[Diagnostic] = []
        urdf = record.urdf_file
        if record.urdf_path != Path() and urdf.is_file():
            raw = urdf.read_bytes()
            text = raw.decode("utf-8", errors="replace")
            result = validate(raw)
            model = result.model
            diags = result.diagnostics
            if model is not None:
                diags = diags + kinematic_sanity(model)
        corpus.entries.append(_Entry(record, text, model, diags))
    return corpus


# --------------------------------------------------------------------------
# Subcommands.
# --------------------------------------------------------------------------


def _cmd_validate(args: argparse.Namespace) -> int:
    path: Path = args.path
    if path.is_dir():
        files = sorted(path.rglob("*.urdf"))
    elif path.is_file():
        files = [path]
    else:
        print(f"error: {path} does not exist", file=sys.stderr)
        return EXIT_IO

    rows: list[tuple[str, Diagnostic]] = []
    failed = False
    for file in files:
        rel = file.relative_to(path).as_posix() if path.is_dir() else file.name
        result = validate(file.read_bytes())
        diags = list(result.diagnostics)
        if result.model is not None:
            diags += kinematic_sanity(result.model)
        if any(d.severity == "error" for d in diags):
            failed = True
        rows.extend((rel, d) for d in diags)
    _emit_tables(args, [report.parsing_errors_table(rows)])
    return EXIT_INVALID if failed else EXIT_OK


def _cmd_inspect(args: argparse.Namespace) -> int:
    path: Path = args.path
    if not path.is_file():
        print(f"error: {path} does not exist", file=sys.stderr)
        return EXIT_IO
    result = validate(path.read_bytes())
    if result.model is None:
        _emit_tables(args, [report.parsing_errors_table(
            [(path.name, d) for d in result.diagnostics])])
        return EXIT_INVALID
    table = report.model_info_table(
        [(path.name, result.model, bundles.mesh_inventory(result.model))])
    _emit_tables(args, [table])
    return EXIT_OK


def _corpus_tables(args: argparse.Namespace, corpus: _Corpus) -> list[report.ReportTable]:
    structure_rows = [(e.record.source_name, bundles.classify_structure(e.record.root_dir))
                      for e in corpus.entries]
    xacro_rows = [(e.record.source_name, e.record.xacro_generated_by_dataset,
                   bundles.detect_xacro_generated(e.text) if e.text is not None else False)
                  for e in corpus.entries]
    diag_rows = [(e.rel_file, d) for e in corpus.entries for d in e.diagnostics]
    mesh_rows = [(e.record.source_name, bundles.mesh_inventory(e.model))
                 for e in corpus.entries if e.model is not None]
    license_rows = [(e.record.source_name, bundles.detect_license(e.record.root_dir))
                    for e in corpus.entries]
    contact_rows = [bundles.contact_markers(e.text)
                    for e in corpus.entries if e.text is not None]
    return [
        report.structures_table(structure_rows),
        report.xacro_table(xacro_rows),
        report.parsing_errors_table(diag_rows),
        report.mesh_types_table(mesh_rows),
        *_dupes_tables(corpus),
        _discrepancies(args, corpus),
        report.licenses_table(license_rows),
        report.contact_table(contact_rows),
        report.name_stats_table(_name_stats(corpus)),
        report.model_stats_table(_model_stats(corpus)),
    ]


def _name_stats(corpus: _Corpus) -> list[tuple[str, dict[str, int]]]:
    return [(e.record.source_name,
             bundles.name_substring_stats(e.model, ["world", "flange"]))
            for e in corpus.entries if e.model is not None]


def _model_stats(corpus: _Corpus) -> dict[str, tuple[int, int]]:
    return bundles.model_stats([(e.record, e.model)
                                for e in corpus.entries if e.model is not None])


def _dupes_tables(corpus: _Corpus) -> list[report.ReportTable]:
    files = sorted({p for p in corpus.root.rglob("*")
                    if p.is_file() and p.name not in ("source-information.json",
                                                      "meta-information.json")})
    io_errors: list = []
    groups = dedup.find_duplicates(files, errors=io_errors)
    for path, exc in io_errors:
        print(f"warning: skipped unreadable {path}: {exc}", file=sys.stderr)
    return [report.duplicates_table(corpus.root, groups),
            report.duplicates_cross_source_table(corpus.root, groups)]


def _discrepancies(args: argparse.Namespace, corpus: _Corpus) -> report.ReportTable:
    by_key = {}
    for entry in corpus.entries:
        by_key.setdefault(compare.robot_key(entry.record), []).append(entry)
    groups = compare.find_multiply_defined([e.record for e in corpus.entries])
    rows = []
    for key, records in groups.items():
        entries = by_key[key]
        triples = [(e.record, e.model, e.text or "") for e in entries]
        rep = compare.compare_group(triples, fk_samples=args.fk_samples,
                                    fk_seed=args.seed, fk_tol=args.fk_tol)
        lead = records[0]
        rows.append((lead.robot_name, lead.manufacturer, lead.robot_type, rep))
    rows.sort(key=lambda r: (r[0], r[1]))
    return report.discrepancies_table(rows)


def _emit_and_exit(args: argparse.Namespace, tables: list[report.ReportTable]) -> int:
    _emit_tables(args, tables)
    return EXIT_OK


def _emit_tables(args: argparse.Namespace, tables: list[report.ReportTable]) -> None:
    if args.out is not None:
        report.write_tables(tables, args.format, args.out)
        return
    for table in tables:
        sys.stdout.write(f"# {table.name}\n")
        sys.stdout.flush()
        report.emit(table, args.format, sys.stdout.buffer)
        sys.stdout.buffer.flush()


if __name__ == "__main__":
    main()
