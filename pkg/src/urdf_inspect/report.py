"""Result tables and their CSV/JSON emission.

Every table is an ordered header plus ordered rows; emission is
byte-stable, so two runs over the same tree write identical files.
Builders take already-computed analysis results and never touch disk.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO

from .bundles import ContactMarkers, LicenseId, MeshInventory, StructureClass
from .compare import DiscrepancyReport
from .dedup import DuplicateGroup
from .validator import Diagnostic

__all__ = ["ReportTable", "emit", "write_tables"]

Cell = str | int | float | bool | None


@dataclass(frozen=True)
class ReportTable:
    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple[Cell, ...], ...]

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"table '{self.name}': row of length {len(row)} "
                    f"does not match {len(self.columns)} columns")


def _csv_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit(table: ReportTable, format: str, sink: BinaryIO) -> int:
    """Write one table as CSV (RFC 4180) or a JSON array of objects.

    Returns the number of bytes written; identical inputs always
    produce identical bytes.
    """
    if format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\r\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_csv_cell(v) for v in row])
        payload = buffer.getvalue().encode("utf-8")
    elif format == "json":
        objects = [dict(zip(table.columns, row)) for row in table.rows]
        payload = (json.dumps(objects, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    else:
        raise ValueError(f"unknown format {format!r}")
    sink.write(payload)
    return len(payload)


def write_tables(tables: list[ReportTable], format: str, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for table in tables:
        path = out_dir / f"{table.name}.{format}"
        with path.open("wb") as fh:
            emit(table, format, fh)
        written.append(path)
    return written


# --------------------------------------------------------------------------
# Table builders.
# --------------------------------------------------------------------------


def structures_table(rows: list[tuple[str, StructureClass]]) -> ReportTable:
    """Folder-structure counts per source, with a total row."""
    classes = [c.value for c in StructureClass]
    per_source: dict[str, dict[str, int]] = {}
    for source, cls in rows:
        bucket = per_source.setdefault(source, {})
        bucket[cls.value] = bucket.get(cls.value, 0) + 1
    out = []
    total = {c: 0 for c in classes}
    for source in sorted(per_source):
        counts = per_source[source]
        out.append((source, *(counts.get(c, 0) for c in classes)))
        for c in classes:
            total[c] += counts.get(c, 0)
    out.append(("total", *(total[c] for c in classes)))
    return ReportTable("structures", ("source", *classes), tuple(out))


def xacro_table(rows: list[tuple[str, bool, bool]]) -> ReportTable:
    """Cross-tab of the dataset's xacro flag against banner detection.

    Row input: (source, generated by the dataset authors, banner found).
    """
    per_source: dict[str, list[int]] = {}
    for source, by_dataset, banner in rows:
        bucket = per_source.setdefault(source, [0, 0, 0])
        if by_dataset:
            bucket[0] += 1
        elif banner:
            bucket[1] += 1
        else:
            bucket[2] += 1
    out = []
    total = [0, 0, 0]
    for source in sorted(per_source):
        counts = per_source[source]
        out.append((source, *counts))
        total = [t + c for t, c in zip(total, counts)]
    out.append(("total", *total))
    return ReportTable(
        "xacro",
        ("source", "by_us_using_xacro", "by_others_using_xacro", "by_others_without_xacro"),
        tuple(out),
    )


def parsing_errors_table(rows: list[tuple[str, Diagnostic]]) -> ReportTable:
    """One row per diagnostic: {file, severity, code, subject, line, message}."""
    out = tuple(
        (file, d.severity, d.code, d.subject, d.line, d.message)
        for file, d in rows
    )
    return ReportTable("parsing_errors",
                       ("file", "severity", "code", "subject", "line", "message"), out)


def mesh_types_table(rows: list[tuple[str, MeshInventory]]) -> ReportTable:
    """Bundles per (source, usage, extension class); 'any' counts bundles
    with at least one mesh of that usage."""
    extensions = ("stl", "dae", "obj", "other", "any")
    counts: dict[tuple[str, str, str], int] = {}
    for source, inventory in rows:
        for usage, mapping in (("visual", inventory.visual), ("collision", inventory.collision)):
            for ext in mapping:
                counts[(source, usage, ext)] = counts.get((source, usage, ext), 0) + 1
            if mapping:
                counts[(source, usage, "any")] = counts.get((source, usage, "any"), 0) + 1
    sources = sorted({s for s, _, _ in counts} | {s for s, _ in rows})
    out = []
    for usage in ("visual", "collision"):
        for ext in extensions:
            total = 0
            for source in sources:
                n = counts.get((source, usage, ext), 0)
                total += n
                out.append((source, usage, ext, n))
            out.append(("total", usage, ext, total))
    return ReportTable("mesh_types", ("source", "usage", "extension", "bundles"), tuple(out))


def licenses_table(rows: list[tuple[str, LicenseId]]) -> ReportTable:
    ids = [l.value for l in LicenseId]
    per_source: dict[str, dict[str, int]] = {}
    for source, license_id in rows:
        bucket = per_source.setdefault(source, {})
        bucket[license_id.value] = bucket.get(license_id.value, 0) + 1
    out = []
    total = {i: 0 for i in ids}
    for source in sorted(per_source):
        counts = per_source[source]
        out.append((source, *(counts.get(i, 0) for i in ids)))
        for i in ids:
            total[i] += counts.get(i, 0)
    out.append(("total", *(total[i] for i in ids)))
    return ReportTable("licenses", ("source", *ids), tuple(out))


def contact_table(markers: list[ContactMarkers]) -> ReportTable:
    rows = (
        ("author", sum(m.author for m in markers)),
        ("at_sign", sum(m.at_sign for m in markers)),
        ("dot_com", sum(m.dot_com for m in markers)),
    )
    return ReportTable("contact", ("marker", "files"), rows)


def name_stats_table(rows: list[tuple[str, dict[str, int]]],
                     terms: tuple[str, ...] = ("world", "flange")) -> ReportTable:
    per_source: dict[str, dict[str, int]] = {}
    for source, stats in rows:
        bucket = per_source.setdefault(source, {t: 0 for t in terms})
        for term in terms:
            bucket[term] += stats.get(term, 0)
    out = []
    total = {t: 0 for t in terms}
    for source in sorted(per_source):
        counts = per_source[source]
        out.append((source, *(counts[t] for t in terms)))
        for t in terms:
            total[t] += counts[t]
    out.append(("total", *(total[t] for t in terms)))
    return ReportTable("name_stats", ("source", *terms), tuple(out))


def model_stats_table(stats: dict[str, tuple[int, int]]) -> ReportTable:
    rows = tuple(
        (robot_type, links, joints)
        for robot_type, (links, joints) in sorted(stats.items())
    )
    return ReportTable("model_stats", ("robot_type", "avg_links", "avg_joints"), rows)


def duplicates_table(root: Path, groups: list[DuplicateGroup]) -> ReportTable:
    rows = []
    for group_id, group in enumerate(groups):
        for member in group.members:
            rel = member.relative_to(root)
            source = rel.parts[0] if len(rel.parts) > 1 else ""
            rows.append((group_id, source, rel.as_posix(),
                         member.suffix.lstrip(".").lower(), group.size, group.digest))
    return ReportTable("duplicates",
                       ("group_id", "source", "path", "extension", "size", "digest"),
                       tuple(rows))


def duplicates_cross_source_table(root: Path, groups: list[DuplicateGroup]) -> ReportTable:
    """Per source and extension: files in groups spanning >= 2 sources."""
    extensions = ("urdf", "stl", "dae", "obj", "other")
    counts: dict[tuple[str, str], int] = {}
    sources: set[str] = set()
    for group in groups:
        rels = [m.relative_to(root) for m in group.members]
        group_sources = {r.parts[0] for r in rels if len(r.parts) > 1}
        sources |= group_sources
        if len(group_sources) < 2:
            continue
        for rel in rels:
            source = rel.parts[0] if len(rel.parts) > 1 else ""
            ext = rel.suffix.lstrip(".").lower()
            if ext not in extensions:
                ext = "other"
            counts[(source, ext)] = counts.get((source, ext), 0) + 1
    rows = tuple(
        (source, *(counts.get((source, ext), 0) for ext in extensions))
        for source in sorted(sources)
    )
    return ReportTable("duplicates_cross_source", ("source", *extensions), rows)


def discrepancies_table(rows: list[tuple[str, str, str, DiscrepancyReport]]) -> ReportTable:
    """Row input: (robot name, manufacturer, robot type, report)."""
    def fk_cell(report: DiscrepancyReport) -> Cell:
        return "incomparable" if report.diff_fk is None else report.diff_fk

    out = tuple(
        (robot, manufacturer, robot_type, ";".join(report.sources),
         report.diff_joints, report.diff_links, report.diff_cad_types,
         fk_cell(report), report.diff_lines, report.any, report.any_excl_lines)
        for robot, manufacturer, robot_type, report in rows
    )
    return ReportTable(
        "discrepancies",
        ("robot", "manufacturer", "type", "sources", "joints", "links",
         "cad", "fk", "lines", "any", "any_excl_lines"),
        out,
    )


def model_info_table(rows: list[tuple[str, object, MeshInventory]]) -> ReportTable:
    """Row input: (file, RobotModel, inventory); one output row per file."""
    out = []
    for file, model, inventory in rows:
        out.append((
            file,
            model.name,
            len(model.links),
            len(model.joints),
            ";".join(model.link_names()),
            ";".join(model.joint_names()),
            ";".join(sorted(inventory.visual)),
            ";".join(sorted(inventory.collision)),
        ))
    return ReportTable(
        "model_info",
        ("file", "robot", "links", "joints", "link_names", "joint_names",
         "visual_mesh_types", "collision_mesh_types"),
        tuple(out),
    )
