"""Cross-source comparison of robots that more than one source defines.

Robots are grouped by a normalized (manufacturer, robot name) key taken
from the dataset metadata.  Each group is compared pairwise across
sources on joint count, link count, mesh extension sets, sampled
forward kinematics, and raw line count.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .bundles import BundleRecord, mesh_inventory
from .kinematics import Incomparable, TreeError, UnsupportedJoint, build_tree, fk_equivalent
from .model import RobotModel, line_count

__all__ = ["DiscrepancyReport", "robot_key", "find_multiply_defined", "compare_group"]

RobotKey = tuple[str, str]


def _norm(text: str) -> str:
    return re.sub(r"[^a-z0-9]", "", text.lower())


def robot_key(record: BundleRecord) -> RobotKey:
    """Grouping key: normalized (manufacturer, robot name) from metadata."""
    return (_norm(record.manufacturer), _norm(record.robot_name))


def find_multiply_defined(records: list[BundleRecord]) -> dict[RobotKey, list[BundleRecord]]:
    """Robots whose bundles come from at least two distinct sources.

    Same-source entries (URDF variants) stay listed in the group but
    are never paired with each other during comparison.
    """
    groups: dict[RobotKey, list[BundleRecord]] = {}
    for record in records:
        if not record.robot_name:
            continue
        groups.setdefault(robot_key(record), []).append(record)
    multiply = {
        key: sorted(members, key=lambda r: (r.source_name, r.id, str(r.urdf_path)))
        for key, members in groups.items()
        if len({r.source_name for r in members}) >= 2
    }
    return dict(sorted(multiply.items()))


@dataclass(frozen=True)
class DiscrepancyReport:
    """Feature differences across one multiply defined robot.

    diff_fk is None when at least one cross-source pair could not be
    compared (structural mismatch or an unparseable member) and no
    comparable pair showed a difference.
    """

    robot_key: RobotKey
    sources: tuple[str, ...]
    diff_joints: bool
    diff_links: bool
    diff_cad_types: bool
    diff_fk: bool | None
    diff_lines: bool
    incomparable_members: tuple[str, ...] = ()

    @property
    def any(self) -> bool:
        return (self.diff_joints or self.diff_links or self.diff_cad_types
                or self.diff_fk is True or self.diff_lines)

    @property
    def any_excl_lines(self) -> bool:
        return (self.diff_joints or self.diff_links or self.diff_cad_types
                or self.diff_fk is True)


def compare_group(bundles: list[tuple[BundleRecord, RobotModel | None, str]],
                  fk_samples: int = 16, fk_seed: int = 0,
                  fk_tol: float = 1e-6) -> DiscrepancyReport:
    """Pairwise feature comparison over one robot's bundles.

    Pairs are formed across distinct sources only; a flag is true iff
    any pair differs in that feature.  Members whose model could not be
    parsed contribute to the line comparison only and make the FK
    verdict incomparable.
    """
    order = sorted(range(len(bundles)), key=lambda i: (bundles[i][0].source_name,
                                                       bundles[i][0].id,
                                                       str(bundles[i][0].urdf_path)))
    bundles = [bundles[i] for i in order]
    records = [b[0] for b in bundles]
    models = [b[1] for b in bundles]
    lines = [line_count(b[2]) for b in bundles]

    trees = []
    for model in models:
        if model is None:
            trees.append(None)
            continue
        try:
            trees.append(build_tree(model))
        except TreeError:
            trees.append(None)
    cad_sets: list[tuple[frozenset, frozenset] | None] = []
    for model in models:
        if model is None:
            cad_sets.append(None)
        else:
            inv = mesh_inventory(model)
            cad_sets.append((frozenset(inv.visual), frozenset(inv.collision)))

    diff_joints = diff_links = diff_cad = diff_lines = False
    fk_verdicts: list[bool | None] = []
    for i in range(len(bundles)):
        for j in range(i + 1, len(bundles)):
            if records[i].source_name == records[j].source_name:
                continue
            if lines[i] != lines[j]:
                diff_lines = True
            ma, mb = models[i], models[j]
            if ma is None or mb is None:
                fk_verdicts.append(None)
                continue
            if len(ma.joints) != len(mb.joints):
                diff_joints = True
            if len(ma.links) != len(mb.links):
                diff_links = True
            if cad_sets[i] != cad_sets[j]:
                diff_cad = True
            ta, tb = trees[i], trees[j]
            if ta is None or tb is None:
                fk_verdicts.append(None)
                continue
            try:
                outcome = fk_equivalent(ta, ma, tb, mb,
                                        samples=fk_samples, seed=fk_seed, tol=fk_tol)
                fk_verdicts.append(not outcome.equal)
            except (Incomparable, UnsupportedJoint):
                fk_verdicts.append(None)

    if True in fk_verdicts:
        diff_fk: bool | None = True
    elif None in fk_verdicts:
        diff_fk = None
    else:
        diff_fk = False

    unparsed = tuple(f"{r.source_name}:{r.id or r.urdf_path}"
                     for r, m in zip(records, models) if m is None)
    return DiscrepancyReport(
        robot_key=robot_key(records[0]),
        sources=tuple(sorted({r.source_name for r in records})),
        diff_joints=diff_joints,
        diff_links=diff_links,
        diff_cad_types=diff_cad,
        diff_fk=diff_fk,
        diff_lines=diff_lines,
        incomparable_members=unparsed,
    )
