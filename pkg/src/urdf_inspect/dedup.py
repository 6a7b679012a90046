"""Identical-file detection after whitespace/line-ending normalization.

Text files are compared with spaces and tabs removed and every line
break rewritten as CRLF; binary files are compared verbatim.  Grouping
runs in three stages (normalized size, MD5 digest, byte-by-byte
confirmation) so the digest never decides membership on its own.
"""

from __future__ import annotations

import hashlib
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

__all__ = [
    "DuplicateGroup",
    "TEXT_EXTENSIONS",
    "is_text_payload",
    "normalize",
    "find_duplicates",
    "worker_count",
]

TEXT_EXTENSIONS = {"urdf", "xacro", "dae", "obj", "mtl", "xml", "json", "txt", "md"}

_LINE_BREAK = re.compile(rb"\r\n|\r|\n")


def worker_count() -> int:
    """Worker cap: URDF_INSPECT_JOBS when set, else logical core count."""
    configured = os.environ.get("URDF_INSPECT_JOBS", "")
    if configured.isdigit() and int(configured) > 0:
        return int(configured)
    return os.cpu_count() or 1


@dataclass(frozen=True)
class DuplicateGroup:
    """Files whose normalized contents are byte-identical."""

    members: tuple[Path, ...]
    size: int  # bytes after normalization
    digest: str  # MD5 of the normalized content


def normalize(content: bytes, is_text: bool) -> bytes:
    """Drop spaces/tabs and force CRLF line endings; binary passes through."""
    if not is_text:
        return content
    stripped = content.translate(None, b" \t")
    return _LINE_BREAK.sub(b"\r\n", stripped)


def is_text_payload(path: Path, head: bytes) -> bool:
    """Decide text vs binary from the extension, sniffing STL content.

    ASCII STL starts with the token "solid" and carries no NUL in its
    first kilobyte; every other .stl is binary.
    """
    ext = path.suffix.lower().lstrip(".")
    if ext in TEXT_EXTENSIONS:
        return True
    if ext == "stl":
        if b"\x00" in head[:1024] or not head.startswith(b"solid"):
            return False
        return len(head) == 5 or head[5:6] in (b" ", b"\t", b"\r", b"\n")
    return False


def _normalized_content(path: Path) -> bytes:
    data = path.read_bytes()
    return normalize(data, is_text_payload(path, data[:1024]))


def _size_and_digest(path: Path) -> tuple[int, str]:
    with path.open("rb") as fh:
        head = fh.read(1024)
        if is_text_payload(path, head):
            content = normalize(head + fh.read(), True)
            return len(content), hashlib.md5(content).hexdigest()
        md5 = hashlib.md5(head)
        size = len(head)
        while chunk := fh.read(1 << 20):
            md5.update(chunk)
            size += len(chunk)
        return size, md5.hexdigest()


def find_duplicates(paths: Iterable[Path | str],
                    errors: list[tuple[Path, OSError]] | None = None) -> list[DuplicateGroup]:
    """Group byte-identical files (after normalization) among ``paths``.

    Unreadable files are skipped and collected into ``errors`` when a
    list is supplied; the run never aborts.  Groups hold at least two
    members and are sorted by (size descending, first path); the result
    does not depend on input order.
    """
    unique: list[Path] = sorted({Path(p) for p in paths}, key=str)

    keyed: dict[tuple[int, str], list[Path]] = {}
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        outcomes = pool.map(_guarded_size_and_digest, unique)
    for path, outcome in zip(unique, outcomes):
        if isinstance(outcome, OSError):
            if errors is not None:
                errors.append((path, outcome))
            continue
        keyed.setdefault(outcome, []).append(path)

    groups: list[DuplicateGroup] = []
    for (size, digest), members in keyed.items():
        if len(members) < 2:
            continue
        for confirmed in _partition_identical(members, errors):
            if len(confirmed) >= 2:
                groups.append(DuplicateGroup(tuple(confirmed), size, digest))
    groups.sort(key=lambda g: (-g.size, str(g.members[0])))
    return groups


def _guarded_size_and_digest(path: Path):
    try:
        return _size_and_digest(path)
    except OSError as exc:
        return exc


def _partition_identical(members: list[Path],
                         errors: list[tuple[Path, OSError]] | None) -> list[list[Path]]:
    """Split a same-size same-digest bucket by actual content equality."""
    contents: dict[Path, bytes] = {}
    pending: list[Path] = []
    for path in members:
        try:
            contents[path] = _normalized_content(path)
            pending.append(path)
        except OSError as exc:
            if errors is not None:
                errors.append((path, exc))
    out: list[list[Path]] = []
    while pending:
        first = pending[0]
        same = [p for p in pending if contents[p] == contents[first]]
        pending = [p for p in pending if contents[p] != contents[first]]
        out.append(same)
    return out
