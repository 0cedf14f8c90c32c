"""
Dosya formatları (file formats) katmanı
=======================================
All on-disk artifacts go through this module:

* point sets      – ``n d`` header, then n lines of d integers
* chirotopes      – ``n r`` header, then the colex sign string
* catalog sidecar – one ``var kind labels`` line per atom
* DIMACS          – written in the same layout as ``pysat.formula.CNF.to_fp``
* JSON reports

Writes are atomic (temporary file + rename) so that an interrupted CPU-day
job never leaves a half-written artifact under its final name.
"""
from __future__ import annotations

import json
import os
import shutil
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, TextIO

from chirosat.core.exceptions import FileSystemException, FormatException, ValidationException
from chirosat.core.logger import get_logger

logger = get_logger(__name__)


# ---------------------------------------------------------------------------
# Yardımcılar
# ---------------------------------------------------------------------------
@contextmanager
def atomic_write(path: Path, mode: str = "w") -> Iterator[TextIO]:
    """Hedef dosyaya atomik yazım (tmp → rename)."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    except OSError as exc:
        raise FileSystemException(f"cannot write {path}: {exc}", file_path=str(path),
                                  original_exception=exc) from exc
    try:
        with os.fdopen(fd, mode, encoding=None if "b" in mode else "utf-8") as fh:
            yield fh
        os.replace(tmp, path)
    except OSError as exc:
        Path(tmp).unlink(missing_ok=True)
        raise FileSystemException(f"cannot write {path}: {exc}", file_path=str(path),
                                  original_exception=exc) from exc
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def read_text(path) -> str:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise FileSystemException(f"file not found: {path}", file_path=str(path)) from exc
    except OSError as exc:
        raise FileSystemException(f"cannot read {path}: {exc}", file_path=str(path),
                                  original_exception=exc) from exc


def file_size(path) -> Optional[int]:
    try:
        return Path(path).stat().st_size
    except OSError:
        return None


# ---------------------------------------------------------------------------
# Point sets
# ---------------------------------------------------------------------------
def points_from_list(rows: Sequence[Sequence[Any]], source: str = "job"):
    """Point set from an embedded list of integer rows (job files)."""
    from chirosat.geometry import PointSet

    if not rows:
        raise FormatException("point list is empty", source=source)
    pts = []
    for i, row in enumerate(rows, start=1):
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in row):
            raise FormatException(f"point {i} has non-integer coordinates", source=source, line=i)
        pts.append(tuple(row))
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise FormatException("points of mixed dimension", source=source)
    try:
        return PointSet(d, tuple(pts))
    except ValidationException as exc:
        raise FormatException(exc.message, source=source) from exc


def parse_points(text: str, source: Optional[str] = None):
    lines = [(no, ln.split()) for no, ln in enumerate(text.splitlines(), start=1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise FormatException("point file is empty", source=source)
    header_no, header = lines[0]
    try:
        n, d = (int(x) for x in header)
    except ValueError:
        raise FormatException(f"bad header {' '.join(header)!r} (expected 'n d')",
                              source=source, line=header_no) from None
    body = lines[1:]
    if len(body) != n:
        raise FormatException(f"header announces {n} points, found {len(body)}", source=source)
    rows = []
    for no, parts in body:
        if len(parts) != d:
            raise FormatException(f"expected {d} coordinates, got {len(parts)}", source=source, line=no)
        try:
            rows.append([int(x) for x in parts])
        except ValueError:
            raise FormatException("coordinates must be decimal integers", source=source, line=no) from None
    return points_from_list(rows, source=source or "text")


def read_points(path):
    return parse_points(read_text(path), source=str(path))


def format_points(S) -> str:
    lines = [f"{S.n} {S.d}"] + [" ".join(map(str, p)) for p in S.points]
    return "\n".join(lines) + "\n"


def write_points(path, S) -> Path:
    with atomic_write(Path(path)) as fh:
        fh.write(format_points(S))
    return Path(path)


# ---------------------------------------------------------------------------
# Chirotopes
# ---------------------------------------------------------------------------
def read_chirotope(path):
    from chirosat.chirotope import parse

    return parse(read_text(path), source=str(path))


def write_chirotope(path, chi) -> Path:
    from chirosat.chirotope import serialize

    with atomic_write(Path(path)) as fh:
        fh.write(serialize(chi))
    logger.debug("chirotope written → %s", path)
    return Path(path)


# ---------------------------------------------------------------------------
# Catalog sidecar
# ---------------------------------------------------------------------------
def write_catalog(path, catalog) -> Path:
    with atomic_write(Path(path)) as fh:
        fh.write(catalog.dump())
    return Path(path)


def load_catalog(path):
    """Rebuild the catalog named in a sidecar and check that every line agrees."""
    from chirosat.encoder import build_catalog

    lines = read_text(path).splitlines()
    if not lines or not lines[0].startswith("c catalog"):
        raise FormatException("missing 'c catalog' header", source=str(path), line=1)
    try:
        fields = dict(part.split("=") for part in lines[0].split()[2:])
        n, d = int(fields["n"]), int(fields["d"])
    except (KeyError, ValueError):
        raise FormatException(f"bad catalog header {lines[0]!r}", source=str(path), line=1) from None
    catalog = build_catalog(n, d)
    expected = catalog.dump().splitlines()
    if lines != expected:
        bad = next((i for i, (a, b) in enumerate(zip(lines, expected)) if a != b),
                   min(len(lines), len(expected)))
        raise FormatException("catalog sidecar does not match the generator's numbering",
                              source=str(path), line=bad + 1)
    return catalog


# ---------------------------------------------------------------------------
# DIMACS
# ---------------------------------------------------------------------------
def write_dimacs_stream(path: Path, comments: Sequence[str], num_vars: int,
                        clauses: Iterable[Sequence[int]]) -> int:
    """
    DIMACS writer for clause streams.  The body is spooled to a temporary
    file so the header can carry the final clause count.  Returns the count.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with tempfile.TemporaryFile("w+", encoding="utf-8", dir=path.parent) as body:
        for clause in clauses:
            body.write(" ".join(map(str, clause)) + " 0\n")
            count += 1
        body.seek(0)
        with atomic_write(path) as fh:
            for c in comments:
                fh.write(c + "\n")
            fh.write(f"p cnf {num_vars} {count}\n")
            shutil.copyfileobj(body, fh)
    return count


def read_dimacs_header(path) -> Dict[str, Any]:
    """Leading comments and ``p cnf`` counts, without reading the clauses."""
    comments: List[str] = []
    try:
        with Path(path).open(encoding="utf-8") as fh:
            for no, line in enumerate(fh, start=1):
                if line.startswith("c"):
                    comments.append(line.rstrip("\n"))
                    continue
                parts = line.split()
                if len(parts) == 4 and parts[:2] == ["p", "cnf"]:
                    return {"comments": comments, "num_vars": int(parts[2]), "num_clauses": int(parts[3])}
                raise FormatException("missing 'p cnf' header", source=str(path), line=no)
    except FileNotFoundError as exc:
        raise FileSystemException(f"file not found: {path}", file_path=str(path)) from exc
    raise FormatException("missing 'p cnf' header", source=str(path))


def read_dimacs_spec(path):
    """ProblemSpec recorded in a ``c spec {...}`` comment, if any."""
    from chirosat.models.schemas import ProblemSpec

    for c in read_dimacs_header(path)["comments"]:
        if c.startswith("c spec "):
            try:
                return ProblemSpec.from_dict(json.loads(c[len("c spec "):]))
            except json.JSONDecodeError as exc:
                raise FormatException(f"bad spec comment: {exc}", source=str(path)) from exc
    return None


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------
def write_json(path, data: Dict[str, Any]) -> Path:
    with atomic_write(Path(path)) as fh:
        json.dump(data, fh, ensure_ascii=False, indent=2, default=str)
        fh.write("\n")
    return Path(path)


def read_json(path) -> Any:
    text = read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatException(f"invalid JSON: {exc.msg}", source=str(path), line=exc.lineno) from exc
