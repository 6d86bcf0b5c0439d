"""
MIT License

Copyright (c) 2024-present stylomorph contributors

Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all
copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""

# Corpus generation and the on-disk corpus layout.
#
# A corpus directory holds ``corpus/<author>/<task>.mc`` for the full author by
# task grid, ``tasks/<task>.in`` and ``tasks/<task>.out`` with the test input and
# expected output of every task, ``templates/<author>/{t1,t2}.mc`` with two extra
# files per author, and ``manifest.json`` tying everything together.

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from ..attribution import AuthorLabel
from ..lang.errors import LangError
from ..lang.program import SourceProgram, parse
from ..term import get_console
from ..transform.profile import TemplateProfile, extract_template
from ..utils import derive_seed, read_json, write_json
from .profiles import StyleProfile, generate_profiles
from .render import render
from .tasks import TEMPLATE_TASKS, TaskSpec, all_tasks, get_task

__all__ = (
    "MANIFEST_VERSION",
    "CorpusIoError",
    "FormatError",
    "CorpusFile",
    "CorpusManifest",
    "author_name",
    "generate_corpus",
    "save_manifest",
    "load_manifest",
)

console = get_console()
MANIFEST_VERSION = 1


class CorpusIoError(OSError):
    def __init__(self, path: Path, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"Cannot access {path}: {reason}")


class FormatError(ValueError):
    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Malformed corpus: {reason}")


@dataclass
class CorpusFile:
    author: str
    task: str
    path: str
    source: str = field(default="", repr=False)


def author_name(index: int) -> str:
    return f"author{index:02d}"


@dataclass
class CorpusManifest:
    authors: List[Tuple[AuthorLabel, StyleProfile]]
    tasks: List[TaskSpec]
    files: List[CorpusFile]
    templates: List[CorpusFile] = field(default_factory=list)
    seed: int = 0
    foreign: List[str] = field(default_factory=list)

    @property
    def labels(self) -> List[AuthorLabel]:
        return [label for label, _ in self.authors]

    def label(self, name: str) -> AuthorLabel:
        for label, _ in self.authors:
            if label.name == name:
                return label
        raise KeyError(f"Unknown author `{name}`")

    def task(self, task_id: str) -> TaskSpec:
        for task in self.tasks:
            if task.id == task_id:
                return task
        raise KeyError(f"Unknown task `{task_id}`")

    def inputs(self, task_id: str) -> List[str]:
        return [self.task(task_id).test_input]

    def file(self, author: str, task: str) -> CorpusFile:
        for item in self.files:
            if item.author == author and item.task == task:
                return item
        raise KeyError(f"No file for author `{author}` and task `{task}`")

    def program(self, item: CorpusFile) -> SourceProgram:
        try:
            return parse(item.source, item.author, item.task)
        except LangError as exc:
            raise FormatError(f"{item.path} does not parse: {exc}")

    def dataset(self, tasks: Optional[Sequence[str]] = None) -> List[Tuple[SourceProgram, AuthorLabel]]:
        """Every grid file as a labelled program, optionally limited to ``tasks``."""
        return [
            (self.program(item), self.label(item.author))
            for item in self.files
            if tasks is None or item.task in tasks
        ]

    def template_profile(self, author: str) -> TemplateProfile:
        programs = [self.program(item) for item in self.templates if item.author == author]
        return extract_template(programs)

    def subset(self, n_authors: int) -> "CorpusManifest":
        """The first ``n_authors`` authors with their files, relabelled densely."""
        kept = self.authors[:n_authors]
        names = {label.name for label, _ in kept}
        return CorpusManifest(
            authors=[(AuthorLabel(idx, label.name), profile) for idx, (label, profile) in enumerate(kept)],
            tasks=list(self.tasks),
            files=[item for item in self.files if item.author in names],
            templates=[item for item in self.templates if item.author in names],
            seed=self.seed,
        )

    def to_dict(self) -> dict:
        return {
            "version": MANIFEST_VERSION,
            "seed": self.seed,
            "authors": [
                {"id": label.id, "name": label.name, "profile": profile.to_dict()} for label, profile in self.authors
            ],
            "tasks": [task.id for task in self.tasks],
            "files": [{"author": item.author, "task": item.task, "path": item.path} for item in self.files],
            "templates": [{"author": item.author, "task": item.task, "path": item.path} for item in self.templates],
        }


def generate_corpus(n_authors: int, tasks: Optional[Sequence[TaskSpec]] = None, seed: int = 1337) -> CorpusManifest:
    """Render the full author by task grid plus two template files per author.

    Raises
    ------
    ValueError
        With fewer than two authors.
    TooManyAuthors
        When not enough distinct style profiles can be drawn.
    RenderError
        When a rendered file fails its task.
    """
    if n_authors < 2:
        raise ValueError("A corpus needs at least two authors")
    tasks = list(tasks) if tasks is not None else all_tasks()
    profiles = generate_profiles(n_authors, seed)
    authors = [(AuthorLabel(idx, author_name(idx)), profile) for idx, profile in enumerate(profiles)]
    files: List[CorpusFile] = []
    templates: List[CorpusFile] = []
    for label, profile in authors:
        console.status(f"Rendering files of {label.name} ({label.id + 1}/{n_authors})...")
        for task in tasks:
            program = render(task, profile, derive_seed(seed, label.name), label.name)
            files.append(CorpusFile(label.name, task.id, f"corpus/{label.name}/{task.id}.mc", program.source_text))
        for task_id in TEMPLATE_TASKS:
            program = render(get_task(task_id), profile, derive_seed(seed, label.name), label.name)
            templates.append(
                CorpusFile(label.name, task_id, f"templates/{label.name}/{task_id}.mc", program.source_text)
            )
    console.stop_status(f"Rendered {len(files)} corpus files and {len(templates)} templates")
    return CorpusManifest(authors, tasks, files, templates, seed)


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CorpusIoError(path, str(exc))


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise
    except OSError as exc:
        raise CorpusIoError(path, str(exc))


def save_manifest(manifest: CorpusManifest, root: Path) -> None:
    for item in manifest.files + manifest.templates:
        _write_text(root / item.path, item.source)
    for task in manifest.tasks:
        _write_text(root / "tasks" / f"{task.id}.in", task.test_input)
        _write_text(root / "tasks" / f"{task.id}.out", task.expected_output)
    try:
        write_json(root / "manifest.json", manifest.to_dict())
    except OSError as exc:
        raise CorpusIoError(root / "manifest.json", str(exc))


def _load_files(root: Path, records: list, section: str) -> List[CorpusFile]:
    files = []
    for record in records:
        try:
            item = CorpusFile(str(record["author"]), str(record["task"]), str(record["path"]))
        except (KeyError, TypeError):
            raise FormatError(f"`{section}` entry without author, task and path")
        try:
            item.source = _read_text(root / item.path)
        except FileNotFoundError:
            raise FormatError(f"missing file {item.path} for author `{item.author}` and task `{item.task}`")
        files.append(item)
    return files


def load_manifest(root: Path) -> CorpusManifest:
    """Read a corpus directory written by :func:`save_manifest`.

    Files under ``corpus/`` and ``templates/`` that the manifest does not list
    are ignored and reported in :attr:`CorpusManifest.foreign`.

    Raises
    ------
    CorpusIoError
        When the manifest cannot be read.
    FormatError
        When the manifest is malformed or the author by task grid has a gap.
    """
    manifest_path = root / "manifest.json"
    try:
        data = read_json(manifest_path)
    except FileNotFoundError:
        raise CorpusIoError(manifest_path, "no manifest")
    except OSError as exc:
        raise CorpusIoError(manifest_path, str(exc))
    except ValueError as exc:
        raise FormatError(f"manifest.json is not JSON: {exc}")
    if not isinstance(data, dict) or data.get("version") != MANIFEST_VERSION:
        raise FormatError(f"unsupported manifest version {data.get('version') if isinstance(data, dict) else None}")

    try:
        authors = [
            (AuthorLabel(int(entry["id"]), str(entry["name"])), StyleProfile.from_dict(entry["profile"]))
            for entry in data["authors"]
        ]
        task_ids = [str(task_id) for task_id in data["tasks"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad author or task entry: {exc}")
    if sorted(label.id for label, _ in authors) != list(range(len(authors))):
        raise FormatError("author ids are not dense")

    tasks: List[TaskSpec] = []
    for task_id in task_ids:
        try:
            known = get_task(task_id)
        except KeyError:
            raise FormatError(f"unknown task `{task_id}`")
        input_path = root / "tasks" / f"{task_id}.in"
        try:
            test_input = _read_text(input_path)
        except FileNotFoundError:
            raise FormatError(f"missing test input {input_path.relative_to(root)}")
        tasks.append(TaskSpec(known.id, known.description, known.reference, test_input, known.float_digits))

    files = _load_files(root, data.get("files", []), "files")
    templates = _load_files(root, data.get("templates", []), "templates")

    grid: Dict[Tuple[str, str], int] = {}
    for item in files:
        grid[(item.author, item.task)] = grid.get((item.author, item.task), 0) + 1
    for label, _ in authors:
        for task_id in task_ids:
            count = grid.get((label.name, task_id), 0)
            if count != 1:
                what = "no file" if count == 0 else f"{count} files"
                raise FormatError(f"{what} for author `{label.name}` and task `{task_id}`")

    listed = {item.path for item in files + templates}
    foreign = sorted(
        path.relative_to(root).as_posix()
        for folder in ("corpus", "templates")
        if (root / folder).is_dir()
        for path in (root / folder).rglob("*")
        if path.is_file() and path.relative_to(root).as_posix() not in listed
    )
    if foreign:
        console.warning(f"Ignoring {len(foreign)} file(s) not listed in the manifest: {', '.join(foreign)}")
    return CorpusManifest(authors, tasks, files, templates, int(data.get("seed", 0)), foreign)
