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

from pathlib import Path
from typing import List, Optional, Tuple

from . import term
from .constants import SOURCE_SUFFIX
from .corpus import CorpusFile, CorpusIoError, CorpusManifest, FormatError, TaskSpec, get_task
from .lang.program import SourceProgram, parse
from .transform import TemplateProfile, extract_template

__all__ = (
    "read_source",
    "read_program",
    "source_files",
    "load_template",
    "locate_corpus_file",
    "task_of",
)

console = term.get_console()


def read_source(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusIoError(path, str(exc))


def read_program(path: Path, author: Optional[str] = None, task: Optional[str] = None) -> SourceProgram:
    return parse(read_source(path), author, task)


def source_files(directory: Path) -> List[Path]:
    return sorted(path for path in directory.rglob(f"*{SOURCE_SUFFIX}") if path.is_file())


def load_template(directory: Path) -> TemplateProfile:
    """Template profile harvested from every source file under ``directory``.

    Raises
    ------
    FormatError
        When the directory holds no source file.
    """
    files = source_files(directory)
    if not files:
        raise FormatError(f"no {SOURCE_SUFFIX} file under {directory}")
    console.log(f"Building template profile from {len(files)} file(s)")
    return extract_template([read_program(path) for path in files])


def locate_corpus_file(manifest: CorpusManifest, root: Path, path: Path) -> Tuple[CorpusFile, SourceProgram]:
    """The manifest entry of ``path``, given absolute or relative to the corpus root."""
    target = path if path.is_absolute() else (root / path)
    target = target.resolve()
    for item in manifest.files + manifest.templates:
        if (root / item.path).resolve() == target:
            return item, manifest.program(item)
    raise FormatError(f"{path} is not listed in the corpus manifest")


def task_of(manifest: CorpusManifest, task_id: str) -> TaskSpec:
    """Grid task as loaded with the corpus, or one of the template tasks."""
    try:
        return manifest.task(task_id)
    except KeyError:
        return get_task(task_id)
