"""
Synthetic authorship corpus: style profiles, tasks, rendering and the corpus
directory layout.
"""

from .manifest import (
    CorpusFile,
    CorpusIoError,
    CorpusManifest,
    FormatError,
    author_name,
    generate_corpus,
    load_manifest,
    save_manifest,
)
from .profiles import (
    BraceHabit,
    CommentStyle,
    ContainerPref,
    DeclPlacement,
    IoPref,
    LayoutHabit,
    LoopPref,
    Naming,
    ReturnHabit,
    StyleProfile,
    TooManyAuthors,
    generate_profiles,
    profile_distance,
)
from .render import RenderError, render, render_source
from .tasks import GRID_TASKS, TEMPLATE_TASKS, TaskSpec, all_tasks, get_task

__all__ = (
    "CorpusFile",
    "CorpusIoError",
    "CorpusManifest",
    "FormatError",
    "author_name",
    "generate_corpus",
    "load_manifest",
    "save_manifest",
    "BraceHabit",
    "CommentStyle",
    "ContainerPref",
    "DeclPlacement",
    "IoPref",
    "LayoutHabit",
    "LoopPref",
    "Naming",
    "ReturnHabit",
    "StyleProfile",
    "TooManyAuthors",
    "generate_profiles",
    "profile_distance",
    "RenderError",
    "render",
    "render_source",
    "GRID_TASKS",
    "TEMPLATE_TASKS",
    "TaskSpec",
    "all_tasks",
    "get_task",
)
