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

from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from typing import Dict, List, Optional, Tuple

from ..utils import SplitMix64

__all__ = (
    "LoopPref",
    "IoPref",
    "Naming",
    "DeclPlacement",
    "BraceHabit",
    "ReturnHabit",
    "ContainerPref",
    "CommentStyle",
    "LayoutHabit",
    "StyleProfile",
    "TooManyAuthors",
    "MIN_PROFILE_DISTANCE",
    "EXTRA_INCLUDES",
    "TYPEDEF_ALIASES",
    "profile_distance",
    "generate_profiles",
)

MIN_PROFILE_DISTANCE = 3
EXTRA_INCLUDES = ("algorithm", "cmath", "cstring", "cstdlib", "iomanip")
TYPEDEF_ALIASES = (
    (("ll", "longlong"),),
    (("lint", "longlong"),),
    (("ll", "longlong"), ("db", "double")),
    (("i64", "longlong"), ("f64", "double")),
)


class LoopPref(str, Enum):
    for_loop = "for"
    while_loop = "while"


class IoPref(str, Enum):
    c_style = "c_style"
    stream_style = "stream_style"


class Naming(str, Enum):
    short = "short"
    descriptive = "descriptive"
    hungarian = "hungarian"


class DeclPlacement(str, Enum):
    at_top = "at_top"
    at_use = "at_use"


class BraceHabit(str, Enum):
    always = "always"
    minimal = "minimal"


class ReturnHabit(str, Enum):
    explicit_zero = "explicit_zero"
    implicit = "implicit"
    variable = "variable"


class ContainerPref(str, Enum):
    array = "array"
    vec = "vec"


class CommentStyle(str, Enum):
    none = "none"
    line = "line"
    block = "block"


@dataclass(frozen=True)
class LayoutHabit:
    indent: str = "    "
    brace_newline: bool = False
    op_spacing: bool = True
    blank_lines: bool = True
    comment_style: CommentStyle = CommentStyle.none

    def to_dict(self) -> Dict[str, object]:
        return {
            "indent": self.indent,
            "brace_newline": self.brace_newline,
            "op_spacing": self.op_spacing,
            "blank_lines": self.blank_lines,
            "comment_style": self.comment_style.value,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "LayoutHabit":
        return cls(
            indent=str(data["indent"]),
            brace_newline=bool(data["brace_newline"]),
            op_spacing=bool(data["op_spacing"]),
            blank_lines=bool(data["blank_lines"]),
            comment_style=CommentStyle(data["comment_style"]),
        )


@dataclass(frozen=True)
class StyleProfile:
    """Coding habits of one synthetic author."""

    loop_pref: LoopPref = LoopPref.for_loop
    io_pref: IoPref = IoPref.stream_style
    naming: Naming = Naming.short
    typedef_habit: bool = False
    typedef_aliases: Tuple[Tuple[str, str], ...] = ()
    decl_placement: DeclPlacement = DeclPlacement.at_use
    brace_habit: BraceHabit = BraceHabit.always
    include_set: Tuple[str, ...] = ()
    return_habit: ReturnHabit = ReturnHabit.explicit_zero
    precision_habit: Optional[int] = None
    container_pref: ContainerPref = ContainerPref.array
    fast_io: bool = False
    layout: LayoutHabit = field(default_factory=LayoutHabit)

    def alias_of(self, base: str) -> str:
        if self.typedef_habit:
            for alias, aliased in self.typedef_aliases:
                if aliased == base:
                    return alias
        return base

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        for key, value in data.items():
            if isinstance(value, Enum):
                data[key] = value.value
        data["typedef_aliases"] = [list(pair) for pair in self.typedef_aliases]
        data["include_set"] = list(self.include_set)
        data["layout"] = self.layout.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "StyleProfile":
        precision = data.get("precision_habit")
        return cls(
            loop_pref=LoopPref(data["loop_pref"]),
            io_pref=IoPref(data["io_pref"]),
            naming=Naming(data["naming"]),
            typedef_habit=bool(data["typedef_habit"]),
            typedef_aliases=tuple((str(alias), str(base)) for alias, base in data["typedef_aliases"]),
            decl_placement=DeclPlacement(data["decl_placement"]),
            brace_habit=BraceHabit(data["brace_habit"]),
            include_set=tuple(data["include_set"]),
            return_habit=ReturnHabit(data["return_habit"]),
            precision_habit=None if precision is None else int(precision),
            container_pref=ContainerPref(data["container_pref"]),
            fast_io=bool(data["fast_io"]),
            layout=LayoutHabit.from_dict(data["layout"]),
        )


class TooManyAuthors(ValueError):
    def __init__(self, requested: int, found: int) -> None:
        self.requested = requested
        self.found = found
        super().__init__(f"Only {found} pairwise distinct profiles found, {requested} requested")


# layout is measured separately, it does not count towards distinctness
_COMPARED = tuple(item.name for item in fields(StyleProfile) if item.name not in ("layout", "typedef_aliases"))


def profile_distance(a: StyleProfile, b: StyleProfile) -> int:
    """Number of habits (layout aside) two profiles disagree on."""
    return sum(getattr(a, name) != getattr(b, name) for name in _COMPARED)


def _draw_profile(rng: SplitMix64) -> StyleProfile:
    typedef_habit = rng.below(2) == 1
    include_count = rng.below(3)
    layout = LayoutHabit(
        indent=rng.choice(("    ", "  ", "\t")),
        brace_newline=rng.below(2) == 1,
        op_spacing=rng.below(3) != 0,
        blank_lines=rng.below(2) == 1,
        comment_style=rng.choice((CommentStyle.line, CommentStyle.block)),
    )
    return StyleProfile(
        loop_pref=rng.choice(list(LoopPref)),
        io_pref=rng.choice(list(IoPref)),
        naming=rng.choice(list(Naming)),
        typedef_habit=typedef_habit,
        typedef_aliases=rng.choice(TYPEDEF_ALIASES) if typedef_habit else (),
        decl_placement=rng.choice(list(DeclPlacement)),
        brace_habit=rng.choice(list(BraceHabit)),
        include_set=tuple(sorted(rng.sample(EXTRA_INCLUDES, include_count))),
        return_habit=rng.choice(list(ReturnHabit)),
        precision_habit=rng.choice((None, 2, 6, 9)),
        container_pref=rng.choice(list(ContainerPref)),
        fast_io=rng.below(2) == 1,
        layout=layout,
    )


def generate_profiles(n_authors: int, seed: int, max_draws: int = 20_000) -> List[StyleProfile]:
    """Draw ``n_authors`` profiles that pairwise differ in enough habits.

    Raises
    ------
    TooManyAuthors
        When ``max_draws`` random profiles do not yield enough distinct ones.
    """
    rng = SplitMix64(seed)
    profiles: List[StyleProfile] = []
    for _ in range(max_draws):
        if len(profiles) == n_authors:
            break
        candidate = _draw_profile(rng)
        if all(profile_distance(candidate, other) >= MIN_PROFILE_DISTANCE for other in profiles):
            profiles.append(candidate)
    if len(profiles) < n_authors:
        raise TooManyAuthors(n_authors, len(profiles))
    return profiles
