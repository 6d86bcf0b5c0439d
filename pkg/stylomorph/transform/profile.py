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

from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Tuple

from ..lang.ast import FuncDecl, GlobalDecl, Include, Param, Program, Typedef, VarDecl, VarRef, walk
from ..lang.printer import pretty_print, print_type
from ..lang.program import SourceProgram
from ..utils import read_json, write_json

__all__ = (
    "DEFAULT_IDENTIFIERS",
    "DEFAULT_INCLUDES",
    "DEFAULT_TYPEDEFS",
    "DEFAULT_GLOBAL_DECLS",
    "TemplateProfile",
    "extract_template",
    "default_profile",
)

DEFAULT_IDENTIFIERS = ("i", "j", "k", "n", "m", "t", "T", "x", "y", "ans", "res", "cnt")
DEFAULT_INCLUDES = ("iostream", "cstdio", "vector", "string", "algorithm", "cmath", "cstring", "iomanip")
DEFAULT_TYPEDEFS = (("ll", "longlong"),)
DEFAULT_GLOBAL_DECLS = ("int T;", "int n;", "int m;", "longlong ans;")


@dataclass
class TemplateProfile:
    """Recurring habits of a target author, gathered from their template files."""

    identifiers: List[str] = field(default_factory=list)
    includes: List[str] = field(default_factory=list)
    typedefs: List[Tuple[str, str]] = field(default_factory=list)
    global_decls: List[str] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not (self.identifiers or self.includes or self.typedefs or self.global_decls)

    def to_dict(self) -> Dict[str, list]:
        return {
            "identifiers": list(self.identifiers),
            "includes": list(self.includes),
            "typedefs": [list(pair) for pair in self.typedefs],
            "global_decls": list(self.global_decls),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, list]) -> "TemplateProfile":
        return cls(
            identifiers=list(data.get("identifiers", [])),
            includes=list(data.get("includes", [])),
            typedefs=[(alias, base) for alias, base in data.get("typedefs", [])],
            global_decls=list(data.get("global_decls", [])),
        )

    def save(self, path: Path) -> None:
        write_json(path, self.to_dict())

    @classmethod
    def load(cls, path: Path) -> "TemplateProfile":
        return cls.from_dict(read_json(path))


def _decl_text(decl: GlobalDecl) -> str:
    return pretty_print(Program([replace(decl, comments=[])])).strip()


def extract_template(files: List[SourceProgram]) -> TemplateProfile:
    """Collect identifiers (ranked by frequency), includes, typedefs and global declarations."""
    names: Counter = Counter()
    includes: Counter = Counter()
    typedefs: List[Tuple[str, str]] = []
    global_decls: List[str] = []
    for source in files:
        for node in walk(source.ast):
            if isinstance(node, (VarDecl, Param, VarRef)):
                names[node.name] += 1
            elif isinstance(node, FuncDecl) and node.name != "main":
                names[node.name] += 1
        for item in source.ast.items:
            if isinstance(item, Include):
                includes[item.header] += 1
            elif isinstance(item, Typedef):
                pair = (item.alias, print_type(item.base))
                if pair not in typedefs:
                    typedefs.append(pair)
            elif isinstance(item, GlobalDecl):
                text = _decl_text(item)
                if text not in global_decls:
                    global_decls.append(text)
    return TemplateProfile(
        identifiers=[name for name, _ in sorted(names.items(), key=lambda pair: (-pair[1], pair[0]))],
        includes=[name for name, _ in sorted(includes.items(), key=lambda pair: (-pair[1], pair[0]))],
        typedefs=typedefs,
        global_decls=global_decls,
    )


def default_profile() -> TemplateProfile:
    """General style patterns used when no template is given."""
    return TemplateProfile(
        identifiers=list(DEFAULT_IDENTIFIERS),
        includes=list(DEFAULT_INCLUDES),
        typedefs=list(DEFAULT_TYPEDEFS),
        global_decls=list(DEFAULT_GLOBAL_DECLS),
    )
