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

import re
from typing import List, Optional

from ..lang.ast import Call, Literal
from ..lang.interpreter import FORMAT_RE
from ..lang.types import MiniType

__all__ = (
    "LENGTH_OF",
    "format_text",
    "conversions",
    "conversion_for",
    "with_length",
    "scan_conversion",
    "print_conversion",
    "escape_format",
)

# printf/scanf length modifier of each integral type
LENGTH_OF = {"bool": "", "char": "hh", "short": "h", "int": "", "long": "l", "longlong": "ll"}


def format_text(call: Call) -> Optional[str]:
    """Raw text between the quotes of the format literal of ``call``."""
    if not call.args:
        return None
    fmt = call.args[0]
    if isinstance(fmt, Literal) and fmt.category == "string":
        return fmt.text[1:-1]
    return None


def conversions(raw: str) -> List["re.Match[str]"]:
    return [match for match in FORMAT_RE.finditer(raw) if match.group(3) != "%"]


def conversion_for(raw: str, arg_position: int) -> Optional["re.Match[str]"]:
    """Conversion consuming argument ``arg_position`` (1 is the first after the format)."""
    found = conversions(raw)
    if 1 <= arg_position <= len(found):
        return found[arg_position - 1]
    return None


def with_length(raw: str, arg_position: int, length: str) -> str:
    match = conversion_for(raw, arg_position)
    if match is None:
        return raw
    return f"{raw[: match.start()]}%{match.group(1)}{length}{match.group(3)}{raw[match.end():]}"


def scan_conversion(mtype: MiniType) -> Optional[str]:
    if mtype.is_char_array or mtype.name == "string":
        return "%s"
    if mtype.name == "char":
        return " %c"
    if mtype.name == "bool":
        return None
    if mtype.is_integral:
        return f"%{LENGTH_OF[mtype.name]}d"
    if mtype.name == "float":
        return "%f"
    if mtype.name == "double":
        return "%lf"
    return None


def print_conversion(mtype: MiniType, fixed: bool = False, precision: int = 6) -> Optional[str]:
    if mtype.is_char_array or mtype.name == "string":
        return "%s"
    if mtype.name == "char":
        return "%c"
    if mtype.name == "bool":
        return "%d"
    if mtype.is_integral:
        return f"%{LENGTH_OF[mtype.name]}d"
    if mtype.is_floating:
        return f"%.{precision}{'f' if fixed else 'g'}"
    return None


def escape_format(raw: str) -> str:
    return raw.replace("%", "%%")
