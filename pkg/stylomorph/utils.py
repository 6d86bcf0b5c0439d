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

import json
from pathlib import Path
from typing import Any, List, MutableSequence, Sequence, TypeVar, Union

__all__ = (
    "MASK64",
    "SplitMix64",
    "derive_seed",
    "pick_index",
    "read_json",
    "write_json",
)

T = TypeVar("T")
MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def _mix64(value: int) -> int:
    value = ((value ^ (value >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    value = ((value ^ (value >> 27)) * 0x94D049BB133111EB) & MASK64
    return value ^ (value >> 31)


class SplitMix64:
    """64-bit mix-and-multiply generator (SplitMix64).

    Every seeded decision of the toolkit goes through this generator so that
    a recorded seed replays identically on any platform.
    """

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN_GAMMA) & MASK64
        return _mix64(self.state)

    def below(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def random(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def choice(self, items: Sequence[T]) -> T:
        return items[self.below(len(items))]

    def shuffle(self, items: MutableSequence[T]) -> None:
        for idx in range(len(items) - 1, 0, -1):
            swap = self.below(idx + 1)
            items[idx], items[swap] = items[swap], items[idx]

    def sample(self, items: Sequence[T], count: int) -> List[T]:
        pool = list(items)
        self.shuffle(pool)
        return pool[:count]


def derive_seed(*parts: Union[int, str]) -> int:
    """Fold ``parts`` into a single 64-bit seed."""
    state = 0
    for part in parts:
        if isinstance(part, str):
            for byte in part.encode("utf-8"):
                state = _mix64((state ^ byte) + _GOLDEN_GAMMA)
        else:
            state = _mix64((state ^ (part & MASK64)) + _GOLDEN_GAMMA)
    return state


def pick_index(seed: int, count: int) -> int:
    """Deterministic index in ``[0, count)`` for ``seed``."""
    return SplitMix64(seed).below(count)


def read_json(path: Path) -> Any:
    with path.open("r", encoding="utf-8") as fp:
        return json.load(fp)


def write_json(path: Path, data: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fp:
        json.dump(data, fp, indent=4, ensure_ascii=False)
