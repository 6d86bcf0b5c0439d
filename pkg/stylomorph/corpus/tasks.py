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

# The programming tasks every synthetic author solves.
#
# Each task pairs a reference solution, a pure function from the input text to
# the expected output text, with one fixed test input.

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Callable, Dict, List, Tuple

__all__ = (
    "TaskSpec",
    "GRID_TASKS",
    "TEMPLATE_TASKS",
    "get_task",
    "all_tasks",
)


@dataclass(frozen=True)
class TaskSpec:
    id: str
    description: str
    reference: Callable[[str], str]
    test_input: str
    float_digits: int = 0

    @cached_property
    def expected_output(self) -> str:
        return self.reference(self.test_input)


def _numbers(text: str) -> List[int]:
    return [int(token) for token in text.split()]


def _sum_pairs(text: str) -> str:
    values = _numbers(text)
    count, rest = values[0], values[1:]
    return "".join(f"{rest[2 * idx] + rest[2 * idx + 1]}\n" for idx in range(count))


def _max_subarray(text: str) -> str:
    values = _numbers(text)
    items = values[1 : 1 + values[0]]
    best = items[0]
    current = 0
    for item in items:
        current = max(current + item, item)
        best = max(best, current)
    return f"{best}\n"


def _string_reverse(text: str) -> str:
    tokens = text.split()
    return "".join(f"{word[::-1]}\n" for word in tokens[1 : 1 + int(tokens[0])])


def _gcd_pairs(text: str) -> str:
    values = _numbers(text)
    items = values[1 : 1 + values[0]]
    return "".join(f"{gcd(left, right)}\n" for left, right in zip(items, items[1:]))


def _sorting(text: str) -> str:
    values = _numbers(text)
    return " ".join(str(item) for item in sorted(values[1 : 1 + values[0]])) + "\n"


def _digit_sum(value: int) -> int:
    return sum(int(digit) for digit in str(value))


def _even_digit_sums(text: str) -> str:
    values = _numbers(text)
    queries = values[1 : 1 + values[0]]
    return "".join(f"{sum(1 for item in range(1, query + 1) if _digit_sum(item) % 2 == 0)}\n" for query in queries)


def _matrix_trace(text: str) -> str:
    values = _numbers(text)
    size = values[0]
    cells = values[1 : 1 + size * size]
    trace = sum(cells[idx * size + idx] for idx in range(size))
    return f"{trace} {trace / size:.2f}\n"


def _run_length(text: str) -> str:
    tokens = text.split()
    lines = []
    for word in tokens[1 : 1 + int(tokens[0])]:
        encoded = []
        idx = 0
        while idx < len(word):
            end = idx
            while end < len(word) and word[end] == word[idx]:
                end += 1
            encoded.append(f"{word[idx]}{end - idx}")
            idx = end
        lines.append("".join(encoded) + "\n")
    return "".join(lines)


def _max_value(text: str) -> str:
    values = _numbers(text)
    return f"{max(values[1 : 1 + values[0]])}\n"


def _count_even(text: str) -> str:
    values = _numbers(text)
    return f"{sum(1 for item in values[1 : 1 + values[0]] if item % 2 == 0)}\n"


_GRID: Tuple[TaskSpec, ...] = (
    TaskSpec(
        "sum_pairs",
        "Print the sum of every pair of 64-bit integers.",
        _sum_pairs,
        "4\n1 2\n1000000000000 7\n-5 5\n123456789 987654321\n",
    ),
    TaskSpec(
        "max_subarray",
        "Print the largest sum of a non-empty contiguous run.",
        _max_subarray,
        "9\n-2 1 -3 4 -1 2 1 -5 4\n",
    ),
    TaskSpec(
        "string_reverse",
        "Print every word reversed.",
        _string_reverse,
        "3\nhello\nstylometry\nabc\n",
    ),
    TaskSpec(
        "gcd_pairs",
        "Print the greatest common divisor of every two neighbouring numbers.",
        _gcd_pairs,
        "6\n12 18 27 81 7 49\n",
    ),
    TaskSpec(
        "sorting",
        "Print the numbers in ascending order on one line.",
        _sorting,
        "8\n5 -1 3 3 0 12 7 -8\n",
    ),
    TaskSpec(
        "even_digit_sums",
        "For every query n, count the numbers in 1..n whose digit sum is even.",
        _even_digit_sums,
        "3\n10\n57\n200\n",
    ),
    TaskSpec(
        "matrix_trace",
        "Print the trace of a square matrix and the mean of its diagonal.",
        _matrix_trace,
        "3\n1 2 3\n4 5 6\n7 8 10\n",
        float_digits=2,
    ),
    TaskSpec(
        "run_length",
        "Print the run-length encoding of every word.",
        _run_length,
        "3\naaabcc\nz\nmississippi\n",
    ),
)

_TEMPLATE: Tuple[TaskSpec, ...] = (
    TaskSpec("t1", "Print the largest number.", _max_value, "5\n3 9 -2 9 4\n"),
    TaskSpec("t2", "Print how many numbers are even.", _count_even, "6\n1 2 3 4 10 -6\n"),
)

GRID_TASKS: Tuple[str, ...] = tuple(task.id for task in _GRID)
TEMPLATE_TASKS: Tuple[str, ...] = tuple(task.id for task in _TEMPLATE)
_BY_ID: Dict[str, TaskSpec] = {task.id: task for task in _GRID + _TEMPLATE}


def get_task(task_id: str) -> TaskSpec:
    try:
        return _BY_ID[task_id]
    except KeyError:
        raise KeyError(f"Unknown task `{task_id}`")


def all_tasks() -> List[TaskSpec]:
    return list(_GRID)
