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

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

from ..lang.interpreter import DEFAULT_FUEL, semantically_equivalent
from ..lang.program import SourceProgram
from ..term import get_console
from .base import TransformError, get_transformer
from .profile import TemplateProfile

__all__ = (
    "Step",
    "TransformationSequence",
    "SequenceRun",
    "run_sequence",
    "apply_sequence",
    "verify",
)

console = get_console()
Step = Tuple[str, int]


@dataclass
class TransformationSequence:
    """Transformers applied left to right, each with the seed picking its site."""

    steps: List[Step] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def then(self, transformer_id: str, site_seed: int) -> "TransformationSequence":
        return TransformationSequence(self.steps + [(transformer_id, site_seed)])

    def ids(self) -> List[str]:
        return [transformer_id for transformer_id, _ in self.steps]

    def to_list(self) -> List[List[object]]:
        return [[transformer_id, site_seed] for transformer_id, site_seed in self.steps]

    @classmethod
    def from_list(cls, data: Iterable[Iterable[object]]) -> "TransformationSequence":
        return cls([(str(transformer_id), int(site_seed)) for transformer_id, site_seed in data])


@dataclass
class SequenceRun:
    program: SourceProgram
    executed: TransformationSequence
    skipped: List[Step] = field(default_factory=list)


def run_sequence(
    sequence: TransformationSequence,
    program: SourceProgram,
    template: Optional[TemplateProfile] = None,
    defaults: bool = True,
) -> SequenceRun:
    """Fold :meth:`Transformer.apply` over ``sequence``.

    Steps that no longer apply are skipped and reported in :attr:`SequenceRun.skipped`.
    An unknown transformer id is a caller error and propagates.
    """
    current = program
    executed: List[Step] = []
    skipped: List[Step] = []
    for transformer_id, site_seed in sequence:
        transformer = get_transformer(transformer_id)
        try:
            current = transformer.apply(current, site_seed, template, defaults).program
        except TransformError as exc:
            console.log(f"Skipping {transformer_id}: {exc}")
            skipped.append((transformer_id, site_seed))
            continue
        executed.append((transformer_id, site_seed))
    return SequenceRun(current, TransformationSequence(executed), skipped)


def apply_sequence(
    sequence: TransformationSequence,
    program: SourceProgram,
    template: Optional[TemplateProfile] = None,
    defaults: bool = True,
) -> SourceProgram:
    return run_sequence(sequence, program, template, defaults).program


def verify(
    original: SourceProgram, transformed: SourceProgram, inputs: Iterable[str], fuel: int = DEFAULT_FUEL
) -> bool:
    return semantically_equivalent(original, transformed, inputs, fuel)
