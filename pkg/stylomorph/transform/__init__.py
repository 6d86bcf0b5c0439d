"""
Targeted, semantics-preserving source transformations over MiniC programs.

Importing this package registers the whole catalog.
"""

from . import api, control, declaration, misc, template  # noqa: F401
from .base import (
    NoApplicableSite,
    Representation,
    TemplateMissing,
    TransformContext,
    TransformError,
    TransformFamily,
    Transformer,
    TransformResult,
    UnknownTransformer,
    all_transformers,
    get_transformer,
)
from .headers import HEADER_MANIFEST, header_needed, used_library_names
from .profile import TemplateProfile, default_profile, extract_template
from .sequence import SequenceRun, TransformationSequence, apply_sequence, run_sequence, verify

__all__ = (
    "NoApplicableSite",
    "Representation",
    "TemplateMissing",
    "TransformContext",
    "TransformError",
    "TransformFamily",
    "Transformer",
    "TransformResult",
    "UnknownTransformer",
    "all_transformers",
    "get_transformer",
    "transformers_by_family",
    "HEADER_MANIFEST",
    "header_needed",
    "used_library_names",
    "TemplateProfile",
    "default_profile",
    "extract_template",
    "SequenceRun",
    "TransformationSequence",
    "apply_sequence",
    "run_sequence",
    "verify",
)


def transformers_by_family(family: TransformFamily):
    return [transformer for transformer in all_transformers() if transformer.FAMILY == family]
