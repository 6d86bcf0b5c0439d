from typing import Dict, List, Literal, TypedDict

__all__ = (
    "ConfigT",
    "FamilyT",
    "AttackModeT",
    "ModelKindT",
    "AttackRecordT",
    "CvReportT",
)
FamilyT = Literal["control", "declaration", "api", "template", "misc"]
AttackModeT = Literal["untargeted", "targeted"]
ModelKindT = Literal["random_forest", "linear_softmax"]


class _ConfigInterpreterT(TypedDict, total=False):
    fuel: int


class _ConfigFeaturesT(TypedDict, total=False):
    selection_cap: int


class _ConfigAttackT(TypedDict, total=False):
    max_seq_len: int
    sims_per_iter: int
    inner_iters: int
    max_outer_moves: int
    patience: int
    substitute_candidates: int


class _ConfigCorpusT(TypedDict, total=False):
    n_authors: int
    seed: int


class _ConfigTrainingT(TypedDict, total=False):
    seed: int


class ConfigT(TypedDict, total=False):
    _is_first_time: bool
    interpreter: _ConfigInterpreterT
    features: _ConfigFeaturesT
    attack: _ConfigAttackT
    corpus: _ConfigCorpusT
    training: _ConfigTrainingT


class CvReportT(TypedDict):
    kind: ModelKindT
    per_fold: List[Dict[str, object]]
    mean: float
    std: float


class AttackRecordT(TypedDict, total=False):
    file: str
    source: str
    target: str
    mode: AttackModeT
    model: str
    template: bool
    success: bool
    verified: bool
    sequence: List[List[object]]
    queries: int
    outer_moves: int
    loc_diff: Dict[str, int]
    changed_feature_ratio: float
    trace: List[float]
    family_usage: Dict[str, int]
