"""Pydantic models shared by the algorithms, the file formats and the CLI."""
from .config_models import RunConfig, ScaleConfig
from .coreset_models import Coreset, CoresetMetadata, WeightedPoint
from .instance_models import ClusteringInstance
from .outcome_models import Fail, FailCause, is_fail
from .stream_models import StreamFile, StreamOp

__all__ = [
    "ClusteringInstance",
    "Coreset",
    "CoresetMetadata",
    "Fail",
    "FailCause",
    "RunConfig",
    "ScaleConfig",
    "StreamFile",
    "StreamOp",
    "WeightedPoint",
    "is_fail",
]
