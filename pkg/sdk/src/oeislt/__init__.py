"""Python SDK and autoformalization pipeline for the seqlean tool server."""

from .client import (
    Client,
    CompileResponse,
    ConnectionFailed,
    ErrorInfo,
    EvalRecord,
    EvalResponse,
    GenResponse,
    ProveFailure,
    ProveResponse,
    ReadyResponse,
    Response,
)
from .pipeline import (
    CLASSES,
    CorpusEntry,
    PipelineOutcome,
    SequenceOutcome,
    ladder_rungs,
    pipeline_run,
    read_bfile_sample,
    read_corpus,
    read_stripped,
    summarize,
)

__version__ = "0.1.0"

__all__ = [
    "CLASSES",
    "Client",
    "CompileResponse",
    "ConnectionFailed",
    "CorpusEntry",
    "ErrorInfo",
    "EvalRecord",
    "EvalResponse",
    "GenResponse",
    "PipelineOutcome",
    "ProveFailure",
    "ProveResponse",
    "ReadyResponse",
    "Response",
    "SequenceOutcome",
    "ladder_rungs",
    "pipeline_run",
    "read_bfile_sample",
    "read_corpus",
    "read_stripped",
    "summarize",
]
