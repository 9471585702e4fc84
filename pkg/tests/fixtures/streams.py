"""Stream and coreset file fixtures."""
import pytest

from dskm.models.stream_models import StreamFile, StreamOp
from dskm.utils.generators import clustered_stream
from dskm.utils.stream_io import save_stream

STREAM_TEXT = """dskm v1 d=2 L=3
+ 1 1
+ 2 5
+ 8 8
- 2 5
+ 3 3
"""


@pytest.fixture
def stream_text():
    """A five-operation stream over [1, 8]^2 leaving (1,1), (3,3) and (8,8) live."""
    return STREAM_TEXT


@pytest.fixture
def churned_ops():
    """Operations that insert and delete transient points around three residual ones."""
    return [
        StreamOp(1, (1, 1)),
        StreamOp(1, (4, 4)),
        StreamOp(1, (7, 2)),
        StreamOp(-1, (4, 4)),
        StreamOp(1, (3, 6)),
        StreamOp(1, (4, 4)),
        StreamOp(-1, (7, 2)),
        StreamOp(-1, (1, 1)),
        StreamOp(1, (8, 8)),
    ]


@pytest.fixture
def clustered_file(tmp_path):
    """A 20-point clustered stream over [1, 16]^2 with 5 deletions, saved to disk.

    Returns:
        tuple[Path, StreamFile]: The file path and the stream written to it.
    """
    stream: StreamFile = clustered_stream(2, 4, 20, blobs=2, deletion_fraction=0.25, spread=1.5, seed=7)
    path = tmp_path / "clustered.stream"
    save_stream(path, stream)
    return path, stream
