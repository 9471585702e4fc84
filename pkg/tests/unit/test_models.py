"""Unit tests for Pydantic models."""
import pytest
from pydantic import ValidationError

from dskm.models.config_models import VERIFY_FAMILIES, RunConfig
from dskm.models.coreset_models import Coreset, WeightedPoint
from dskm.models.instance_models import ClusteringInstance
from dskm.models.outcome_models import Fail, FailCause, is_fail
from dskm.models.report_models import SpaceReport, VerificationReport
from dskm.models.stream_models import StreamFile, StreamOp


@pytest.mark.unit
class TestClusteringInstance:
    """Test ClusteringInstance validation and derived sizes."""

    def test_derived_sizes(self):
        """Test side, levels and domain size."""
        instance = ClusteringInstance(d=3, delta_exp=4, k=2, epsilon=0.1)

        assert instance.side == 16
        assert instance.levels == 4
        assert instance.domain_size == 4096

    @pytest.mark.parametrize("epsilon", [0.0, 0.5, -0.1, 1.0])
    def test_epsilon_range(self, epsilon):
        """Test epsilon outside (0, 1/2) is rejected."""
        with pytest.raises(ValidationError):
            ClusteringInstance(d=2, delta_exp=3, k=1, epsilon=epsilon)

    def test_positive_sizes(self):
        """Test d, L and k must be at least 1."""
        with pytest.raises(ValidationError):
            ClusteringInstance(d=0, delta_exp=3, k=1, epsilon=0.2)
        with pytest.raises(ValidationError):
            ClusteringInstance(d=2, delta_exp=3, k=0, epsilon=0.2)

    def test_contains(self, small_instance):
        """Test grid membership checks dimension and range."""
        assert small_instance.contains((1, 8))
        assert not small_instance.contains((0, 3))
        assert not small_instance.contains((9, 1))
        assert not small_instance.contains((1, 1, 1))

    def test_frozen(self, small_instance):
        """Test instances are immutable."""
        with pytest.raises(ValidationError):
            small_instance.k = 4


@pytest.mark.unit
class TestCoresetModels:
    """Test weighted points and coresets."""

    def test_weight_must_be_positive(self):
        """Test zero and negative weights are rejected."""
        with pytest.raises(ValidationError):
            WeightedPoint(point=(1, 1), weight=0.0)
        with pytest.raises(ValidationError):
            WeightedPoint(point=(1, 1), weight=-1.0)

    def test_mixed_dimensions(self):
        """Test entries of different dimensions are rejected."""
        with pytest.raises(ValidationError):
            Coreset(entries=[WeightedPoint(point=(1,), weight=1.0), WeightedPoint(point=(1, 2), weight=1.0)])

    def test_unit_weight(self):
        """Test the exact coreset sorts points and weighs each by 1."""
        coreset = Coreset.unit_weight([(3, 3), (1, 2)])

        assert [e.point for e in coreset.entries] == [(1, 2), (3, 3)]
        assert coreset.total_weight() == 2.0
        assert coreset.metadata.source == "exact"
        assert coreset.points_array().shape == (2, 2)
        assert coreset.weights_array().tolist() == [1.0, 1.0]

    def test_empty(self):
        """Test an empty coreset has no weight."""
        assert len(Coreset()) == 0
        assert Coreset().total_weight() == 0.0


@pytest.mark.unit
class TestOutcomeModels:
    """Test FAIL values."""

    def test_describe(self):
        """Test the FAIL message names the cause and detail."""
        fail = Fail(cause=FailCause.OVERFLOW, detail="level 2")

        assert fail.describe() == "FAIL (overflow-fail): level 2"
        assert Fail(cause=FailCause.NO_VIABLE_GUESS).describe() == "FAIL (no-viable-guess)"

    def test_is_fail(self):
        """Test is_fail only recognises Fail values."""
        assert is_fail(Fail(cause=FailCause.STORING))
        assert not is_fail(Coreset())
        assert not is_fail(None)


@pytest.mark.unit
class TestReportModels:
    """Test report models."""

    def test_space_totals(self):
        """Test totals add the shortcut and every guess."""
        report = SpaceReport(
            shortcut_nominal=10,
            shortcut_allocated=2,
            per_guess_nominal={1: 100, 2: 50},
            per_guess_allocated={1: 7, 2: 0},
        )

        assert report.total_nominal == 160
        assert report.total_allocated == 9
        assert report.model_dump()["total_nominal"] == 160

    def test_verification_passed(self):
        """Test a report passes iff max error <= epsilon."""
        assert VerificationReport(epsilon=0.1, max_error=0.1).passed
        assert not VerificationReport(epsilon=0.1, max_error=0.11).passed


@pytest.mark.unit
class TestRunConfig:
    """Test the shared run options."""

    def test_defaults(self):
        """Test default options."""
        config = RunConfig()

        assert config.k == 3
        assert config.scale.kappa == 1.0
        assert config.families == {name: 40 for name in VERIFY_FAMILIES}

    def test_unknown_family(self):
        """Test unknown verification families are rejected."""
        with pytest.raises(ValidationError):
            RunConfig(families={"grid": 3})

    def test_negative_family_count(self):
        """Test family counts must be non-negative."""
        with pytest.raises(ValidationError):
            RunConfig(families={"uniform": -1})

    def test_stream_file_counts(self):
        """Test insert and delete tallies of a stream."""
        stream = StreamFile(d=1, delta_exp=2, operations=[StreamOp(1, (1,)), StreamOp(-1, (1,)), StreamOp(1, (2,))])

        assert (stream.inserts, stream.deletes) == (2, 1)
