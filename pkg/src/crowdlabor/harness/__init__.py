from crowdlabor.harness.analysis import AnalysisOptions, AnalysisReport, analyze, emit_json, emit_series
from crowdlabor.harness.config import GroupConfig, PopulationConfig, experiment_a, experiment_b
from crowdlabor.harness.records import (
    RecordError,
    SessionRecord,
    emit_records_csv,
    infer_schedules,
    ingest_csv,
)
from crowdlabor.harness.simulate import proportional_null_workers, simulate_experiment
