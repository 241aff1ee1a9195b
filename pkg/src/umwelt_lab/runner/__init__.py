"""Trial grid planning, execution, persistence, and per-response metrics."""

from umwelt_lab.runner.ledger import LedgerWriter, effective_records, read_ledger
from umwelt_lab.runner.metrics import chain_depth, epistemic_specificity
from umwelt_lab.runner.models import ModelEndpoint, TaskItem, TrialKey, TrialRecord, load_bank
from umwelt_lab.runner.run import (
    RunConfig,
    RunSummary,
    execute_trial,
    load_config,
    plan_trials,
    resume_filter,
    run_experiment,
)

__all__ = [
    "LedgerWriter",
    "ModelEndpoint",
    "RunConfig",
    "RunSummary",
    "TaskItem",
    "TrialKey",
    "TrialRecord",
    "chain_depth",
    "effective_records",
    "epistemic_specificity",
    "execute_trial",
    "load_bank",
    "load_config",
    "plan_trials",
    "read_ledger",
    "resume_filter",
    "run_experiment",
]
