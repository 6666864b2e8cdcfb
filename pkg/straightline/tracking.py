# Copyright 2026 The straightline authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Logging balance reports to an MLflow tracking server."""

import logging
from datetime import datetime, timedelta

from mlflow.entities import Metric, Param, RunTag
from mlflow.exceptions import MlflowException
from mlflow.tracking import MlflowClient
from pytz import UTC

from straightline.config import DEFAULT_EXPERIMENT
from straightline.exceptions import TrackingError


logger = logging.getLogger(__name__)

EPOCH = datetime(1970, 1, 1, tzinfo=UTC)

COMMAND_TAG = "straightline.command"
INPUT_TAG = "straightline.input"


def datetime_to_mlflow_timestamp(dt):
    """Milliseconds since the epoch of a timezone-aware datetime."""
    return (dt - EPOCH) // timedelta(milliseconds=1)


def report_to_entities(report, input_path, envelope, command, timestamp):
    """Convert a BalanceReport into MLflow metrics, params and tags."""
    metrics = [
        Metric(key, float(value), timestamp, 0)
        for key, value in report.as_dict().items()
    ]
    params = [
        Param("input", str(input_path)),
        Param("envelope", str(envelope)),
    ]
    tags = [RunTag(COMMAND_TAG, command), RunTag(INPUT_TAG, str(input_path))]
    return metrics, params, tags


def log_balance_report(
    report,
    input_path,
    envelope,
    experiment_name=DEFAULT_EXPERIMENT,
    command="balance",
    client=None,
    now=None,
):
    """Log a BalanceReport as one MLflow run and return the run id.

    Raises
    ------
    TrackingError
        If the tracking server rejects any request.
    """
    client = MlflowClient() if client is None else client
    now = datetime.now(tz=UTC) if now is None else now
    timestamp = datetime_to_mlflow_timestamp(now)
    metrics, params, tags = report_to_entities(
        report, input_path, envelope, command, timestamp
    )
    try:
        experiment = client.get_experiment_by_name(experiment_name)
        if experiment is None:
            experiment_id = client.create_experiment(experiment_name)
        else:
            experiment_id = experiment.experiment_id
        run = client.create_run(experiment_id, start_time=timestamp)
        run_id = run.info.run_id
        client.log_batch(run_id, metrics=metrics, params=params, tags=tags)
        client.set_terminated(run_id)
    except MlflowException as e:
        raise TrackingError("Could not log balance report: {}".format(e))
    logger.info(
        "Logged balance report to run %s of experiment %s",
        run_id,
        experiment_name,
    )
    return run_id
