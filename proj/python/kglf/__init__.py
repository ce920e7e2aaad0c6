# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The kglf Authors
"""Human-supervised link prediction for knowledge graphs."""

import json
import os

from ._kglf import Engine, KglfError, export_bundle, generate
from . import _kglf

__all__ = ["Engine", "KglfError", "export_bundle", "generate", "simulate", "write_report"]


def simulate(bundle=None, **options):
    """Run the simulated review loop and return the report as a dict.

    Without `bundle` a default synthetic graph is generated from `seed`.
    Accepts seed, budget, k, candidate_size, retrain_every, training_size
    and scoring ("learned", "zero" or "onehot:<metric>").
    """
    if bundle is not None:
        bundle = os.fspath(bundle)
    return json.loads(_kglf.simulate_json(bundle, **options))


def write_report(runs, out_dir):
    """Write the evaluation tables for reports returned by simulate()."""
    _kglf.write_report_json([json.dumps(r) for r in runs], os.fspath(out_dir))
