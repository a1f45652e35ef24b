# Copyright (c) 2026 The mrvlab Authors.
# SPDX-License-Identifier: Apache-2.0
"""Monte Carlo laboratory for design-based (HTE) and model-assisted (SRE)
estimation of spatial population means on synthetic geostatistical fields."""

from ._core import (  # noqa: F401
    DEFAULT_MASTER_SEED,
    ArgumentError,
    BiasTest,
    ConfidenceInterval,
    ConfigError,
    CoverageEstimate,
    CovarianceSpec,
    DegenerateInputError,
    Estimate,
    EstimatorKind,
    FieldMethod,
    GridConfig,
    GridResult,
    InsufficientSampleError,
    Population,
    PopulationSpec,
    RegressionFit,
    ReplicateRecord,
    Sample,
    ScenarioFailure,
    ScenarioMetrics,
    ScenarioSpec,
    VarianceMethod,
    __version__,
    build_population,
    confidence_interval,
    decorrelate,
    dump_population_csv,
    emit_bias_table,
    emit_figure_data,
    empirical_bias,
    empirical_coverage,
    generate_field,
    hte,
    make_population_spec,
    mc_variance,
    ols_fit,
    population_seed,
    precision_gain,
    replicate_seed,
    run_grid,
    run_scenario,
    semivariogram,
    spherical_cov,
    sre,
    sre_variance_gweight,
    sre_variance_naive,
    srs_sample,
    summarize_scenario,
    t_quantile,
)
