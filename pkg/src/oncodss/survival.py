"""Product-limit survival estimation and group comparison.

Kaplan-Meier curves with Greenwood standard errors, median survival with a
95% confidence interval from the log-log pointwise band, the k-group
log-rank test, and the per-parameter survival table.

Conventions: at tied times events precede censorings, so observations
censored at an event time are still at risk there; the survival-table
std. error of the median is back-converted from the CI width and is an
approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .cohort import Cohort
from .errors import (
    EmptyInputError,
    NoEventsError,
    NonPositiveTimeError,
    SingleGroupError,
    UnknownParameterError,
)
from .special import Z95, chi2_sf


@dataclass(frozen=True)
class SurvivalObservation:
    time: float  # months, > 0
    event: bool  # True = death observed, False = censored
    group: str = ""


@dataclass
class KMCurve:
    event_times: list[float]
    survival: list[float]
    at_risk: list[int]
    events: list[int]
    greenwood_se: list[float]
    n_total: int = 0
    n_events: int = 0

    def band(self, z: float = Z95) -> tuple[list[float], list[float]]:
        """Pointwise log-log confidence band (lower, upper) at event times."""
        lower: list[float] = []
        upper: list[float] = []
        for s, se in zip(self.survival, self.greenwood_se):
            if s <= 0.0:
                lower.append(0.0)
                upper.append(0.0)
            elif s >= 1.0 or se == 0.0:
                lower.append(s)
                upper.append(s)
            else:
                sigma = se / (s * abs(math.log(s)))
                lower.append(s ** math.exp(z * sigma))
                upper.append(s ** math.exp(-z * sigma))
        return lower, upper


@dataclass
class MedianEstimate:
    median: float | None = None
    std_error: float | None = None
    lcl_95: float | None = None
    ucl_95: float | None = None


@dataclass
class LogRankResult:
    chi_square: float
    degrees_of_freedom: int
    p_value: float


@dataclass
class SurvivalRow:
    parameter: str
    level: str
    n: int
    events: int
    median: MedianEstimate
    curve: KMCurve | None = field(repr=False, default=None)


@dataclass
class SurvivalTable:
    rows: list[SurvivalRow]
    p_values: dict[str, float | None]  # parameter -> log-rank p (None if single level)

    def parameters(self) -> list[str]:
        seen: list[str] = []
        for row in self.rows:
            if row.parameter not in seen:
                seen.append(row.parameter)
        return seen


def km_estimate(observations: Sequence[SurvivalObservation]) -> KMCurve:
    """Kaplan-Meier product-limit estimate over distinct event times.

    S(t) = prod over event times t_i <= t of (1 - d_i / n_i), with the risk
    set n_i counting every observation whose time is >= t_i. Greenwood's
    sum skips times where n_i == d_i (the factor is exactly zero there).
    """
    if not observations:
        raise EmptyInputError("no survival observations")
    for obs in observations:
        if obs.time <= 0:
            raise NonPositiveTimeError(obs.time)

    times = np.array([o.time for o in observations], dtype=float)
    events = np.array([o.event for o in observations], dtype=bool)

    event_times = np.unique(times[events])
    survival: list[float] = []
    at_risk: list[int] = []
    d_counts: list[int] = []
    se: list[float] = []

    s = 1.0
    greenwood_sum = 0.0
    for t in event_times:
        n_i = int(np.sum(times >= t))
        d_i = int(np.sum(events & (times == t)))
        s *= 1.0 - d_i / n_i
        if n_i > d_i:
            greenwood_sum += d_i / (n_i * (n_i - d_i))
        survival.append(s)
        at_risk.append(n_i)
        d_counts.append(d_i)
        se.append(s * math.sqrt(greenwood_sum))

    return KMCurve(
        event_times=[float(t) for t in event_times],
        survival=survival,
        at_risk=at_risk,
        events=d_counts,
        greenwood_se=se,
        n_total=len(observations),
        n_events=int(events.sum()),
    )


def median_survival(curve: KMCurve) -> MedianEstimate:
    """Median survival time with 95% limits from the log-log band.

    The median is the first event time where S(t) <= 0.5. The confidence
    limits are the first event times where the lower / upper band reaches
    0.5; the std. error is back-converted from the CI width.
    """
    est = MedianEstimate()
    if not curve.event_times:
        return est
    lower, upper = curve.band()
    for t, s, lo, up in zip(curve.event_times, curve.survival, lower, upper):
        if est.lcl_95 is None and lo <= 0.5:
            est.lcl_95 = t
        if est.median is None and s <= 0.5:
            est.median = t
        if est.ucl_95 is None and up <= 0.5:
            est.ucl_95 = t
    if est.lcl_95 is not None and est.ucl_95 is not None:
        est.std_error = (est.ucl_95 - est.lcl_95) / (2 * Z95)
    return est


def logrank_test(
    observations: Sequence[SurvivalObservation],
    groups: Sequence[str] | None = None,
) -> LogRankResult:
    """k-group log-rank test over the pooled distinct event times.

    Per event time, observed minus expected events per group under
    hypergeometric allocation; the chi-square statistic uses the scalar
    form for two groups and the (k-1)-dimensional quadratic form above.
    """
    if groups is None:
        groups = sorted({o.group for o in observations})
    groups = list(groups)
    present = {o.group for o in observations}
    if len(groups) < 2 or any(g not in present for g in groups):
        raise SingleGroupError("log-rank needs >= 2 non-empty groups")
    if not any(o.event for o in observations):
        raise NoEventsError("no events in any group")
    for obs in observations:
        if obs.time <= 0:
            raise NonPositiveTimeError(obs.time)

    k = len(groups)
    gidx = {g: i for i, g in enumerate(groups)}
    times = np.array([o.time for o in observations], dtype=float)
    events = np.array([o.event for o in observations], dtype=bool)
    labels = np.array([gidx[o.group] for o in observations], dtype=int)

    event_times = np.unique(times[events])
    o_minus_e = np.zeros(k)
    cov = np.zeros((k, k))

    for t in event_times:
        at_risk = times >= t
        n_t = int(at_risk.sum())
        d_t = int((events & (times == t)).sum())
        if n_t == 0:
            continue
        n_g = np.array([int((at_risk & (labels == i)).sum()) for i in range(k)], dtype=float)
        d_g = np.array(
            [int((events & (times == t) & (labels == i)).sum()) for i in range(k)],
            dtype=float,
        )
        expected = d_t * n_g / n_t
        o_minus_e += d_g - expected
        if n_t > 1:
            frac = n_g / n_t
            scale = d_t * (n_t - d_t) / (n_t - 1)
            cov += scale * (np.diag(frac) - np.outer(frac, frac))

    if k == 2:
        variance = cov[0, 0]
        chi = 0.0 if variance == 0 else float(o_minus_e[0] ** 2 / variance)
    else:
        v = o_minus_e[:-1]
        m = cov[:-1, :-1]
        try:
            chi = float(v @ np.linalg.solve(m, v))
        except np.linalg.LinAlgError:
            chi = float(v @ np.linalg.pinv(m) @ v)
    chi = max(chi, 0.0)
    df = k - 1
    return LogRankResult(chi_square=chi, degrees_of_freedom=df, p_value=chi2_sf(chi, df))


def observations_for(
    cohort: Cohort, parameter: str, *, use_imputed: bool = False
) -> list[SurvivalObservation]:
    """Survival observations grouped by a dichotomized parameter.

    Listwise deletion: records whose parameter value was imputed (or whose
    survival time is non-positive) are excluded unless ``use_imputed``.
    """
    obs: list[SurvivalObservation] = []
    for record in cohort.records:
        if record.survival_time is None or record.survival_time <= 0:
            continue
        if use_imputed:
            level = cohort.features[record.sample_id].get(parameter)
        else:
            level = cohort.raw_feature(record.sample_id, parameter)
        if level is None:
            continue
        obs.append(SurvivalObservation(record.survival_time, bool(record.event), level))
    return obs


def _level_order(cohort: Cohort, parameter: str, present: Iterable[str]) -> list[str]:
    present = set(present)
    for rule in cohort.rules:
        if rule.parameter == parameter:
            declared = rule.level_order()
            if declared:
                ordered = [lv for lv in declared if lv in present]
                return ordered + sorted(present - set(ordered))
    return sorted(present)


def survival_table(cohort: Cohort, parameters: Sequence[str]) -> SurvivalTable:
    """Per-parameter, per-level KM summaries plus one log-rank p per parameter."""
    known = {rule.parameter for rule in cohort.rules}
    rows: list[SurvivalRow] = []
    p_values: dict[str, float | None] = {}

    for parameter in parameters:
        if parameter not in known:
            raise UnknownParameterError(parameter)
        obs = observations_for(cohort, parameter)
        levels = _level_order(cohort, parameter, (o.group for o in obs))
        for level in levels:
            subset = [o for o in obs if o.group == level]
            curve = km_estimate(subset)
            rows.append(
                SurvivalRow(
                    parameter=parameter,
                    level=level,
                    n=curve.n_total,
                    events=curve.n_events,
                    median=median_survival(curve),
                    curve=curve,
                )
            )
        if len(levels) < 2:
            p_values[parameter] = None
        else:
            try:
                p_values[parameter] = logrank_test(obs, levels).p_value
            except NoEventsError:
                p_values[parameter] = None

    return SurvivalTable(rows=rows, p_values=p_values)


def table_as_records(table: SurvivalTable) -> list[dict]:
    """Fixed-key-order row dicts for serialization (first level carries p)."""
    records: list[dict] = []
    seen: set[str] = set()
    for row in table.rows:
        first = row.parameter not in seen
        seen.add(row.parameter)
        records.append(
            {
                "parameter": row.parameter,
                "level": row.level,
                "n": row.n,
                "events": row.events,
                "median": row.median.median,
                "se": row.median.std_error,
                "lcl": row.median.lcl_95,
                "ucl": row.median.ucl_95,
                "p": table.p_values.get(row.parameter) if first else None,
            }
        )
    return records
