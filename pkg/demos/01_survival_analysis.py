#!/usr/bin/env python3
"""Kaplan-Meier walkthrough: product-limit curves, Greenwood bands,
median survival with 95% CI, and a two-group log-rank comparison.

Run from the repo root:  python demos/01_survival_analysis.py
Writes demo_output/km_curves.png when matplotlib is available.
"""

from pathlib import Path

import numpy as np

from oncodss.survival import (
    SurvivalObservation as Obs,
    km_estimate,
    logrank_test,
    median_survival,
)


def simulate_group(rng, n, scale, label):
    obs = []
    for _ in range(n):
        event_time = rng.exponential(scale)
        censor_time = rng.uniform(5, 60)
        if event_time <= censor_time:
            obs.append(Obs(time=float(event_time) + 0.5, event=True, group=label))
        else:
            obs.append(Obs(time=float(censor_time), event=False, group=label))
    return obs


def main():
    rng = np.random.default_rng(2024)
    good = simulate_group(rng, 40, scale=70.0, label="low_burden")
    poor = simulate_group(rng, 40, scale=12.0, label="high_burden")

    print("== Kaplan-Meier per group ==")
    curves = {}
    for label, obs in [("low_burden", good), ("high_burden", poor)]:
        curve = km_estimate(obs)
        curves[label] = curve
        est = median_survival(curve)
        print(
            f"{label}: n={curve.n_total} events={curve.n_events} "
            f"median={est.median and round(est.median, 1)} months "
            f"95% CI [{est.lcl_95 and round(est.lcl_95, 1)}, "
            f"{est.ucl_95 and round(est.ucl_95, 1)}]"
        )

    print("\nfirst five steps of the high-burden curve:")
    poor_curve = curves["high_burden"]
    for t, s, n, d, se in list(
        zip(
            poor_curve.event_times,
            poor_curve.survival,
            poor_curve.at_risk,
            poor_curve.events,
            poor_curve.greenwood_se,
        )
    )[:5]:
        print(f"  t={t:6.1f}  S={s:.3f}  at_risk={n:3d}  events={d}  se={se:.3f}")

    result = logrank_test(good + poor)
    print(
        f"\nlog-rank: chi2={result.chi_square:.3f} "
        f"df={result.degrees_of_freedom} p={result.p_value:.2e}"
    )

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping the plot")
        return

    out = Path(__file__).resolve().parent.parent / "demo_output"
    out.mkdir(exist_ok=True)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, curve in curves.items():
        times = [0.0] + curve.event_times
        surv = [1.0] + curve.survival
        ax.step(times, surv, where="post", label=label)
        lower, upper = curve.band()
        ax.fill_between(
            curve.event_times, lower, upper, step="post", alpha=0.15
        )
    ax.set_xlabel("months")
    ax.set_ylabel("survival probability")
    ax.set_ylim(0, 1.02)
    ax.legend()
    ax.set_title(f"log-rank p = {result.p_value:.2e}")
    fig.tight_layout()
    fig.savefig(out / "km_curves.png", dpi=120)
    print(f"plot written to {out / 'km_curves.png'}")


if __name__ == "__main__":
    main()
