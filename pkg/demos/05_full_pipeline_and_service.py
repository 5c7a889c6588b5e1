#!/usr/bin/env python3
"""End-to-end demo: write the fixture, run the pipeline, reload the bundle
and answer prediction requests through the HTTP app (in-process client).

Run from the repo root:  python demos/05_full_pipeline_and_service.py
"""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from oncodss.pipeline import PipelineConfig, load_bundle, run_pipeline
from oncodss.fixture import write_fixture
from oncodss.service import create_app


def main():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        paths = write_fixture(tmp / "fixture", seed=13)
        config = PipelineConfig.from_file(paths["config"], out=tmp / "bundle")
        print("running the pipeline...")
        run_pipeline(config)

        bundle = load_bundle(config.out)
        print(f"bundle digest: {bundle.digest[:16]}...")
        client = TestClient(create_app(bundle))

        roster = client.get("/api/models").json()["models"]
        print(f"{len(roster)} models served")

        scenario = "clinical_nicotine"
        schema = client.get("/api/features", params={"scenario": scenario}).json()["features"]
        print(f"\nschema for {scenario!r} ({len(schema)} features):")
        for entry in schema[:6]:
            if entry["kind"] == "categorical":
                print(f"  {entry['name']}: categorical {entry['levels']}")
            else:
                print(
                    f"  {entry['name']}: numeric "
                    f"[{entry['observed_min']:.1f}, {entry['observed_max']:.1f}]"
                )
        print("  ...")

        features = {}
        for entry in schema:
            if entry["kind"] == "categorical":
                features[entry["name"]] = entry["levels"][0]
            else:
                features[entry["name"]] = (entry["observed_min"] + entry["observed_max"]) / 2
        response = client.post(
            "/api/predict",
            json={"scenario": scenario, "algorithm": "random_forest", "features": features},
        ).json()
        print(
            f"\nprediction: {response['label']} (score {response['score']:.3f}) "
            f"using {response['algorithm']['kind']}"
        )
        metrics = response["metrics"]
        print(
            f"cell metrics: sens={metrics['sensitivity']:.1%} spec={metrics['specificity']:.1%} "
            f"auc={metrics['auc']:.1%} acc={metrics['accuracy']:.1%}"
        )

        km = client.get("/api/survival", params={"parameter": "stage"}).json()
        print(f"\nKM curves for 'stage': levels {[lv['level'] for lv in km['levels']]}, p={km['p']:.2e}")


if __name__ == "__main__":
    main()
