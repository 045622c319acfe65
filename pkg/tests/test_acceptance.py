"""Acceptance suite.

Each test covers one release criterion at its stated tolerance and prints
one PASS/FAIL line (run with ``pytest -s`` to see them as they happen).
"""

import contextlib
import itertools
import json
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from embshape import (
    AnalysisConfig,
    DegenerateTriangleError,
    EmbeddingSpace,
    ExtractionParams,
    analyze_space,
    barycentric,
    filter_false_vertices,
    find_candidates,
    fit_pca,
    generate_simplex_cloud,
    glue_candidates,
    incircle,
    informative_axis_count,
    run_analysis,
    triangle_stats,
    write_glove_text,
)
from embshape.extractor import VertexCandidate

SYNTH_ARGS = dict(dim=50, num_vertices=12, num_points=20_000, alpha=1.5)

SINGLE_THREAD_ENV = {
    "OMP_NUM_THREADS": "1",
    "OPENBLAS_NUM_THREADS": "1",
    "MKL_NUM_THREADS": "1",
}


@contextlib.contextmanager
def criterion(name):
    try:
        yield
    except pytest.skip.Exception:
        print("ACCEPTANCE %s: SKIP" % name)
        raise
    except BaseException:
        print("ACCEPTANCE %s: FAIL" % name)
        raise
    else:
        print("ACCEPTANCE %s: PASS" % name)


@pytest.fixture(scope="module")
def reference_cloud():
    """The noiseless ground-truth cloud the synthetic criteria run on."""
    return generate_simplex_cloud(sigma=0.0, seed=1, **SYNTH_ARGS)


def _recovery(cloud, vertex_tokens, tol=1e-6):
    """(recovered corner count, false survivor count) for a report."""
    corners = cloud.corner_vectors
    matched = set()
    false = 0
    for token in vertex_tokens:
        vec = cloud.space.vectors[cloud.space.index[token]]
        dists = np.linalg.norm(corners - vec, axis=1)
        nearest = int(np.argmin(dists))
        if dists[nearest] < tol:
            matched.add(nearest)
        else:
            false += 1
    return len(matched), false


def _run_cli(args, env_extra=None, **kwargs):
    env = dict(os.environ)
    env.update(env_extra or {})
    return subprocess.run(
        [sys.executable, "-m", "embshape", *args],
        env=env,
        check=True,
        capture_output=True,
        **kwargs,
    )


class TestSyntheticVertexRecovery:
    def test_seed1_pipe_recovers_all_corners(self, tmp_path, reference_cloud):
        with criterion("synthetic vertex recovery (seed 1, piped CLI)"):
            report_path = tmp_path / "report.json"
            shell = (
                "%(py)s -m embshape synth --dim 50 --vertices 12 --points 20000 "
                "--alpha 1.5 --sigma 0.0 --seed 1 -o - | "
                "%(py)s -m embshape analyze - -o %(out)s"
            ) % {"py": sys.executable, "out": report_path}
            env = dict(os.environ)
            env.update(SINGLE_THREAD_ENV)
            start = time.monotonic()
            subprocess.run(shell, shell=True, env=env, check=True)
            elapsed = time.monotonic() - start
            assert elapsed < 60.0, "pipeline took %.1fs" % elapsed

            report = json.loads(report_path.read_text())
            tokens = [v["token"] for v in report["vertices"]]
            recalled, false = _recovery(reference_cloud, tokens)
            assert recalled == 12, "recovered %d of 12 corners" % recalled
            assert false == 0, "%d false survivors" % false

    @pytest.mark.parametrize("sigma", [0.0, 0.01])
    def test_seed_sweep(self, sigma):
        with criterion("synthetic vertex recovery (seeds 1-10, sigma=%g)" % sigma):
            for seed in range(1, 11):
                cloud = generate_simplex_cloud(sigma=sigma, seed=seed, **SYNTH_ARGS)
                report = analyze_space(
                    cloud.space, AnalysisConfig(input_path="<memory>"), "<memory>"
                )
                tokens = [v["token"] for v in report.vertices]
                recalled, false = _recovery(cloud, tokens)
                assert recalled >= 10, "seed %d: recall %d/12" % (seed, recalled)
                assert false == 0, "seed %d: %d false survivors" % (seed, false)


class TestExactConvexityOracle:
    def test_all_220_true_triples(self, reference_cloud):
        with criterion("exact convexity oracle (220 true-vertex triples)"):
            space = reference_cloud.space
            triples = list(itertools.combinations(reference_cloud.true_vertices, 3))
            assert len(triples) == 220
            for triple in triples:
                stats = triangle_stats(space, *triple)
                assert abs(stats.inside_triangle_fraction - 1.0) <= 1e-12
                assert (
                    stats.outside_incircle_fraction
                    >= 1.0 - stats.inside_triangle_fraction
                )


class TestFalseVertexRejection:
    def test_injected_centroid_word_is_rejected(self, reference_cloud):
        with criterion("false-vertex rejection (injected centroid word)"):
            space = reference_cloud.space
            params = ExtractionParams()
            pca = fit_pca(space, 50)
            m = informative_axis_count(pca, 50)
            candidates = find_candidates(space, pca, m)
            centroid = space.vectors.mean(axis=0)
            fake_word = int(
                np.argmin(np.linalg.norm(space.vectors - centroid, axis=1))
            )
            assert fake_word not in reference_cloud.true_vertices
            candidates.append(
                VertexCandidate(word_index=fake_word, axis_index=m, end="max", score=0.0)
            )
            vertices = glue_candidates(space, candidates, params)
            survivors = filter_false_vertices(space, vertices, params)
            fake = next(v for v in vertices if v.representative == fake_word)
            assert fake.outside_fraction > params.tau
            assert fake not in survivors


class TestGeometryOracleEquivalence:
    def test_barycentric_against_half_plane_signs(self):
        with criterion("geometry oracle: barycentric vs half-plane signs (1e4)"):
            rng = np.random.default_rng(101)
            checked = 0
            while checked < 10_000:
                tri = rng.uniform(-10, 10, size=(3, 2))
                point = rng.uniform(-12, 12, size=2)
                try:
                    lam = barycentric(point, tri)
                except DegenerateTriangleError:
                    continue
                if abs(lam.min()) < 1e-7:  # boundary band excluded
                    continue
                checked += 1
                mine = bool(lam.min() >= -1e-9)
                signs = []
                for i in range(3):
                    a, b = tri[i], tri[(i + 1) % 3]
                    signs.append(
                        (b[0] - a[0]) * (point[1] - a[1])
                        - (b[1] - a[1]) * (point[0] - a[0])
                    )
                oracle = all(s >= 0 for s in signs) or all(s <= 0 for s in signs)
                assert mine == oracle

    def test_incircle_tangency_residual(self):
        with criterion("geometry oracle: incircle tangency (1e3 triangles)"):
            rng = np.random.default_rng(102)
            done = 0
            while done < 1000:
                tri = rng.uniform(-10, 10, size=(3, 2))
                try:
                    center, radius = incircle(tri)
                except DegenerateTriangleError:
                    continue
                done += 1
                for i in range(3):
                    a, b = tri[i], tri[(i + 1) % 3]
                    edge = b - a
                    rel = center - a
                    cross = edge[0] * rel[1] - edge[1] * rel[0]
                    dist = abs(cross) / np.linalg.norm(edge)
                    assert abs(dist - radius) < 1e-9

    def test_candidates_match_brute_force(self):
        with criterion("geometry oracle: brute-force axis extremes"):
            rng = np.random.default_rng(103)
            vectors = rng.standard_normal((5000, 30)) @ rng.standard_normal((30, 30))
            space = EmbeddingSpace(
                words=["w%d" % i for i in range(5000)], vectors=vectors
            )
            pca = fit_pca(space, 20)
            candidates = find_candidates(space, pca, 20)
            for i in range(20):
                axis = pca.axes[i]
                scores = [
                    float((space.vectors[j] - pca.mean) @ axis) for j in range(5000)
                ]
                lo = min(range(5000), key=lambda j: (scores[j], j))
                hi = max(range(5000), key=lambda j: (scores[j], -j))
                assert candidates[2 * i].word_index == lo
                assert candidates[2 * i + 1].word_index == hi


class TestPcaAxisRecovery:
    def test_rotated_elongated_gaussian(self):
        with criterion("PCA axis recovery (2 degrees, closed-form oracle)"):
            rng = np.random.default_rng(104)
            d = 20
            gauss = rng.standard_normal((d, d))
            q, r = np.linalg.qr(gauss)
            q = q * np.sign(np.diag(r))
            scales = np.ones(d)
            scales[0] = 3.0  # covariance diag(9, 1, ..., 1)
            samples = (rng.standard_normal((50_000, d)) * scales) @ q.T
            space = EmbeddingSpace(
                words=["w%d" % i for i in range(50_000)], vectors=samples
            )
            model = fit_pca(space, d)
            truth = q[:, 0]
            cosine = min(1.0, abs(float(model.axes[0] @ truth)))
            angle = np.degrees(np.arccos(cosine))
            assert angle < 2.0, "top axis off by %.3f degrees" % angle
            gram = model.axes @ model.axes.T
            assert np.max(np.abs(gram - np.eye(d))) < 1e-6
            assert np.all(np.diff(model.eigenvalues) <= 0)


class TestDeterminism:
    def test_byte_identical_reports_across_thread_counts(self, tmp_path):
        with criterion("determinism across thread counts"):
            cloud = generate_simplex_cloud(
                dim=30, num_vertices=8, num_points=5000, alpha=1.5, sigma=0.0, seed=2
            )
            path = tmp_path / "cloud.txt"
            write_glove_text(cloud.space, path)
            outputs = []
            for threads in ("1", "2"):
                env = {
                    "OMP_NUM_THREADS": threads,
                    "OPENBLAS_NUM_THREADS": threads,
                    "MKL_NUM_THREADS": threads,
                }
                result = _run_cli(
                    ["analyze", str(path), "--seed", "5"], env_extra=env
                )
                outputs.append(result.stdout)
            assert outputs[0] == outputs[1]
            json.loads(outputs[0])  # and it is valid JSON


def _find_glove():
    candidates = [os.environ.get("EMBSHAPE_GLOVE", "")]
    here = Path(__file__).resolve().parents[1]
    candidates += [
        str(here / "data" / "glove.6B.300d.txt"),
        str(here / "glove.6B.300d.txt"),
    ]
    for cand in candidates:
        if cand and Path(cand).is_file():
            return cand
    return None


class TestFullScaleGlove:
    def test_glove_300d_top50k(self):
        with criterion("full-scale GloVe statistics (network-optional)"):
            glove = _find_glove()
            if glove is None:
                pytest.skip(
                    "no 300-dim GloVe file found; set EMBSHAPE_GLOVE to run"
                )
            start = time.monotonic()
            report = run_analysis(AnalysisConfig(input_path=glove))
            elapsed = time.monotonic() - start
            assert elapsed < 600.0, "analysis took %.0fs" % elapsed
            assert len(report.vertices) >= 10
            for v in report.vertices:
                assert len(v["description"]) == 5
            agg = report.aggregates
            assert agg["sample_size"] == 100
            assert agg["mean_inside_triangle_fraction"] >= 0.95
            assert 0.05 <= agg["mean_outside_incircle_fraction"] <= 0.30
