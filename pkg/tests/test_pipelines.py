import json
from fractions import Fraction

import pytest

from minorforge.errors import SizeGuardError
from minorforge.graphs import complete_graph, empty_graph, path_graph
from minorforge.pipelines import (
    _delta_from_epsilon,
    mader_step_check,
    pipeline_conn,
    pipeline_isolated,
    pipeline_random,
    replay_report,
    run_pipeline,
)
from minorforge.reports import (
    ExperimentConfig,
    canonical_json,
    determinism_hash,
    write_run_dir,
)


def small_cfg(seed=42, **kwargs):
    return ExperimentConfig(seed=seed, attempts=500, sample_count=60, **kwargs)


class TestPipelineConn:
    def test_k6_main_branch(self):
        report = pipeline_conn(complete_graph(6), Fraction(3, 10), small_cfg())
        assert report.verdict == "completed"
        assert report.certified_bound == 4  # |A|+|B|-realized slack at this seed
        assert report.target_bound == pytest.approx(0.7 * 11)
        step_names = [s.name for s in report.steps]
        assert "gadget" in step_names and "pasting-bound" in step_names
        kappa_step = next(s for s in report.steps if s.name == "connectivity")
        assert kappa_step.detail["kappa"] == 5

    def test_trivial_branch(self):
        report = pipeline_conn(complete_graph(6), Fraction(9, 10), small_cfg())
        assert report.verdict == "completed"
        assert report.certified_bound == 5
        assert any(s.name == "trivial-branch" for s in report.steps)

    def test_guard(self):
        with pytest.raises(SizeGuardError):
            pipeline_conn(empty_graph(13), Fraction(1, 10), small_cfg())

    def test_seed_required(self):
        with pytest.raises(ValueError, match="seed"):
            pipeline_conn(complete_graph(6), Fraction(3, 10), ExperimentConfig())

    def test_determinism_and_replay(self):
        cfg = small_cfg()
        first = pipeline_conn(complete_graph(6), Fraction(3, 10), cfg).to_dict()
        second = pipeline_conn(complete_graph(6), Fraction(3, 10), cfg).to_dict()
        assert first["determinism_hash"] == second["determinism_hash"]
        results = replay_report(first)
        assert results and all(r["ok"] for r in results)

    def test_replay_catches_tampering(self):
        report = pipeline_conn(complete_graph(6), Fraction(3, 10), small_cfg()).to_dict()
        report["certified"][0]["replay"]["expect"] = 99
        results = replay_report(report)
        assert not all(r["ok"] for r in results)

    def test_non_complete_input(self):
        from minorforge.graphs import complete_multipartite_graph

        report = pipeline_conn(complete_multipartite_graph(2, 2, 2), Fraction(3, 10), small_cfg())
        assert report.verdict in {"completed", "gadget-not-found"}
        if report.verdict == "completed":
            assert all(r["ok"] for r in replay_report(report.to_dict()))


class TestPipelineRandom:
    def overrides(self):
        return {"delta": Fraction(1, 10), "p": Fraction(1, 20), "D": Fraction(2)}

    def test_example_run_completes_with_clamp(self):
        report = pipeline_random(6, Fraction(4, 5), self.overrides(), small_cfg())
        assert any("clamped" in note for note in report.notes)
        # gadget is unbuildable at these overrides: the maximum-degree gate
        # forces an empty sample whose complement is complete
        assert report.verdict == "gadget-not-found"
        assert [s.name for s in report.steps][:3] == ["parameters", "sample-pattern", "property-q"]

    def test_derived_parameters_run(self):
        # derived delta grid: epsilon=0.8 -> delta=0.11, and D explodes, so
        # the clamp note appears and the pipeline still completes a report
        report = pipeline_random(5, Fraction(4, 5), None, small_cfg())
        assert report.params["delta"] == Fraction(11, 100)
        assert any("clamped" in note for note in report.notes)

    def test_n1_is_error(self):
        with pytest.raises(ValueError):
            pipeline_random(1, Fraction(4, 5), None, small_cfg())

    def test_guard(self):
        with pytest.raises(SizeGuardError):
            pipeline_random(11, Fraction(4, 5), None, small_cfg())

    def test_determinism_and_replay(self):
        first = pipeline_random(6, Fraction(4, 5), self.overrides(), small_cfg()).to_dict()
        second = pipeline_random(6, Fraction(4, 5), self.overrides(), small_cfg()).to_dict()
        assert first["determinism_hash"] == second["determinism_hash"]
        assert all(r["ok"] for r in replay_report(first))

    def test_buildable_instance_certifies_bound(self):
        # at delta=1/6 the degree gate admits perfect-matching samples whose
        # complement is the octahedron, which hosts no clamped-pattern minor
        report = pipeline_random(
            6, Fraction(4, 5), {"delta": Fraction(1, 6), "p": Fraction(1, 6), "D": Fraction(3, 2)},
            ExperimentConfig(seed=1, attempts=800),
        )
        assert report.verdict == "completed"
        assert report.certified_bound == 5  # |A|+|B| - floor(delta*n) = 3+3-1
        assert all(r["ok"] for r in replay_report(report.to_dict()))

    def test_delta_grid(self):
        assert _delta_from_epsilon(Fraction(4, 5)) == Fraction(11, 100)
        assert _delta_from_epsilon(Fraction(71, 100)) == Fraction(10, 100)
        with pytest.raises(ValueError):
            _delta_from_epsilon(Fraction(7, 100))


class TestPipelineIsolated:
    def test_k3_plus_3(self):
        report = pipeline_isolated(complete_graph(3), 3, small_cfg(seed=7))
        assert report.verdict == "completed"
        sampling = next(s for s in report.steps if s.name == "sampling")
        assert sampling.verdict == "all-degenerate"
        assert sampling.detail["minor_free"] > 0
        assert sampling.detail["degenerate_ok"] == sampling.detail["minor_free"]
        assert sampling.detail["coloring_ok"] == sampling.detail["minor_free"]
        assert report.certified_bound == 5  # list chromatic number of K5

    def test_k0_flags_present(self):
        report = pipeline_isolated(complete_graph(3), 3, small_cfg(seed=7))
        assert any("k0" in note for note in report.notes)
        assert any("exploratory" in note for note in report.notes)

    def test_single_vertex_base(self):
        report = pipeline_isolated(empty_graph(1), 3, small_cfg(seed=9))
        assert report.verdict == "completed"
        sampling = next(s for s in report.steps if s.name == "sampling")
        # samples with fewer than four vertices avoid the padded pattern and
        # are trivially within the degeneracy bound
        assert sampling.detail["degenerate_ok"] == sampling.detail["minor_free"]

    def test_guard(self):
        with pytest.raises(SizeGuardError):
            pipeline_isolated(complete_graph(3), 7, small_cfg())

    def test_determinism_and_replay(self):
        first = pipeline_isolated(complete_graph(3), 3, small_cfg(seed=7)).to_dict()
        second = pipeline_isolated(complete_graph(3), 3, small_cfg(seed=7)).to_dict()
        assert first["determinism_hash"] == second["determinism_hash"]
        assert all(r["ok"] for r in replay_report(first))


class TestMader:
    def test_k6(self):
        report = mader_step_check(complete_graph(6))
        assert report.verdict == "pass"
        assert report.certified_bound == 5
        assert report.target_bound == 2.0

    def test_edgeless_vacuous(self):
        report = mader_step_check(empty_graph(4))
        assert report.verdict == "pass"
        assert report.target_bound == 0.0

    def test_corpus_never_fails(self):
        from .conftest import random_graph_corpus

        for G in random_graph_corpus(seed=71, count=25, max_n=8, min_n=1):
            if G.n == 0:
                continue
            report = mader_step_check(G)
            assert report.verdict == "pass"

    def test_guard(self):
        with pytest.raises(SizeGuardError):
            mader_step_check(empty_graph(10))

    def test_replay(self):
        report = mader_step_check(path_graph(5)).to_dict()
        assert all(r["ok"] for r in replay_report(report))


class TestReportsAndConfig:
    def test_certified_lines_schema(self):
        report = pipeline_conn(complete_graph(6), Fraction(3, 10), small_cfg())
        for entry in report.to_dict()["certified"]:
            assert {"claim", "replay", "exhaustive"} <= set(entry)
            assert {"op", "args", "expect"} <= set(entry["replay"])
            assert entry["exhaustive"] or "witness" in entry

    def test_hash_ignores_timing(self):
        report = pipeline_conn(complete_graph(6), Fraction(3, 10), small_cfg())
        data = report.to_dict()
        bumped = dict(data)
        bumped["runtime_ms"] = 1e9
        assert determinism_hash(bumped) == determinism_hash(data)

    def test_canonical_json_floats(self):
        assert canonical_json({"x": 0.1 + 0.2}) == '{"x":0.3}'

    def test_write_run_dir(self, tmp_path):
        report = mader_step_check(complete_graph(4))
        out = write_run_dir(report, tmp_path / "run")
        assert (out / "report.json").exists()
        csv_text = (out / "summary.csv").read_text().splitlines()
        assert csv_text[0].startswith("pipeline,n,params_hash")
        assert csv_text[1].startswith("mader,4,")
        assert not (out / ".forge-lock").exists()

    def test_lockfile_blocks_concurrent_use(self, tmp_path):
        out = tmp_path / "run"
        out.mkdir()
        (out / ".forge-lock").write_text("held\n")
        with pytest.raises(RuntimeError, match="locked"):
            write_run_dir(mader_step_check(complete_graph(4)), out)

    def test_config_json_and_ini(self, tmp_path):
        jpath = tmp_path / "cfg.json"
        jpath.write_text(json.dumps({"pipeline": "mader", "graph": "Bw", "seed": 3, "comment": "x"}))
        cfg = ExperimentConfig.from_file(jpath)  # unknown keys are ignored
        assert (cfg.pipeline, cfg.graph, cfg.seed) == ("mader", "Bw", 3)
        ipath = tmp_path / "cfg.ini"
        ipath.write_text("[run]\npipeline = conn\ngraph = Bw\nseed = 11\n\n[params]\nepsilon = 3/10\n")
        cfg = ExperimentConfig.from_file(ipath)
        assert cfg.pipeline == "conn" and cfg.seed == 11
        assert cfg.params["epsilon"] == "3/10"

    def test_run_pipeline_dispatch(self, tmp_path):
        cfg = ExperimentConfig(pipeline="mader", graph="Bw")
        report = run_pipeline(cfg)
        assert report.pipeline == "mader"
        with pytest.raises(ValueError, match="unknown pipeline"):
            run_pipeline(ExperimentConfig(pipeline="nope"))
