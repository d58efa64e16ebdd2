import json

import pytest

import minia11y

SCREEN = """view Login {
  VStack(spacing: 8) {
    Text("Forgot password").color(#999999)
    Button("Go", action: go)
  }
}
"""

MANIFEST = {
    "name": "smoke",
    "screens": [{"name": "login", "rootView": "Login"}],
}


def test_contrast_helpers():
    assert abs(minia11y.contrast_ratio("#FFFFFF", "#000000") - 21.0) < 1e-9
    assert minia11y.contrast_ratio("#999999", "#FFFFFF") < 4.5
    assert minia11y.required_contrast(17.0) == 4.5
    assert minia11y.required_contrast(18.0) == 3.0
    assert minia11y.relative_luminance("#FFFFFF") == pytest.approx(1.0)


def test_issue_kind_catalog():
    kinds = minia11y.issue_kinds()
    assert len(kinds) == 9
    assert kinds[0] == "TextClipped"
    assert kinds[-1] == "HitAreaTooSmall"


def test_reformat_is_byte_exact():
    assert minia11y.reformat(SCREEN) == SCREEN


def test_instrument_adds_stable_ids():
    once = minia11y.instrument_source(SCREEN)
    assert 'axIdentifier("ax_0")' in once
    assert minia11y.instrument_source(once) == once


def test_bad_syntax_raises():
    with pytest.raises(minia11y.SourceSyntaxError):
        minia11y.reformat("view Broken {")


def test_hierarchy_and_render():
    tree = minia11y.hierarchy(SCREEN, "Login")
    ids = [element["id"] for element in tree["elements"]]
    assert ids == ["ax_0", "ax_1", "ax_2"]
    scene = minia11y.render(SCREEN, "Login")
    texts = [element["text"] for element in scene["elements"]]
    assert "Forgot password" in texts and "Go" in texts


def test_scan_source_flags_the_seeded_defects():
    issues = minia11y.scan_source(SCREEN, "Login")
    kinds = {issue["kind"] for issue in issues}
    assert kinds == {"ContrastFailed", "HitAreaTooSmall"}
    for issue in issues:
        assert len(issue["id"]) == 16


def test_full_pipeline(tmp_path):
    project = tmp_path / "project"
    project.mkdir()
    (project / "minui.json").write_text(json.dumps(MANIFEST))
    (project / "login.minui").write_text(SCREEN)

    run_dir = tmp_path / "run"
    summary = minia11y.scan(project, run_dir)
    assert summary["screens"] == 1
    assert summary["issues"] == 2
    assert (run_dir / "issues.json").exists()

    repaired = minia11y.suggest(run_dir, jobs=1)
    assert repaired["issues"] == 2
    assert repaired["issuesWithPlausible"] == 2
    assert not repaired["backendGaveUp"]

    rendered = minia11y.report(run_dir)
    assert rendered["json"]["issues"]["unique"] == 2
    assert "plausible" in rendered["text"]
    assert (run_dir / "report.json").exists()


def test_scan_without_manifest_raises(tmp_path):
    with pytest.raises(minia11y.ManifestError):
        minia11y.scan(tmp_path, tmp_path / "run")
