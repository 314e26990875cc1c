import json

import pytest

from totaljohnson.surface import standard_surface
from totaljohnson.verify import find_fixture, run_fixture, uh_checks

from conftest import FIXTURES

NAMES = sorted(p.stem for p in (FIXTURES / "verify").glob("*.json"))


@pytest.mark.parametrize("name", NAMES)
def test_shipped_fixture_passes(name):
    report = run_fixture(name)
    assert report.ok, report.details
    assert report.to_json()["status"] == "PASS"


def test_find_fixture_search_order(tmp_path, monkeypatch):
    assert find_fixture("boundary_knot") == FIXTURES / "verify" / "boundary_knot.json"
    own = tmp_path / "verify" / "boundary_knot.json"
    own.parent.mkdir()
    own.write_text("{}")
    monkeypatch.setenv("TOTALJOHNSON_FIXTURES", str(tmp_path))
    assert find_fixture("boundary_knot") == own
    with pytest.raises(FileNotFoundError):
        find_fixture("no_such_fixture")


def test_unknown_kind(tmp_path):
    f = tmp_path / "odd.json"
    f.write_text(json.dumps({"kind": "mystery"}))
    with pytest.raises(ValueError):
        run_fixture(str(f))


@pytest.mark.parametrize("rank", [1, 2])
def test_uh_checks(rank):
    results = uh_checks(standard_surface(rank), 6)
    assert results and all(ok for _, ok in results)
