"""Every adapter kind runs the same contract suite as its siblings."""

import inspect
import tempfile
from pathlib import Path

import pytest

import seawatch.adapters as adapters
from factories import adapter_factories
from seawatch.ports import PORT_CATALOG, catalog_entries
from seawatch.ports.conformance import SUITES

_NAMES = adapter_factories(Path(tempfile.gettempdir()))
CASES = [
    pytest.param(suite, kind, check, id=f"{suite}-{kind}-{check.__name__}")
    for suite, kinds in _NAMES.items()
    for kind, _ in kinds
    for check in SUITES[suite]
]


@pytest.mark.parametrize("suite, kind, check", CASES)
def test_contract(suite, kind, check, tmp_path):
    factory = dict(adapter_factories(tmp_path)[suite])[kind]
    check(factory)


def test_every_suite_has_an_adapter():
    assert set(_NAMES) == set(SUITES)


def test_catalog_has_twelve_entries():
    assert len(PORT_CATALOG) == 12


def test_each_adapter_implements_exactly_one_entry():
    classes = [c for _, c in inspect.getmembers(adapters, inspect.isclass) if c.__module__.startswith("seawatch.adapters")]
    port_adapters = [c for c in classes if catalog_entries(c)]
    assert len(port_adapters) >= 12
    for cls in port_adapters:
        assert len(catalog_entries(cls)) == 1, cls
    covered = {e for c in port_adapters for e in catalog_entries(c)}
    assert covered == set(PORT_CATALOG)
