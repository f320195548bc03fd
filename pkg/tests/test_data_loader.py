import json
import logging

import pytest

from src.core.data_loader import (
    THREADS_ENV,
    RunConfig,
    load_instance,
    load_run_config,
    load_sample_instances,
    parse_complex,
    parse_inline,
)
from src.core.errors import InstanceError
from src.core.geometry import CompleteIntersection


def test_parse_inline_row_syntax():
    ci = parse_inline("n=7,4;D=2,1/1,-2/1,0/1,0/1,0")
    assert ci.n == (7, 4)
    assert ci.D == ((2, 1), (1, -2), (1, 0), (1, 0), (1, 0))


def test_parse_inline_json_syntax():
    ci = parse_inline("n=[5];D=[[2],[1],[1]];label=surface")
    assert ci == CompleteIntersection((5,), ((2,), (1,), (1,)), "surface")


def test_parse_inline_without_divisors():
    assert parse_inline("n=2").D == ()
    assert parse_inline("n=2;D=").D == ()


@pytest.mark.parametrize("text", [
    "D=1",
    "n=a,b",
    "n=3;D=1/0",
    "n=3;E=1",
    "n=3;D",
    "n=3,2;D=1",
    "n=3;D=[[1]",
])
def test_parse_inline_errors(text):
    with pytest.raises(InstanceError):
        parse_inline(text)


def test_zero_row_message():
    with pytest.raises(InstanceError, match="degenerate divisor: zero row p=2"):
        parse_inline("n=4;D=1/0")


def test_load_instance(tmp_path):
    path = tmp_path / "quadric.json"
    path.write_text(json.dumps({"n": [3], "D": [[2]]}))
    ci = load_instance(str(path))
    assert ci.n == (3,) and ci.D == ((2,),)
    assert ci.label == "quadric"


@pytest.mark.parametrize("content", [
    "{not json",
    json.dumps([1, 2]),
    json.dumps({"D": [[1]]}),
    json.dumps({"n": 3, "D": []}),
    json.dumps({"n": [3], "D": [1]}),
])
def test_load_instance_errors(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    with pytest.raises(InstanceError):
        load_instance(str(path))


def test_missing_instance_file(tmp_path):
    with pytest.raises(InstanceError, match="cannot read instance file"):
        load_instance(str(tmp_path / "missing.json"))


def test_sample_instances():
    instances = {ci.label: ci for ci in load_sample_instances()}
    assert len(instances) == 5
    assert CompleteIntersection((4,), ((5,),)).D in [ci.D for ci in instances.values()]
    assert any(ci.n == (7, 4) for ci in instances.values())


def test_default_run_config():
    config = load_run_config()
    assert config.q_order == 8
    assert config.genera == ("witten", "ahat", "lgenus", "euler")
    assert config.oracle is False
    assert config.oracle_q == 0.1
    assert config.output_format == "human"


def test_missing_run_config_falls_back(tmp_path, caplog):
    with caplog.at_level(logging.WARNING):
        config = load_run_config(str(tmp_path / "none.json"))
    assert config == RunConfig(threads=config.threads)
    assert "using built-in defaults" in caplog.text


def test_run_config_unknown_keys_are_ignored(tmp_path, caplog):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"q_order": 3, "colour": "blue", "oracle_q": "0.05+0.01i"}))
    with caplog.at_level(logging.WARNING):
        config = load_run_config(str(path))
    assert config.q_order == 3
    assert config.oracle_q == 0.05 + 0.01j
    assert "colour" in caplog.text


@pytest.mark.parametrize("changes", [
    dict(q_order=-1),
    dict(samples=48),
    dict(tolerance=0),
    dict(output_format="xml"),
    dict(genera=("todd",)),
    dict(threads=0),
])
def test_invalid_run_config(changes):
    with pytest.raises(InstanceError):
        RunConfig(**changes)


def test_override_skips_none():
    config = RunConfig().override(q_order=4, output_format=None)
    assert config.q_order == 4
    assert config.output_format == "human"


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert RunConfig().threads == 3
    monkeypatch.setenv(THREADS_ENV, "many")
    assert RunConfig().threads == 1
    monkeypatch.delenv(THREADS_ENV)
    assert RunConfig().threads == 1


def test_parse_complex():
    assert parse_complex("0.1+0.05i") == 0.1 + 0.05j
    assert parse_complex(0.2) == 0.2
    with pytest.raises(InstanceError):
        parse_complex("q")
