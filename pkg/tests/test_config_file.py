"""sensor-evidence.toml loading, settings.env and flag precedence."""

import argparse
import os
import tempfile
from pathlib import Path

import pytest

from sensor_evidence.cli import main
from sensor_evidence.cli.simulate import add_simulate_parser, build_sim_config
from sensor_evidence.common.config import GRID_PRESETS, ProjectConfig, SimMode
from sensor_evidence.common.config_file import discover_config, load_config
from sensor_evidence.common.errors import ConfigError
from sensor_evidence.crypto.primitives import write_key_file
from sensor_evidence.persistence.log_file import read_log
from sensor_evidence.settings import load_settings_file, read_env_file

from _fixtures import KEY


def write_config(text):
    d = Path(tempfile.mkdtemp())
    path = d / "sensor-evidence.toml"
    path.write_text(text)
    return path


def sim_args(*argv):
    parser = argparse.ArgumentParser()
    add_simulate_parser(parser.add_subparsers())
    return parser.parse_args(["simulate", *argv])


def test_full_config():
    config = load_config(write_config("""
[chain]
a = 4
s = 20

[anchor]
batch_size = 8
fail_probability = 0.25
fault_seed = 7

[simulate]
n = 500
p_grid = [0.0, 0.1]
trials = 3
mode = "full"
"""))
    assert config.chain.a == 4 and config.chain.s == 20
    assert config.anchor.batch_size == 8
    assert config.anchor.fault_seed == 7
    assert config.simulate.n == 500
    assert config.simulate.p_grid == (0.0, 0.1)
    assert config.simulate.mode is SimMode.FULL


def test_empty_config_gives_defaults():
    assert load_config(write_config("")) == ProjectConfig()


def test_preset_fills_grid_but_explicit_values_win():
    config = load_config(write_config('[simulate]\npreset = "a-effect"\ns_values = [50]\n'))
    assert config.simulate.a_values == GRID_PRESETS["a-effect"]["a_values"]
    assert config.simulate.s_values == (50,)


def test_config_errors():
    for text in ('[chain]\nbatch_size = 3\n', '[network]\nport = 1\n', '[chain]\na = 0\n',
                 '[simulate]\npreset = "nope"\n', "[chain\n"):
        with pytest.raises(ConfigError):
            load_config(write_config(text))
    with pytest.raises(FileNotFoundError):
        load_config(Path(tempfile.mkdtemp()) / "absent.toml")


def test_discover_config():
    assert discover_config(Path(tempfile.mkdtemp())) is None
    path = write_config("[chain]\ns = 7\n")
    assert discover_config(path.parent).chain.s == 7


def test_simulate_precedence():
    path = write_config('[simulate]\nn = 123\nseed = 9\ntrials = 4\n')
    config = build_sim_config(sim_args("--config", str(path)))
    assert (config.n, config.seed, config.trials) == (123, 9, 4)

    config = build_sim_config(sim_args("--config", str(path), "--preset", "saturation",
                                       "--n", "50", "--a", "1:3"))
    assert config.n == 50
    assert config.seed == 9
    assert config.s_values == GRID_PRESETS["saturation"]["s_values"]
    assert config.a_values == (1, 2, 3)


def test_record_uses_config_file(capsys):
    d = Path(tempfile.mkdtemp())
    write_key_file(KEY, d / "k.pem")
    (d / "data.txt").write_text("\n".join(str(i) for i in range(8)) + "\n")
    (d / "cfg.toml").write_text("[chain]\na = 2\ns = 4\n")
    assert main(["record", str(d / "data.txt"), "--key", str(d / "k.pem"), "--config",
                 str(d / "cfg.toml"), "--out", str(d / "log.jsonl"),
                 "--anchor", str(d / "anchor.json"), "-q"]) == 0
    log = read_log(d / "log.jsonl")
    assert (log.config.a, log.config.s) == (2, 4)
    assert sorted(log.receipts) == [3, 7]

    assert main(["record", str(d / "data.txt"), "--key", str(d / "k.pem"), "--config",
                 str(d / "missing.toml"), "--out", str(d / "x.jsonl"),
                 "--anchor", str(d / "x.json")]) == 2


def test_settings_env_file(monkeypatch):
    d = Path(tempfile.mkdtemp())
    env = d / "settings.env"
    env.write_text("# defaults\nSENSOR_EVIDENCE_KEY = /keys/sensor.pem\n\nBROKEN LINE\n")
    assert read_env_file(env) == {"SENSOR_EVIDENCE_KEY": "/keys/sensor.pem"}
    assert read_env_file(d / "absent.env") == {}

    monkeypatch.delenv("SENSOR_EVIDENCE_KEY", raising=False)
    load_settings_file(env)
    assert os.environ["SENSOR_EVIDENCE_KEY"] == "/keys/sensor.pem"

    monkeypatch.setenv("SENSOR_EVIDENCE_KEY", "/real/env.pem")
    load_settings_file(env)
    assert os.environ["SENSOR_EVIDENCE_KEY"] == "/real/env.pem"


if __name__ == "__main__":
    test_full_config()
    test_preset_fills_grid_but_explicit_values_win()
    test_config_errors()
    print("ok  config files")
