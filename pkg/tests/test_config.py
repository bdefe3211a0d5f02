"""Tests for the key = value configuration format."""

import math

import pytest

from eoentangle.config import convert_value, parse_config_text, parse_quantity, read_config
from eoentangle.errors import ConfigError


@pytest.mark.parametrize(
    "text, dim, expected",
    [
        ("70nH", "H", 70e-9),
        ("40 fF", "F", 40e-15),
        ("10um", "m", 10e-6),
        ("10mW", "W", 10e-3),
        ("10uW", "W", 10e-6),
        ("100mK", "K", 0.1),
        ("0.3MHz", "Hz", 0.3e6),
        ("1.5e3", None, 1500.0),
        ("300pm/V", "pm/V", 300e-12),
    ],
)
def test_parse_quantity(text, dim, expected):
    assert parse_quantity(text, dim) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize(
    "text, dim",
    [("70nF", "H"), ("3 parsecs", "m"), ("abc", None), ("5nH", None)],
)
def test_parse_quantity_rejects(text, dim):
    with pytest.raises(ValueError):
        parse_quantity(text, dim)


def test_frequency_keys_become_angular():
    assert convert_value("gamma", "1kHz") == pytest.approx(2 * math.pi * 1e3)


def test_list_and_choice_values():
    assert convert_value("k1_values", "0, 0.0075,0.015") == (0.0, 0.0075, 0.015)
    assert convert_value("scheme", "parallel") == "parallel"
    with pytest.raises(ValueError):
        convert_value("scheme", "serial")
    with pytest.raises(ValueError):
        convert_value("points", "0")


def test_parse_minimal_parallel():
    cfg = parse_config_text("scheme = parallel\nr = 0.5\nk0 = 0  # lossless\n\n# done\n")
    assert cfg.settings == {"scheme": "parallel", "r": 0.5, "k0": 0.0}
    assert cfg.lines == {"scheme": 1, "r": 2, "k0": 3}


def test_device_keys():
    cfg = parse_config_text("L1 = 70nH\nC1 = 40fF\nT = 100mK\n")
    assert cfg.settings["L1"] == pytest.approx(7e-8)
    assert cfg.settings["C1"] == pytest.approx(4e-14)


def test_duplicate_key_names_lines():
    with pytest.raises(ConfigError, match=r"cfg:3:1: duplicate key 'r' \(first set on line 1\)"):
        parse_config_text("r = 0.5\nk0 = 1\nr = 0.6\n", "cfg")


def test_unknown_key_position():
    with pytest.raises(ConfigError, match=r"cfg:2:3: unknown key 'radius'"):
        parse_config_text("r = 0.5\n  radius = 1\n", "cfg")


def test_missing_equals():
    with pytest.raises(ConfigError, match=r"cfg:1:1: expected"):
        parse_config_text("scheme parallel\n", "cfg")


def test_bad_value_column():
    with pytest.raises(ConfigError, match=r"cfg:1:5: r: not a number"):
        parse_config_text("r = abc\n", "cfg")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="no such config file"):
        read_config(tmp_path / "absent.cfg")


def test_config_error_is_value_error():
    assert issubclass(ConfigError, ValueError)
