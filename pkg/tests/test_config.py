import pytest
from hypothesis import given, strategies as st

from qbattery.config import RunConfig, load_config, parse_config, serialize_config
from qbattery.errors import ConfigError
from qbattery.quadrature import QuadratureSettings
from qbattery.scenarios import Grid, SweepConfig


def test_empty_document_gives_reference_defaults():
    cfg = parse_config("")
    s = cfg.sweep
    assert (s.eps_alpha, s.h_alpha, s.nu_left, s.nu_right) == (0.0, 1.0, 0.12, 0.12)
    assert (s.t_eq, s.mu_eq) == (0.1, 0.1)
    assert cfg == RunConfig()


def test_full_document():
    cfg = parse_config("""
        # charging sweep
        [leads]
        nu_alpha = 0.06
        [equilibrium]
        mu_eq = 0.0   # charging reference
        [device]
        eps_qb = 0.3
        [sweep]
        dmu = 0, 0.5, 11
        dt = 0.05
        drive_side = symmetric
        [numerics]
        abs_tol = 1e-10
        max_subdiv = 500
        ref_mode = isolated_level
        [output]
        csv_path = out/a.csv
    """)
    assert cfg.sweep.nu_left == cfg.sweep.nu_right == 0.06
    assert cfg.sweep.dmu == Grid(0.0, 0.5, 11)
    assert cfg.sweep.dt == Grid.point(0.05)
    assert cfg.sweep.drive_side == "symmetric"
    assert cfg.quadrature == QuadratureSettings(1e-10, 1e-9, 500)
    assert cfg.ref_mode == "isolated_level"
    assert cfg.csv_path == "out/a.csv" and cfg.svg_path is None


@pytest.mark.parametrize("text, line, fragment", [
    ("[leads]\nnu_alpha = -0.1\n", 2, ">= 0"),
    ("[leads]\nnu_left = 0.1\nnu_left = 0.2\n", 3, "duplicate"),
    ("[leads]\ncolor = red\n", 2, "unknown key"),
    ("\n[shape]\n", 2, "unknown section"),
    ("[sweep]\ndmu = 0, 1, 0\n", 2, ">= 1"),
    ("[sweep]\ndmu = 0, 1\n", 2, "start, stop, steps"),
    ("[equilibrium]\nt_eq = 0\n", 2, "> 0"),
    ("[numerics]\nref_mode = exact\n", 2, "expected one of"),
    ("[device]\neps_qb = nan\n", 2, "finite"),
    ("eps_qb = 0.1\n", 1, "before any"),
    ("[leads\n", 1, "malformed"),
    ("[leads]\nnu_left 0.1\n", 2, "key = value"),
    ("[leads]\nh_alpha = abc\n", 2, "number"),
])
def test_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}: ")
    assert fragment in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.cfg")


finite = st.floats(-2, 2, allow_nan=False)
grids = st.one_of(st.none(), st.builds(Grid, finite, finite, st.integers(1, 50)))
sweeps = st.builds(
    SweepConfig,
    eps_alpha=finite, h_alpha=st.floats(0.1, 3), nu_left=st.floats(0, 1), nu_right=st.floats(0, 1),
    mu_eq=finite, t_eq=st.floats(1e-3, 1), eps_qb=finite, dmu=grids, dt=grids, eps_qb_grid=grids,
    drive_side=st.sampled_from(["left", "symmetric"]),
)
configs = st.builds(
    RunConfig,
    sweep=sweeps,
    quadrature=st.builds(QuadratureSettings, st.floats(1e-15, 1), st.floats(1e-15, 1), st.integers(1, 10**5)),
    ref_mode=st.sampled_from(["broadened", "isolated_level"]),
    csv_path=st.one_of(st.none(), st.from_regex(r"[a-z][a-z0-9_/]{0,12}\.csv", fullmatch=True)),
    svg_path=st.one_of(st.none(), st.from_regex(r"[a-z][a-z0-9_/]{0,12}\.svg", fullmatch=True)),
)


@given(configs)
def test_round_trip(cfg):
    assert parse_config(serialize_config(cfg)) == cfg
