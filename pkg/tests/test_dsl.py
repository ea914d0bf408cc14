import json
import math
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from fockforge.circuit import BeamSplitter, Circuit, PhaseShift, PhaseVar, Swap
from fockforge.dsl import (
    ExperimentSpec, FkfSyntaxError, SweepAxis, format_phase, parse, parse_bytes,
    parse_phase_literal, render,
)
from fockforge.errors import DomainError
from fockforge.presets import (
    CLASSIC_HOM_FKF, NONLOCAL_HOM_FKF, classic_hom_experiment, load_preset, nonlocal_hom_experiment,
)

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "tests" / "data" / "malformed"
EXPECTED = json.loads((CORPUS / "expected.json").read_text())


def positions(src: bytes):
    with pytest.raises(FkfSyntaxError) as info:
        parse_bytes(src)
    return [[e.line, e.column] for e in info.value.errors]


@pytest.mark.parametrize("phi,text", [
    (0.0, "0"), (math.pi, "pi"), (-math.pi, "-pi"), (2 * math.pi, "2pi"),
    (math.pi / 2, "1/2pi"), (-math.pi / 4, "-1/4pi"), (0.3, "0.3"),
])
def test_format_phase(phi, text):
    assert format_phase(phi) == text
    assert parse_phase_literal(text) == phi


@pytest.mark.parametrize("text", ["pi/2", "1/0pi", "2e", "nan", "inf", "1e999", "--1", "pi2", ""])
def test_bad_phase_literals(text):
    with pytest.raises(ValueError):
        parse_phase_literal(text)


def test_minimal_file():
    spec = parse("modes 2\ninput 0 1\nbs 0 1  # splitter\n")
    assert spec == ExperimentSpec(Circuit(2, (BeamSplitter(0, 1),)), (0, 1))


def test_empty_source():
    with pytest.raises(FkfSyntaxError) as info:
        parse("")
    (err,) = info.value.errors
    assert (err.line, err.column) == (1, 1)
    assert err.message == "no modes directive"


def test_mode_out_of_range_message():
    with pytest.raises(FkfSyntaxError) as info:
        parse("modes 4\nbs 0 9\n", "c.fkf")
    (err,) = info.value.errors
    assert (err.line, err.column) == (2, 6)
    assert "9" in err.message
    assert str(info.value) == "c.fkf:2:6: mode 9 out of range [0, 4)"


def test_errors_are_collected():
    with pytest.raises(FkfSyntaxError) as info:
        parse("modes 2\nbs 0 5\nfoo\nphase 1 1/0pi\n")
    assert [(e.line, e.column) for e in info.value.errors] == [(2, 6), (3, 1), (4, 9)]


def test_crlf_and_bom():
    spec = parse_bytes(b"\xef\xbb\xbfmodes 2\r\nbs 0 1\r\n")
    assert spec.circuit.elements == (BeamSplitter(0, 1),)


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_malformed_corpus(name):
    assert positions((CORPUS / name).read_bytes()) == EXPECTED[name]


def test_corpus_size():
    assert len(EXPECTED) == 20
    assert sorted(EXPECTED) == sorted(p.name for p in CORPUS.glob("*.fkf"))


def test_presets_equal_builders():
    assert load_preset("nonlocal-hom") == nonlocal_hom_experiment(16, 16)
    assert load_preset("classic-hom") == classic_hom_experiment()


def test_shipped_preset_files_match_embedded_copies():
    assert (ROOT / "presets" / "nonlocal_hom.fkf").read_text() == NONLOCAL_HOM_FKF
    assert (ROOT / "presets" / "classic_hom.fkf").read_text() == CLASSIC_HOM_FKF


def test_preset_round_trip():
    spec = load_preset("nonlocal-hom")
    assert parse(render(spec)) == spec
    assert render(parse(render(spec))) == render(spec)


def test_render_empty_circuit():
    spec = ExperimentSpec(Circuit(3, ()), (0, 2))
    assert render(spec) == "modes 3\ninput 0 2\n"


def test_sweep_values():
    axis = SweepAxis("t", 0.0, 1.0, 4)
    assert axis.values() == [0.0, 0.25, 0.5, 0.75]
    with pytest.raises(DomainError):
        SweepAxis("t", 0.0, 1.0, 0)


def test_grid_order():
    spec = parse("modes 2\nphase 0 $a\nphase 1 $b\nsweep a 0 2 2\nsweep b 0 3 3\n")
    assert [tuple(g.values()) for g in spec.grid()] == [
        (0.0, 0.0), (0.0, 1.0), (0.0, 2.0), (1.0, 0.0), (1.0, 1.0), (1.0, 2.0),
    ]


def test_spec_validation():
    with pytest.raises(DomainError):
        ExperimentSpec(Circuit(2, ()), (3,))
    with pytest.raises(DomainError):
        ExperimentSpec(Circuit(2, ()), (), "one-per-side")
    with pytest.raises(DomainError):
        ExperimentSpec(Circuit(2, (PhaseShift(0, PhaseVar("t")),)), ())


# random valid experiments for the round-trip property

_literal = st.one_of(
    st.floats(allow_nan=False, allow_infinity=False),
    st.builds(lambda k, d, s: s * k * math.pi / d, st.integers(0, 50), st.integers(1, 1000), st.sampled_from([1, -1])),
)


@st.composite
def experiments(draw):
    m = draw(st.integers(1, 6))
    n_el = draw(st.integers(0, 20))
    var_names = draw(st.lists(st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,6}", fullmatch=True), max_size=3, unique=True))
    elements = []
    for _ in range(n_el):
        kind = draw(st.sampled_from(["bs", "swap", "phase"] if m > 1 else ["phase"]))
        if kind == "phase":
            phi = draw(st.one_of(_literal, st.sampled_from(var_names) if var_names else _literal))
            elements.append(PhaseShift(draw(st.integers(0, m - 1)), PhaseVar(phi) if isinstance(phi, str) else phi))
        else:
            i, j = draw(st.lists(st.integers(0, m - 1), min_size=2, max_size=2, unique=True))
            elements.append(BeamSplitter(i, j) if kind == "bs" else Swap(i, j))
    circuit = Circuit(m, tuple(elements))
    sweep = tuple(
        SweepAxis(v, draw(_literal), draw(_literal), draw(st.integers(1, 10**6)))
        for v in circuit.variables()
    )
    sweep = tuple(draw(st.permutations(sweep)))
    inputs = tuple(draw(st.lists(st.integers(0, m - 1), max_size=4)))
    rule = draw(st.sampled_from(["none", "one-per-side"])) if m == 4 else "none"
    return ExperimentSpec(circuit, inputs, rule, sweep)


@settings(max_examples=300, deadline=None)
@given(experiments())
def test_round_trip_property(spec):
    text = render(spec)
    assert parse(text) == spec
    assert render(parse(text)) == text


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=200))
def test_random_bytes_never_crash(data):
    try:
        parse_bytes(data)
    except FkfSyntaxError as exc:
        assert exc.errors
        assert all(e.line >= 1 and e.column >= 1 for e in exc.errors)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(
    ["modes", "input", "bs", "swap", "phase", "postselect", "sweep", "0", "1", "3", "9",
     "$a", "a", "pi", "-1/2pi", "one-per-side", "none", "#", "\t", "\r", "\n", "\n", " "]
), max_size=40))
def test_token_soup_never_crashes(parts):
    try:
        parse(" ".join(parts))
    except FkfSyntaxError as exc:
        assert exc.errors
