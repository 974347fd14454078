import itertools
import os
from pathlib import Path

import pytest

import quasiauto

DATA = Path(os.environ.get("QA_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def load(name):
    return quasiauto.load(str(DATA / f"{name}.json"))


def test_z_basics():
    z = load("z")
    assert z.alphabet == ["p", "m"]
    assert z.mode == "monoid"
    assert z.representative("ppm") == "p"
    assert z.word_problem("pm", "mp")
    assert not z.word_problem("pp", "m")
    assert z.is_group()
    assert z.find_neutral() == ""
    assert z.is_finite(3)[0] == "unknown"


def test_word_problem_matches_oracle():
    for name in ("bicyclic", "c3"):
        s = load(name)
        words = ["".join(w) for n in range(1, 4) for w in itertools.product(s.alphabet, repeat=n)]
        for u, v in itertools.product(words, repeat=2):
            assert s.word_problem(u, v) == s.oracle_equal(u, v), (name, u, v)


def test_derivation_length():
    c3 = load("c3")
    steps = c3.derivation("ab", "ba")
    assert steps[0] == "ab" and steps[-1] == "ba"
    assert len(steps) == 2 + 2 + 2


def test_certificates_and_validation():
    z = load("z")
    cert = z.lipschitz_certificate("pp", "ppp", "p")
    assert cert["verified"]
    assert max(cert["distances"]) <= cert["bound"] == z.lipschitz_constant
    assert z.validate(4)["passed"]


def test_relator_decomposition():
    z2 = load("z2")
    ok, factors = z2.relator_decomposition("x y x^ y^")
    assert ok and factors


def test_errors():
    z = load("z")
    with pytest.raises(quasiauto.AlphabetMismatch):
        z.representative("pq")
    with pytest.raises(quasiauto.ResourceLimit):
        z.representative("pppp", max_steps=1)
    with pytest.raises(quasiauto.PreconditionError):
        load("z2").relator_decomposition("x")
    with pytest.raises(quasiauto.ParseError):
        quasiauto.load(str(DATA / "missing.json"))
