"""End-to-end randomized verification of the reindexing isomorphism."""

import pytest

from cantorenv.action import ZPartialAction
from cantorenv.errors import EngineError
from cantorenv.prefix_map import ODOMETER, PrefixMap
from cantorenv.verify import equivariance_sign, isomorphism_suite

FLIP = ZPartialAction(PrefixMap.parse("[0 -> 1]"))
ODO = ZPartialAction(ODOMETER)


def test_flip_suite_passes():
    rep = isomorphism_suite(FLIP, trials=40, seed=0)
    assert rep.ok, rep.failures[:3]
    assert rep.trials == 40 and rep.checked > 40


def test_odometer_suite_passes():
    for k in (1, 2):
        rep = isomorphism_suite(ODO, trials=30, seed=1, level=k)
        assert rep.ok, rep.failures[:3]


def test_suite_is_deterministic():
    a = isomorphism_suite(FLIP, trials=15, seed=5)
    b = isomorphism_suite(FLIP, trials=15, seed=5)
    assert (a.trials, a.checked, a.failures) == (b.trials, b.checked, b.failures)


def test_sign_is_minus_one_everywhere():
    eps, rep = equivariance_sign(FLIP, trials=25, seed=2)
    assert eps == -1 and rep.ok
    eps, rep = equivariance_sign(ODO, trials=25, seed=3, level=2)
    assert eps == -1 and rep.ok
    assert rep.epsilon == -1


def test_sign_needs_a_distinguishing_sample():
    with pytest.raises(EngineError):
        equivariance_sign(FLIP, trials=0, seed=0)


def test_report_serialization():
    rep = isomorphism_suite(FLIP, trials=5, seed=4)
    out = rep.to_json()
    assert out["ok"] is True and out["trials"] == 5
    _, erep = equivariance_sign(FLIP, trials=5, seed=4)
    assert erep.to_json()["epsilon"] == -1
